"""Exception types raised by the package."""


class KPlanarError(Exception):
    """Base class for all errors raised by kplanar."""


class InvalidNetwork(KPlanarError):
    pass


class InconsistentState(KPlanarError):
    """Internal inconsistency between routes, corridors and rotations."""


class NotACrossingNode(KPlanarError):
    pass


class SameEdge(KPlanarError):
    pass


class MisorientedLens(KPlanarError):
    pass


class StaleLens(KPlanarError):
    pass


class InvalidWitness(KPlanarError):
    pass


class NonPositiveK(KPlanarError, ValueError):
    pass


class NotKPlane(KPlanarError):
    def __init__(self, message, edge=None, crossings=None):
        super().__init__(message)
        self.edge = edge
        self.crossings = crossings


class Not4Plane(NotKPlane):
    pass


class NotInitialState(KPlanarError):
    pass


class PhaseOrderViolation(KPlanarError):
    pass


class UnexpectedLens(KPlanarError):
    def __init__(self, message, lens=None):
        super().__init__(message)
        self.lens = lens


class DegenerateInput(KPlanarError):
    pass


class NotGeneralPosition(DegenerateInput):
    pass


class SchemaError(KPlanarError):
    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class RationalParseError(SchemaError):
    pass


class GenerationFailed(KPlanarError):
    pass
