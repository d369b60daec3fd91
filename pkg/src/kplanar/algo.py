"""Algorithm 1 (general k), Algorithm 2 (4-plane to 8-plane) and bound formulas."""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace

from .errors import (
    InconsistentState,
    NonPositiveK,
    Not4Plane,
    NotInitialState,
    NotKPlane,
    PhaseOrderViolation,
    StaleLens,
    UnexpectedLens,
)
from .lens import (
    ONE_THREE,
    QUASI_ZERO,
    SHARED,
    ZERO,
    Lens,
    classified,
    classify_lens,
    find_lens,
    multi_pairs,
    pair_lenses,
    revalidate,
)
from .model import (
    DrawingState,
    build_initial_state,
    is_initial,
    materialize_planarization,
    pair_crossing_counts,
    total_crossings,
)
from .ops import quasi_zero_reroute, reroute, swap

# --------------------------------------------------------------------------
# bounds


def f_bound(k: int) -> float:
    """Crossings per edge guaranteed by Algorithm 1 on a k-plane input."""
    if not isinstance(k, int) or k < 1:
        raise NonPositiveK(f"k must be a positive integer, got {k!r}")
    if k <= 3:
        return float(k)
    return 2 / 3 * math.sqrt(58) * k**1.5 * 3**k


def crossing_lemma_bound(n: int, m: int) -> float | None:
    """Lower bound m^3 / (29 n^2) on cr(G), or None when m < 6.95 n."""
    if n <= 0 or m < 6.95 * n:
        return None
    return m**3 / (29 * n**2)


def neighborhood_edge_bound(k: int, n: int) -> float:
    """Upper bound on the edges of a k-planar graph on n vertices: max(6.95, sqrt(29k/2)) n."""
    return max(6.95, math.sqrt(29 * k / 2)) * n


# --------------------------------------------------------------------------
# helpers


def _max_crossings(state: DrawingState):
    worst, edge = 0, None
    for e in state.edges:
        x = len(state.crossings_of(e))
        if x > worst:
            worst, edge = x, e
    return worst, edge


def require_k_plane(state: DrawingState, k: int, exc=NotKPlane) -> None:
    for e in state.edges:
        x = len(state.crossings_of(e))
        if x > k:
            raise exc(f"edge {e} has {x} crossings, more than {k}", edge=e, crossings=x)


def replanarize(state: DrawingState) -> DrawingState:
    """Initial state over the planarization of the current drawing."""
    return build_initial_state(materialize_planarization(state))


def _total_length(state: DrawingState) -> int:
    return sum(len(r) for r in state.routes.values())


def _common_points(state: DrawingState, a: int, b: int, counts) -> int:
    shared = set(state.network.graph.edges[a]) & set(state.network.graph.edges[b])
    return counts.get((min(a, b), max(a, b)), 0) + len(shared)


# --------------------------------------------------------------------------
# Algorithm 1


@dataclass(frozen=True)
class Algo1Step:
    e: int
    f: int
    alpha: tuple  # (kind, node)
    beta: tuple
    len_e: int
    len_f: int
    x_e: int
    x_f: int
    total_length_before: int
    total_length_after: int
    total_crossings_before: int
    total_crossings_after: int
    max_length_after: int

    def to_json(self) -> dict:
        return {
            "e": self.e,
            "f": self.f,
            "alpha": list(self.alpha),
            "beta": list(self.beta),
            "len_e": self.len_e,
            "len_f": self.len_f,
            "x_e": self.x_e,
            "x_f": self.x_f,
            "total_length": [self.total_length_before, self.total_length_after],
            "total_crossings": [self.total_crossings_before, self.total_crossings_after],
            "max_length_after": self.max_length_after,
        }


@dataclass
class Algo1Trace:
    k: int
    steps: list[Algo1Step] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"algorithm": "general", "k": self.k, "steps": [s.to_json() for s in self.steps]}


def first_lens(state: DrawingState) -> Lens | None:
    """Lens with the smallest (min edge, max edge, alpha along the smaller edge)."""
    pairs = state.multi_pairs()
    if not pairs:
        return None
    a, b = pairs[0]
    return find_lens(state, a, b)


def _orient_by_length(lens: Lens) -> Lens:
    if (lens.len_e, lens.x_e) > (lens.len_f, lens.x_f):
        return lens.flipped()
    return lens


def algorithm1(state: DrawingState, k: int, monitor: bool = True):
    """Reroute along the shorter lens arc until the drawing is simple.

    Mutates and returns ``state`` together with the iteration trace.
    """
    if not isinstance(k, int) or k < 1:
        raise NonPositiveK(f"k must be a positive integer, got {k!r}")
    require_k_plane(state, k)
    if not is_initial(state):
        raise NotInitialState("Algorithm 1 needs the initial state of its network; re-planarize first")
    trace = Algo1Trace(k)
    tl, tc = _total_length(state), total_crossings(state)
    lengths = Counter(len(r) for r in state.routes.values())  # only f's length changes per step
    while True:
        lens = first_lens(state)
        if lens is None:
            break
        lens = _orient_by_length(lens)
        old = len(state.routes[lens.f])
        reroute(state, lens)
        new = len(state.routes[lens.f])
        lengths[old] -= 1
        if not lengths[old]:
            del lengths[old]
        lengths[new] += 1
        tl2, tc2 = tl - old + new, total_crossings(state)
        max_len = max(lengths)
        trace.steps.append(
            Algo1Step(
                lens.e,
                lens.f,
                (lens.alpha.kind, lens.alpha.node),
                (lens.beta.kind, lens.beta.node),
                lens.len_e,
                lens.len_f,
                lens.x_e,
                lens.x_f,
                tl,
                tl2,
                tc,
                tc2,
                max_len,
            )
        )
        if monitor:
            if (tl2, tc2) >= (tl, tc):
                raise InconsistentState(f"termination measure did not decrease: {(tl, tc)} -> {(tl2, tc2)}")
            if max_len > k + 1:
                raise InconsistentState(f"an edge has length {max_len} > k + 1 = {k + 1}")
        tl, tc = tl2, tc2
    return state, trace


# --------------------------------------------------------------------------
# Algorithm 2


@dataclass(frozen=True)
class OpRecord:
    op: str  # reroute | swap | quasi-zero-reroute | skip
    e: int
    f: int
    cls: str
    x_e: int
    x_f: int
    total_crossings_after: int
    max_crossings_after: int  # over the edges this operation changed
    note: str = ""

    def to_json(self) -> dict:
        d = {
            "op": self.op,
            "e": self.e,
            "f": self.f,
            "class": self.cls,
            "x_e": self.x_e,
            "x_f": self.x_f,
            "total_crossings_after": self.total_crossings_after,
            "max_crossings_after": self.max_crossings_after,
        }
        if self.note:
            d["note"] = self.note
        return d


@dataclass(frozen=True)
class ArcRecord:
    edge: int
    segments: frozenset  # segments of the replaced interval, u to beta
    epoch: int


@dataclass
class ModifiedArcLog:
    records: list[ArcRecord] = field(default_factory=list)

    def edges(self) -> list[int]:
        return [r.edge for r in self.records]

    def overlaps(self, edge: int, segs) -> bool:
        segs = set(segs)
        return any(r.edge == edge and r.segments & segs for r in self.records)

    def to_json(self) -> list:
        return [{"edge": r.edge, "segments": sorted(r.segments), "epoch": r.epoch} for r in self.records]


@dataclass
class Algo2Trace:
    phase1: list[OpRecord] = field(default_factory=list)
    phase2: list[OpRecord] = field(default_factory=list)
    phase3: list[OpRecord] = field(default_factory=list)
    log: ModifiedArcLog = field(default_factory=ModifiedArcLog)
    d1: DrawingState | None = None
    d2: DrawingState | None = None

    def to_json(self) -> dict:
        return {
            "algorithm": "4planar",
            "phase1": [r.to_json() for r in self.phase1],
            "phase2": [r.to_json() for r in self.phase2],
            "phase3": [r.to_json() for r in self.phase3],
            "modified_arcs": self.log.to_json(),
        }


def iter_lenses(state: DrawingState):
    """Every lens of every pair, oriented and classified, in selection order."""
    for a, b in multi_pairs(state):
        for ln in pair_lenses(state, a, b):
            yield classified(state, ln)


def all_lenses(state: DrawingState) -> list[Lens]:
    return list(iter_lenses(state))


def _record(state, op, lens, note="") -> OpRecord:
    """Trace entry; the max is taken over edges whose crossings changed since the last record."""
    tag = lens.cls.tag if lens.cls else ""
    changed = [len(state.crossings_of(e)) for e in state.changed_edges]
    state.changed_edges.clear()
    return OpRecord(op, lens.e, lens.f, tag, lens.x_e, lens.x_f, total_crossings(state), max(changed, default=0), note)


def _eliminate(state: DrawingState, k: int, trace: list, monitor: bool, keep) -> DrawingState:
    """Reroute 0-lenses and swap every other lens not matched by ``keep``."""
    before = total_crossings(state)
    state.changed_edges.clear()
    while True:
        lens = next((ln for ln in iter_lenses(state) if not keep(ln)), None)
        if lens is None:
            break
        if lens.cls.tag == ZERO:
            reroute(state, lens)
            op = "reroute"
        else:
            swap(state, lens)
            op = "swap"
        rec = _record(state, op, lens)
        trace.append(rec)
        if monitor:
            if rec.total_crossings_after >= before:
                raise InconsistentState(f"{op} did not reduce the total crossings")
            if rec.max_crossings_after > k:
                raise InconsistentState(f"{op} produced an edge with {rec.max_crossings_after} crossings")
        before = rec.total_crossings_after
    return state


def phase1(state: DrawingState, trace: list | None = None, monitor: bool = True) -> DrawingState:
    """Remove every lens that is not a 1-3-lens by Reroute (0-lens) or Swap."""
    require_k_plane(state, 4, Not4Plane)
    trace = [] if trace is None else trace
    return _eliminate(state, 4, trace, monitor, lambda ln: ln.cls.tag == ONE_THREE)


def simplify_small_k(state: DrawingState, k: int, monitor: bool = True):
    """A simple k-plane drawing from a k-plane one, for k <= 3.

    Uses the redrawing behind the k <= 3 case of the existence theorem: a
    0-lens is removed by Reroute, any other lens by Swap.  Swap leaves the
    crossing count of every third edge unchanged, and for k <= 3 the two
    lens edges end with at most k crossings, so the drawing stays k-plane
    while the total number of crossings drops.  Algorithm 1 does not have
    this guarantee: rerouting f along e adds a crossing to every edge that
    crosses e's arc.  Returns the state and the list of operation records.
    """
    if not isinstance(k, int) or k < 1:
        raise NonPositiveK(f"k must be a positive integer, got {k!r}")
    if k > 3:
        raise ValueError(f"simplify_small_k needs k <= 3, got {k}")
    require_k_plane(state, k)
    trace: list[OpRecord] = []
    _eliminate(state, k, trace, monitor, lambda ln: False)
    return state, trace


def _arc_segments(state: DrawingState, edge: int, p: tuple, q: tuple) -> set:
    lo, hi = sorted((p[0], q[0]))
    return set(state.routes[edge].segs[lo:hi])


def phase2(state: DrawingState, trace: list | None = None):
    """Reroute f along e for each 1-3-lens of a snapshot, skipping modified arcs."""
    trace = [] if trace is None else trace
    if not is_initial(state):
        state = replanarize(state)
    snapshot = all_lenses(state)
    bad = [ln for ln in snapshot if ln.cls.tag != ONE_THREE]
    if bad:
        ln = bad[0]
        raise PhaseOrderViolation(f"lens ({ln.e}, {ln.f}) of class {ln.cls.tag} present before Phase 2")
    log = ModifiedArcLog()
    for lens in snapshot:
        try:
            cur = revalidate(state, lens)
        except StaleLens as exc:
            trace.append(_record(state, "skip", lens, f"stale: {exc}"))
            continue
        e_segs = _arc_segments(state, cur.e, cur.alpha.e_pos, cur.beta.e_pos)
        f_segs = _arc_segments(state, cur.f, cur.alpha.f_pos, cur.beta.f_pos)
        if log.overlaps(cur.e, e_segs) or log.overlaps(cur.f, f_segs):
            trace.append(_record(state, "skip", lens, "modified arc"))
            continue
        if cur.cls is None:
            cur = replace(cur, cls=classify_lens(state, cur))
        reroute(state, cur)
        log.records.append(ArcRecord(cur.f, frozenset(e_segs), state.epoch))
        trace.append(_record(state, "reroute", cur))
    return state, log


def _quasi_candidates(state: DrawingState, lens: Lens):
    yield lens
    if lens.x_e == lens.x_f:
        yield lens.flipped()


def phase3(state: DrawingState, trace: list | None = None, monitor: bool = True) -> DrawingState:
    """Eliminate 0-lenses by Reroute, then quasi-0-lenses by Quasi-0-Reroute."""
    trace = [] if trace is None else trace
    before = total_crossings(state)
    while True:
        lenses = all_lenses(state)
        if not lenses:
            break
        zero = next((ln for ln in lenses if ln.cls.tag == ZERO), None)
        if zero is not None:
            reroute(state, zero)
            rec = _record(state, "reroute", zero)
        else:
            chosen = None
            for ln in lenses:
                for cand in _quasi_candidates(state, ln):
                    cls = classify_lens(state, cand)
                    if cls.tag == QUASI_ZERO:
                        chosen = (cand, cls)
                        break
                if chosen:
                    break
            if chosen is None:
                ln = lenses[0]
                raise UnexpectedLens(
                    f"lens ({ln.e}, {ln.f}) of class {ln.cls.tag} with arc crossings "
                    f"({ln.x_e}, {ln.x_f}) is neither a 0-lens nor a quasi-0-lens",
                    lens=ln,
                )
            cand, cls = chosen
            quasi_zero_reroute(state, cand, cls.h, cls.gamma, cls.s)
            rec = _record(state, "quasi-zero-reroute", replace(cand, cls=cls), f"h={cls.h} s={cls.s}")
        trace.append(rec)
        if monitor and rec.total_crossings_after >= before:
            raise InconsistentState(f"{rec.op} did not reduce the total crossings")
        before = rec.total_crossings_after
    return state


def algorithm2(state: DrawingState, monitor: bool = True):
    """Turn a 4-plane drawing into a simple 8-plane drawing.

    Returns the final state and an :class:`Algo2Trace`.  The Phase 1 output is
    re-planarized before Phase 2, so Phase 2 and 3 run over the planarization
    of D1.
    """
    require_k_plane(state, 4, Not4Plane)
    if not is_initial(state):
        raise NotInitialState("Algorithm 2 needs the initial state of its network; re-planarize first")
    trace = Algo2Trace()
    phase1(state, trace.phase1, monitor)
    trace.d1 = state.copy()
    d1 = replanarize(state) if trace.phase1 else state
    d2, trace.log = phase2(d1, trace.phase2)
    trace.d2 = d2.copy()
    d3 = phase3(d2, trace.phase3, monitor)
    return d3, trace


# --------------------------------------------------------------------------
# Phase 2 properties


@dataclass(frozen=True)
class Phase2Report:
    max_length: int
    max_edges_per_segment: int
    max_rerouted_per_node: int
    max_partners_per_disk: int
    max_common_points: int
    max_crossings: int
    rerouted_once: bool

    @property
    def ok(self) -> bool:
        return (
            self.max_length <= 5
            and self.max_edges_per_segment <= 2
            and self.max_rerouted_per_node <= 2
            and self.max_partners_per_disk <= 2
            and self.max_common_points <= 2
            and self.max_crossings <= 8
            and self.rerouted_once
        )


def phase2_report(state: DrawingState, log: ModifiedArcLog) -> Phase2Report:
    rerouted = set(log.edges())
    through = defaultdict(set)
    for e in rerouted:
        for n in state.routes[e].nodes:
            through[n].add(e)
    partners = 0
    for n in state.network.crossing_nodes:
        d = state.disk(n)
        per = defaultdict(set)
        for i, j in d.crossings:
            a, b = d.chords[i].edge, d.chords[j].edge
            per[a].add(b)
            per[b].add(a)
        partners = max([partners] + [len(s) for s in per.values()])
    counts = pair_crossing_counts(state)
    common = 0
    for a, b in counts:
        common = max(common, _common_points(state, a, b, counts))
    return Phase2Report(
        max_length=max((len(r) for r in state.routes.values()), default=0),
        max_edges_per_segment=max((len({e for e, _ in c}) for c in state.corridors.values()), default=0),
        max_rerouted_per_node=max((len(s) for s in through.values()), default=0),
        max_partners_per_disk=partners,
        max_common_points=common,
        max_crossings=_max_crossings(state)[0],
        rerouted_once=len(rerouted) == len(log.records),
    )


def phase1_report(state: DrawingState) -> dict:
    """Lens census after Phase 1: classes present, max crossings, max common points."""
    counts = pair_crossing_counts(state)
    classes = Counter(ln.cls.tag for ln in all_lenses(state))
    adjacent_13 = all(
        SHARED in (ln.alpha.kind, ln.beta.kind) for ln in all_lenses(state) if ln.cls.tag == ONE_THREE
    )
    return {
        "classes": dict(classes),
        "max_crossings": _max_crossings(state)[0],
        "max_common_points": max((_common_points(state, a, b, counts) for a, b in counts), default=0),
        "one_three_adjacent": adjacent_13,
    }


# --------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class NodeDiagnostic:
    node: int
    n_gamma: int
    m_gamma: int
    n_bound: float
    m_bound: float

    @property
    def n_ok(self) -> bool:
        return self.n_gamma <= self.n_bound

    @property
    def m_ok(self) -> bool:
        return self.m_gamma <= self.m_bound


@dataclass
class DiagnosticReport:
    k: int
    rows: list[NodeDiagnostic]
    max_crossings: int
    f_value: float

    @property
    def n_ok(self) -> bool:
        return all(r.n_ok for r in self.rows)

    @property
    def m_ok(self) -> bool:
        return all(r.m_ok for r in self.rows)

    @property
    def f_ok(self) -> bool:
        return self.max_crossings <= self.f_value

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "f_bound": self.f_value,
            "max_crossings": self.max_crossings,
            "nodes": [
                {"node": r.node, "n_gamma": r.n_gamma, "m_gamma": r.m_gamma, "n_bound": r.n_bound, "m_bound": r.m_bound}
                for r in self.rows
            ],
        }


def neighborhood_diagnostics(state: DrawingState, k: int) -> DiagnosticReport:
    """Sizes of the local graphs G_gamma of the edges passing each crossing node."""
    fk = f_bound(k)
    graph = state.network.graph
    rows = []
    for n in state.network.crossing_nodes:
        edges = {c.edge for c in state.disk(n).chords}
        if not edges:
            continue
        verts = {v for e in edges for v in graph.edges[e]}
        rows.append(
            NodeDiagnostic(n, len(verts), len(edges), 4 * 3 ** (k - 1), math.sqrt(29 * k / 2) * len(verts))
        )
    return DiagnosticReport(k, rows, _max_crossings(state)[0], fk)
