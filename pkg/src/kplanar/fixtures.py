"""Small hand-built drawings with known lens structure."""
from __future__ import annotations

from .geometry import GeometricDrawing


def _drawing(vertices, edges) -> GeometricDrawing:
    out = {}
    for e, (u, v, bends) in edges.items():
        out[e] = (u, v, [vertices[u], *bends, vertices[v]])
    return GeometricDrawing(vertices, out)


def f1() -> GeometricDrawing:
    """Two edges crossing twice (a lens bounded by independent arcs)."""
    return _drawing(
        {0: (0, 0), 1: (10, 0), 2: (2, 3), 3: (8, 3)},
        {0: (0, 1, []), 1: (2, 3, [(3, -1), (7, -1)])},
    )


def f2() -> GeometricDrawing:
    """Adjacent edges crossing once: a lens with a shared endpoint."""
    return _drawing(
        {0: (0, 0), 1: (10, 0), 2: (9, 2)},
        {0: (0, 1, []), 1: (0, 2, [(5, -1), (6, 1)])},
    )


def f3() -> GeometricDrawing:
    """F1 plus a vertical edge crossing both arcs of the lens."""
    return _drawing(
        {0: (0, 0), 1: (10, 0), 2: (2, 3), 3: (8, 3), 4: (5, 2), 5: (5, -2)},
        {0: (0, 1, []), 1: (2, 3, [(3, -1), (7, -1)]), 2: (4, 5, [])},
    )


def f4() -> GeometricDrawing:
    """A 1-3-lens: x(e)=4, one crossing on e's arc, three on f's arc."""
    vertices = {
        0: (0, 0), 1: (100, 0), 2: (90, 20),
        3: (10, 10), 4: (10, -1),
        5: (20, -1), 6: (20, -10),
        7: (30, -1), 8: (30, -12),
        9: (40, -1), 10: (40, -14),
        11: (70, 5), 12: (70, -5),
        13: (80, 5), 14: (80, -5),
    }
    edges = {
        0: (0, 1, []),
        1: (0, 2, [(50, -10), (60, 10)]),
        2: (3, 4, []),
        3: (5, 6, []),
        4: (7, 8, []),
        5: (9, 10, []),
        6: (11, 12, []),
        7: (13, 14, []),
    }
    return _drawing(vertices, edges)


def f5() -> GeometricDrawing:
    """A quasi-0-lens: e's arc is crossed once, by h, which shares s with f."""
    vertices = {
        0: (0, 0), 1: (100, 0),  # e
        2: (20, 30), 3: (80, 30),  # f = s..t
        4: (50, -5),  # h = s..(50,-5)
        5: (60, -2), 6: (60, -20),  # g crosses f's arc
        7: (10, 15), 8: (40, 15),  # q crosses both prefixes
    }
    edges = {
        0: (0, 1, []),
        1: (2, 3, [(30, -10), (70, -10)]),
        2: (2, 4, []),
        3: (5, 6, []),
        4: (7, 8, []),
    }
    return _drawing(vertices, edges)


def fig4b() -> GeometricDrawing:
    """Adjacent lens whose two arcs are both crossed by one edge g."""
    return _drawing(
        {0: (0, 0), 1: (100, 0), 2: (90, 20), 3: (30, 5), 4: (30, -10)},
        {0: (0, 1, []), 1: (0, 2, [(50, -10), (60, 10)]), 2: (3, 4, [])},
    )


def interlock() -> GeometricDrawing:
    """Two 1-3-lenses sharing f's arc; Phase 2 reroutes the first and skips the second."""
    from .gen import one_three_gadget

    pts, edges = one_three_gadget(interlock=True)
    return _drawing(dict(enumerate(pts)), {i: (u, v, bends) for i, (u, v, bends) in enumerate(edges)})


def interlock_zero() -> GeometricDrawing:
    """The interlock gadget with edges 0 and 5 exchanged, so Phase 2 takes the lenses the other way round.

    Edge 0 is first rerouted along f = 1 from their shared vertex through the
    crossing of 1 and 5.  Then f is rerouted along 5; edges 0 and 1 now cross
    there and share a vertex, a new 0-lens that Phase 3 removes.
    """
    gd = interlock()
    swap = {0: 5, 5: 0}
    return GeometricDrawing(dict(gd.vertices), {swap.get(i, i): gd.edges[i] for i in sorted(gd.edges)})


ALL = {"F1": f1, "F2": f2, "F3": f3, "F4": f4, "F5": f5, "FIG4B": fig4b, "INTERLOCK": interlock, "INTERLOCK_ZERO": interlock_zero}
