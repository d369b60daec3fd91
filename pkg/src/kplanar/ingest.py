"""Exact ingestion of polyline drawings into a planarization network."""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction

from .errors import DegenerateInput, NotGeneralPosition
from .geometry import (
    GeometricDrawing,
    candidate_piece_pairs,
    direction_key,
    integer_scale,
    on_segment,
    segment_contact,
)
from .model import CROSSING, VERTEX, GraphSpec, NetworkN, Node, Route, Segment


def _fmt(p):
    return f"({p[0]}, {p[1]})"


def _scaled(gd: GeometricDrawing):
    """Integer copies of the vertex points and polylines, plus the scale used."""
    pts = list(gd.vertices.values()) + [p for _, _, poly in gd.edges.values() for p in poly]
    scale = integer_scale(pts)

    def sc(p):
        return (int(p[0] * scale), int(p[1] * scale))

    verts = {v: sc(p) for v, p in gd.vertices.items()}
    edges = {e: (u, v, [sc(p) for p in poly]) for e, (u, v, poly) in gd.edges.items()}
    return verts, edges, scale


def check_drawing(gd: GeometricDrawing) -> list:
    """Validate a geometric drawing; returns the list of proper crossings.

    Each crossing is ``(point, edge a, piece a, t_a, edge b, piece b, t_b)``.
    Raises DegenerateInput / NotGeneralPosition on the first violation.
    Predicates run on an integer rescaling of the input, which changes no
    incidence or order relation.
    """
    graph = GraphSpec(sorted(gd.vertices), {e: (u, v) for e, (u, v, _) in gd.edges.items()})
    probs = graph.problems()
    if probs:
        raise DegenerateInput(probs[0])
    seen = {}
    for v, p in gd.vertices.items():
        if p in seen:
            raise DegenerateInput(f"vertices {seen[p]} and {v} share the point {_fmt(p)}")
        seen[p] = v
    for e, (u, v, poly) in gd.edges.items():
        if len(poly) < 2 or poly[0] != gd.vertices[u] or poly[-1] != gd.vertices[v]:
            raise DegenerateInput(f"edge {e}: polyline must run from vertex {u} to vertex {v}")
        for i in range(len(poly) - 1):
            if poly[i] == poly[i + 1]:
                raise DegenerateInput(f"edge {e}: repeated point {_fmt(poly[i])}")

    verts, edges, scale = _scaled(gd)

    def orig(p):
        return (Fraction(p[0], scale), Fraction(p[1], scale))

    pieces = []
    for e in sorted(edges):
        poly = edges[e][2]
        pieces.extend((e, i, poly[i], poly[i + 1]) for i in range(len(poly) - 1))
    npieces = len(pieces)
    vlist = sorted(verts.items())
    geo = [(a, b) for _, _, a, b in pieces] + [(p, p) for _, p in vlist]

    crossings = []
    points = {}
    for x, y in candidate_piece_pairs(geo):
        if y >= npieces:
            if x >= npieces:
                continue
            # a vertex point against a piece
            e, i, a, b = pieces[x]
            w, p = vlist[y - npieces]
            if not on_segment(p, a, b):
                continue
            u, v, poly = edges[e]
            if (i == 0 and p == a and w == u) or (i == len(poly) - 2 and p == b and w == v):
                continue
            raise DegenerateInput(f"edge {e} passes through vertex {w} at {_fmt(orig(p))}")
        e1, i1, a1, b1 = pieces[x]
        e2, i2, a2, b2 = pieces[y]
        c = segment_contact(a1, b1, a2, b2)
        if c is None:
            continue
        if c.kind == "overlap":
            raise NotGeneralPosition(f"edges {e1} and {e2} overlap near {_fmt(orig(a1))}")
        if e1 == e2:
            if abs(i1 - i2) == 1 and c.kind == "touch":
                joint = b1 if i2 == i1 + 1 else a1
                if c.point == joint:
                    continue
            raise DegenerateInput(f"edge {e1} intersects itself at {_fmt(orig(c.point))}")
        if c.kind == "touch":
            ends = {verts[w] for w in edges[e1][:2]} & {verts[w] for w in edges[e2][:2]}
            if c.point in ends:
                continue
            raise NotGeneralPosition(f"edges {e1} and {e2} touch at {_fmt(orig(c.point))}")
        pt = orig(c.point)
        if pt in points:
            raise NotGeneralPosition(f"three edges meet at {_fmt(pt)}")
        points[pt] = (e1, e2)
        crossings.append((pt, e1, i1, c.t_ab, e2, i2, c.t_cd))
    return crossings


def ingest_geometric(gd: GeometricDrawing) -> NetworkN:
    """Planarize a geometric drawing: one degree-4 node per crossing."""
    crossings = check_drawing(gd)
    graph = GraphSpec(sorted(gd.vertices), {e: (u, v) for e, (u, v, _) in sorted(gd.edges.items())})
    nodes = []
    coord = {}
    for v in graph.vertices:
        coord[len(nodes)] = gd.vertices[v]
        nodes.append(Node(len(nodes), VERTEX, vertex=v))
    vnode = {n.vertex: n.id for n in nodes}
    cnode = {}
    for pt, e1, _, _, e2, _, _ in sorted(crossings, key=lambda c: c[0]):
        cnode[pt] = len(nodes)
        coord[len(nodes)] = pt
        nodes.append(Node(len(nodes), CROSSING, edges=(min(e1, e2), max(e1, e2))))

    on_edge = defaultdict(list)
    for pt, e1, i1, t1, e2, i2, t2 in crossings:
        on_edge[e1].append((i1, t1, pt))
        on_edge[e2].append((i2, t2, pt))

    segments = []
    routes = {}
    ends = defaultdict(list)  # node -> [(direction key, segment id)]
    for e in sorted(graph.edges):
        u, v, poly = gd.edges[e]
        events = [(0, 0, poly[0], vnode[u])]
        events += [(i, t, pt, cnode[pt]) for i, t, pt in sorted(on_edge[e], key=lambda c: (c[0], c[1]))]
        events.append((len(poly) - 2, 1, poly[-1], vnode[v]))
        rnodes, rsegs = [vnode[u]], []
        for k in range(len(events) - 1):
            ia, _, pa, na = events[k]
            ib, _, pb, nb = events[k + 1]
            # geometric path of this segment: pa, bends in between, pb
            path = [pa] + list(poly[ia + 1 : ib + 1]) + [pb]
            path = [p for j, p in enumerate(path) if j == 0 or p != path[j - 1]]
            sid = len(segments)
            segments.append(Segment(sid, na, nb))
            ends[na].append((direction_key(path[1][0] - pa[0], path[1][1] - pa[1]), sid))
            ends[nb].append((direction_key(path[-2][0] - pb[0], path[-2][1] - pb[1]), sid))
            rnodes.append(nb)
            rsegs.append(sid)
        routes[e] = Route(tuple(rnodes), tuple(rsegs))
    rotation = {}
    for n in range(len(nodes)):
        rotation[n] = tuple(s for _, s in sorted(ends[n], key=lambda x: x[0]))
    net = NetworkN(graph, nodes, segments, rotation, routes)
    net.coords = coord
    net.check()
    return net
