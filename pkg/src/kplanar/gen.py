"""Seeded random k-plane polyline drawings in general position."""
from __future__ import annotations

import math
import random
from collections import defaultdict
from dataclasses import dataclass

from .errors import GenerationFailed
from .geometry import GeometricDrawing, on_segment, segment_contact


@dataclass(frozen=True)
class GenConfig:
    n: int
    m: int
    k: int
    seed: int = 0
    max_attempts: int = 0  # 0 means 200 * m + 1000
    max_bends: int = 2
    neighbours: int = 8  # candidate endpoints are drawn among this many nearest vertices
    gadgets: int = 0  # planted 1-3-lens gadgets, see one_three_gadget

    def __post_init__(self):
        if self.n < 0 or self.m < 0 or self.k < 1 or self.gadgets < 0:
            raise ValueError("need n >= 0, m >= 0, k >= 1 and gadgets >= 0")
        if self.gadgets and self.k < 4:
            raise ValueError("planted gadgets need k >= 4")
        if self.m > 3.81 * math.sqrt(self.k) * self.n:
            raise ValueError(f"m={self.m} exceeds the k-planar density bound 3.81*sqrt(k)*n")
        if self.m > self.n * (self.n - 1) // 2:
            raise ValueError(f"m={self.m} exceeds the number of vertex pairs")

    @property
    def attempts(self) -> int:
        return self.max_attempts or 200 * self.m + 1000


class _PieceIndex:
    """Uniform grid over polyline pieces."""

    def __init__(self, cell: int):
        self.cell = cell
        self.grid = defaultdict(list)

    def _cells(self, a, b):
        c = self.cell
        x0, x1 = sorted((a[0], b[0]))
        y0, y1 = sorted((a[1], b[1]))
        for gx in range(x0 // c, x1 // c + 1):
            for gy in range(y0 // c, y1 // c + 1):
                yield gx, gy

    def add(self, item, a, b):
        for key in self._cells(a, b):
            self.grid[key].append(item)

    def near(self, a, b):
        seen = set()
        for key in self._cells(a, b):
            for item in self.grid.get(key, ()):
                if item not in seen:
                    seen.add(item)
                    yield item


def one_three_gadget(interlock: bool = False):
    """Local coordinates of a planted 1-3-lens.

    Edge e runs from u=(0,0) to (50,0); the adjacent edge f leaves u below e,
    crosses it once at beta and ends at (45,10).  One transversal crosses e's
    arc, three cross f's arc and two cross e beyond beta, so x(e) = x(f) = 4.
    With ``interlock`` the third transversal of f's arc is replaced by an edge
    g from f's far endpoint, which forms a second 1-3-lens with f and shares
    f's arc with the first one.  Returns ``(vertices, edges)`` with edges as
    ``(i, j, bends)`` over vertex indices.
    """
    vertices = [(0, 0), (50, 0), (45, 10)]
    edges = [(0, 1, []), (0, 2, [(25, -10), (30, 5)])]

    def stick(a, b):
        vertices.extend((a, b))
        edges.append((len(vertices) - 2, len(vertices) - 1, []))

    stick((5, 5), (5, -1))
    stick((10, -1), (10, -6))
    stick((15, -1), (15, -8))
    if interlock:
        vertices.append((19, -6))
        edges.append((2, len(vertices) - 1, [(55, 8), (55, -15), (22, -15)]))
        for x in (30, 38, 46):
            stick((x, -13), (x, -17))
    else:
        stick((20, -1), (20, -10))
    stick((35, 3), (35, -3))
    stick((40, 3), (40, -3))
    return vertices, edges


class _Builder:
    """Drawing under construction with exact incremental acceptance."""

    def __init__(self, k: int):
        self.k = k
        self.vertices = {}
        self.vindex = _PieceIndex(6)
        self.pindex = _PieceIndex(6)
        self.pieces = []  # (edge, a, b)
        self.cross = defaultdict(int)
        self.points = set()
        self.edges = {}
        self.pairs = set()

    def free_point(self, p) -> bool:
        """p is not a vertex and lies on no edge."""
        if any(self.vertices[w] == p for w in self.vindex.near(p, p)):
            return False
        return not any(on_segment(p, a, b) for a, b in (self.pieces[i][1:] for i in self.pindex.near(p, p)))

    def add_vertex(self, p) -> int:
        v = len(self.vertices)
        self.vertices[v] = p
        self.vindex.add(v, p, p)
        return v

    def try_add(self, u, v, poly) -> bool:
        res = _try_edge(
            poly, u, v, self.vertices, self.vindex, self.pindex, self.pieces, self.cross, self.points, self.edges, self.k
        )
        if res is None:
            return False
        e = len(self.edges)
        self.edges[e] = (u, v, poly)
        self.pairs.add(frozenset((u, v)))
        hits, new_points = res
        for other in hits:
            self.cross[other] += 1
        self.cross[e] = len(hits)
        self.points.update(new_points)
        for i in range(len(poly) - 1):
            self.pindex.add(len(self.pieces), poly[i], poly[i + 1])
            self.pieces.append((e, poly[i], poly[i + 1]))
        return True

    def try_gadget(self, vertices, edges, place) -> bool:
        pts = [place(p) for p in vertices]
        if len(set(pts)) < len(pts) or not all(self.free_point(p) for p in pts):
            return False
        saved = (len(self.vertices), len(self.edges))
        ids = [self.add_vertex(p) for p in pts]
        for i, j, bends in edges:
            if not self.try_add(ids[i], ids[j], [pts[i], *map(place, bends), pts[j]]):
                self._rollback(*saved)
                return False
        return True

    def _rollback(self, nv, ne):
        # rebuild from scratch; only used when a planted gadget does not fit
        vertices = [self.vertices[v] for v in range(nv)]
        edges = [self.edges[e] for e in range(ne)]
        self.__init__(self.k)
        for p in vertices:
            self.add_vertex(p)
        for u, v, poly in edges:
            ok = self.try_add(u, v, poly)
            assert ok


def gen_random_kplane(cfg: GenConfig) -> GeometricDrawing:
    """Random drawing with cfg.n vertices, cfg.m edges and at most cfg.k crossings per edge.

    Edges are polylines with up to ``max_bends`` bends on an integer grid.  A
    candidate edge is kept only if the drawing stays in general position and
    no edge exceeds k crossings; otherwise it is redrawn.  With
    ``cfg.gadgets > 0`` that many copies of :func:`one_three_gadget` (every
    second one interlocking) are planted first at random places and the
    remaining vertices and edges are drawn around them.
    """
    rng = random.Random(cfg.seed)
    side = max(8, 6 * math.isqrt(max(cfg.n, 1)) + 6)
    b = _Builder(cfg.k)
    attempts = 0
    for g in range(cfg.gadgets):
        local = one_three_gadget(interlock=g % 2 == 1)
        while True:
            attempts += 1
            if attempts > cfg.attempts:
                raise GenerationFailed(f"planted {g} of {cfg.gadgets} gadgets in {cfg.attempts} attempts")
            dx, dy = rng.randrange(-20, side), rng.randrange(-10, side)
            sx, sy = rng.choice((1, -1)), rng.choice((1, -1))
            if b.try_gadget(*local, lambda p: (dx + sx * p[0], dy + sy * p[1])):
                break
    if len(b.vertices) > cfg.n or len(b.edges) > cfg.m:
        raise ValueError(f"{cfg.gadgets} gadgets need more than n={cfg.n} vertices or m={cfg.m} edges")
    while len(b.vertices) < cfg.n:
        p = (rng.randrange(side), rng.randrange(side))
        if b.free_point(p):
            b.add_vertex(p)
    vertices = b.vertices
    if len(b.edges) == cfg.m:
        return GeometricDrawing(dict(vertices), dict(b.edges))

    near = {}
    for v, p in vertices.items():
        others = sorted((u for u in vertices if u != v), key=lambda u: (_d2(p, vertices[u]), u))
        near[v] = others[: cfg.neighbours]

    while len(b.edges) < cfg.m:
        attempts += 1
        if attempts > cfg.attempts:
            raise GenerationFailed(f"placed {len(b.edges)} of {cfg.m} edges in {cfg.attempts} attempts")
        u = rng.randrange(cfg.n)
        pool = [w for w in near[u] if frozenset((u, w)) not in b.pairs]
        if not pool or rng.random() < 0.1:
            pool = [w for w in vertices if w != u and frozenset((u, w)) not in b.pairs]
        if not pool:
            continue
        v = rng.choice(pool)
        poly = _random_polyline(rng, vertices[u], vertices[v], cfg.max_bends, side)
        if not b.try_add(u, v, poly) and len(poly) > 2:
            # second chance: the straight segment
            b.try_add(u, v, [vertices[u], vertices[v]])
    return GeometricDrawing(dict(vertices), dict(b.edges))


def _d2(p, q):
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def _random_polyline(rng, a, b, max_bends, side):
    bends = rng.randint(0, max_bends)
    length = math.isqrt(_d2(a, b)) + 1
    spread = max(2, length // 2 + 1)
    ts = sorted(rng.random() for _ in range(bends))
    poly = [a]
    for t in ts:
        x = round(a[0] + t * (b[0] - a[0])) + rng.randint(-spread, spread)
        y = round(a[1] + t * (b[1] - a[1])) + rng.randint(-spread, spread)
        poly.append((min(max(x, -2), side + 1), min(max(y, -2), side + 1)))
    poly.append(b)
    return poly


def _try_edge(poly, u, v, vertices, vindex, pindex, pieces, cross, points, edges, k):
    """Crossed edges and new crossing points if poly can be added, else None."""
    pu, pv = vertices[u], vertices[v]
    segs = list(zip(poly, poly[1:]))
    if any(a == b for a, b in segs):
        return None
    # own pieces: consecutive ones meet only at their joint, others never
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            c = segment_contact(*segs[i], *segs[j])
            if c is None:
                continue
            if j == i + 1 and c.kind == "touch" and c.point == segs[i][1]:
                continue
            return None
    # vertices on the polyline
    for a, b in segs:
        for w in vindex.near(a, b):
            p = vertices[w]
            if on_segment(p, a, b) and not ((w == u and p == poly[0] and a == poly[0]) or (w == v and p == poly[-1] and b == poly[-1])):
                return None
    hits = []
    new_points = set()
    for a, b in segs:
        for idx in pindex.near(a, b):
            e, c, d = pieces[idx]
            hit = segment_contact(a, b, c, d)
            if hit is None:
                continue
            if hit.kind == "touch":
                ou, ov, _ = edges[e]
                shared = {vertices[w] for w in {ou, ov} & {u, v}}
                if hit.point in shared:
                    continue
                return None
            if hit.kind == "overlap":
                return None
            if hit.point in points or hit.point in new_points:
                return None
            new_points.add(hit.point)
            hits.append(e)
    if len(hits) > k:
        return None
    extra = defaultdict(int)
    for e in hits:
        extra[e] += 1
    if any(cross[e] + c > k for e, c in extra.items()):
        return None
    return hits, new_points
