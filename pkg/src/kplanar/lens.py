"""Lens detection and classification."""
from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations

from .errors import MisorientedLens, SameEdge, StaleLens
from .model import CROSSING, DrawingState, materialize_planarization

CROSS = "crossing"
SHARED = "shared"

ZERO = "zero"
QUASI_ZERO = "quasi-zero"
ONE_THREE = "one-three"
OTHER = "other"


@dataclass(frozen=True)
class IntersectionPoint:
    """A common point of two edges e and f with its position on each.

    Positions are ``(route node index, ordinal along the chord)``; a shared
    endpoint sits at index 0 or at the route length with ordinal 0.
    """

    kind: str
    node: int
    e_pos: tuple[int, int]
    f_pos: tuple[int, int]

    def flipped(self) -> "IntersectionPoint":
        return IntersectionPoint(self.kind, self.node, self.f_pos, self.e_pos)


@dataclass(frozen=True)
class LensClass:
    tag: str
    h: int | None = None
    gamma: IntersectionPoint | None = None  # as a point of (e, h)
    s: int | None = None  # shared vertex of f and h


@dataclass(frozen=True)
class Lens:
    """Arcs e[alpha, beta] and f[alpha, beta] whose interiors are disjoint.

    ``alpha`` precedes ``beta`` along e.  ``x_e``/``x_f`` are the crossing
    counts of the open arcs, ``len_e``/``len_f`` their lengths in the network.
    """

    e: int
    f: int
    alpha: IntersectionPoint
    beta: IntersectionPoint
    x_e: int
    x_f: int
    len_e: int
    len_f: int
    epoch: int
    cls: LensClass | None = None

    @property
    def kind(self) -> str:
        if self.alpha.kind == SHARED or self.beta.kind == SHARED:
            return "adjacent"
        return "independent"

    def flipped(self) -> "Lens":
        a, b = self.alpha.flipped(), self.beta.flipped()
        if b.e_pos < a.e_pos:
            a, b = b, a
        return Lens(self.f, self.e, a, b, self.x_f, self.x_e, self.len_f, self.len_e, self.epoch)

    def key(self) -> tuple:
        """Orientation-free identity used to compare lenses across methods."""
        pts = sorted([(self.alpha.node, self.alpha.kind), (self.beta.node, self.beta.kind)])
        return (min(self.e, self.f), max(self.e, self.f), tuple(pts))


def intersection_points(state: DrawingState, e: int, f: int):
    """Common points of e and f, as (ordered along e, ordered along f)."""
    if e == f:
        raise SameEdge(f"edge {e} paired with itself")
    pts = [
        IntersectionPoint(CROSS, c.node, c.pos, c.partner_pos)
        for c in state.crossings_of(e)
        if c.partner == f
    ]
    ue, ve = state.network.graph.edges[e]
    uf, vf = state.network.graph.edges[f]
    for w in {ue, ve} & {uf, vf}:
        pe = (0, 0) if w == ue else (len(state.routes[e]), 0)
        pf = (0, 0) if w == uf else (len(state.routes[f]), 0)
        pts.append(IntersectionPoint(SHARED, state.network.vertex_node[w], pe, pf))
    along_e = sorted(pts, key=lambda p: p.e_pos)
    along_f = sorted(pts, key=lambda p: p.f_pos)
    return along_e, along_f


def arc_crossings(state: DrawingState, edge: int, p: tuple, q: tuple) -> int:
    """Crossings on ``edge`` strictly between positions p and q."""
    lo, hi = (p, q) if p <= q else (q, p)
    return sum(1 for c in state.crossings_of(edge) if lo < c.pos < hi)


def arc_partners(state: DrawingState, edge: int, p: tuple, q: tuple) -> list[int]:
    """Partner edges of the crossings strictly between p and q, in order from p."""
    lo, hi = (p, q) if p <= q else (q, p)
    out = [c.partner for c in state.crossings_of(edge) if lo < c.pos < hi]
    return out if p <= q else out[::-1]


def _inside(p, a, b) -> bool:
    lo, hi = (a, b) if a <= b else (b, a)
    return lo < p < hi


def make_lens(state: DrawingState, e: int, f: int, a: IntersectionPoint, b: IntersectionPoint) -> Lens:
    if b.e_pos < a.e_pos:
        a, b = b, a
    return Lens(
        e,
        f,
        a,
        b,
        arc_crossings(state, e, a.e_pos, b.e_pos),
        arc_crossings(state, f, a.f_pos, b.f_pos),
        abs(b.e_pos[0] - a.e_pos[0]),
        abs(b.f_pos[0] - a.f_pos[0]),
        state.epoch,
    )


def is_lens(points, a: IntersectionPoint, b: IntersectionPoint) -> bool:
    return not any(
        _inside(g.e_pos, a.e_pos, b.e_pos) and _inside(g.f_pos, a.f_pos, b.f_pos)
        for g in points
        if g != a and g != b
    )


def find_lens(state: DrawingState, e: int, f: int) -> Lens | None:
    """Some lens formed by e and f, or None if they share fewer than two points.

    Starts from the first two common points along e and shrinks towards
    alpha while a common point lies inside both arcs.
    """
    along_e, _ = intersection_points(state, e, f)
    if len(along_e) < 2:
        return None
    a, b = along_e[0], along_e[1]
    while True:
        inner = [
            g
            for g in along_e
            if g != a and g != b and _inside(g.e_pos, a.e_pos, b.e_pos) and _inside(g.f_pos, a.f_pos, b.f_pos)
        ]
        if not inner:
            break
        b = inner[0]
    return make_lens(state, e, f, a, b)


def orient(lens: Lens) -> Lens:
    """Orient so that x(e-arc) <= x(f-arc)."""
    return lens.flipped() if lens.x_e > lens.x_f else lens


def classify_lens(state: DrawingState, lens: Lens) -> LensClass:
    if lens.x_e > lens.x_f:
        raise MisorientedLens(f"x(e_ab)={lens.x_e} > x(f_ab)={lens.x_f}")
    e, f = lens.e, lens.f
    if lens.x_e == 0:
        return LensClass(ZERO)
    xe = len(state.crossings_of(e))
    if xe == 4 and lens.x_e == 1 and lens.x_f == 3:
        return LensClass(ONE_THREE)
    if lens.x_e == 1:
        q = quasi_zero_witness(state, lens)
        if q is not None:
            return q
    return LensClass(OTHER)


def quasi_zero_witness(state: DrawingState, lens: Lens) -> LensClass | None:
    e, f = lens.e, lens.f
    inner = [c for c in state.crossings_of(e) if lens.alpha.e_pos < c.pos < lens.beta.e_pos]
    if len(inner) != 1:
        return None
    g = inner[0]
    h = g.partner
    if h in (e, f):
        return None
    graph = state.network.graph
    shared = set(graph.edges[f]) & set(graph.edges[h])
    if len(shared) != 1:
        return None
    s = shared.pop()
    uf, vf = graph.edges[f]
    f_start = (0, 0) if s == uf else (len(state.routes[f]), 0)
    # the lens point nearer to s along f
    if f_start == (0, 0):
        near = min((lens.alpha, lens.beta), key=lambda p: p.f_pos)
    else:
        near = max((lens.alpha, lens.beta), key=lambda p: p.f_pos)
    uh, _ = graph.edges[h]
    h_start = (0, 0) if s == uh else (len(state.routes[h]), 0)
    if arc_partners(state, f, f_start, near.f_pos) != arc_partners(state, h, h_start, g.partner_pos):
        return None
    gamma = IntersectionPoint(CROSS, g.node, g.pos, g.partner_pos)
    return LensClass(QUASI_ZERO, h=h, gamma=gamma, s=s)


def multi_pairs(state: DrawingState) -> list[tuple[int, int]]:
    """Edge pairs with at least two common points, ascending."""
    return list(state.multi_pairs())


def enumerate_lenses(state: DrawingState) -> list[Lens]:
    """One classified lens per edge pair with two or more common points."""
    out = []
    for a, b in multi_pairs(state):
        lens = orient(find_lens(state, a, b))
        out.append(replace(lens, cls=classify_lens(state, lens)))
    return out


def revalidate(state: DrawingState, lens: Lens) -> Lens:
    """Return the lens re-expressed in the current state or raise StaleLens."""
    if lens.epoch == state.epoch:
        return lens
    along_e, _ = intersection_points(state, lens.e, lens.f)

    def match(p):
        cands = [g for g in along_e if g.kind == p.kind and g.node == p.node]
        if len(cands) != 1:
            raise StaleLens(f"lens endpoint at node {p.node} is gone or ambiguous")
        return cands[0]

    a, b = match(lens.alpha), match(lens.beta)
    if not is_lens(along_e, a, b):
        raise StaleLens("arcs are no longer interior-disjoint")
    return make_lens(state, lens.e, lens.f, a, b)


# --------------------------------------------------------------------------
# brute-force oracle


def oracle_lenses(state: DrawingState) -> set[tuple]:
    """All lenses, found by brute force on the materialized planarization.

    Returns orientation-free keys ``(e, f, ((rank, kind), (rank, kind)))``
    where ``rank`` indexes the point along ``e``'s materialized route.
    Independent of the chord bookkeeping used by :func:`find_lens`.
    """
    mat = materialize_planarization(state)
    routes = mat.original_routes
    graph = mat.graph
    out = set()
    # only pairs meeting at some node can form a lens
    at = {}
    for e, r in routes.items():
        for n in r.nodes:
            at.setdefault(n, set()).add(e)
    cand = set()
    for es in at.values():
        cand.update(combinations(sorted(es), 2))
    for e, f in sorted(cand):
        re, rf = routes[e].nodes, routes[f].nodes
        common = [n for n in set(re) & set(rf)]
        pts = []
        for n in common:
            node = mat.nodes[n]
            if node.kind == CROSSING and set(node.edges) != {e, f}:
                continue
            pts.append((re.index(n), rf.index(n), node.kind))
        for (ia, ja, ka), (ib, jb, kb) in combinations(pts, 2):
            lo_e, hi_e = sorted((ia, ib))
            lo_f, hi_f = sorted((ja, jb))
            inner_e = set(re[lo_e + 1 : hi_e])
            inner_f = set(rf[lo_f + 1 : hi_f])
            if inner_e & inner_f:
                continue
            out.add((e, f, tuple(sorted([(ia, _kind(ka)), (ib, _kind(kb))]))))
    return out


def _kind(node_kind: str) -> str:
    return CROSS if node_kind == CROSSING else SHARED


def lens_rank_key(state: DrawingState, lens: Lens) -> tuple:
    """Key of a lens comparable with :func:`oracle_lenses` output."""
    e, f = min(lens.e, lens.f), max(lens.e, lens.f)
    ln = lens if lens.e == e else lens.flipped()
    xs = state.crossings_of(e)

    def rank(p):
        if p.kind == SHARED:
            return 0 if p.e_pos[0] == 0 else len(xs) + 1
        return 1 + sum(1 for c in xs if c.pos < p.e_pos)

    return (e, f, tuple(sorted([(rank(ln.alpha), ln.alpha.kind), (rank(ln.beta), ln.beta.kind)])))


def pair_lenses(state: DrawingState, e: int, f: int) -> list[Lens]:
    """Every lens of the pair (e, f), ordered by alpha then beta along e."""
    along_e, _ = intersection_points(state, e, f)
    out = []
    for i in range(len(along_e)):
        for j in range(i + 1, len(along_e)):
            if is_lens(along_e, along_e[i], along_e[j]):
                out.append(make_lens(state, e, f, along_e[i], along_e[j]))
    return out


def classified(state: DrawingState, lens: Lens) -> Lens:
    """Oriented copy of the lens carrying its class."""
    lens = orient(lens)
    return replace(lens, cls=classify_lens(state, lens))
