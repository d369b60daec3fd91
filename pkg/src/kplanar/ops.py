"""Lens-eliminating surgeries on a DrawingState.

Every surgery rewrites one or two routes and the affected corridor orders.
Strands that survive keep their corridor position; new strands are placed
immediately next to the strand they follow.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InconsistentState, InvalidWitness, StaleLens
from .lens import QUASI_ZERO, SHARED, Lens, classify_lens, revalidate
from .model import DrawingState, Route, interleave

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class SideChoice:
    side: str
    rule: str


@dataclass(frozen=True)
class _Keep:
    strand: tuple  # existing strand whose corridor position is reused


@dataclass(frozen=True)
class _New:
    seg: int
    ref: tuple  # strand to run alongside
    after: bool  # insert after ref in the stored (a -> b, left-to-right) order


def _after(state: DrawingState, seg: int, from_node: int, side: str) -> bool:
    forward = state.network.segments[seg].a == from_node
    return (side == RIGHT) == forward


def _subwalk(route: Route, edge: int, j_from: int, j_to: int):
    """Nodes and strands of ``route`` walked from node index j_from to j_to."""
    if j_to >= j_from:
        nodes = list(route.nodes[j_from : j_to + 1])
        strands = [(edge, j) for j in range(j_from, j_to)]
    else:
        nodes = list(route.nodes[j_to : j_from + 1])[::-1]
        strands = [(edge, j - 1) for j in range(j_from, j_to, -1)]
    return nodes, strands


def _rewrite(state: DrawingState, plans: dict) -> None:
    """Apply new routes given as ``{edge: (nodes, items)}`` in one step."""
    old_routes = {e: state.routes[e] for e in plans}
    kept = set()
    for _, items in plans.values():
        kept.update(it.strand for it in items if isinstance(it, _Keep))
    touched_nodes = set()
    for e, r in old_routes.items():
        touched_nodes.update(r.nodes)
    for e, (nodes, _) in plans.items():
        touched_nodes.update(nodes)
    state.touch(touched_nodes, plans)

    def seg_of(strand):
        e, i = strand
        r = old_routes.get(e) or state.routes[e]
        return r.segs[i]

    touched_segs = set()
    # drop strands that do not survive
    for e, r in old_routes.items():
        for i, s in enumerate(r.segs):
            if (e, i) not in kept:
                state.corridors[s].remove((e, i))
                touched_segs.add(s)
    # relabel survivors, then insert new strands
    for e, (nodes, items) in plans.items():
        for k, it in enumerate(items):
            if isinstance(it, _Keep):
                s = seg_of(it.strand)
                c = state.corridors[s]
                c[c.index(it.strand)] = ("T", e, k)
                touched_segs.add(s)
    for e, (nodes, items) in plans.items():
        segs = []
        for k, it in enumerate(items):
            if isinstance(it, _Keep):
                segs.append(seg_of(it.strand))
            else:
                c = state.corridors[it.seg]
                idx = c.index(it.ref) + (1 if it.after else 0)
                c.insert(idx, ("T", e, k))
                touched_segs.add(it.seg)
                segs.append(it.seg)
        state.routes[e] = Route(tuple(nodes), tuple(segs))
    for s in touched_segs:
        state.corridors[s] = [(x[1], x[2]) if x[0] == "T" else x for x in state.corridors[s]]
    state.touch(touched_nodes, plans)


# --------------------------------------------------------------------------
# self-crossings


def _first_self_crossing(state: DrawingState, e: int):
    r = state.routes[e]
    best = None
    for node in sorted(set(r.nodes[1:-1])):
        d = state.disk(node)
        for i, j in d.crossings:
            ci, cj = d.chords[i], d.chords[j]
            if ci.edge == e and cj.edge == e:
                cand = (node, tuple(sorted((ci.visit, cj.visit))))
                if best is None or cand < best:
                    best = cand
        if best is not None:
            return best
    return None


def remove_self_crossings(state: DrawingState, e: int) -> DrawingState:
    """Cut loops out of e's route until no two chords of e interleave."""
    while True:
        found = _first_self_crossing(state, e)
        if found is None:
            return state
        _, (i, j) = found
        r = state.routes[e]
        nodes = list(r.nodes[: i + 1]) + list(r.nodes[j + 1 :])
        items = [_Keep((e, k)) for k in range(i)] + [_Keep((e, k)) for k in range(j, len(r))]
        _rewrite(state, {e: (nodes, items)})


# --------------------------------------------------------------------------
# reroute


def _left_of(x: int, tail: int, head: int, m: int) -> bool:
    """Is boundary point x left of the chord directed tail -> head?"""
    return 0 < (x - head) % m < (tail - head) % m


def _chord(state: DrawingState, node: int, edge: int, visit: int):
    d = state.disk(node)
    for c in d.chords:
        if c.edge == edge and c.visit == visit:
            return d, c
    raise InconsistentState(f"edge {edge} has no chord at node {node} visit {visit}")


def reroute_side(state: DrawingState, lens: Lens, p, q) -> SideChoice:
    """Side of the directed arc e[p -> q] on which the new strands of f run.

    ``p`` and ``q`` are the lens points ordered along f.  If p is a crossing,
    the new strands stay on the side from which f approaches p, so f does not
    cross e there.  If p is a shared vertex (sides are not defined at a
    vertex), they go opposite the side from which f's lens arc reaches q.
    """
    e, f = lens.e, lens.f
    forward = q.e_pos[0] >= p.e_pos[0]
    if p.kind != SHARED:
        pt, marker_end, rule = p, "entry", "approach-side-at-first-point"
    elif q.kind != SHARED:
        pt, marker_end, rule = q, "exit", "departure-side-at-last-point"
    else:
        raise InconsistentState("lens without a crossing endpoint")
    d, ce = _chord(state, pt.node, e, pt.e_pos[0])
    _, cf = _chord(state, pt.node, f, pt.f_pos[0])
    tail, head = (ce.entry, ce.exit) if forward else (ce.exit, ce.entry)
    # at p: the side f comes from; at q: the side f leaves to (the arc arrives from the other one)
    marker = cf.entry if marker_end == "entry" else cf.exit
    return SideChoice(LEFT if _left_of(marker, tail, head, len(d.boundary)) else RIGHT, rule)


def reroute(state: DrawingState, lens: Lens) -> DrawingState:
    """Redraw f's lens arc so it closely follows e's lens arc."""
    lens = _fresh(state, lens)
    e, f = lens.e, lens.f
    re, rf = state.routes[e], state.routes[f]
    p, q = sorted((lens.alpha, lens.beta), key=lambda pt: pt.f_pos)
    jf_p, jf_q = p.f_pos[0], q.f_pos[0]
    side = reroute_side(state, lens, p, q).side
    sub_nodes, sub_strands = _subwalk(re, e, p.e_pos[0], q.e_pos[0])
    items = [_Keep((f, k)) for k in range(jf_p)]
    for k, ref in enumerate(sub_strands):
        seg = re.segs[ref[1]]
        items.append(_New(seg, ref, _after(state, seg, sub_nodes[k], side)))
    items += [_Keep((f, k)) for k in range(jf_q, len(rf))]
    nodes = list(rf.nodes[: jf_p + 1]) + sub_nodes[1:] + list(rf.nodes[jf_q + 1 :])
    _rewrite(state, {f: (nodes, items)})
    remove_self_crossings(state, f)
    state.epoch += 1
    return state


# --------------------------------------------------------------------------
# swap


def swap(state: DrawingState, lens: Lens, remove_loops: bool = True) -> DrawingState:
    """Exchange the two lens arcs between e and f, then cut any loops.

    With ``remove_loops=False`` only the exchange itself is performed; the
    result may contain self-crossings and is meant for inspection.
    """
    lens = _fresh(state, lens)
    e, f = lens.e, lens.f
    re, rf = state.routes[e], state.routes[f]
    a, b = lens.alpha, lens.beta  # a before b along e

    # e: prefix to a, f's arc a -> b, suffix from b
    f_nodes, f_strands = _subwalk(rf, f, a.f_pos[0], b.f_pos[0])
    je_a, je_b = a.e_pos[0], b.e_pos[0]
    e_items = [_Keep((e, k)) for k in range(je_a)]
    e_items += [_Keep(s) for s in f_strands]
    e_items += [_Keep((e, k)) for k in range(je_b, len(re))]
    e_nodes = list(re.nodes[: je_a + 1]) + f_nodes[1:] + list(re.nodes[je_b + 1 :])

    # f: prefix to its first lens point, e's arc, suffix
    lo, hi = sorted((a, b), key=lambda pt: pt.f_pos)
    e_sub_nodes, e_strands = _subwalk(re, e, lo.e_pos[0], hi.e_pos[0])
    jf_lo, jf_hi = lo.f_pos[0], hi.f_pos[0]
    f_items = [_Keep((f, k)) for k in range(jf_lo)]
    f_items += [_Keep(s) for s in e_strands]
    f_items += [_Keep((f, k)) for k in range(jf_hi, len(rf))]
    f_nodes_new = list(rf.nodes[: jf_lo + 1]) + e_sub_nodes[1:] + list(rf.nodes[jf_hi + 1 :])

    _rewrite(state, {e: (e_nodes, e_items), f: (f_nodes_new, f_items)})
    if remove_loops:
        remove_self_crossings(state, e)
        remove_self_crossings(state, f)
    state.epoch += 1
    return state


# --------------------------------------------------------------------------
# quasi-0 reroute

_PIVOT_ORDER = ((LEFT, LEFT), (LEFT, RIGHT), (RIGHT, LEFT), (RIGHT, RIGHT))


def quasi_zero_reroute(state: DrawingState, lens: Lens, h: int, gamma, s: int) -> DrawingState:
    """Redraw f along h from s into gamma's disk, then along e to beta."""
    lens = _fresh(state, lens)
    cls = classify_lens(state, lens)
    if cls.tag != QUASI_ZERO or cls.h != h or cls.s != s or (gamma is not None and cls.gamma.node != gamma.node):
        raise InvalidWitness(f"lens ({lens.e}, {lens.f}) is not a quasi-0-lens with witness h={h}, s={s}")
    gamma = cls.gamma
    e, f = lens.e, lens.f
    graph = state.network.graph
    re, rf, rh = state.routes[e], state.routes[f], state.routes[h]
    f_from_start = graph.edges[f][0] == s
    h_start = 0 if graph.edges[h][0] == s else len(rh)
    if f_from_start:
        far = max((lens.alpha, lens.beta), key=lambda pt: pt.f_pos)
    else:
        far = min((lens.alpha, lens.beta), key=lambda pt: pt.f_pos)

    h_nodes, h_strands = _subwalk(rh, h, h_start, gamma.f_pos[0])
    e_nodes, e_strands = _subwalk(re, e, gamma.e_pos[0], far.e_pos[0])
    g = gamma.node
    d = state.disk(g)
    m2 = 2 * len(d.boundary)
    _, ce = _chord(state, g, e, gamma.e_pos[0])
    _, chh = _chord(state, g, h, gamma.f_pos[0])
    ph = 2 * d.pos[h_strands[-1]] if h_strands else None
    if e_strands:
        target = 2 * d.pos[e_strands[0]]
    elif far.kind != SHARED:
        # gamma lies in beta's disk: pivot straight into f's continuation
        jf = far.f_pos[0]
        target = 2 * d.pos[(f, jf if f_from_start else jf - 1)]
    else:
        target = None

    choice = None
    for side_h, side_e in _PIVOT_ORDER:
        if ph is None or target is None:
            choice = (side_h, side_e)
            break
        vh = (ph - 1 if side_h == LEFT else ph + 1) % m2
        if e_strands:
            ve = (target + 1 if side_e == LEFT else target - 1) % m2
        else:
            ve = target
        if interleave(vh, ve, 2 * ce.entry, 2 * ce.exit) or interleave(vh, ve, 2 * chh.entry, 2 * chh.exit):
            continue
        choice = (side_h, side_e)
        break
    if choice is None:
        raise InconsistentState(f"no pivot avoids e and h at node {g}")
    side_h, side_e = choice

    # route from s: along h, then along e, then f's old route beyond the far point
    new_from_s = []
    for k, ref in enumerate(h_strands):
        seg = rh.segs[ref[1]]
        new_from_s.append((seg, ref, h_nodes[k], side_h))
    for k, ref in enumerate(e_strands):
        seg = re.segs[ref[1]]
        new_from_s.append((seg, ref, e_nodes[k], side_e))
    path_from_s = h_nodes + e_nodes[1:]
    jf = far.f_pos[0]
    if f_from_start:
        items = [_New(seg, ref, _after(state, seg, frm, side)) for seg, ref, frm, side in new_from_s]
        items += [_Keep((f, k)) for k in range(jf, len(rf))]
        nodes = path_from_s + list(rf.nodes[jf + 1 :])
    else:
        items = [_Keep((f, k)) for k in range(jf)]
        items += [_New(seg, ref, _after(state, seg, frm, side)) for seg, ref, frm, side in reversed(new_from_s)]
        nodes = list(rf.nodes[:jf]) + path_from_s[::-1]
    _rewrite(state, {f: (nodes, items)})
    remove_self_crossings(state, f)
    state.epoch += 1
    return state


def _fresh(state: DrawingState, lens: Lens) -> Lens:
    fresh = revalidate(state, lens)
    if (fresh.x_e, fresh.x_f) != (lens.x_e, lens.x_f) and lens.epoch != state.epoch:
        # same endpoints but different arcs: the lens the caller saw is gone
        raise StaleLens(f"lens ({lens.e}, {lens.f}) changed since epoch {lens.epoch}")
    return fresh
