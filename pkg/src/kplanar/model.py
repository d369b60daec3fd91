"""Combinatorial drawings: a fixed planarization plus evolving edge routes.

A drawing is stored as

* the network ``N`` (planarization of the input drawing): nodes, segments
  and a counterclockwise rotation system;
* one route per graph edge: a walk in ``N``;
* for every segment a *corridor*: the left-to-right order of the strands
  (edge traversals) running along it, seen in the segment's reference
  direction ``a -> b``.

Crossings are never stored.  Around every crossing node the corridors end on
the boundary of a small disk and every strand passing through the node is a
chord of that disk; two strands cross iff their chord endpoints interleave.
"""
from __future__ import annotations

from bisect import bisect_left
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import InconsistentState, InvalidNetwork, NotACrossingNode
from .geometry import direction_key, segment_contact

VERTEX = "vertex"
CROSSING = "crossing"

Strand = tuple  # (edge id, occurrence index)


# --------------------------------------------------------------------------
# network


@dataclass(frozen=True)
class Node:
    id: int
    kind: str
    vertex: int | None = None
    edges: tuple[int, int] | None = None


@dataclass(frozen=True)
class Segment:
    id: int
    a: int
    b: int

    def other(self, node: int) -> int:
        return self.b if node == self.a else self.a


@dataclass(frozen=True)
class Route:
    """A walk in the network given by its node and segment sequences."""

    nodes: tuple[int, ...]
    segs: tuple[int, ...]

    def __len__(self):
        return len(self.segs)


@dataclass
class GraphSpec:
    vertices: list[int]
    edges: dict[int, tuple[int, int]]

    def problems(self) -> list[str]:
        out = []
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            out.append("duplicate vertex id")
        pairs = set()
        for e, (u, v) in sorted(self.edges.items()):
            if u not in vs or v not in vs:
                out.append(f"edge {e}: unknown endpoint")
            if u == v:
                out.append(f"edge {e}: loop")
            key = frozenset((u, v))
            if key in pairs:
                out.append(f"edge {e}: parallel edge")
            pairs.add(key)
        return out


class NetworkN:
    """The planarization of the input drawing; immutable once built."""

    def __init__(self, graph: GraphSpec, nodes, segments, rotation, original_routes):
        self.graph = graph
        self.nodes: list[Node] = list(nodes)
        self.segments: list[Segment] = list(segments)
        self.rotation: dict[int, tuple[int, ...]] = {
            n: tuple(r) for n, r in rotation.items()
        }
        self.original_routes: dict[int, Route] = dict(original_routes)
        self.vertex_node = {
            n.vertex: n.id for n in self.nodes if n.kind == VERTEX
        }
        # node coordinates when the network came from a geometric drawing
        self.coords: dict | None = None
        self._crossing_nodes: list[int] | None = None

    @property
    def crossing_nodes(self) -> list[int]:
        if self._crossing_nodes is None:
            self._crossing_nodes = [n.id for n in self.nodes if n.kind == CROSSING]
        return self._crossing_nodes

    def is_crossing(self, node: int) -> bool:
        return self.nodes[node].kind == CROSSING

    def endpoints(self, edge: int) -> tuple[int, int]:
        u, v = self.graph.edges[edge]
        return self.vertex_node[u], self.vertex_node[v]

    def problems(self, require_simple: bool = False) -> list[str]:
        return network_problems(self, require_simple)

    def check(self, require_simple: bool = False) -> None:
        probs = self.problems(require_simple)
        if probs:
            raise InvalidNetwork(probs[0])

    def __eq__(self, other):
        if not isinstance(other, NetworkN):
            return NotImplemented
        return (
            self.graph == other.graph
            and self.nodes == other.nodes
            and self.segments == other.segments
            and self.rotation == other.rotation
            and self.original_routes == other.original_routes
        )


def trace_faces(segments: Iterable[Segment], rotation: dict[int, tuple[int, ...]]):
    """Trace the faces of a rotation system; returns a list of half-edge cycles.

    A half-edge is ``(segment id, 0)`` for ``a -> b`` and ``(segment id, 1)``
    for ``b -> a``.
    """
    seg = {s.id: s for s in segments}
    where = {}
    for node, rot in rotation.items():
        for i, s in enumerate(rot):
            where[(node, s)] = i
    unseen = {(s, d) for s in seg for d in (0, 1)}
    faces = []
    while unseen:
        start = min(unseen)
        face = []
        h = start
        while True:
            if h not in unseen:
                raise InconsistentState(f"face tracing revisited half-edge {h}")
            unseen.discard(h)
            face.append(h)
            s, d = h
            head = seg[s].b if d == 0 else seg[s].a
            rot = rotation[head]
            i = where[(head, s)]
            nxt = rot[(i - 1) % len(rot)]
            h = (nxt, 0 if seg[nxt].a == head else 1)
            if h == start:
                break
        faces.append(face)
    return faces


@dataclass(frozen=True)
class EulerReport:
    vertices: int
    edges: int
    faces: int
    components: int

    @property
    def ok(self) -> bool:
        return self.vertices - self.edges + self.faces == 1 + self.components


def euler_check(node_ids: Iterable[int], segments: list[Segment], rotation) -> EulerReport:
    """Euler's formula V - E + F = 1 + C for a (possibly disconnected) plane graph."""
    node_ids = list(node_ids)
    parent = {n: n for n in node_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in segments:
        ra, rb = find(s.a), find(s.b)
        if ra != rb:
            parent[ra] = rb
    comps = len({find(n) for n in node_ids})
    traced = len(trace_faces(segments, rotation)) if segments else 0
    deg = Counter()
    for s in segments:
        deg[s.a] += 1
        deg[s.b] += 1
    isolated = sum(1 for n in node_ids if deg[n] == 0)
    # each component traces its own outer face; the plane has a single one
    faces = traced + isolated - (comps - 1) if comps else 1
    return EulerReport(len(node_ids), len(segments), faces, comps)


def network_problems(net: NetworkN, require_simple: bool = False) -> list[str]:
    out = list(net.graph.problems())
    ids = [n.id for n in net.nodes]
    if ids != list(range(len(ids))):
        out.append("node ids are not dense")
    if [s.id for s in net.segments] != list(range(len(net.segments))):
        out.append("segment ids are not dense")
    if out:
        return out
    if set(net.vertex_node) != set(net.graph.vertices):
        out.append("vertex nodes do not match graph vertices")
    incident = defaultdict(list)
    for s in net.segments:
        if s.a == s.b:
            out.append(f"segment {s.id}: loop")
        incident[s.a].append(s.id)
        incident[s.b].append(s.id)
    for n in net.nodes:
        rot = net.rotation.get(n.id, ())
        if sorted(rot) != sorted(incident[n.id]):
            out.append(f"node {n.id}: rotation does not list its incident segments")
    if require_simple:
        seen = set()
        for s in net.segments:
            key = frozenset((s.a, s.b))
            if key in seen:
                out.append(f"segment {s.id}: parallel segments")
            seen.add(key)
    # original routes
    seg_owner: dict[int, int] = {}
    for e in sorted(net.graph.edges):
        r = net.original_routes.get(e)
        if r is None:
            out.append(f"edge {e}: no original route")
            continue
        out.extend(f"edge {e}: {p}" for p in route_problems(net, e, r))
        for s in r.segs:
            if s in seg_owner:
                out.append(f"segment {s}: used by edges {seg_owner[s]} and {e}")
            seg_owner[s] = e
    for s in net.segments:
        if s.id not in seg_owner:
            out.append(f"segment {s.id}: not on any original route")
    if out:
        return out
    for n in net.nodes:
        if n.kind != CROSSING:
            continue
        rot = net.rotation[n.id]
        if len(rot) != 4:
            out.append(f"node {n.id}: crossing node of degree {len(rot)}")
            continue
        owners = [seg_owner[s] for s in rot]
        if owners[0] != owners[2] or owners[1] != owners[3] or owners[0] == owners[1]:
            out.append(f"node {n.id}: rotation does not alternate between two edges")
        elif n.edges is not None and sorted(n.edges) != sorted(owners[:2]):
            out.append(f"node {n.id}: edge labels {n.edges} disagree with routes")
    rep = euler_check(ids, net.segments, net.rotation)
    if not rep.ok:
        out.append(
            f"Euler check failed: V={rep.vertices} E={rep.edges} F={rep.faces} C={rep.components}"
        )
    return out


def route_problems(net: NetworkN, edge: int, r: Route) -> list[str]:
    out = []
    if len(r.nodes) != len(r.segs) + 1:
        return ["node and segment sequences have inconsistent lengths"]
    su, sv = net.endpoints(edge)
    if r.nodes[0] != su or r.nodes[-1] != sv:
        out.append("route does not join the edge's endpoint vertices")
    for i, s in enumerate(r.segs):
        if not 0 <= s < len(net.segments):
            return out + [f"unknown segment {s}"]
        seg = net.segments[s]
        if {seg.a, seg.b} != {r.nodes[i], r.nodes[i + 1]}:
            out.append(f"step {i}: segment {s} does not join nodes {r.nodes[i]}, {r.nodes[i + 1]}")
    for n in r.nodes[1:-1]:
        if net.nodes[n].kind != CROSSING:
            out.append(f"internal node {n} is not a crossing node")
    return out


# --------------------------------------------------------------------------
# disks


def _points(m: int, family: int):
    # points on the parabola y = x^2, increasing x is counterclockwise
    if family == 0:
        return [(i, i * i) for i in range(m)]
    else:
        ts = [Fraction(i) + Fraction(i * i, (family + 6) * (m + 1) ** 2) for i in range(m)]
    return [(t, t * t) for t in ts]


@dataclass(frozen=True)
class Chord:
    edge: int
    visit: int  # route node index of the passage
    entry: int  # boundary position of strand (edge, visit - 1)
    exit: int  # boundary position of strand (edge, visit)


def interleave(a: int, b: int, c: int, d: int) -> bool:
    """Do chords {a, b} and {c, d} of a circle cross (all four distinct)?"""
    if a > b:
        a, b = b, a
    return (a < c < b) != (a < d < b)


@dataclass
class Disk:
    """The chord diagram of one crossing node in the current drawing."""

    node: int
    boundary: list  # [(strand, segment id)] in counterclockwise order
    pos: dict  # strand -> boundary position
    chords: list[Chord]
    crossings: list[tuple[int, int]]  # interleaving chord index pairs (i < j)
    along: list[list[int]]  # per chord: crossing chord indices in travel order
    family: int = 0

    def ordinal(self, chord: int, other: int) -> int:
        return self.along[chord].index(other)


def corridor_outward(state: "DrawingState", node: int, seg_id: int) -> list:
    """Strands of a corridor ordered right-to-left as seen from ``node`` looking outward."""
    seg = state.network.segments[seg_id]
    order = state.corridors[seg_id]
    # stored left-to-right looking a -> b; looking outward from a reverses it
    return list(reversed(order)) if node == seg.a else list(order)


def build_disk(state: "DrawingState", node: int) -> Disk:
    net = state.network
    boundary = []
    for s in net.rotation[node]:
        for strand in corridor_outward(state, node, s):
            boundary.append((strand, s))
    pos = {}
    for i, (strand, _) in enumerate(boundary):
        if strand in pos:
            raise InconsistentState(f"strand {strand} appears twice at node {node}")
        pos[strand] = i
    chords = []
    seen = set()
    for strand, _ in boundary:
        e, i = strand
        route = state.routes[e]
        # a strand ending at this node is the entry of visit i + 1 or the exit of visit i
        for visit in (i, i + 1):
            if 0 < visit < len(route.nodes) - 1 and route.nodes[visit] == node:
                if (e, visit) in seen:
                    continue
                a = pos.get((e, visit - 1))
                b = pos.get((e, visit))
                if a is None or b is None:
                    raise InconsistentState(f"edge {e} visit {visit} at node {node} has a dangling strand")
                seen.add((e, visit))
                chords.append(Chord(e, visit, a, b))
    chords.sort(key=lambda c: (c.edge, c.visit))
    crossings = []
    for i in range(len(chords)):
        ci = chords[i]
        for j in range(i + 1, len(chords)):
            cj = chords[j]
            if interleave(ci.entry, ci.exit, cj.entry, cj.exit):
                crossings.append((i, j))
    along, family = _order_along(chords, crossings, len(boundary))
    return Disk(node, boundary, pos, chords, crossings, along, family)


def _order_along(chords, crossings, m):
    partners = defaultdict(list)
    for i, j in crossings:
        partners[i].append(j)
        partners[j].append(i)
    if not any(len(p) > 1 for p in partners.values()):
        return [list(partners[i]) for i in range(len(chords))], 0
    for family in range(8):
        pts = _points(m, family)
        along = []
        ok = True
        for i, c in enumerate(chords):
            p, q = pts[c.entry], pts[c.exit]
            keyed = []
            for j in partners[i]:
                d = chords[j]
                hit = segment_contact(p, q, pts[d.entry], pts[d.exit])
                keyed.append((hit.t_ab, j))
            keyed.sort()
            if any(keyed[k][0] == keyed[k + 1][0] for k in range(len(keyed) - 1)):
                ok = False
                break
            along.append([j for _, j in keyed])
        if ok:
            return along, family
    raise InconsistentState("no generic chord realization found")


# --------------------------------------------------------------------------
# state


@dataclass(frozen=True)
class CrossingRef:
    """One crossing on an edge, seen from that edge."""

    pos: tuple[int, int]  # (route node index, ordinal along the chord)
    partner: int
    partner_pos: tuple[int, int]
    node: int


class DrawingState:
    """The evolving drawing over a fixed network (single writer)."""

    def __init__(self, network: NetworkN, routes: dict[int, Route], corridors: dict[int, list], epoch: int = 0):
        self.network = network
        self.routes = dict(routes)
        self.corridors = {s: list(c) for s, c in corridors.items()}
        self.epoch = epoch
        self._disks: dict[int, Disk] = {}
        self._edge_x: dict[int, list[CrossingRef]] = {}
        # incremental pair census: per-node contributions and their sum
        self._node_pc: dict[int, Counter] | None = None
        self._pairs: Counter = Counter()
        self._multi: list = []  # sorted
        self._total = 0
        self._dirty_nodes: set = set()
        self.changed_edges: set = set()

    def __eq__(self, other):
        if not isinstance(other, DrawingState):
            return NotImplemented
        return (
            self.network == other.network
            and self.routes == other.routes
            and self.corridors == other.corridors
            and self.epoch == other.epoch
        )

    __hash__ = None

    # ---- caching --------------------------------------------------------
    def copy(self) -> "DrawingState":
        new = DrawingState(self.network, self.routes, self.corridors, self.epoch)
        new._disks = dict(self._disks)
        new._edge_x = dict(self._edge_x)
        if self._node_pc is not None:
            new._node_pc = dict(self._node_pc)
            new._pairs = Counter(self._pairs)
            new._multi = list(self._multi)
            new._total = self._total
            new._dirty_nodes = set(self._dirty_nodes)
        return new

    def touch(self, nodes: Iterable[int], edges: Iterable[int] = ()) -> None:
        """Invalidate derived data for the given nodes and edges."""
        dirty_edges = set(edges)
        for n in set(nodes):
            d = self._disks.pop(n, None)
            if d is not None:
                dirty_edges.update(c.edge for c in d.chords)
            elif self.network.is_crossing(n):
                # no cache: every edge with a strand here may be affected
                for s in self.network.rotation[n]:
                    dirty_edges.update(e for e, _ in self.corridors[s])
        for e in dirty_edges:
            self._edge_x.pop(e, None)
        self.changed_edges |= dirty_edges
        self._dirty_nodes.update(n for n in nodes if self.network.is_crossing(n))

    # ---- pair census ----------------------------------------------------
    def _count_node(self, n: int) -> Counter:
        d = self.disk(n)
        c = Counter()
        for i, j in d.crossings:
            a, b = d.chords[i].edge, d.chords[j].edge
            c[(min(a, b), max(a, b))] += 1
        return c

    def _refresh(self, key) -> None:
        a, b = key
        c = self._pairs.get(key, 0)
        if c <= 0:
            self._pairs.pop(key, None)
        i = bisect_left(self._multi, key)
        present = i < len(self._multi) and self._multi[i] == key
        want = a != b and (c >= 2 or (c == 1 and adjacent(self, a, b)))
        if want and not present:
            self._multi.insert(i, key)
        elif present and not want:
            del self._multi[i]

    def pair_census(self) -> Counter:
        """Crossings per edge pair, self pairs ``(e, e)`` included; kept up to date incrementally."""
        if self._node_pc is None:
            self._node_pc = {}
            self._pairs = Counter()
            for n in self.network.crossing_nodes:
                c = self._count_node(n)
                self._node_pc[n] = c
                self._pairs.update(c)
            self._multi = []
            self._total = sum(self._pairs.values())
            for key in sorted(self._pairs):
                self._refresh(key)
            self._dirty_nodes.clear()
        elif self._dirty_nodes:
            for n in sorted(self._dirty_nodes):
                old = self._node_pc.get(n, Counter())
                new = self._count_node(n)
                self._node_pc[n] = new
                self._pairs.subtract(old)
                self._pairs.update(new)
                self._total += sum(new.values()) - sum(old.values())
                for key in set(old) | set(new):
                    self._refresh(key)
            self._dirty_nodes.clear()
        return self._pairs

    def multi_pairs(self) -> list:
        """Pairs of distinct edges with at least two common points, ascending."""
        self.pair_census()
        return self._multi

    def total_crossings(self) -> int:
        self.pair_census()
        return self._total

    def disk(self, node: int) -> Disk:
        d = self._disks.get(node)
        if d is None:
            d = build_disk(self, node)
            self._disks[node] = d
        return d

    def crossings_of(self, edge: int) -> list[CrossingRef]:
        """Crossings on ``edge`` ordered along its route."""
        out = self._edge_x.get(edge)
        if out is not None:
            return out
        out = []
        r = self.routes[edge]
        for j in range(1, len(r.nodes) - 1):
            d = self.disk(r.nodes[j])
            ci = _chord_index(d, edge, j)
            for o, other in enumerate(d.along[ci]):
                oc = d.chords[other]
                out.append(
                    CrossingRef((j, o), oc.edge, (oc.visit, d.along[other].index(ci)), d.node)
                )
        self._edge_x[edge] = out
        return out

    @property
    def edges(self) -> list[int]:
        return sorted(self.network.graph.edges)

    def strands_of(self, edge: int) -> list[Strand]:
        return [(edge, i) for i in range(len(self.routes[edge]))]


def _chord_index(d: Disk, edge: int, visit: int) -> int:
    for i, c in enumerate(d.chords):
        if c.edge == edge and c.visit == visit:
            return i
    raise InconsistentState(f"edge {edge} has no chord for visit {visit} at node {d.node}")


def build_initial_state(network: NetworkN) -> DrawingState:
    """The state realizing the network's own drawing (one strand per corridor)."""
    network.check()
    corridors = {s.id: [] for s in network.segments}
    for e, r in sorted(network.original_routes.items()):
        for i, s in enumerate(r.segs):
            corridors[s].append((e, i))
    state = DrawingState(network, network.original_routes, corridors)
    return state


def is_initial(state: DrawingState) -> bool:
    net = state.network
    if state.routes != net.original_routes:
        return False
    return all(len(c) == 1 for c in state.corridors.values())


# --------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class Measures:
    length: dict[int, int]
    crossings: dict[int, int]
    total_length: int
    total_crossings: int

    @property
    def max_crossings(self) -> int:
        return max(self.crossings.values(), default=0)


def measures(state: DrawingState) -> Measures:
    length = {e: len(state.routes[e]) for e in state.edges}
    x = {e: len(state.crossings_of(e)) for e in state.edges}
    total = sum(len(state.disk(n).crossings) for n in state.network.crossing_nodes)
    return Measures(length, x, sum(length.values()), total)


def total_crossings(state: DrawingState) -> int:
    return state.total_crossings()


# --------------------------------------------------------------------------
# chord diagram view


@dataclass(frozen=True)
class ChordDiagram:
    node: int
    boundary: tuple  # ((strand, segment id), ...) counterclockwise
    chords: tuple  # ((edge, visit, entry position, exit position), ...)
    crossings: tuple  # ((edge, visit, edge, visit), ...)


def chord_diagram(state: DrawingState, node: int) -> ChordDiagram:
    if not (0 <= node < len(state.network.nodes)) or not state.network.is_crossing(node):
        raise NotACrossingNode(f"node {node} is not a crossing node")
    d = state.disk(node)
    return ChordDiagram(
        node,
        tuple(d.boundary),
        tuple((c.edge, c.visit, c.entry, c.exit) for c in d.chords),
        tuple(
            (d.chords[i].edge, d.chords[i].visit, d.chords[j].edge, d.chords[j].visit)
            for i, j in d.crossings
        ),
    )


# --------------------------------------------------------------------------
# pair queries


def pair_crossing_counts(state: DrawingState) -> Counter:
    """Number of crossings for every unordered pair of distinct edges."""
    return Counter({k: c for k, c in state.pair_census().items() if k[0] != k[1]})


def adjacent(state: DrawingState, e: int, f: int) -> bool:
    return bool(set(state.network.graph.edges[e]) & set(state.network.graph.edges[f]))


def is_simple(state: DrawingState) -> bool:
    """No pair crosses twice, adjacent pairs never cross, no edge crosses itself."""
    for n in state.network.crossing_nodes:
        d = state.disk(n)
        for i, j in d.crossings:
            if d.chords[i].edge == d.chords[j].edge:
                return False
    for (a, b), c in pair_crossing_counts(state).items():
        if c > 1 or (c == 1 and adjacent(state, a, b)):
            return False
    return True


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def validate_state(state: DrawingState, euler: bool = True) -> ValidationReport:
    rep = ValidationReport()
    net = state.network
    # I1
    bad = []
    for e in state.edges:
        r = state.routes.get(e)
        if r is None:
            bad.append(f"edge {e}: missing route")
            continue
        bad.extend(f"edge {e}: {p}" for p in route_problems(net, e, r))
    rep.checks.append(Check("I1", not bad, "; ".join(bad[:3])))
    rep.checks.append(Check("I2", True, "crossings are derived inside node disks"))
    # corridors
    bad = []
    expected = defaultdict(set)
    if not rep.checks[0].ok:
        rep.checks.append(Check("corridors", False, "routes invalid"))
        return rep
    for e in state.edges:
        for i, s in enumerate(state.routes[e].segs):
            expected[s].add((e, i))
    for s in range(len(net.segments)):
        got = state.corridors.get(s, [])
        if len(set(got)) != len(got):
            bad.append(f"segment {s}: duplicate strand")
        elif set(got) != expected[s]:
            missing = sorted(expected[s] - set(got))
            extra = sorted(set(got) - expected[s])
            bad.append(f"segment {s}: missing {missing} extra {extra}")
    rep.checks.append(Check("corridors", not bad, "; ".join(bad[:3])))
    if bad:
        return rep
    state.touch([], state.edges)
    state._disks.clear()
    selfx, i3 = [], []
    for n in net.crossing_nodes:
        d = state.disk(n)
        pairs = Counter()
        for i, j in d.crossings:
            a, b = d.chords[i].edge, d.chords[j].edge
            if a == b:
                selfx.append(f"edge {a} at node {n}")
            else:
                pairs[(min(a, b), max(a, b))] += 1
        i3.extend(f"edges {p} cross {c} times at node {n}" for p, c in pairs.items() if c > 1)
    rep.checks.append(Check("no-self-crossing", not selfx, "; ".join(selfx[:3])))
    rep.checks.append(Check("I3", not i3, "; ".join(i3[:3])))
    if euler:
        try:
            mat = materialize_planarization(state)
            probs = network_problems(mat)
            rep.checks.append(Check("euler", not probs, "; ".join(probs[:3])))
        except InconsistentState as exc:
            rep.checks.append(Check("euler", False, str(exc)))
    return rep


# --------------------------------------------------------------------------
# materialization


def materialize_planarization(state: DrawingState) -> NetworkN:
    """The planarization of the current drawing as a fresh network.

    Chords are realized as straight segments between boundary points in convex
    position and intersected with exact arithmetic, independently of the
    interleaving test used everywhere else.
    """
    net = state.network
    graph = net.graph
    nodes: list[Node] = []
    vnode = {}
    for v in sorted(graph.vertices):
        vnode[v] = len(nodes)
        nodes.append(Node(len(nodes), VERTEX, vertex=v))

    # crossing points per disk, found geometrically
    events = defaultdict(list)  # (edge, visit) -> [(t, point id)]
    arms = {}  # point id -> [(boundary position, edge, visit, +1 exit side / -1 entry side)]
    pdir = {}
    for n in net.crossing_nodes:
        d = state.disk(n)
        if not d.chords:
            continue
        pts = _points(len(d.boundary), d.family)
        local = []
        for i in range(len(d.chords)):
            ci = d.chords[i]
            p, q = pts[ci.entry], pts[ci.exit]
            for j in range(i + 1, len(d.chords)):
                cj = d.chords[j]
                hit = segment_contact(p, q, pts[cj.entry], pts[cj.exit])
                if hit is None:
                    continue
                if hit.kind != "proper":
                    raise InconsistentState(f"degenerate chord contact at node {n}")
                local.append((ci, cj, hit))
        local.sort(key=lambda x: (x[0].edge, x[0].visit, x[1].edge, x[1].visit))
        for ci, cj, hit in local:
            pid = len(nodes)
            nodes.append(Node(pid, CROSSING, edges=tuple(sorted((ci.edge, cj.edge)))))
            events[(ci.edge, ci.visit)].append((hit.t_ab, pid))
            events[(cj.edge, cj.visit)].append((hit.t_cd, pid))
            arms[pid] = []
            x, y = hit.point
            pdir[pid] = {}
            for c in (ci, cj):
                for side, bpos in ((-1, c.entry), (1, c.exit)):
                    bx, by = pts[bpos]
                    pdir[pid][(c.edge, c.visit, side)] = direction_key(bx - x, by - y)

    segments: list[Segment] = []
    routes: dict[int, Route] = {}
    incid = defaultdict(dict)  # node -> {arm key: segment id}
    first_last = {}  # (edge, 0|1) -> segment id at the vertex end
    for e in sorted(graph.edges):
        u, v = graph.edges[e]
        r = state.routes[e]
        seq = [(vnode[u], None)]
        for j in range(1, len(r.nodes) - 1):
            for t, pid in sorted(events.get((e, j), [])):
                seq.append((pid, j))
        seq.append((vnode[v], None))
        segs = []
        for k in range(len(seq) - 1):
            (na, ja), (nb, jb) = seq[k], seq[k + 1]
            sid = len(segments)
            segments.append(Segment(sid, na, nb))
            segs.append(sid)
            if ja is not None:
                incid[na][(e, ja, 1)] = sid
            if jb is not None:
                incid[nb][(e, jb, -1)] = sid
        first_last[(e, 0)] = segs[0]
        first_last[(e, 1)] = segs[-1]
        routes[e] = Route(tuple(p for p, _ in seq), tuple(segs))

    rotation = {}
    for pid, keys in pdir.items():
        order = sorted(keys, key=lambda k: keys[k])
        rotation[pid] = tuple(incid[pid][k] for k in order)
    # vertex rotations follow the corridors around each vertex node
    for v in graph.vertices:
        n = net.vertex_node[v]
        rot = []
        for s in net.rotation[n]:
            for e, i in corridor_outward(state, n, s):
                r = state.routes[e]
                if i == 0 and r.nodes[0] == n:
                    rot.append(first_last[(e, 0)])
                elif i == len(r) - 1 and r.nodes[-1] == n:
                    rot.append(first_last[(e, 1)])
                else:
                    raise InconsistentState(f"strand {(e, i)} passes through vertex node {n}")
        rotation[vnode[v]] = tuple(rot)
    return NetworkN(graph, nodes, segments, rotation, routes)
