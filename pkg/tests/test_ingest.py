from fractions import Fraction

import pytest

from kplanar import fixtures
from kplanar.errors import DegenerateInput, InvalidNetwork, NotGeneralPosition
from kplanar.geometry import GeometricDrawing, brute_force_crossings, per_edge_crossings
from kplanar.ingest import check_drawing, ingest_geometric
from kplanar.model import CROSSING, euler_check, network_problems


def drawing(vertices, edges):
    return GeometricDrawing(vertices, {e: (u, v, [vertices[u], *b, vertices[v]]) for e, (u, v, b) in edges.items()})


@pytest.mark.parametrize("name", sorted(fixtures.ALL))
def test_fixture_counts_match_brute_force(name):
    gd = fixtures.ALL[name]()
    net = ingest_geometric(gd)
    assert network_problems(net) == []
    counts = brute_force_crossings(gd)
    crossing_nodes = [n for n in net.nodes if n.kind == CROSSING]
    assert len(crossing_nodes) == sum(counts.values())
    per_edge = per_edge_crossings(counts, gd.edges)
    for e, r in net.original_routes.items():
        assert len(r.segs) == per_edge[e] + 1


def test_crossing_node_has_alternating_rotation():
    net = ingest_geometric(fixtures.f1())
    for n in net.crossing_nodes:
        rot = net.rotation[n]
        owners = [next(e for e, r in net.original_routes.items() if s in r.segs) for s in rot]
        assert owners[0] == owners[2] != owners[1] == owners[3]


def test_euler_on_ingested_network():
    net = ingest_geometric(fixtures.f4())
    rep = euler_check([n.id for n in net.nodes], net.segments, net.rotation)
    # every stick crosses e or f, so the planarization is connected: 22 - 22 + 2 = 1 + 1
    assert rep.ok and (rep.vertices, rep.edges, rep.faces, rep.components) == (22, 22, 2, 1)


def test_rational_coordinates_ingest_like_integers():
    ints = drawing({0: (0, 0), 1: (4, 0), 2: (1, 2), 3: (3, -2)}, {0: (0, 1, []), 1: (2, 3, [])})
    half = drawing(
        {0: (0, 0), 1: (2, 0), 2: (Fraction(1, 2), 1), 3: (Fraction(3, 2), -1)}, {0: (0, 1, []), 1: (2, 3, [])}
    )
    a, b = ingest_geometric(ints), ingest_geometric(half)
    assert a.nodes == b.nodes and a.segments == b.segments and a.rotation == b.rotation
    assert check_drawing(half)[0][0] == (1, 0)


def test_empty_and_edgeless_drawings():
    assert ingest_geometric(GeometricDrawing({}, {})).nodes == []
    net = ingest_geometric(GeometricDrawing({0: (0, 0), 1: (1, 1)}, {}))
    assert len(net.nodes) == 2 and not net.segments


@pytest.mark.parametrize(
    "vertices, edges, exc, words",
    [
        # isolated vertex 2 lies on edge 0
        ({0: (0, 0), 1: (4, 0), 2: (2, 0)}, {0: (0, 1, [])}, DegenerateInput, "passes through vertex"),
        # an endpoint of edge 1 lies on edge 0
        ({0: (0, 0), 1: (4, 0), 2: (2, 0), 3: (2, 3)}, {0: (0, 1, []), 1: (2, 3, [])}, DegenerateInput, "touch|passes"),
        # collinear overlap
        ({0: (0, 0), 1: (4, 0), 2: (2, 1), 3: (6, 1)}, {0: (0, 1, []), 1: (2, 3, [(3, 0), (5, 0)])}, NotGeneralPosition, "overlap|touch"),
        # pure collinear overlap, no other contact
        ({0: (0, 0), 1: (4, 0), 2: (2, 0), 3: (6, 0)}, {0: (0, 1, []), 1: (2, 3, [])}, DegenerateInput, "overlap|passes|touch"),
        # tangency at a bend
        ({0: (0, 0), 1: (4, 0), 2: (1, 2), 3: (3, 2)}, {0: (0, 1, []), 1: (2, 3, [(2, 0)])}, NotGeneralPosition, "touch"),
        # three edges through one point
        (
            {0: (-2, 0), 1: (2, 0), 2: (0, -2), 3: (0, 2), 4: (-2, -2), 5: (2, 2)},
            {0: (0, 1, []), 1: (2, 3, []), 2: (4, 5, [])},
            NotGeneralPosition,
            "three edges",
        ),
        # self-intersection
        ({0: (0, 0), 1: (4, 0)}, {0: (0, 1, [(3, 2), (3, -2), (1, 2), (1, -3)])}, DegenerateInput, "itself"),
        # loop
        ({0: (0, 0), 1: (4, 0)}, {0: (0, 0, [(1, 1)])}, DegenerateInput, "loop"),
        # parallel edges
        ({0: (0, 0), 1: (4, 0)}, {0: (0, 1, []), 1: (0, 1, [(2, 3)])}, DegenerateInput, "parallel"),
    ],
)
def test_degenerate_inputs_are_rejected(vertices, edges, exc, words):
    with pytest.raises(exc, match=words):
        ingest_geometric(drawing(vertices, edges))


def test_polyline_must_start_at_its_vertex():
    gd = GeometricDrawing({0: (0, 0), 1: (4, 0)}, {0: (0, 1, [(1, 0), (4, 0)])})
    with pytest.raises(DegenerateInput, match="must run from"):
        ingest_geometric(gd)


def test_coincident_vertices_are_rejected():
    gd = GeometricDrawing({0: (0, 0), 1: (0, 0)}, {})
    with pytest.raises(DegenerateInput, match="share the point"):
        ingest_geometric(gd)


def test_network_check_reports_tampering():
    net = ingest_geometric(fixtures.f1())
    net.rotation[net.crossing_nodes[0]] = net.rotation[net.crossing_nodes[0]][:3]
    with pytest.raises(InvalidNetwork):
        net.check()
