"""Random k-plane drawing generator."""
import pytest

from kplanar.gen import GenConfig, gen_random_kplane, one_three_gadget
from kplanar.geometry import brute_force_crossings
from kplanar.ingest import ingest_geometric
from kplanar.lens import oracle_lenses
from kplanar.model import build_initial_state, measures
from kplanar.io import serialize_drawing


def test_same_seed_same_bytes():
    cfg = GenConfig(30, 50, 3, seed=7)
    assert serialize_drawing(gen_random_kplane(cfg)) == serialize_drawing(gen_random_kplane(cfg))


def test_different_seeds_differ():
    a = gen_random_kplane(GenConfig(30, 50, 3, seed=1))
    b = gen_random_kplane(GenConfig(30, 50, 3, seed=2))
    assert serialize_drawing(a) != serialize_drawing(b)


def test_edgeless():
    gd = gen_random_kplane(GenConfig(10, 0, 1))
    assert len(gd.vertices) == 10 and not gd.edges


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_output_is_k_plane(k):
    gd = gen_random_kplane(GenConfig(25, 30, k, seed=k))
    assert len(gd.edges) == 30
    per_edge = {}
    for (a, b), c in brute_force_crossings(gd).items():
        assert a != b
        per_edge[a] = per_edge.get(a, 0) + c
        per_edge[b] = per_edge.get(b, 0) + c
    assert max(per_edge.values(), default=0) <= k


@pytest.mark.parametrize(
    "args",
    [(10, 200, 1), (-1, 0, 1), (5, 2, 0), (4, 7, 4), (30, 40, 3, 0, 0, 2, 8, 1)],
)
def test_config_rejected(args):
    with pytest.raises(ValueError):
        GenConfig(*args)


def test_gadget_alone_has_one_three_lens():
    verts, edges = one_three_gadget()
    assert len(edges) >= 2
    gd = gen_random_kplane(GenConfig(20, 20, 4, seed=3, gadgets=1))
    st = build_initial_state(ingest_geometric(gd))
    assert measures(st).max_crossings <= 4
    assert any(cls == "one-three" for cls in _classes(st))


def test_too_many_gadgets():
    with pytest.raises(ValueError):
        gen_random_kplane(GenConfig(8, 10, 4, gadgets=3))


def _classes(st):
    from kplanar.lens import classify_lens, find_lens

    return [classify_lens(st, find_lens(st, a, b)).tag for a, b in st.multi_pairs()]


def test_gadget_lenses_are_oracle_lenses():
    gd = gen_random_kplane(GenConfig(40, 60, 4, seed=11, gadgets=2))
    st = build_initial_state(ingest_geometric(gd))
    assert oracle_lenses(st)
