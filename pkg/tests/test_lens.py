import pytest

from kplanar.algo import all_lenses
from kplanar.errors import MisorientedLens, SameEdge
from kplanar.gen import GenConfig, gen_random_kplane
from kplanar.ingest import ingest_geometric
from kplanar.lens import (
    CROSS,
    ONE_THREE,
    OTHER,
    QUASI_ZERO,
    SHARED,
    ZERO,
    classify_lens,
    enumerate_lenses,
    find_lens,
    intersection_points,
    is_lens,
    lens_rank_key,
    oracle_lenses,
    orient,
    pair_lenses,
)
from kplanar.model import build_initial_state


def random_state(seed, n=18, k=4):
    gd = gen_random_kplane(GenConfig(n, int(1.8 * n), k, seed=seed))
    return build_initial_state(ingest_geometric(gd))


def test_intersection_points(state):
    st = state("F1")
    along_e, along_f = intersection_points(st, 0, 1)
    assert [p.kind for p in along_e] == [CROSS, CROSS]
    assert {p.node for p in along_e} == {p.node for p in along_f}
    st2 = state("F2")
    kinds = sorted(p.kind for p in intersection_points(st2, 0, 1)[0])
    assert kinds == [CROSS, SHARED]
    with pytest.raises(SameEdge):
        intersection_points(st, 0, 0)


def test_disjoint_edges_have_no_points(state):
    st = state("F4")
    assert intersection_points(st, 2, 3) == ([], [])
    assert find_lens(st, 2, 3) is None
    assert find_lens(st, 0, 2) is None  # a single crossing


def test_f1_zero_lens(state):
    st = state("F1")
    ln = find_lens(st, 0, 1)
    assert ln.kind == "independent" and (ln.x_e, ln.x_f) == (0, 0)
    assert classify_lens(st, ln).tag == ZERO
    assert oracle_lenses(st) == {lens_rank_key(st, ln)}


def test_f3_other_lens(state):
    st = state("F3")
    lenses = enumerate_lenses(st)
    assert len(lenses) == 1
    ln = lenses[0]
    assert {ln.e, ln.f} == {0, 1} and (ln.x_e, ln.x_f) == (1, 1)
    assert ln.cls.tag == OTHER


def test_f4_one_three_lens(state):
    st = state("F4")
    ln = orient(find_lens(st, 0, 1))
    assert ln.alpha.kind == SHARED and ln.alpha.node == st.network.vertex_node[0]
    assert (ln.x_e, ln.x_f) == (1, 3)
    assert classify_lens(st, ln).tag == ONE_THREE


def test_f5_quasi_zero_lens(state):
    st = state("F5")
    ln = orient(find_lens(st, 0, 1))
    cls = classify_lens(st, ln)
    assert cls.tag == QUASI_ZERO
    assert (cls.h, cls.s) == (2, 2)  # h = edge 2, shared endpoint is vertex 2
    assert cls.gamma.kind == CROSS


def test_misoriented_lens_is_rejected(state):
    st = state("F4")
    ln = orient(find_lens(st, 0, 1))
    with pytest.raises(MisorientedLens):
        classify_lens(st, ln.flipped())


def test_classification_is_pure(state):
    st = state("F5")
    ln = orient(find_lens(st, 0, 1))
    assert classify_lens(st, ln) == classify_lens(st, ln)


def test_simple_drawing_has_no_lens(state):
    from kplanar.algo import algorithm1

    st, _ = algorithm1(state("F3"), 3)
    assert enumerate_lenses(st) == [] and oracle_lenses(st) == set()


def test_pair_lenses_lists_every_lens(state):
    st = state("F1")
    assert len(pair_lenses(st, 0, 1)) == 1
    st = state("FIG4B")
    keys = {lens_rank_key(st, ln) for ln in pair_lenses(st, 0, 1)}
    assert keys == {k for k in oracle_lenses(st) if k[:2] == (0, 1)}


@pytest.mark.parametrize("seed", range(12))
def test_find_lens_is_an_oracle_lens(seed):
    st = random_state(seed, k=1 + seed % 6)
    oracle = oracle_lenses(st)
    for a, b in st.multi_pairs():
        ln = find_lens(st, a, b)
        pts, _ = intersection_points(st, a, b)
        assert is_lens(pts, ln.alpha, ln.beta)
        assert lens_rank_key(st, ln) in oracle
    # every pair with a lens in the oracle is a multi pair
    assert {k[:2] for k in oracle} <= set(st.multi_pairs())


@pytest.mark.parametrize("seed", range(20))
def test_lens_dichotomy_in_four_plane_states(seed):
    st = random_state(1000 + seed, n=16 + seed % 10)
    for ln in all_lenses(st):
        if ln.x_f - ln.x_e >= 2:
            assert ln.cls.tag == ZERO or ((ln.x_e, ln.x_f) == (1, 3) and ln.kind == "adjacent")
