"""Surgeries on the fixture drawings, checked against hand-verified counts."""
import pytest

from kplanar import ops
from kplanar.errors import InvalidWitness, StaleLens
from kplanar.lens import classify_lens, find_lens, oracle_lenses
from kplanar.model import (
    is_simple,
    materialize_planarization,
    measures,
    pair_crossing_counts,
    total_crossings,
    validate_state,
)


def _crossing_nodes(state) -> int:
    net = materialize_planarization(state)
    return sum(1 for node in net.nodes if node.edges is not None)


def test_reroute_f1_removes_both_crossings(state):
    st = state("F1")
    ops.reroute(st, find_lens(st, 0, 1))
    assert total_crossings(st) == 0
    assert _crossing_nodes(st) == 0
    assert is_simple(st)


def test_reroute_f3_keeps_one_crossing_with_g(state):
    st = state("F3")
    assert total_crossings(st) == 4
    ops.reroute(st, find_lens(st, 0, 1))
    assert measures(st).crossings == {0: 1, 1: 1, 2: 2}
    assert total_crossings(st) == 2
    assert _crossing_nodes(st) == 2
    assert validate_state(st).ok


def test_reroute_fig4b_length_kept_crossings_drop(state):
    st = state("FIG4B")
    ln = find_lens(st, 0, 1)
    f = ln.f
    assert (len(st.routes[f]), len(st.crossings_of(f))) == (3, 2)
    ops.reroute(st, ln)
    assert (len(st.routes[f]), len(st.crossings_of(f))) == (3, 1)


def test_reroute_f4_one_three_lens(state):
    st = state("F4")
    ln = find_lens(st, 0, 1)
    assert classify_lens(st, ln).tag == "one-three"
    assert len(st.routes[1]) == 5
    ops.reroute(st, ln)
    assert len(st.routes[1]) == 3
    assert total_crossings(st) == 4
    assert validate_state(st).ok
    assert is_simple(st)


def test_swap_f3_exchanges_crossings(state):
    st = state("F3")
    ops.swap(st, find_lens(st, 0, 1))
    assert measures(st).crossings == {0: 1, 1: 1, 2: 2}
    assert total_crossings(st) == 2
    assert not oracle_lenses(st)


def test_swap_f2_adjacent_arithmetic(state):
    st = state("F2")
    ln = find_lens(st, 0, 1)
    assert ln.kind == "adjacent"
    x_e = len(st.crossings_of(ln.e))
    ops.swap(st, ln)
    # adjacent lens: only the crossing at beta goes away
    assert len(st.crossings_of(ln.e)) == x_e - 1 + (ln.x_f - ln.x_e)
    assert total_crossings(st) == 0


def test_swap_without_loop_removal_is_exchange_only(state):
    st = state("F3")
    ln = find_lens(st, 0, 1)
    out = ops.swap(st.copy(), ln, remove_loops=False)
    assert len(out.crossings_of(ln.e)) == len(st.crossings_of(ln.e)) - 2 + (ln.x_f - ln.x_e)


def test_quasi_zero_reroute_f5(state):
    st = state("F5")
    ln = find_lens(st, 0, 1)
    cls = classify_lens(st, ln)
    assert cls.tag == "quasi-zero"
    before = pair_crossing_counts(st)
    ops.quasi_zero_reroute(st, ln, cls.h, cls.gamma, cls.s)
    after = pair_crossing_counts(st)
    assert (0, 1) not in after
    assert all(c <= before.get(p, 0) for p, c in after.items())
    assert total_crossings(st) < 6
    assert validate_state(st).ok
    assert is_simple(st)


def test_quasi_zero_reroute_rejects_bad_witness(state):
    st = state("F1")
    with pytest.raises(InvalidWitness):
        ops.quasi_zero_reroute(st, find_lens(st, 0, 1), 1, None, 0)


def test_stale_lens_rejected(state):
    st = state("F1")
    ln = find_lens(st, 0, 1)
    ops.reroute(st, ln)
    with pytest.raises(StaleLens):
        ops.reroute(st, ln)


def test_remove_self_crossings_identity_on_clean_edge(state):
    st = state("F3")
    before = st.routes[0]
    ops.remove_self_crossings(st, 0)
    assert st.routes[0] == before


def test_operations_leave_input_copy_untouched(state):
    st = state("F3")
    snap = st.copy()
    ops.swap(st.copy(), find_lens(st, 0, 1))
    assert pair_crossing_counts(st) == pair_crossing_counts(snap)
