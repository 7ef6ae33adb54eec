from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bayespol import Belief, StateSpace, StateSubset, leq, ll, mixture

from conftest import DIAGONAL, GRID_2X2, GRID_3X3, MIRROR_LOW, beliefs, subsets


def test_space_validation():
    with pytest.raises(ValueError):
        StateSpace.make([[0, 1], [1]])          # axis too short
    with pytest.raises(ValueError):
        StateSpace.make([[0, 1], [2, 2]])       # not strictly increasing
    with pytest.raises(ValueError):
        StateSpace.make([])


def test_row_major_state_order():
    space = StateSpace.grid(2, 3)
    assert space.states == ((0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2))
    assert space.flat((1, 2)) == 5
    assert space.state_at(3) == (1, 0)
    assert space.bottom == (0, 0) and space.top == (1, 2)


def test_coords_and_partial_order():
    space = StateSpace.make([["0", "1/2", "1"], [-1, 3]])
    assert space.coords((1, 0)) == (F(1, 2), F(-1))
    assert leq((0, 1), (2, 1)) and not ll((0, 1), (2, 1))
    assert ll((0, 0), (1, 1)) and not leq((1, 0), (0, 1))


def test_belief_invariants_enforced():
    with pytest.raises(ValueError):
        Belief(GRID_2X2, (1, 1, 1, 0), 4)  # sums to 3/4
    with pytest.raises(ValueError):
        Belief.from_fractions(GRID_2X2, ["1/2", "1/2", "1/2", "-1/2"])
    b = Belief(GRID_2X2, (2, 2, 2, 2), 8)
    assert b.den == 4 and b.nums == (1, 1, 1, 1)  # canonicalized


def test_marginal_of_mirror_prior():
    marg = MIRROR_LOW.marginal(0)
    assert marg.masses == (F(5, 8), F(3, 8))
    assert marg.cdf == (F(5, 8), F(1))
    assert MIRROR_LOW.marginal(1).masses == (F(5, 8), F(3, 8))


def test_marginal_of_point_mass_at_top():
    top = Belief.dirac(GRID_3X3, (2, 2))
    for axis in range(2):
        assert top.marginal(axis).masses == (F(0), F(0), F(1))


def test_marginal_axis_out_of_range():
    with pytest.raises(ValueError):
        MIRROR_LOW.marginal(2)


@given(beliefs(GRID_3X3))
def test_marginal_matches_double_loop_oracle(b):
    for axis in range(2):
        oracle = [F(0)] * 3
        for state in GRID_3X3.states:
            oracle[state[axis]] += b.mass(state)
        assert b.marginal(axis).masses == tuple(oracle)


def test_condition_on_diagonal():
    assert MIRROR_LOW.condition(DIAGONAL).masses() == (F(3, 4), 0, 0, F(1, 4))


def test_condition_on_everything_is_identity():
    assert MIRROR_LOW.condition(StateSubset.full(GRID_2X2)) == MIRROR_LOW


def test_condition_on_null_event():
    b = Belief.dirac(GRID_2X2, (0, 0))
    with pytest.raises(ValueError, match="null event"):
        b.condition(StateSubset.from_states(GRID_2X2, [(1, 1)]))


@given(beliefs(GRID_2X2, full_support=True), subsets(GRID_2X2))
def test_condition_matches_restrict_normalize_oracle(b, s):
    conditioned = b.condition(s)
    total = sum(b.mass(state) for state in s)
    for state in GRID_2X2.states:
        expected = b.mass(state) / total if state in s else F(0)
        assert conditioned.mass(state) == expected


@given(beliefs(GRID_2X2, full_support=True), subsets(GRID_2X2), subsets(GRID_2X2))
def test_iterated_conditioning_is_intersection(b, s, t):
    both = s.intersection(t)
    if both.is_empty:
        return
    assert b.condition(s).condition(both) == b.condition(both)


def test_mixture_degenerate():
    assert mixture([1], [MIRROR_LOW]) == MIRROR_LOW


def test_mixture_of_extreme_point_masses():
    bottom = Belief.dirac(GRID_2X2, (0, 0))
    top = Belief.dirac(GRID_2X2, (1, 1))
    mixed = mixture([F(1, 2), F(1, 2)], [bottom, top])
    assert mixed.masses() == (F(1, 2), 0, 0, F(1, 2))


def test_mixture_validation():
    with pytest.raises(ValueError, match="sum"):
        mixture([F(1, 2), F(1, 4)], [MIRROR_LOW, MIRROR_LOW])
    with pytest.raises(ValueError, match="spaces"):
        mixture([F(1, 2), F(1, 2)], [MIRROR_LOW, Belief.uniform(GRID_3X3)])


def test_layered_mixture_matches_termwise_oracle():
    # Two-level mixture of four components, expanded term by term.
    space = GRID_3X3
    delta = F(1, 4)
    parts = [
        Belief.dirac(space, (0, 0)),
        Belief.uniform_on(space, StateSubset.from_states(space, [(0, 1), (1, 0)])),
        Belief.dirac(space, (2, 2)),
        Belief.uniform_on(space, StateSubset.from_states(space, [(1, 2), (2, 1)])),
    ]
    weights = [(1 - delta) ** 2, (1 - delta) * delta, delta * (1 - delta), delta**2]
    mixed = mixture(weights, parts)
    for state in space.states:
        expected = sum(w * p.mass(state) for w, p in zip(weights, parts))
        assert mixed.mass(state) == expected


@given(beliefs(GRID_2X2), beliefs(GRID_2X2), st.integers(min_value=0, max_value=8))
def test_marginal_commutes_with_mixture(a, b, k):
    w = F(k, 8)
    mixed = mixture([w, 1 - w], [a, b])
    for axis in range(2):
        lhs = mixed.marginal(axis).masses
        rhs = tuple(
            w * ma + (1 - w) * mb
            for ma, mb in zip(a.marginal(axis).masses, b.marginal(axis).masses)
        )
        assert lhs == rhs


@given(beliefs(GRID_3X3))
def test_masses_always_sum_to_one_exactly(b):
    assert sum(b.masses()) == 1
    assert sum(b.nums) == b.den


def test_tv_distance():
    bottom = Belief.dirac(GRID_2X2, (0, 0))
    top = Belief.dirac(GRID_2X2, (1, 1))
    assert bottom.tv_distance(top) == 1
    assert bottom.tv_distance(bottom) == 0
    assert MIRROR_LOW.tv_distance(Belief.uniform(GRID_2X2)) == F(1, 8)


def test_support_and_full_support_flag():
    assert MIRROR_LOW.full_support
    half = Belief.from_fractions(GRID_2X2, ["1/2", "0", "0", "1/2"])
    assert not half.full_support
    assert half.support() == DIAGONAL
