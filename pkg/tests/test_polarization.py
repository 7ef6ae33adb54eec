import random
from fractions import Fraction as F

import pytest
from hypothesis import given

from bayespol import (
    Belief,
    LikelihoodFn,
    StateSpace,
    StateSubset,
    UpperFamilyKind,
    compare,
    direction_analysis,
    limit,
    one_shot,
    posterior_increases,
)

from conftest import (
    CORNER_LIKELIHOOD,
    DIAGONAL,
    GRID_2X2,
    GRID_2X3,
    MIRROR_HIGH,
    MIRROR_LOW,
    beliefs,
    likelihoods,
    subsets,
)

ST = UpperFamilyKind.UPPER_SET
UO = UpperFamilyKind.UPPER_ORTHANT
CW = UpperFamilyKind.UPPER_PROJECTION


def test_limit_cw_polarization_on_diagonal():
    report = limit(CW, MIRROR_LOW, MIRROR_HIGH, DIAGONAL)
    assert report.verdict
    assert report.checks == {"low_drop": True, "prior_gap": True, "high_rise": True}
    assert report.posterior_low.masses() == (F(3, 4), 0, 0, F(1, 4))


def test_limit_on_full_space_is_no_movement():
    report = limit(CW, MIRROR_LOW, MIRROR_HIGH, StateSubset.full(GRID_2X2))
    assert not report.verdict
    assert not report.checks["low_drop"]


def test_limit_uo_fails_with_singleton_witness():
    report = limit(UO, MIRROR_LOW, MIRROR_HIGH, DIAGONAL)
    assert not report.verdict
    top = StateSubset.from_states(GRID_2X2, [(1, 1)])
    # the low agent's mass on the top corner rises from 1/8 to 1/4
    assert report.low_drop.witness == top or report.low_drop.opposite_witness == top


def test_one_shot_constant_likelihood_is_never_polarizing():
    ell = LikelihoodFn.from_fractions(GRID_2X2, ["1/2"] * 4)
    report = one_shot(CW, MIRROR_LOW, MIRROR_HIGH, ell)
    assert not report.verdict
    assert not report.checks["low_drop"]
    assert report.checks["prior_gap"]


def test_one_shot_requires_full_support():
    thin = Belief.from_fractions(GRID_2X2, ["1/2", "1/2", "0", "0"])
    with pytest.raises(ValueError, match="full-support"):
        one_shot(CW, thin, MIRROR_HIGH, CORNER_LIKELIHOOD)


def test_strong_middle_mode():
    report = limit(CW, MIRROR_LOW, MIRROR_HIGH, DIAGONAL, strong_middle=True)
    assert report.verdict
    with pytest.raises(ValueError, match="coordinatewise"):
        limit(ST, MIRROR_LOW, MIRROR_HIGH, DIAGONAL, strong_middle=True)


def test_one_shot_upper_set_random_sweep_finds_nothing():
    rng = random.Random(77)
    for space in (GRID_2X2, GRID_2X3):
        size = space.size
        for _ in range(1500):
            pl = Belief.from_weights(space, [rng.randint(1, 9) for _ in range(size)])
            ph = Belief.from_weights(space, [rng.randint(1, 9) for _ in range(size)])
            values = [F(rng.randint(0, 4), 4) for _ in range(size)]
            if all(v == 0 for v in values):
                values[0] = F(1)
            ell = LikelihoodFn.from_fractions(space, values)
            assert not one_shot(ST, pl, ph, ell).verdict


def test_one_shot_impossibility_holds_on_one_dimension_too():
    # the univariate baseline: a single axis, stochastic-dominance order
    line = StateSpace.grid(5)
    rng = random.Random(55)
    for _ in range(1500):
        pl = Belief.from_weights(line, [rng.randint(1, 9) for _ in range(5)])
        ph = Belief.from_weights(line, [rng.randint(1, 9) for _ in range(5)])
        values = [F(rng.randint(0, 4), 4) for _ in range(5)]
        if all(v == 0 for v in values):
            values[0] = F(1)
        ell = LikelihoodFn.from_fractions(line, values)
        assert not one_shot(ST, pl, ph, ell).verdict


@given(beliefs(GRID_2X2, full_support=True), beliefs(GRID_2X2, full_support=True),
       subsets(GRID_2X2))
def test_limit_equals_one_shot_on_partitional_signal(pl, ph, ident):
    ell = LikelihoodFn.indicator(GRID_2X2, ident)
    for kind in (ST, UO, CW):
        assert limit(kind, pl, ph, ident).verdict == one_shot(kind, pl, ph, ell).verdict


@given(beliefs(GRID_2X3, full_support=True), subsets(GRID_2X3))
def test_conditional_reduction_equivalence(prior, ident):
    # posterior-below-prior iff the conditional on the set sits below the
    # conditional on the complement, coordinatewise
    posterior = prior.condition(ident)
    direct = compare(posterior, prior, CW).weakly_below
    reduced = compare(
        prior.condition(ident), prior.condition(ident.complement()), CW
    ).weakly_below
    assert direct == reduced
    # the built-in agreement assertion in limit() must not fire either
    limit(CW, prior, prior, ident)


# -- direction analysis --------------------------------------------------------


def test_direction_analysis_corner_likelihood_split():
    heavy_bottom = Belief.from_fractions(GRID_2X2, ["97/100", "1/100", "1/100", "1/100"])
    spread = Belief.from_fractions(GRID_2X2, ["1/10", "2/5", "2/5", "1/10"])
    outcome = direction_analysis(heavy_bottom, spread, CORNER_LIKELIHOOD)
    top = GRID_2X2.flat((1, 1))
    assert outcome.table.low_signs[top] == -1
    assert outcome.table.high_signs[top] == 1
    bottom = GRID_2X2.flat((0, 0))
    assert outcome.table.low_signs[bottom] == 1 and outcome.table.high_signs[bottom] == 1
    assert outcome.min_likelihood_states == ((0, 1), (1, 0))
    assert outcome.max_likelihood_states == ((0, 0),)
    assert outcome.consistent


def test_direction_analysis_constant_likelihood_all_zero():
    ell = LikelihoodFn.from_fractions(GRID_2X2, ["1/2"] * 4)
    outcome = direction_analysis(MIRROR_LOW, MIRROR_HIGH, ell)
    assert outcome.table.low_signs == (0, 0, 0, 0)
    assert outcome.table.high_signs == (0, 0, 0, 0)
    assert outcome.consistent


def test_three_level_likelihood_splits_every_middle_state():
    space = StateSpace.grid(2, 3)
    values = [F(1, 2)] * 6
    values[0] = F(1, 4)      # unique minimum at the bottom state
    values[-1] = F(1)        # unique maximum at the top state
    ell = LikelihoodFn.from_fractions(space, values)
    top_heavy = Belief.from_weights(space, (1, 1, 1, 1, 1, 40))
    bottom_heavy = Belief.from_weights(space, (40, 1, 1, 1, 1, 1))
    outcome = direction_analysis(top_heavy, bottom_heavy, ell)
    for f in range(1, 5):
        assert outcome.table.low_signs[f] == -1
        assert outcome.table.high_signs[f] == 1
    assert outcome.consistent


@given(beliefs(GRID_2X2, full_support=True), beliefs(GRID_2X2, full_support=True),
       likelihoods(GRID_2X2))
def test_direction_signs_match_posterior_increase_on_singletons(p, p2, ell):
    outcome = direction_analysis(p, p2, ell)
    for f, state in enumerate(GRID_2X2.states):
        singleton = StateSubset.from_states(GRID_2X2, [state])
        assert (outcome.table.low_signs[f] > 0) == posterior_increases(p, ell, singleton)
        assert (outcome.table.high_signs[f] > 0) == posterior_increases(p2, ell, singleton)


@given(beliefs(GRID_2X3, full_support=True), beliefs(GRID_2X3, full_support=True),
       likelihoods(GRID_2X3))
def test_direction_restrictions_hold_universally(p, p2, ell):
    assert direction_analysis(p, p2, ell).consistent


def test_report_directions_match_movements():
    report = limit(CW, MIRROR_LOW, MIRROR_HIGH, DIAGONAL)
    ql = report.posterior_low
    for state, low_sign, _ in report.directions.rows():
        diff = ql.mass(state) - MIRROR_LOW.mass(state)
        assert (diff > 0) == (low_sign == 1)
        assert (diff < 0) == (low_sign == -1)
