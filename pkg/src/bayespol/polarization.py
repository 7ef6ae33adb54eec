"""Polarization detectors: does common evidence drive two agents apart?

Polarization in a given order means the chain

    posterior_low  <  prior_low  <  prior_high  <  posterior_high

holds strictly, so the low agent moves down and the high agent moves up while
the priors sit strictly ordered between them.  One-shot mode updates on a
single likelihood; limit mode conditions on an identified set.  Reports carry
witness events and a per-state direction table so failures are debuggable.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .bayes import LikelihoodFn, limit_posterior, update
from .core import Belief, State, StateSubset
from .orders import (
    DominanceVerdict,
    Strictness,
    StrongCwVerdict,
    UpperFamilyKind,
    compare,
    compare_strong_cw,
)


class Mode(Enum):
    ONE_SHOT = "oneshot"
    LIMIT = "limit"


@dataclass(frozen=True)
class DirectionTable:
    """Sign of posterior-minus-prior per state, for each agent."""

    states: tuple[State, ...]
    low_signs: tuple[int, ...]
    high_signs: tuple[int, ...]

    def rows(self) -> tuple[tuple[State, int, int], ...]:
        return tuple(zip(self.states, self.low_signs, self.high_signs))


def _movement_signs(prior: Belief, posterior: Belief) -> tuple[int, ...]:
    pd, qd = prior.den, posterior.den
    signs = []
    for p, q in zip(prior.nums, posterior.nums):
        diff = q * pd - p * qd
        signs.append(0 if diff == 0 else (1 if diff > 0 else -1))
    return tuple(signs)


@dataclass(frozen=True)
class PolarizationReport:
    kind: UpperFamilyKind
    mode: Mode
    verdict: bool
    low_drop: DominanceVerdict            # posterior_low vs prior_low
    prior_gap: Union[DominanceVerdict, StrongCwVerdict]
    high_rise: DominanceVerdict           # prior_high vs posterior_high
    directions: DirectionTable
    strong_middle: bool
    strictness: Strictness
    posterior_low: Belief
    posterior_high: Belief
    identified_set: Optional[StateSubset] = None

    @property
    def checks(self) -> dict[str, bool]:
        middle_ok = (
            self.prior_gap.holds
            if isinstance(self.prior_gap, StrongCwVerdict)
            else self.prior_gap.strictly_below
        )
        return {
            "low_drop": self.low_drop.strictly_below,
            "prior_gap": middle_ok,
            "high_rise": self.high_rise.strictly_below,
        }


def _chain_report(
    kind: UpperFamilyKind,
    mode: Mode,
    pl: Belief,
    ph: Belief,
    ql: Belief,
    qh: Belief,
    strong_middle: bool,
    strictness: Strictness,
    identified: Optional[StateSubset] = None,
) -> PolarizationReport:
    low_drop = compare(ql, pl, kind, strictness)
    if strong_middle:
        prior_gap: Union[DominanceVerdict, StrongCwVerdict] = compare_strong_cw(pl, ph)
        middle_ok = prior_gap.holds
    else:
        prior_gap = compare(pl, ph, kind, strictness)
        middle_ok = prior_gap.strictly_below
    high_rise = compare(ph, qh, kind, strictness)
    verdict = low_drop.strictly_below and middle_ok and high_rise.strictly_below
    directions = DirectionTable(
        pl.space.states, _movement_signs(pl, ql), _movement_signs(ph, qh)
    )
    return PolarizationReport(
        kind=kind,
        mode=mode,
        verdict=verdict,
        low_drop=low_drop,
        prior_gap=prior_gap,
        high_rise=high_rise,
        directions=directions,
        strong_middle=strong_middle,
        strictness=strictness,
        posterior_low=ql,
        posterior_high=qh,
        identified_set=identified,
    )


def one_shot(
    kind: UpperFamilyKind,
    prior_low: Belief,
    prior_high: Belief,
    ell: LikelihoodFn,
    strictness: Strictness = Strictness.ONE_EVENT,
) -> PolarizationReport:
    """Polarization verdict after both agents observe one realization."""
    if not (prior_low.full_support and prior_high.full_support):
        raise ValueError("one-shot polarization requires full-support priors")
    ql = update(prior_low, ell)
    qh = update(prior_high, ell)
    return _chain_report(
        kind, Mode.ONE_SHOT, prior_low, prior_high, ql, qh, False, strictness
    )


def limit(
    kind: UpperFamilyKind,
    prior_low: Belief,
    prior_high: Belief,
    identified: StateSubset,
    strong_middle: bool = False,
    strictness: Strictness = Strictness.ONE_EVENT,
) -> PolarizationReport:
    """Polarization verdict for limit posteriors given an identified set.

    With ``strong_middle`` the middle link demands strong coordinatewise
    dominance between the priors (the strong polarization notion); ``kind``
    must then be the coordinatewise order.
    """
    if not (prior_low.full_support and prior_high.full_support):
        raise ValueError("limit polarization requires full-support priors")
    if identified.is_empty:
        raise ValueError("identified set is empty")
    if strong_middle and kind is not UpperFamilyKind.UPPER_PROJECTION:
        raise ValueError("strong middle link is defined for the coordinatewise order")
    ql = limit_posterior(prior_low, identified)
    qh = limit_posterior(prior_high, identified)
    report = _chain_report(
        kind,
        Mode.LIMIT,
        prior_low,
        prior_high,
        ql,
        qh,
        strong_middle,
        strictness,
        identified,
    )
    if kind is UpperFamilyKind.UPPER_PROJECTION and identified.is_proper:
        _check_conditional_reduction(prior_low, prior_high, identified, report)
    return report


def _check_conditional_reduction(
    pl: Belief, ph: Belief, identified: StateSubset, report: PolarizationReport
) -> None:
    """Posterior-vs-prior coordinatewise dominance must match the dominance of
    the prior's two conditionals (on the set and on its complement)."""
    cw = UpperFamilyKind.UPPER_PROJECTION
    complement = identified.complement()
    low_direct = report.low_drop.weakly_below
    low_reduced = compare(
        report.posterior_low, pl.condition(complement), cw
    ).weakly_below
    high_direct = report.high_rise.weakly_below
    high_reduced = compare(
        ph.condition(complement), report.posterior_high, cw
    ).weakly_below
    if low_direct != low_reduced or high_direct != high_reduced:
        raise AssertionError(
            "internal error: conditional reduction disagrees with direct comparison"
        )


@dataclass(frozen=True)
class DirectionAnalysis:
    table: DirectionTable
    min_likelihood_states: tuple[State, ...]
    max_likelihood_states: tuple[State, ...]
    extremes_agree: bool
    crossing_pairs: tuple[tuple[State, State], ...]

    @property
    def consistent(self) -> bool:
        return self.extremes_agree and not self.crossing_pairs


def direction_analysis(
    prior: Belief, prior_other: Belief, ell: LikelihoodFn
) -> DirectionAnalysis:
    """Per-state movement directions for two agents observing one realization.

    Checks two structural facts: at every minimum- and maximum-likelihood
    state the agents move together (whenever beliefs move at all), and
    opposite-direction movement never occurs in both orientations.  Either
    violation would indicate an arithmetic bug, so they are reported rather
    than silently ignored.
    """
    if prior.space != prior_other.space:
        raise ValueError("priors live on different spaces")
    if not (prior.full_support and prior_other.full_support):
        raise ValueError("direction analysis requires full-support priors")
    space = prior.space
    q = update(prior, ell)
    q_other = update(prior_other, ell)
    signs = _movement_signs(prior, q)
    signs_other = _movement_signs(prior_other, q_other)
    table = DirectionTable(space.states, signs, signs_other)

    lo = min(ell.nums)
    hi = max(ell.nums)
    argmin = tuple(space.state_at(f) for f, n in enumerate(ell.nums) if n == lo)
    argmax = tuple(space.state_at(f) for f, n in enumerate(ell.nums) if n == hi)

    moved = any(signs) or any(signs_other)
    extremes_agree = True
    if moved:
        for state in argmin:
            f = space.flat(state)
            if signs[f] > 0 or signs_other[f] > 0:
                extremes_agree = False
        for state in argmax:
            f = space.flat(state)
            if signs[f] < 0 or signs_other[f] < 0:
                extremes_agree = False

    # A strict one-way crossing forbids even weakly opposite movement anywhere.
    strict_down_up = [
        f
        for f in range(space.size)
        if signs[f] <= 0 <= signs_other[f] and (signs[f] < 0 or signs_other[f] > 0)
    ]
    strict_up_down = [
        f
        for f in range(space.size)
        if signs[f] >= 0 >= signs_other[f] and (signs[f] > 0 or signs_other[f] < 0)
    ]
    weak_down_up = [
        f for f in range(space.size) if signs[f] <= 0 <= signs_other[f]
    ]
    weak_up_down = [
        f for f in range(space.size) if signs[f] >= 0 >= signs_other[f]
    ]
    crossings = [
        (space.state_at(f), space.state_at(g))
        for f in strict_down_up
        for g in weak_up_down
    ]
    crossings += [
        (space.state_at(f), space.state_at(g))
        for f in strict_up_down
        for g in weak_down_up
    ]
    return DirectionAnalysis(
        table=table,
        min_likelihood_states=argmin,
        max_likelihood_states=argmax,
        extremes_agree=extremes_agree,
        crossing_pairs=tuple(crossings),
    )
