"""Batch certification sweeps: hunt for counterexamples that must not exist.

Each sweep fixes a cell (stochastic order, one-shot or limit mode) and runs
either a seeded random search or an exhaustive grid over priors and evidence,
recording every trial where the polarization predicate fires.  For cells the
theory rules out, a single hit means an implementation bug; for possible
cells the hits are existence witnesses.  Reports are reproducible bit-exactly
from their config: per-trial generators derive from the master seed and the
trial index, and all arithmetic is exact.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian
from typing import Iterator, Optional

from .bayes import LikelihoodFn
from .core import Belief, State, StateSpace, StateSubset
from .orders import UpperFamilyKind, compare_strong_cw
from .polarization import (
    Mode,
    PolarizationReport,
    direction_analysis,
    limit,
    one_shot,
)

_DEFAULT_LEVELS = (Fraction(0), Fraction(1, 2), Fraction(1))


@dataclass(frozen=True)
class SweepConfig:
    """One cell's search plan.

    ``denominator_bound`` switches to exhaustive mode: priors run over all
    full-support mass vectors with that common denominator, and evidence runs
    over the full likelihood grid (one-shot) or every proper nonempty subset
    (limit).  ``strong`` restricts to strongly coordinatewise ordered prior
    pairs and demands the strong middle link, and ``identified_set`` pins the
    evidence set instead of sampling it.
    """

    kind: UpperFamilyKind
    mode: Mode
    dims: tuple[int, ...]
    trials: int = 10_000
    seed: int = 0
    denominator_bound: Optional[int] = None
    likelihood_levels: tuple[Fraction, ...] = _DEFAULT_LEVELS
    mass_bound: int = 12
    strong: bool = False
    identified_set: Optional[tuple[State, ...]] = None

    def __post_init__(self) -> None:
        if self.denominator_bound is None and self.trials < 1:
            raise ValueError("trial count must be at least 1")

    @property
    def space(self) -> StateSpace:
        return StateSpace.grid(*self.dims)


@dataclass(frozen=True)
class SweepHit:
    """One trial where the cell's polarization predicate fired."""

    prior_low: Belief
    prior_high: Belief
    likelihood: Optional[LikelihoodFn]
    identified_set: Optional[StateSubset]
    report: PolarizationReport

    def replay(self) -> PolarizationReport:
        """Re-run the predicate from the stored payload."""
        if self.report.mode is Mode.ONE_SHOT:
            assert self.likelihood is not None
            return one_shot(
                self.report.kind, self.prior_low, self.prior_high, self.likelihood
            )
        assert self.identified_set is not None
        return limit(
            self.report.kind,
            self.prior_low,
            self.prior_high,
            self.identified_set,
            strong_middle=self.report.strong_middle,
        )


@dataclass(frozen=True)
class SweepReport:
    config: SweepConfig
    trials_run: int
    counterexamples: tuple[SweepHit, ...]
    elapsed: float

    @property
    def found_any(self) -> bool:
        return bool(self.counterexamples)


def _compositions(total: int, parts: int, minimum: int) -> Iterator[tuple[int, ...]]:
    """Integer vectors of the given length and sum, each entry >= minimum."""
    if parts == 1:
        if total >= minimum:
            yield (total,)
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def _exhaustive_priors(space: StateSpace, denominator: int) -> list[Belief]:
    return [
        Belief(space, nums, denominator)
        for nums in _compositions(denominator, space.size, 1)
    ]


def _exhaustive_likelihoods(
    space: StateSpace, levels: tuple[Fraction, ...]
) -> list[LikelihoodFn]:
    out = []
    for values in _cartesian(levels, repeat=space.size):
        if any(v > 0 for v in values):
            out.append(LikelihoodFn.from_fractions(space, values))
    return out


def _random_belief(rng: random.Random, space: StateSpace, bound: int) -> Belief:
    return Belief.from_weights(
        space, [rng.randint(1, bound) for _ in range(space.size)]
    )


def _random_likelihood(
    rng: random.Random, space: StateSpace, levels: tuple[Fraction, ...]
) -> LikelihoodFn:
    values = [levels[rng.randrange(len(levels))] for _ in range(space.size)]
    if all(v == 0 for v in values):
        values[rng.randrange(space.size)] = Fraction(1)
    return LikelihoodFn.from_fractions(space, values)


def _random_strong_pair(
    rng: random.Random, space: StateSpace, bound: int
) -> tuple[Belief, Belief]:
    """Rejection-sample a strongly coordinatewise ordered full-support pair."""
    while True:
        a = _random_belief(rng, space, bound)
        b = _random_belief(rng, space, bound)
        if compare_strong_cw(a, b):
            return a, b
        if compare_strong_cw(b, a):
            return b, a


def _evaluate(
    config: SweepConfig,
    pl: Belief,
    ph: Belief,
    ell: Optional[LikelihoodFn],
    identified: Optional[StateSubset],
) -> Optional[SweepHit]:
    if config.mode is Mode.ONE_SHOT:
        assert ell is not None
        report = one_shot(config.kind, pl, ph, ell)
    else:
        assert identified is not None
        report = limit(config.kind, pl, ph, identified, strong_middle=config.strong)
    if report.verdict:
        return SweepHit(pl, ph, ell, identified, report)
    return None


def sweep(config: SweepConfig) -> SweepReport:
    """Run one cell's search and collect every polarization hit."""
    start = time.perf_counter()
    space = config.space
    pinned = (
        StateSubset.from_states(space, config.identified_set)
        if config.identified_set is not None
        else None
    )
    hits: list[SweepHit] = []
    trials_run = 0

    if config.denominator_bound is not None:
        priors = _exhaustive_priors(space, config.denominator_bound)
        if config.mode is Mode.ONE_SHOT:
            evidence = [
                (ell, None) for ell in _exhaustive_likelihoods(space, config.likelihood_levels)
            ]
        elif pinned is not None:
            evidence = [(None, pinned)]
        else:
            evidence = [
                (None, StateSubset(space, mask))
                for mask in range(1, space.full_mask)
            ]
        for pl in priors:
            for ph in priors:
                if config.strong and not compare_strong_cw(pl, ph):
                    continue
                for ell, ident in evidence:
                    trials_run += 1
                    hit = _evaluate(config, pl, ph, ell, ident)
                    if hit is not None:
                        hits.append(hit)
        return SweepReport(config, trials_run, tuple(hits), time.perf_counter() - start)

    for t in range(config.trials):
        rng = random.Random(f"{config.seed}:{t}")
        if config.strong:
            pl, ph = _random_strong_pair(rng, space, config.mass_bound)
        else:
            pl = _random_belief(rng, space, config.mass_bound)
            ph = _random_belief(rng, space, config.mass_bound)
        ell = None
        ident = pinned
        if config.mode is Mode.ONE_SHOT:
            ell = _random_likelihood(rng, space, config.likelihood_levels)
        elif ident is None:
            ident = StateSubset(space, rng.randrange(1, space.full_mask))
        trials_run += 1
        hit = _evaluate(config, pl, ph, ell, ident)
        if hit is not None:
            hits.append(hit)
    return SweepReport(config, trials_run, tuple(hits), time.perf_counter() - start)


# ---------------------------------------------------------------------------
# Direction-consistency sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirectionViolation:
    prior: Belief
    prior_other: Belief
    likelihood: LikelihoodFn
    extremes_agree: bool
    crossing_pairs: tuple


@dataclass(frozen=True)
class DirectionSweepReport:
    config: SweepConfig
    trials_run: int
    skipped_constant: int
    violations: tuple[DirectionViolation, ...]
    elapsed: float


def direction_consistency_sweep(config: SweepConfig) -> DirectionSweepReport:
    """Check the two direction restrictions on random posterior movements.

    At min- and max-likelihood states both agents must move the same way, and
    a strict one-way crossing forbids even weakly opposite movement anywhere.
    The state structure is irrelevant here, so ``dims`` may describe a plain
    finite set via a single axis (the grid order is never consulted).
    Constant likelihoods move nothing and are skipped.
    """
    start = time.perf_counter()
    space = config.space
    violations: list[DirectionViolation] = []
    skipped = 0
    for t in range(config.trials):
        rng = random.Random(f"{config.seed}:{t}")
        p = _random_belief(rng, space, config.mass_bound)
        p_other = _random_belief(rng, space, config.mass_bound)
        ell = _random_likelihood(rng, space, config.likelihood_levels)
        if ell.is_constant:
            skipped += 1
            continue
        outcome = direction_analysis(p, p_other, ell)
        if not outcome.consistent:
            violations.append(
                DirectionViolation(
                    p, p_other, ell, outcome.extremes_agree, outcome.crossing_pairs
                )
            )
    return DirectionSweepReport(
        config, config.trials, skipped, tuple(violations), time.perf_counter() - start
    )


def opposite_direction_witness(space: StateSpace) -> tuple[Belief, Belief, LikelihoodFn]:
    """Three-level likelihood instance where all non-extreme states split.

    One agent concentrates on the max-likelihood state and the other on the
    min-likelihood state, so their expected likelihoods straddle the middle
    level and every middle state moves opposite ways.
    """
    size = space.size
    if size < 3:
        raise ValueError("need at least three states")
    lo_flat, hi_flat = 0, size - 1
    values = [Fraction(1, 2)] * size
    values[lo_flat] = Fraction(1, 4)
    values[hi_flat] = Fraction(1)
    ell = LikelihoodFn.from_fractions(space, values)
    heavy_top = [1] * size
    heavy_top[hi_flat] = 8 * size
    heavy_bottom = [1] * size
    heavy_bottom[lo_flat] = 8 * size
    return (
        Belief.from_weights(space, heavy_top),
        Belief.from_weights(space, heavy_bottom),
        ell,
    )
