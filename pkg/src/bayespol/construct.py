"""Constructive prior builders: turn existence proofs into algorithms.

Three builders live here.  ``antichain_distributions`` realizes a strongly
coordinatewise ordered pair of distributions on two antichain supports by
recursing on the grid (peel the high antichain's extreme element, shrink the
grid, mix a small Dirac back in).  ``build_polarizing_priors`` assembles full
polarizing priors for any identified set passing the classifier, then
verifies the result with exact comparators rather than trusting the algebra.
``mirror_extremes_instance`` and ``one_shot_orthant_instance`` produce the
two closed-form instance families: mirror-image priors identified on the two
extreme states (limit, coordinatewise), and concentrated priors with a
two-point likelihood (one-shot, upper orthant).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .bayes import LikelihoodFn
from .classifier import antichain_dominates, classify, max_set, min_set
from .core import Belief, State, StateSpace, StateSubset, frac, leq, mixture
from .orders import Relation, Strictness, UpperFamilyKind, compare, compare_strong_cw
from .polarization import PolarizationReport, limit, one_shot

_MIN_DELTA = Fraction(1, 2**64)

Massmap = dict[State, Fraction]
_Box = tuple[State, State]  # inclusive (low corner, high corner) index bounds


@dataclass(frozen=True)
class ConstructionResult:
    prior_low: Belief
    prior_high: Belief
    certificate: PolarizationReport
    epsilon: Optional[Fraction] = None
    delta: Optional[Fraction] = None
    n: Optional[int] = None


# ---------------------------------------------------------------------------
# Strongly ordered distributions on antichain supports
# ---------------------------------------------------------------------------


def _box_cdf_gap(low: Massmap, high: Massmap, box: _Box) -> Fraction:
    """Minimum of (F_low - F_high) over interior cuts of the box, both axes."""
    (lo0, lo1), (hi0, hi1) = box[0], box[1]
    best: Optional[Fraction] = None
    for axis, lo, hi in ((0, lo0, hi0), (1, lo1, hi1)):
        for cut in range(lo, hi):
            fl = sum(m for s, m in low.items() if s[axis] <= cut)
            fh = sum(m for s, m in high.items() if s[axis] <= cut)
            gap = fl - fh
            if best is None or gap < best:
                best = gap
    if best is None:
        raise AssertionError("degenerate box with no interior cuts")
    return best


def _antichain_pair(low: list[State], high: list[State], box: _Box) -> tuple[Massmap, Massmap]:
    """Recursive construction of full-support masses on two antichains with
    the low side strictly above the high side in every marginal cdf.

    ``low`` and ``high`` are sorted ascending by the first coordinate (hence
    descending by the second).  The singleton cases anchor the recursion: a
    single high element must be the box corner, so a Dirac there stays below
    any full-support distribution on the low antichain, and symmetrically.
    """
    if len(high) == 1:
        if high[0] != box[1]:
            raise AssertionError("singleton high antichain must sit at the box top")
        return (
            {s: Fraction(1, len(low)) for s in low},
            {high[0]: Fraction(1)},
        )
    if len(low) == 1:
        if low[0] != box[0]:
            raise AssertionError("singleton low antichain must sit at the box bottom")
        return (
            {low[0]: Fraction(1)},
            {s: Fraction(1, len(high)) for s in high},
        )

    d1, d2 = low[0], low[1]
    t1, t2 = high[0], high[1]
    first_branch = leq(d1, t1) and leq(d1, t2)
    second_branch = leq(d1, t1) and leq(d2, t1)
    if not (first_branch or second_branch):
        raise AssertionError(
            "non-compensatory union must allow peeling one extreme element"
        )

    if first_branch:
        # Drop the high element with the top second coordinate, cap the box
        # at the runner-up, recurse, then mix a small Dirac at it back in.
        sub_box = (box[0], (box[1][0], t2[1]))
        low_masses, rest = _antichain_pair(low, high[1:], sub_box)
        eps = _box_cdf_gap(low_masses, rest, sub_box) / 2
        high_masses = {s: (1 - eps) * m for s, m in rest.items()}
        high_masses[t1] = eps
        return low_masses, high_masses

    # Symmetric branch: drop the low element with the bottom first coordinate,
    # raise the box floor to the runner-up, recurse, mix the Dirac into low.
    sub_box = ((d2[0], box[0][1]), box[1])
    rest, high_masses = _antichain_pair(low[1:], high, sub_box)
    eps = _box_cdf_gap(rest, high_masses, sub_box) / 2
    low_masses = {s: (1 - eps) * m for s, m in rest.items()}
    low_masses[d1] = eps
    return low_masses, high_masses


def _as_belief(space: StateSpace, masses: Massmap) -> Belief:
    values = [Fraction(0)] * space.size
    for state, m in masses.items():
        values[space.flat(state)] = m
    return Belief.from_fractions(space, values)


def antichain_distributions(
    space: StateSpace, low: StateSubset, high: StateSubset
) -> tuple[Belief, Belief]:
    """Full-support distributions on two antichains, strongly cw ordered.

    Requires ``high`` to antichain-dominate ``low``; the output is verified
    with the strong comparator before returning.
    """
    dominance = antichain_dominates(space, low, high)
    if not dominance.holds:
        raise ValueError(f"antichain dominance precondition fails: {dominance.failed_condition}")
    low_sorted = sorted(low.states())
    high_sorted = sorted(high.states())
    low_masses, high_masses = _antichain_pair(
        low_sorted, high_sorted, (space.bottom, space.top)
    )
    low_belief = _as_belief(space, low_masses)
    high_belief = _as_belief(space, high_masses)
    if not compare_strong_cw(low_belief, high_belief):
        raise AssertionError("internal error: constructed pair is not strongly ordered")
    return low_belief, high_belief


# ---------------------------------------------------------------------------
# Joint construction fallback
# ---------------------------------------------------------------------------


def _joint_strong_solve(
    space: StateSpace,
    chains: dict[str, list[State]],
    relations: Sequence[tuple[str, str]],
) -> dict[str, Massmap]:
    """Solve all strong-dominance relations between antichains at once.

    Every constraint is a strict inequality between two cumulative masses, so
    the system is a set of difference constraints over prefix variables.  A
    longest-path labeling of the (acyclic) constraint graph yields exact
    rational prefix values; mass vectors are their differences.
    """
    ZERO, ONE = ("", 0), ("", 1)

    def node(name: str, idx: int) -> tuple[str, int]:
        k = len(chains[name])
        if idx <= 0:
            return ZERO
        if idx >= k:
            return ONE
        return (name, idx)

    edges: set[tuple[tuple[str, int], tuple[str, int]]] = set()

    def add(a: tuple[str, int], b: tuple[str, int]) -> None:
        if a == b:
            raise AssertionError(f"infeasible constraint {a} < {b}")
        if a == ZERO and b == ONE:
            return
        if b == ZERO or a == ONE:
            raise AssertionError(f"infeasible constraint {a} < {b}")
        edges.add((a, b))

    for name, states in chains.items():
        for r in range(len(states)):
            add(node(name, r), node(name, r + 1))

    def rank_leq(states: list[State], axis: int, cut: int) -> int:
        return sum(1 for s in states if s[axis] <= cut)

    def rank_above(states: list[State], axis: int, cut: int) -> int:
        return sum(1 for s in states if s[axis] > cut)

    for low_name, high_name in relations:
        low_states, high_states = chains[low_name], chains[high_name]
        for cut in range(space.shape[0] - 1):
            # F_high < F_low on the first axis: prefix(high) < prefix(low)
            add(
                node(high_name, rank_leq(high_states, 0, cut)),
                node(low_name, rank_leq(low_states, 0, cut)),
            )
        for cut in range(space.shape[1] - 1):
            # Second axis cdfs are one-minus-suffix, flipping the direction.
            add(
                node(low_name, rank_above(low_states, 1, cut)),
                node(high_name, rank_above(high_states, 1, cut)),
            )

    outgoing: dict[tuple[str, int], list[tuple[str, int]]] = {}
    indeg: dict[tuple[str, int], int] = {}
    nodes = {ZERO, ONE}
    for a, b in edges:
        nodes.add(a)
        nodes.add(b)
    for n in nodes:
        outgoing[n] = []
        indeg[n] = 0
    for a, b in edges:
        outgoing[a].append(b)
        indeg[b] += 1

    order = [n for n in nodes if indeg[n] == 0]
    longest = {n: 0 for n in nodes}
    seen = 0
    queue = list(order)
    while queue:
        n = queue.pop()
        seen += 1
        for m in outgoing[n]:
            if longest[n] + 1 > longest[m]:
                longest[m] = longest[n] + 1
            indeg[m] -= 1
            if indeg[m] == 0:
                queue.append(m)
    if seen != len(nodes):
        raise AssertionError("infeasible joint system: constraint cycle")

    top = longest[ONE]
    out: dict[str, Massmap] = {}
    for name, states in chains.items():
        prefix = [Fraction(longest[node(name, r)], top) for r in range(len(states) + 1)]
        prefix[-1] = Fraction(1)
        masses = {}
        for r, state in enumerate(states):
            m = prefix[r + 1] - prefix[r]
            if m <= 0:
                raise AssertionError("joint solve produced a nonpositive mass")
            masses[state] = m
        out[name] = masses
    return out


# ---------------------------------------------------------------------------
# Polarizing priors for a classified identified set
# ---------------------------------------------------------------------------


def _strong_ok(space: StateSpace, low: Massmap, high: Massmap) -> bool:
    return bool(compare_strong_cw(_as_belief(space, low), _as_belief(space, high)))


def _conditional_pieces(
    space: StateSpace, identified: StateSubset
) -> tuple[Belief, Belief, Belief, Belief, Fraction]:
    """The four antichain distributions of the layered-prior construction.

    Returns (low on min set, high on max set, low on complement's max set,
    high on complement's min set) plus half the minimal cdf gap across the
    three strong relations that must hold among them.
    """
    complement = identified.complement()
    a_set, b_set = min_set(identified), max_set(identified)
    c_set, d_set = max_set(complement), min_set(complement)

    for pair in ((a_set, b_set), (a_set, c_set), (d_set, b_set)):
        verdict = antichain_dominates(space, *pair)
        if not verdict.holds:
            raise AssertionError(
                f"internal error: expected antichain dominance, got {verdict}"
            )

    full_box = (space.bottom, space.top)
    a_m, b_m = _antichain_pair(sorted(a_set.states()), sorted(b_set.states()), full_box)
    _, c_m = _antichain_pair(sorted(a_set.states()), sorted(c_set.states()), full_box)
    d_m, _ = _antichain_pair(sorted(d_set.states()), sorted(b_set.states()), full_box)

    # Pairwise runs share no variables, so the two reused sides may fail the
    # cross relations; if so, re-solve all four jointly.
    if not (_strong_ok(space, a_m, c_m) and _strong_ok(space, d_m, b_m)):
        chains = {
            "a": sorted(a_set.states()),
            "b": sorted(b_set.states()),
            "c": sorted(c_set.states()),
            "d": sorted(d_set.states()),
        }
        solved = _joint_strong_solve(
            space, chains, [("a", "b"), ("a", "c"), ("d", "b")]
        )
        a_m, b_m, c_m, d_m = solved["a"], solved["b"], solved["c"], solved["d"]

    box = (space.bottom, space.top)
    gap = min(
        _box_cdf_gap(a_m, b_m, box),
        _box_cdf_gap(a_m, c_m, box),
        _box_cdf_gap(d_m, b_m, box),
    )
    if gap <= 0:
        raise AssertionError("internal error: nonpositive strong-dominance gap")
    return (
        _as_belief(space, a_m),
        _as_belief(space, b_m),
        _as_belief(space, c_m),
        _as_belief(space, d_m),
        gap / 2,
    )


def _layered(space: StateSpace, core_belief: Belief, rest: StateSubset, delta: Fraction) -> Belief:
    """(1-delta) on the antichain distribution, delta uniform on the residual."""
    if rest.is_empty:
        return core_belief
    return mixture([1 - delta, delta], [core_belief, Belief.uniform_on(space, rest)])


def build_polarizing_priors(
    space: StateSpace, identified: StateSubset
) -> ConstructionResult:
    """Priors exhibiting strong coordinatewise limit polarization on a set.

    The identified set must pass the classifier.  Layer weights follow a
    halving search on delta, accepting only when the assembled priors pass
    the exact polarization certificate.
    """
    report = classify(space, identified)
    if not report.can_strongly_polarize:
        raise ValueError(
            "identified set fails the polarization conditions: "
            f"spanning={report.spanning}, complement_spanning={report.complement_spanning}, "
            f"balanced={report.balanced}, compensatory={report.compensatory}"
        )
    complement = identified.complement()
    low_core, high_core, low_comp, high_comp, epsilon = _conditional_pieces(
        space, identified
    )
    gamma_rest_low = identified.difference(min_set(identified))
    gamma_rest_high = identified.difference(max_set(identified))
    comp_rest_low = complement.difference(max_set(complement))
    comp_rest_high = complement.difference(min_set(complement))

    delta = Fraction(1, 2)
    while delta >= _MIN_DELTA:
        inequalities_hold = (1 - delta) * epsilon > delta and (
            (1 - delta) ** 2 * epsilon > (1 - delta) * 2 * delta + delta**2
        )
        if inequalities_hold:
            prior_low = mixture(
                [1 - delta, delta],
                [
                    _layered(space, low_core, gamma_rest_low, delta),
                    _layered(space, low_comp, comp_rest_low, delta),
                ],
            )
            prior_high = mixture(
                [1 - delta, delta],
                [
                    _layered(space, high_core, gamma_rest_high, delta),
                    _layered(space, high_comp, comp_rest_high, delta),
                ],
            )
            certificate = limit(
                UpperFamilyKind.UPPER_PROJECTION,
                prior_low,
                prior_high,
                identified,
                strong_middle=True,
            )
            if certificate.verdict:
                return ConstructionResult(
                    prior_low=prior_low,
                    prior_high=prior_high,
                    certificate=certificate,
                    epsilon=epsilon,
                    delta=delta,
                )
        delta /= 2
    raise RuntimeError(
        "delta search exhausted below 2**-64; this indicates a construction bug"
    )


# ---------------------------------------------------------------------------
# Closed-form instances
# ---------------------------------------------------------------------------


def mirror_extremes_threshold(space: StateSpace) -> Fraction:
    """Smallest tilt for which the mirror-extremes priors polarize."""
    size = space.size
    if size <= 2:
        raise ValueError("space must have more than two states")
    return max(
        Fraction(size * (n - 2), n * (size - 2)) for n in space.shape
    )


def mirror_extremes_instance(space: StateSpace, epsilon: Fraction) -> ConstructionResult:
    """Mirror-image priors tilted toward opposite extreme states.

    The identified set is the two extremes; the certificate evaluates limit
    coordinatewise polarization, which holds exactly when the tilt clears the
    per-axis threshold.  Works in any dimension.
    """
    epsilon = frac(epsilon)
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    size = space.size
    if size <= 2:
        raise ValueError("space must have more than two states")
    bottom_flat = space.flat(space.bottom)
    top_flat = space.flat(space.top)
    base = [Fraction(1, size)] * size
    low = list(base)
    high = list(base)
    low[bottom_flat] += epsilon / size
    low[top_flat] -= epsilon / size
    high[bottom_flat] -= epsilon / size
    high[top_flat] += epsilon / size
    prior_low = Belief.from_fractions(space, low)
    prior_high = Belief.from_fractions(space, high)
    extremes = StateSubset.from_states(space, [space.bottom, space.top])
    certificate = limit(UpperFamilyKind.UPPER_PROJECTION, prior_low, prior_high, extremes)
    return ConstructionResult(
        prior_low=prior_low,
        prior_high=prior_high,
        certificate=certificate,
        epsilon=epsilon,
    )


@dataclass(frozen=True)
class OneShotOrthantInstance:
    prior_low: Belief
    prior_high: Belief
    likelihood: LikelihoodFn
    report: PolarizationReport
    epsilon: Fraction
    n: int


def one_shot_orthant_instance(
    space: StateSpace, epsilon: Fraction, n: int
) -> OneShotOrthantInstance:
    """Concentrated mirror priors plus a likelihood supported on the extremes.

    The low agent piles mass near the bottom state, the high agent near the
    top; the likelihood is one at the bottom, slightly less at the top, and
    zero elsewhere.  For large n the report certifies one-shot upper-orthant
    polarization; small n may simply yield a false report.
    """
    epsilon = frac(epsilon)
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    if n < 3:
        raise ValueError("n must be at least 3")
    size = space.size
    if size <= 2:
        raise ValueError("space must have more than two states")
    bottom_flat = space.flat(space.bottom)
    top_flat = space.flat(space.top)
    bulk = 1 - Fraction(1, n) - Fraction(1, n * n)
    sliver = Fraction(1, n * n)
    middle = Fraction(1, n * (size - 2))
    low = [middle] * size
    high = [middle] * size
    low[bottom_flat], low[top_flat] = bulk, sliver
    high[bottom_flat], high[top_flat] = sliver, bulk
    prior_low = Belief.from_fractions(space, low)
    prior_high = Belief.from_fractions(space, high)
    ell_values = [Fraction(0)] * size
    ell_values[bottom_flat] = Fraction(1)
    ell_values[top_flat] = 1 - epsilon
    ell = LikelihoodFn.from_fractions(space, ell_values)
    report = one_shot(UpperFamilyKind.UPPER_ORTHANT, prior_low, prior_high, ell)
    return OneShotOrthantInstance(prior_low, prior_high, ell, report, epsilon, n)


def find_one_shot_orthant_instance(
    space: StateSpace,
    epsilon: Fraction,
    n_start: int = 3,
    n_cap: int = 2**20,
    require_all_strict: bool = False,
) -> OneShotOrthantInstance:
    """Increase the concentration parameter until the certificate passes.

    ``require_all_strict`` additionally demands strict movement on every
    proper orthant for both agents (used by the action layer).
    """
    n = n_start
    while n <= n_cap:
        inst = one_shot_orthant_instance(space, epsilon, n)
        if inst.report.verdict:
            if not require_all_strict:
                return inst
            all_strict = (
                compare(
                    inst.report.posterior_low,
                    inst.prior_low,
                    UpperFamilyKind.UPPER_ORTHANT,
                    Strictness.ALL_EVENTS,
                ).relation
                is Relation.STRICTLY_BELOW
                and compare(
                    inst.prior_high,
                    inst.report.posterior_high,
                    UpperFamilyKind.UPPER_ORTHANT,
                    Strictness.ALL_EVENTS,
                ).relation
                is Relation.STRICTLY_BELOW
            )
            if all_strict:
                return inst
        n += 1
    raise RuntimeError(f"no certified instance found for n up to {n_cap}")
