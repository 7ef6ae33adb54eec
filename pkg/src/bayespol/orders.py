"""Multivariate stochastic orders on finite grids.

Three event families define three orders: upper sets (multidimensional
stochastic dominance, the strongest), upper orthants, and upper projections
(coordinatewise dominance, the weakest).  Comparators report a full verdict
with witness events; a separate strong-coordinatewise check demands a strict
cdf gap at every interior point of every marginal.

Strictness convention: by default ``P strictly below Q`` means weak dominance
on every event of the family plus strict inequality on at least one event.
The alternative all-events convention is available via ``Strictness``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product as _cartesian
from typing import Iterator, Optional, Sequence

from .core import Belief, RationalLike, StateSpace, StateSubset, frac, leq

DEFAULT_UPPER_SET_CAP = 10**6


class CapExceededError(ValueError):
    """Upper-set enumeration would exceed the configured cap."""


class UpperFamilyKind(Enum):
    UPPER_SET = "st"
    UPPER_ORTHANT = "uo"
    UPPER_PROJECTION = "cw"


class Strictness(Enum):
    # strict dominance = weak dominance + strict inequality on >= 1 event
    ONE_EVENT = "one_event"
    # strict dominance = strict inequality on every event
    ALL_EVENTS = "all_events"


class Relation(Enum):
    STRICTLY_BELOW = "strictly_below"
    WEAKLY_BELOW = "weakly_below"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"
    WEAKLY_ABOVE = "weakly_above"
    STRICTLY_ABOVE = "strictly_above"


@dataclass(frozen=True)
class DominanceVerdict:
    """Outcome of one order comparison.

    ``witness`` is an event where strictness is achieved (for the Strictly*
    relations) or where the low-side inequality fails (for Incomparable);
    ``opposite_witness`` is only set for Incomparable and violates the other
    direction.  Equal means equal mass on every event of the family, which
    for the coordinatewise order is weaker than equality of distributions.
    """

    relation: Relation
    witness: Optional[StateSubset] = None
    opposite_witness: Optional[StateSubset] = None

    @property
    def weakly_below(self) -> bool:
        return self.relation in (
            Relation.STRICTLY_BELOW,
            Relation.WEAKLY_BELOW,
            Relation.EQUAL,
        )

    @property
    def strictly_below(self) -> bool:
        return self.relation is Relation.STRICTLY_BELOW


@dataclass(frozen=True)
class StrongCwVerdict:
    """Strong coordinatewise dominance check with a failure witness."""

    holds: bool
    axis: Optional[int] = None
    cut: Optional[int] = None

    def __bool__(self) -> bool:
        return self.holds


# ---------------------------------------------------------------------------
# Event enumeration
# ---------------------------------------------------------------------------


def _upper_set_masks(space: StateSpace, cap: int) -> tuple[int, ...]:
    """All upward-closed subsets as bitmasks, including 0 and the full mask.

    States are processed along a linear extension from the top of the grid
    down, so a state may join only once everything strictly above it is in.
    The walk is output-sensitive (each upper set corresponds to the up-closure
    of its minimal antichain) and raises once more than ``cap`` sets exist.
    """
    size = space.size
    states = space.states
    order = sorted(range(size), key=lambda f: -sum(states[f]))
    strictly_above = []
    for f in range(size):
        m = 0
        for g in range(size):
            if g != f and leq(states[f], states[g]):
                m |= 1 << g
        strictly_above.append(m)

    out: list[int] = []

    def walk(pos: int, mask: int) -> None:
        if pos == size:
            if len(out) >= cap:
                raise CapExceededError(
                    f"more than {cap} upper sets on {space!r}; raise the cap"
                )
            out.append(mask)
            return
        f = order[pos]
        walk(pos + 1, mask)
        if strictly_above[f] & mask == strictly_above[f]:
            walk(pos + 1, mask | (1 << f))

    walk(0, 0)
    return tuple(out)


def _orthant_masks(space: StateSpace) -> tuple[int, ...]:
    """Distinct upper orthants {state >= corner}, including empty and full."""
    masks = set()
    for corner in _cartesian(*(range(n + 1) for n in space.shape)):
        m = 0
        for f, state in enumerate(space.states):
            if all(i >= c for i, c in zip(state, corner)):
                m |= 1 << f
        masks.add(m)
    return tuple(sorted(masks))


def _projection_masks(space: StateSpace) -> tuple[int, ...]:
    """Per-axis upper intervals {state_i >= cut}; nonempty proper only."""
    masks = []
    for axis in range(space.ndim):
        for cut in range(1, space.shape[axis]):
            m = 0
            for f, state in enumerate(space.states):
                if state[axis] >= cut:
                    m |= 1 << f
            masks.append(m)
    return tuple(masks)


@lru_cache(maxsize=None)
def _family_masks(
    space: StateSpace, kind: UpperFamilyKind, cap: int
) -> tuple[int, ...]:
    """Proper nonempty events of the family, as bitmasks."""
    if kind is UpperFamilyKind.UPPER_SET:
        masks = _upper_set_masks(space, cap)
    elif kind is UpperFamilyKind.UPPER_ORTHANT:
        masks = _orthant_masks(space)
    else:
        masks = _projection_masks(space)
    full = space.full_mask
    return tuple(m for m in masks if 0 < m < full)


@lru_cache(maxsize=None)
def _family_flats(
    space: StateSpace, kind: UpperFamilyKind, cap: int
) -> tuple[tuple[int, ...], ...]:
    return tuple(
        StateSubset(space, m).flats() for m in _family_masks(space, kind, cap)
    )


def event_family(
    space: StateSpace,
    kind: UpperFamilyKind,
    cap: int = DEFAULT_UPPER_SET_CAP,
) -> tuple[StateSubset, ...]:
    """Proper nonempty events of the family, cached per space."""
    return tuple(StateSubset(space, m) for m in _family_masks(space, kind, cap))


def enumerate_events(
    space: StateSpace,
    kind: UpperFamilyKind,
    include_trivial: bool = False,
    cap: int = DEFAULT_UPPER_SET_CAP,
) -> Iterator[StateSubset]:
    """Yield the family's events; trivial means the empty set and all of it."""
    if include_trivial:
        yield StateSubset.empty(space)
    for event in event_family(space, kind, cap):
        yield event
    if include_trivial:
        yield StateSubset.full(space)


# ---------------------------------------------------------------------------
# Comparators
# ---------------------------------------------------------------------------


def _check_shared_space(low: Belief, high: Belief) -> StateSpace:
    if low.space != high.space:
        raise ValueError("beliefs live on different spaces")
    return low.space


def compare(
    low: Belief,
    high: Belief,
    kind: UpperFamilyKind,
    strictness: Strictness = Strictness.ONE_EVENT,
    cap: int = DEFAULT_UPPER_SET_CAP,
) -> DominanceVerdict:
    """Compare two beliefs on every event of the family.

    Trivial events never distinguish distributions, so only proper nonempty
    events are consulted.
    """
    space = _check_shared_space(low, high)
    flats = _family_flats(space, kind, cap)
    lnums, hnums = low.nums, high.nums
    lden, hden = low.den, high.den
    one_event = strictness is Strictness.ONE_EVENT

    low_gt = None  # event index where low(U) > high(U)
    high_gt = None  # event index where high(U) > low(U)
    n_low_gt = n_high_gt = 0
    for i, fl in enumerate(flats):
        a = sum(lnums[f] for f in fl) * hden
        b = sum(hnums[f] for f in fl) * lden
        if a > b:
            n_low_gt += 1
            if low_gt is None:
                low_gt = i
            if one_event and high_gt is not None:
                break
        elif a < b:
            n_high_gt += 1
            if high_gt is None:
                high_gt = i
            if one_event and low_gt is not None:
                break

    def event(i: Optional[int]) -> Optional[StateSubset]:
        return None if i is None else StateSubset.from_flats(space, flats[i])

    if low_gt is not None and high_gt is not None:
        return DominanceVerdict(Relation.INCOMPARABLE, event(low_gt), event(high_gt))
    if low_gt is None and high_gt is None:
        return DominanceVerdict(Relation.EQUAL)
    if high_gt is not None:
        strict = one_event or n_high_gt == len(flats)
        return DominanceVerdict(
            Relation.STRICTLY_BELOW if strict else Relation.WEAKLY_BELOW,
            event(high_gt),
        )
    strict = one_event or n_low_gt == len(flats)
    return DominanceVerdict(
        Relation.STRICTLY_ABOVE if strict else Relation.WEAKLY_ABOVE,
        event(low_gt),
    )


def compare_strong_cw(low: Belief, high: Belief) -> StrongCwVerdict:
    """Strict marginal-cdf gap at every interior point of every axis."""
    space = _check_shared_space(low, high)
    lden, hden = low.den, high.den
    for axis in range(space.ndim):
        lmarg = low.marginal_nums(axis)
        hmarg = high.marginal_nums(axis)
        lc = hc = 0
        for cut in range(space.shape[axis] - 1):
            lc += lmarg[cut]
            hc += hmarg[cut]
            if lc * hden <= hc * lden:
                return StrongCwVerdict(False, axis, cut)
    return StrongCwVerdict(True)


# ---------------------------------------------------------------------------
# Generating-function machinery
# ---------------------------------------------------------------------------


def is_increasing(space: StateSpace, values: Sequence[Fraction]) -> bool:
    """Monotone with respect to the coordinatewise order on states."""
    if len(values) != space.size:
        raise ValueError("value vector length mismatch")
    strides = [space.flat(tuple(1 if j == i else 0 for j in range(space.ndim)))
               for i in range(space.ndim)]
    for f, state in enumerate(space.states):
        for axis in range(space.ndim):
            if state[axis] + 1 < space.shape[axis]:
                if values[f + strides[axis]] < values[f]:
                    return False
    return True


def additive_parts(
    space: StateSpace, values: Sequence[Fraction]
) -> Optional[tuple[tuple[Fraction, ...], ...]]:
    """Exact decomposition u(s) = sum_i u_i(s_i), or None if there is none.

    The constant is folded into the first component.
    """
    if len(values) != space.size:
        raise ValueError("value vector length mismatch")
    base = values[space.flat(space.bottom)]
    parts = []
    for axis in range(space.ndim):
        column = []
        for t in range(space.shape[axis]):
            probe = list(space.bottom)
            probe[axis] = t
            column.append(values[space.flat(tuple(probe))] - base)
        parts.append(tuple(column))
    for f, state in enumerate(space.states):
        rebuilt = base + sum(parts[i][state[i]] for i in range(space.ndim))
        if rebuilt != values[f]:
            return None
    first = tuple(v + base for v in parts[0])
    return (first,) + tuple(parts[1:])


def product_parts(
    space: StateSpace, values: Sequence[Fraction]
) -> Optional[tuple[tuple[Fraction, ...], ...]]:
    """Exact factorization u(s) = prod_i u_i(s_i) with u_i >= 0 increasing."""
    if len(values) != space.size:
        raise ValueError("value vector length mismatch")
    vals = [frac(v) for v in values]
    if any(v < 0 for v in vals):
        return None
    top_value = vals[space.flat(space.top)]
    if top_value == 0:
        # nonnegative increasing with zero at the top means identically zero
        if any(v != 0 for v in vals):
            return None
        return tuple((Fraction(0),) * n for n in space.shape)
    factors = []
    for axis in range(space.ndim):
        column = []
        for t in range(space.shape[axis]):
            probe = list(space.top)
            probe[axis] = t
            column.append(vals[space.flat(tuple(probe))])
        if any(column[i] > column[i + 1] for i in range(len(column) - 1)):
            return None
        factors.append(tuple(column))
    scale = top_value ** (space.ndim - 1)
    for f, state in enumerate(space.states):
        prod = Fraction(1)
        for i in range(space.ndim):
            prod *= factors[i][state[i]]
        if vals[f] * scale != prod:
            return None
    normalized = [factors[0]] + [
        tuple(v / top_value for v in col) for col in factors[1:]
    ]
    return tuple(normalized)


def in_generating_class(
    space: StateSpace, values: Sequence[Fraction], kind: UpperFamilyKind
) -> bool:
    vals = [frac(v) for v in values]
    if kind is UpperFamilyKind.UPPER_SET:
        return is_increasing(space, vals)
    if kind is UpperFamilyKind.UPPER_ORTHANT:
        return product_parts(space, vals) is not None
    return additive_parts(space, vals) is not None and is_increasing(space, vals)


def _indicator(space: StateSpace, mask: int) -> tuple[Fraction, ...]:
    return tuple(
        Fraction(1) if mask >> f & 1 else Fraction(0) for f in range(space.size)
    )


@lru_cache(maxsize=None)
def canonical_basis(
    space: StateSpace,
    kind: UpperFamilyKind,
    cap: int = DEFAULT_UPPER_SET_CAP,
) -> tuple[tuple[Fraction, ...], ...]:
    """Finite indicator basis whose expectation test reproduces ``compare``.

    Upper sets: indicators of upper sets.  Upper orthants: indicators of
    orthants (products of per-axis upper-interval indicators).  Coordinatewise:
    per-axis upper-interval indicators plus all their pairwise sums.
    """
    if kind is not UpperFamilyKind.UPPER_PROJECTION:
        return tuple(
            _indicator(space, m) for m in _family_masks(space, kind, cap)
        )
    singles = [_indicator(space, m)
               for m in _family_masks(space, kind, cap)]
    sums = [
        tuple(a + b for a, b in zip(u, v))
        for i, u in enumerate(singles)
        for v in singles[i + 1:]
    ]
    return tuple(singles) + tuple(sums)


def compare_by_generators(
    low: Belief,
    high: Belief,
    kind: UpperFamilyKind,
    basis: Optional[Sequence[Sequence[RationalLike]]] = None,
    cap: int = DEFAULT_UPPER_SET_CAP,
) -> bool:
    """True iff E_low[u] <= E_high[u] for every basis function.

    With the canonical basis this equals weak dominance under ``compare``.
    Basis functions must belong to the order's generating class.
    """
    space = _check_shared_space(low, high)
    if basis is None:
        funcs = canonical_basis(space, kind, cap)
    else:
        funcs = tuple(tuple(frac(v) for v in u) for u in basis)
        for u in funcs:
            if not in_generating_class(space, u, kind):
                raise ValueError(
                    f"basis function {u} is not in the generating class for {kind.value}"
                )
    for u in funcs:
        if low.expectation(u) > high.expectation(u):
            return False
    return True
