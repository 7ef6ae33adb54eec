"""Finite product state spaces and exact-rational probability mass functions.

Everything downstream of this module is exact: coordinates, masses and all
derived quantities are rationals (internally, integer numerators over one
shared denominator), so order comparisons never suffer float ties.  States
are index vectors into the grid; coordinate labels are consulted only for
the partial order, never for arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian
from typing import Iterable, Iterator, Sequence, Union

RationalLike = Union[Fraction, int, str]

# A state is an index vector (i_1, ..., i_d) into a StateSpace.
State = tuple[int, ...]


def frac(value: RationalLike) -> Fraction:
    """Coerce ints, 'p/q' strings, or Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass an int, Fraction, or 'p/q' string")
    return Fraction(value)


def leq(a: State, b: State) -> bool:
    """Coordinatewise weak order: a <= b on every coordinate."""
    return all(x <= y for x, y in zip(a, b))


def ll(a: State, b: State) -> bool:
    """Coordinatewise strict order: a < b on every coordinate."""
    return all(x < y for x, y in zip(a, b))


@dataclass(frozen=True)
class StateSpace:
    """Ordered finite grid: the Cartesian product of strictly increasing axes.

    Each axis is a strictly increasing tuple of rational values with at least
    two entries.  States are addressed by index vectors, enumerated row-major
    with the last axis fastest; ``flat`` converts an index vector to its
    position in that enumeration.
    """

    axes: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if not self.axes:
            raise ValueError("state space needs at least one axis")
        coerced = []
        for k, axis in enumerate(self.axes):
            vals = tuple(frac(v) for v in axis)
            if len(vals) < 2:
                raise ValueError(f"axis {k} has {len(vals)} values; need at least 2")
            if any(vals[i] >= vals[i + 1] for i in range(len(vals) - 1)):
                raise ValueError(f"axis {k} is not strictly increasing: {vals}")
            coerced.append(vals)
        object.__setattr__(self, "axes", tuple(coerced))
        shape = tuple(len(a) for a in self.axes)
        strides = []
        acc = 1
        for n in reversed(shape):
            strides.append(acc)
            acc *= n
        object.__setattr__(self, "_shape", shape)
        object.__setattr__(self, "_strides", tuple(reversed(strides)))
        object.__setattr__(self, "_size", acc)
        object.__setattr__(
            self, "_states", tuple(_cartesian(*(range(n) for n in shape)))
        )

    @staticmethod
    def make(axes: Iterable[Iterable[RationalLike]]) -> "StateSpace":
        return StateSpace(tuple(tuple(axis) for axis in axes))

    @staticmethod
    def grid(*shape: int) -> "StateSpace":
        """Unit-spaced space with axes 0..n_i-1; handy when labels don't matter."""
        return StateSpace.make([range(n) for n in shape])

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return self._shape  # type: ignore[attr-defined]

    @property
    def size(self) -> int:
        return self._size  # type: ignore[attr-defined]

    @property
    def states(self) -> tuple[State, ...]:
        """All states in row-major order (last axis fastest)."""
        return self._states  # type: ignore[attr-defined]

    @property
    def bottom(self) -> State:
        return (0,) * self.ndim

    @property
    def top(self) -> State:
        return tuple(n - 1 for n in self.shape)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def flat(self, state: State) -> int:
        for i, n in zip(state, self.shape):
            if not 0 <= i < n:
                raise ValueError(f"state {state} out of bounds for shape {self.shape}")
        return sum(i * s for i, s in zip(state, self._strides))  # type: ignore[attr-defined]

    def state_at(self, flat: int) -> State:
        return self._states[flat]  # type: ignore[attr-defined]

    def coords(self, state: State) -> tuple[Fraction, ...]:
        """Real-valued coordinate vector of a state."""
        return tuple(axis[i] for axis, i in zip(self.axes, state))

    def __repr__(self) -> str:
        return f"StateSpace({'x'.join(str(n) for n in self.shape)})"


@dataclass(frozen=True)
class StateSubset:
    """Subset of a StateSpace's states, stored as a membership bitmask."""

    space: StateSpace
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask <= self.space.full_mask:
            raise ValueError("mask out of range for space")

    @staticmethod
    def from_states(space: StateSpace, states: Iterable[State]) -> "StateSubset":
        mask = 0
        for s in states:
            mask |= 1 << space.flat(tuple(s))
        return StateSubset(space, mask)

    @staticmethod
    def from_flats(space: StateSpace, flats: Iterable[int]) -> "StateSubset":
        mask = 0
        for f in flats:
            mask |= 1 << f
        return StateSubset(space, mask)

    @staticmethod
    def full(space: StateSpace) -> "StateSubset":
        return StateSubset(space, space.full_mask)

    @staticmethod
    def empty(space: StateSpace) -> "StateSubset":
        return StateSubset(space, 0)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[State]:
        return iter(self.states())

    def __contains__(self, state: State) -> bool:
        return bool(self.mask >> self.space.flat(tuple(state)) & 1)

    def contains_flat(self, flat: int) -> bool:
        return bool(self.mask >> flat & 1)

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def is_proper(self) -> bool:
        return 0 < self.mask < self.space.full_mask

    def flats(self) -> tuple[int, ...]:
        m = self.mask
        out = []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return tuple(out)

    def states(self) -> tuple[State, ...]:
        return tuple(self.space.state_at(f) for f in self.flats())

    def complement(self) -> "StateSubset":
        return StateSubset(self.space, self.space.full_mask ^ self.mask)

    def union(self, other: "StateSubset") -> "StateSubset":
        self._check_space(other)
        return StateSubset(self.space, self.mask | other.mask)

    def intersection(self, other: "StateSubset") -> "StateSubset":
        self._check_space(other)
        return StateSubset(self.space, self.mask & other.mask)

    def difference(self, other: "StateSubset") -> "StateSubset":
        self._check_space(other)
        return StateSubset(self.space, self.mask & ~other.mask)

    def issubset(self, other: "StateSubset") -> bool:
        self._check_space(other)
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "StateSubset") -> bool:
        self._check_space(other)
        return self.mask & other.mask == 0

    def _check_space(self, other: "StateSubset") -> None:
        if self.space != other.space:
            raise ValueError("subsets live on different spaces")

    def __repr__(self) -> str:
        return "{" + ", ".join(str(s) for s in self.states()) + "}"


@dataclass(frozen=True)
class Marginal:
    """Univariate marginal: per-value masses and the running-sum cdf."""

    masses: tuple[Fraction, ...]
    cdf: tuple[Fraction, ...]


@dataclass(frozen=True)
class Belief:
    """Exact probability mass function over a StateSpace.

    Masses are stored as integer numerators over one shared denominator and
    are canonicalized (gcd-reduced) at construction, so equal distributions
    compare equal.  Instances are immutable; every operation returns a new
    Belief whose masses sum to one exactly.
    """

    space: StateSpace
    nums: tuple[int, ...]
    den: int

    def __post_init__(self) -> None:
        if len(self.nums) != self.space.size:
            raise ValueError(
                f"expected {self.space.size} masses, got {len(self.nums)}"
            )
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        if any(n < 0 for n in self.nums):
            raise ValueError("negative mass")
        if sum(self.nums) != self.den:
            raise ValueError("masses do not sum to 1")
        g = math.gcd(self.den, *self.nums)
        if g > 1:
            object.__setattr__(self, "nums", tuple(n // g for n in self.nums))
            object.__setattr__(self, "den", self.den // g)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_fractions(space: StateSpace, masses: Iterable[RationalLike]) -> "Belief":
        fractions = [frac(m) for m in masses]
        den = math.lcm(*(f.denominator for f in fractions)) if fractions else 1
        nums = tuple(int(f * den) for f in fractions)
        return Belief(space, nums, den)

    @staticmethod
    def from_weights(space: StateSpace, weights: Sequence[int]) -> "Belief":
        """Belief proportional to nonnegative integer weights."""
        total = sum(weights)
        if total <= 0:
            raise ValueError("weights must have positive sum")
        return Belief(space, tuple(weights), total)

    @staticmethod
    def uniform(space: StateSpace) -> "Belief":
        return Belief(space, (1,) * space.size, space.size)

    @staticmethod
    def uniform_on(space: StateSpace, subset: StateSubset) -> "Belief":
        if subset.is_empty:
            raise ValueError("uniform distribution over empty set")
        nums = [0] * space.size
        for f in subset.flats():
            nums[f] = 1
        return Belief(space, tuple(nums), len(subset))

    @staticmethod
    def dirac(space: StateSpace, state: State) -> "Belief":
        nums = [0] * space.size
        nums[space.flat(tuple(state))] = 1
        return Belief(space, tuple(nums), 1)

    # -- accessors ---------------------------------------------------------

    def mass(self, state: State) -> Fraction:
        return Fraction(self.nums[self.space.flat(tuple(state))], self.den)

    def mass_flat(self, flat: int) -> Fraction:
        return Fraction(self.nums[flat], self.den)

    def masses(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.nums)

    def num_on(self, flats: Iterable[int]) -> int:
        """Unnormalized mass on a set of flat indices (numerator over den)."""
        nums = self.nums
        return sum(nums[f] for f in flats)

    def prob(self, subset: StateSubset) -> Fraction:
        if subset.space != self.space:
            raise ValueError("subset lives on a different space")
        return Fraction(self.num_on(subset.flats()), self.den)

    @property
    def full_support(self) -> bool:
        return all(n > 0 for n in self.nums)

    def support(self) -> StateSubset:
        return StateSubset.from_flats(
            self.space, (f for f, n in enumerate(self.nums) if n > 0)
        )

    # -- operations --------------------------------------------------------

    def marginal_nums(self, axis: int) -> list[int]:
        """Per-value numerators of the marginal on one axis (over self.den)."""
        if not 0 <= axis < self.space.ndim:
            raise ValueError(f"axis {axis} out of range for {self.space.ndim}-d space")
        out = [0] * self.space.shape[axis]
        for f, state in enumerate(self.space.states):
            out[state[axis]] += self.nums[f]
        return out

    def marginal(self, axis: int) -> Marginal:
        nums = self.marginal_nums(axis)
        masses = tuple(Fraction(n, self.den) for n in nums)
        cdf = []
        acc = Fraction(0)
        for m in masses:
            acc += m
            cdf.append(acc)
        return Marginal(masses, tuple(cdf))

    def condition(self, subset: StateSubset) -> "Belief":
        """Conditional distribution given the event ``subset``."""
        if subset.space != self.space:
            raise ValueError("subset lives on a different space")
        mask = subset.mask
        nums = tuple(
            n if mask >> f & 1 else 0 for f, n in enumerate(self.nums)
        )
        total = sum(nums)
        if total == 0:
            raise ValueError("conditioning on null event")
        return Belief(self.space, nums, total)

    def expectation(self, values: Sequence[RationalLike]) -> Fraction:
        if len(values) != self.space.size:
            raise ValueError("value vector length mismatch")
        acc = Fraction(0)
        for n, v in zip(self.nums, values):
            if n:
                acc += n * frac(v)
        return acc / self.den

    def tv_distance(self, other: "Belief") -> Fraction:
        if other.space != self.space:
            raise ValueError("beliefs live on different spaces")
        diff = sum(
            abs(a * other.den - b * self.den) for a, b in zip(self.nums, other.nums)
        )
        return Fraction(diff, 2 * self.den * other.den)

    def __repr__(self) -> str:
        return "Belief(" + ", ".join(str(Fraction(n, self.den)) for n in self.nums) + ")"


def mixture(weights: Sequence[RationalLike], beliefs: Sequence[Belief]) -> Belief:
    """Pointwise convex combination of beliefs sharing one space."""
    if len(weights) != len(beliefs):
        raise ValueError("one weight per belief required")
    if not beliefs:
        raise ValueError("empty mixture")
    ws = [frac(w) for w in weights]
    if any(w < 0 for w in ws):
        raise ValueError("negative mixture weight")
    if sum(ws) != 1:
        raise ValueError(f"mixture weights sum to {sum(ws)}, expected 1")
    space = beliefs[0].space
    for b in beliefs[1:]:
        if b.space != space:
            raise ValueError("mixture components live on different spaces")
    masses = [Fraction(0)] * space.size
    for w, b in zip(ws, beliefs):
        if w == 0:
            continue
        for f, n in enumerate(b.nums):
            if n:
                masses[f] += w * Fraction(n, b.den)
    return Belief.from_fractions(space, masses)
