import pytest
from hypothesis import strategies as st

from bayespol import Belief, LikelihoodFn, StateSpace, StateSubset

GRID_2X2 = StateSpace.grid(2, 2)
GRID_2X3 = StateSpace.grid(2, 3)
GRID_3X3 = StateSpace.grid(3, 3)

# Mirror-image priors on the 2x2 grid; the workhorse pair for most examples.
MIRROR_LOW = Belief.from_fractions(GRID_2X2, ["3/8", "1/4", "1/4", "1/8"])
MIRROR_HIGH = Belief.from_fractions(GRID_2X2, ["1/8", "1/4", "1/4", "3/8"])
DIAGONAL = StateSubset.from_states(GRID_2X2, [(0, 0), (1, 1)])
OFF_DIAGONAL = StateSubset.from_states(GRID_2X2, [(0, 1), (1, 0)])

# Likelihood with distinct values at the two extremes and zeros between.
CORNER_LIKELIHOOD = LikelihoodFn.from_fractions(GRID_2X2, ["1", "0", "0", "1/2"])


@pytest.fixture
def mirror_pair():
    return MIRROR_LOW, MIRROR_HIGH


def beliefs(space, full_support=False, max_weight=12):
    minimum = 1 if full_support else 0
    return st.lists(
        st.integers(min_value=minimum, max_value=max_weight),
        min_size=space.size,
        max_size=space.size,
    ).filter(lambda w: sum(w) > 0).map(lambda w: Belief.from_weights(space, w))


def subsets(space, proper=True):
    lo = 1
    hi = space.full_mask - 1 if proper else space.full_mask
    return st.integers(min_value=lo, max_value=hi).map(
        lambda m: StateSubset(space, m)
    )


def likelihoods(space, max_den=4):
    return st.lists(
        st.integers(min_value=0, max_value=max_den),
        min_size=space.size,
        max_size=space.size,
    ).filter(lambda v: any(v)).map(
        lambda v: LikelihoodFn(space, tuple(v), max_den)
    )
