"""Seeded random evidence, shared by the oracle check, the benchmarks and the tests."""

from typing import List, Optional, Tuple

import numpy as np

from src.core import Frame, MassFunction, make_frame
from src.dichotomous import DichotomousMass
from src.triplet import DISJOINT, EQUAL, ONE_SHARED, TripletMass

# smallest frame each overlap case can be drawn on
MIN_FRAME_SIZE = {EQUAL: 2, ONE_SHARED: 3, DISJOINT: 4}


def random_frame(size: int) -> Frame:
    return make_frame([f"h{i}" for i in range(size)])


def random_triplet_masses(
    rng: np.random.Generator, min_ignorance: float = 0.0
) -> Tuple[float, float]:
    """Draws (m1, m2) with m1 >= m2 and m1 + m2 <= 1 - min_ignorance."""
    masses = rng.dirichlet(np.ones(3)) * (1.0 - min_ignorance)
    high, low = float(max(masses[0], masses[1])), float(min(masses[0], masses[1]))
    return high, low


def random_triplet(
    rng: np.random.Generator,
    frame: Frame,
    focuses: Optional[Tuple[int, int]] = None,
    min_ignorance: float = 0.0,
) -> TripletMass:
    """
    Draws a triplet. When focuses is given, its first entry becomes a1.
    """
    if focuses is None:
        a1, a2 = (int(i) for i in rng.choice(frame.size, 2, replace=False))
    else:
        a1, a2 = focuses
    m1, m2 = random_triplet_masses(rng, min_ignorance)
    return TripletMass.from_masses(frame, a1, a2, m1, m2)


def _placed(rng: np.random.Generator, shared: int, other: int) -> Tuple[int, int]:
    """The two focuses in random order, so that the shared one may be a1 or a2."""
    return (shared, other) if rng.random() < 0.5 else (other, shared)


def _with_roles(
    rng: np.random.Generator, frame: Frame, focuses: Tuple[int, int]
) -> TripletMass:
    """A random triplet on the two focuses; which one becomes a1 follows the drawn masses."""
    high, low = random_triplet_masses(rng)
    first, second = _placed(rng, *focuses)
    return TripletMass.from_masses(frame, first, second, high, low)


def random_triplet_pair(
    rng: np.random.Generator, frame: Frame, case: str
) -> Tuple[TripletMass, TripletMass]:
    """
    Draws two triplets whose focuses overlap as requested.

    Args:
        * rng (np.random.Generator): the generator
        * frame (Frame): frame with at least MIN_FRAME_SIZE[case] labels
        * case (str): one of 'equal', 'one_shared', 'disjoint'
    Returns:
        * Tuple[TripletMass, TripletMass]: the pair
    """
    assert frame.size >= MIN_FRAME_SIZE[case], f"Frame too small for case {case}"
    if case == EQUAL:
        x, y = (int(i) for i in rng.choice(frame.size, 2, replace=False))
        return _with_roles(rng, frame, (x, y)), _with_roles(rng, frame, (x, y))
    if case == ONE_SHARED:
        x, y, z = (int(i) for i in rng.choice(frame.size, 3, replace=False))
        return _with_roles(rng, frame, (x, y)), _with_roles(rng, frame, (x, z))
    if case == DISJOINT:
        x, y, u, v = (int(i) for i in rng.choice(frame.size, 4, replace=False))
        return _with_roles(rng, frame, (x, y)), _with_roles(rng, frame, (u, v))
    raise ValueError(f"Overlap case {case} not supported.")


def conflicting_triplet_pair(
    rng: np.random.Generator, frame: Frame, case: str
) -> Tuple[TripletMass, TripletMass]:
    """Draws a pair whose combinability bound equals one, i.e. totally conflicting evidence."""
    assert frame.size >= MIN_FRAME_SIZE[case], f"Frame too small for case {case}"
    if case == EQUAL:
        x, y = (int(i) for i in rng.choice(frame.size, 2, replace=False))
        return (
            TripletMass(frame, x, y, 1.0, 0.0, 0.0),
            TripletMass(frame, y, x, 1.0, 0.0, 0.0),
        )
    if case == ONE_SHARED:
        x, y, z = (int(i) for i in rng.choice(frame.size, 3, replace=False))
        m1 = float(rng.uniform(0.5, 1.0))
        return (
            TripletMass(frame, x, y, m1, 1.0 - m1, 0.0),
            TripletMass(frame, z, x, 1.0, 0.0, 0.0),
        )
    if case == DISJOINT:
        x, y, u, v = (int(i) for i in rng.choice(frame.size, 4, replace=False))
        m1 = float(rng.uniform(0.5, 1.0))
        m3 = float(rng.uniform(0.5, 1.0))
        return (
            TripletMass(frame, x, y, m1, 1.0 - m1, 0.0),
            TripletMass(frame, u, v, m3, 1.0 - m3, 0.0),
        )
    raise ValueError(f"Overlap case {case} not supported.")


def random_dichotomous(
    rng: np.random.Generator, frame: Frame, focus: int
) -> DichotomousMass:
    p, c, _ = (float(v) for v in rng.dirichlet(np.ones(3)))
    return DichotomousMass.from_pc(frame, focus, p, c)


def random_dichotomous_chain(
    rng: np.random.Generator,
    frame: Frame,
    length: int,
    focus: int,
    special: Optional[str] = None,
) -> List[DichotomousMass]:
    """
    Draws a chain of same-focus dichotomous functions.

    special='p_one' makes one random member certain for the focus, special='c_one' makes one
    certain against it.
    """
    chain = [random_dichotomous(rng, frame, focus) for _ in range(length)]
    if special is not None:
        position = int(rng.integers(length))
        if special == "p_one":
            chain[position] = DichotomousMass(frame, focus, 1.0, 0.0, 0.0)
        elif special == "c_one":
            chain[position] = DichotomousMass(frame, focus, 0.0, 1.0, 0.0)
        else:
            raise ValueError(f"Special case {special} not supported.")
    return chain


def low_conflict_dichotomous_chain(
    rng: np.random.Generator, frame: Frame, length: int, focus: int
) -> List[DichotomousMass]:
    """
    A chain whose K^-1 stays above 0.9 however long it is, since the total mass against the
    focus stays below 0.1.
    """
    c = rng.uniform(0.0, 0.1 / length, size=length)
    p = rng.uniform(0.1, 0.9, size=length) * (1.0 - c)
    return [
        DichotomousMass.from_pc(frame, focus, float(p_i), float(c_i))
        for p_i, c_i in zip(p, c)
    ]


def random_mass_function(
    rng: np.random.Generator,
    frame: Frame,
    num_focal: Optional[int] = None,
    full_support: bool = False,
) -> MassFunction:
    """
    Draws a general mass function.

    Args:
        * rng (np.random.Generator): the generator
        * frame (Frame): the frame
        * num_focal (Optional[int]): number of distinct non-empty focal elements, drawn in
            [1, 6] when None
        * full_support (bool): give every non-empty subset a positive mass
    Returns:
        * MassFunction: the mass function
    """
    num_subsets = frame.full_mask
    if full_support:
        masks = np.arange(1, num_subsets + 1)
    else:
        if num_focal is None:
            num_focal = int(rng.integers(1, 7))
        num_focal = min(num_focal, num_subsets)
        masks = rng.choice(np.arange(1, num_subsets + 1), num_focal, replace=False)
    weights = rng.dirichlet(np.ones(len(masks)))
    focal = {int(mask): float(weight) for mask, weight in zip(masks, weights) if weight > 0}
    total = sum(focal.values())
    return MassFunction(frame, {mask: mass / total for mask, mass in focal.items()})
