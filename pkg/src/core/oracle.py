"""
Brute-force orthogonal sum (Dempster's rule) over general mass functions.

Every fast path elsewhere in the package is checked against combine_pair.
"""

import logging
from math import fsum
from typing import Dict, Optional, Sequence

import numpy as np

from src.errors import FrameMismatchError, NonCombinableError

from .mass import MassFunction

logger = logging.getLogger(__name__)

# two functions are totally conflicting when K^-1 falls to this value
COMBINABILITY_TOLERANCE = 1e-12

# masses below this value after normalization are dropped as rounding dust
DUST_THRESHOLD = 1e-15

# the focal-pair table is evaluated with numpy above this many pairs
VECTORIZE_MIN_PAIRS = 1 << 16
VECTORIZE_MAX_FRAME_SIZE = 24
_VECTORIZE_CHUNK_PAIRS = 1 << 22


def check_same_frame(*ms) -> None:
    frame = ms[0].frame
    for m in ms[1:]:
        if m.frame is not frame:
            raise FrameMismatchError(
                f"Cannot combine evidence over {frame} with evidence over {m.frame}"
            )


def check_combinable(normalization: float, case: Optional[str] = None) -> None:
    """Raises NonCombinableError when the normalization constant K^-1 is (numerically) zero."""
    if normalization <= COMBINABILITY_TOLERANCE:
        raise NonCombinableError(
            f"Totally conflicting evidence (K^-1 = {normalization:.3g})",
            case=case,
            normalization=normalization,
        )


def conflict(m1: MassFunction, m2: MassFunction) -> float:
    """
    Returns the mass the product measure assigns to disjoint focal pairs, i.e. 1 - K^-1.

    Args:
        * m1 (MassFunction): first mass function
        * m2 (MassFunction): second mass function, over the same frame
    Returns:
        * float: the conflict in [0, 1]
    """
    check_same_frame(m1, m2)
    items2 = list(m2.masses.items())
    return fsum(
        mass1 * mass2
        for mask1, mass1 in m1.masses.items()
        for mask2, mass2 in items2
        if mask1 & mask2 == 0
    )


def normalization(m1: MassFunction, m2: MassFunction) -> float:
    """K^-1 of the pair: the total product mass landing on non-empty intersections."""
    check_same_frame(m1, m2)
    items2 = list(m2.masses.items())
    return fsum(
        mass1 * mass2
        for mask1, mass1 in m1.masses.items()
        for mask2, mass2 in items2
        if mask1 & mask2
    )


def _intersection_table(m1: MassFunction, m2: MassFunction) -> Dict[int, float]:
    acc: Dict[int, float] = {}
    items2 = list(m2.masses.items())
    for mask1, mass1 in m1.masses.items():
        for mask2, mass2 in items2:
            mask = mask1 & mask2
            acc[mask] = acc.get(mask, 0.0) + mass1 * mass2
    return acc


def _intersection_table_numpy(m1: MassFunction, m2: MassFunction) -> Dict[int, float]:
    n_subsets = 1 << m1.frame.size
    masks1 = np.fromiter(m1.masses.keys(), dtype=np.int64, count=len(m1))
    weights1 = np.fromiter(m1.masses.values(), dtype=np.float64, count=len(m1))
    masks2 = np.fromiter(m2.masses.keys(), dtype=np.int64, count=len(m2))
    weights2 = np.fromiter(m2.masses.values(), dtype=np.float64, count=len(m2))

    acc = np.zeros(n_subsets, dtype=np.float64)
    rows_per_chunk = max(1, _VECTORIZE_CHUNK_PAIRS // len(masks2))
    for start in range(0, len(masks1), rows_per_chunk):
        stop = start + rows_per_chunk
        intersections = np.bitwise_and.outer(masks1[start:stop], masks2)
        products = np.multiply.outer(weights1[start:stop], weights2)
        acc += np.bincount(
            intersections.ravel(), weights=products.ravel(), minlength=n_subsets
        )

    nonzero = np.flatnonzero(acc)
    return dict(zip(nonzero.tolist(), acc[nonzero].tolist()))


def combine_pair(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """
    Dempster's rule of combination.

    Args:
        * m1 (MassFunction): first mass function
        * m2 (MassFunction): second mass function, over the same frame
    Returns:
        * MassFunction: the normalized orthogonal sum m1 ⊕ m2
    Raises:
        * NonCombinableError: when the two functions are totally conflicting
    """
    check_same_frame(m1, m2)

    if (
        len(m1) * len(m2) >= VECTORIZE_MIN_PAIRS
        and m1.frame.size <= VECTORIZE_MAX_FRAME_SIZE
    ):
        table = _intersection_table_numpy(m1, m2)
    else:
        table = _intersection_table(m1, m2)

    table.pop(0, None)
    k_inv = fsum(table.values())
    check_combinable(k_inv)

    combined = {mask: mass / k_inv for mask, mass in table.items()}
    if any(mass < DUST_THRESHOLD for mass in combined.values()):
        combined = {
            mask: mass for mask, mass in combined.items() if mass >= DUST_THRESHOLD
        }
        total = fsum(combined.values())
        combined = {mask: mass / total for mask, mass in combined.items()}

    return MassFunction.from_masks(m1.frame, combined)


def combine_all(ms: Sequence[MassFunction]) -> MassFunction:
    """
    Left fold of combine_pair over ms.

    Raises:
        * NonCombinableError: carrying the index of the input that could not be folded in
    """
    assert len(ms) > 0, "combine_all needs at least one mass function"
    check_same_frame(*ms)

    result = ms[0]
    for step, m in enumerate(ms[1:], start=1):
        try:
            result = combine_pair(result, m)
        except NonCombinableError as err:
            raise err.at_step(step) from err
    return result
