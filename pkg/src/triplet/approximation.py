"""
Closed-form approximation for combining l triplets that share their first focus x and have
pairwise distinct second focuses.

With p_i, c_i and r_i the masses of {x}, {y_i} and the frame in the i-th triplet:

    X = prod_i p_i + sum_i r_i prod_{j != i} p_j + lambda
    Y = c_1 prod_{i >= 2} r_i
    T = prod_i r_i
    W = sum_{i >= 2} c_i prod_{j != i} r_j
    K^-1 = prod_i p_i + sum_i r_i prod_{j != i} (p_j + lambda) + Y + T + W

and the result is the triplet (x: K X, y_1: K Y, frame: 1 - K X - K Y), reordered so that the
larger singleton mass comes first. W is the mass the other second focuses keep in the
combination; it normalizes like the rest but ends up in the frame, since only y_1 survives.
With lambda = 0, K^-1 is exactly X + Y + T + W, and for two triplets K X and K Y are the
exact masses of {x} and {y_1}.
"""

import logging
from math import fsum
from typing import List, Sequence

from src.core import check_combinable, check_same_frame
from src.errors import ApproximationBreakdownError, FocusMismatchError

from .mass import TripletMass

logger = logging.getLogger(__name__)

RANGE_TOLERANCE = 1e-12


def _leave_one_out_products(values: List[float]) -> List[float]:
    """prod_{j != i} values[j] for every i, from a prefix and a suffix pass."""
    n = len(values)
    out = [1.0] * n
    running = 1.0
    for i in range(n):
        out[i] = running
        running *= values[i]
    running = 1.0
    for i in range(n - 1, -1, -1):
        out[i] *= running
        running *= values[i]
    return out


def approx_combine(ts: Sequence[TripletMass], lam: float = 0.0) -> TripletMass:
    """
    Approximates the combination of l >= 2 triplets sharing their first focus.

    Args:
        * ts (Sequence[TripletMass]): triplets with a common a1 and pairwise distinct a2
        * lam (float): the additive constant of the formulas, 0 by default
    Returns:
        * TripletMass: the approximate combined triplet
    Raises:
        * FocusMismatchError: when the focus layout is not the one the formulas assume
        * ApproximationBreakdownError: when the formulas leave [0, 1]
    """
    if len(ts) < 2:
        raise FocusMismatchError("The approximation combines at least two triplets")
    check_same_frame(*ts)

    x = ts[0].a1
    seconds = [t.a2 for t in ts]
    if any(t.a1 != x for t in ts):
        raise FocusMismatchError("All triplets must share the same first focus")
    if len(set(seconds)) != len(seconds):
        raise FocusMismatchError("Second focuses must be pairwise distinct")

    p = [t.m1 for t in ts]
    r = [t.mt for t in ts]

    prod_p = 1.0
    prod_r = 1.0
    for p_i, r_i in zip(p, r):
        prod_p *= p_i
        prod_r *= r_i

    without_p = _leave_one_out_products(p)
    without_p_shifted = _leave_one_out_products([p_i + lam for p_i in p])
    single_r = sum(r_i * rest for r_i, rest in zip(r, without_p))
    single_r_shifted = sum(r_i * rest for r_i, rest in zip(r, without_p_shifted))

    without_r = _leave_one_out_products(r)
    x_term = prod_p + single_r + lam
    y_term = ts[0].m2 * without_r[0]
    t_term = prod_r
    w_term = fsum(t.m2 * rest for t, rest in zip(ts[1:], without_r[1:]))
    k_inv = fsum((prod_p, single_r_shifted, y_term, t_term, w_term))
    check_combinable(k_inv)

    m_x = x_term / k_inv
    m_y = y_term / k_inv
    m_t = 1.0 - m_x - m_y
    for name, value in (("{x}", m_x), ("{y}", m_y), ("frame", m_t)):
        if not -RANGE_TOLERANCE <= value <= 1.0 + RANGE_TOLERANCE:
            raise ApproximationBreakdownError(
                f"Approximate mass of {name} is {value:.6g} (lambda={lam}), outside [0, 1]"
            )
    m_x = min(max(m_x, 0.0), 1.0)
    m_y = min(max(m_y, 0.0), 1.0)
    m_t = max(m_t, 0.0)

    frame = ts[0].frame
    if m_y > m_x:
        return TripletMass(frame, seconds[0], x, m_y, m_x, m_t)
    return TripletMass(frame, x, seconds[0], m_x, m_y, m_t)
