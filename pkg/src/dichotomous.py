"""
Dichotomous mass functions and their linear-time combination when they share a focus.

A dichotomous function over focus x only commits mass to {x} (p), to its complement (c) and to
the whole frame (r).
"""

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

from src.core import (
    Frame,
    MassFunction,
    check_combinable,
    check_same_frame,
    combine_all,
)
from src.errors import (
    EvidenceError,
    FocusMismatchError,
    FrameSizeError,
    InvalidMassError,
)

SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DichotomousMass:
    frame: Frame
    focus: int
    p: float
    c: float
    r: float

    def __post_init__(self):
        if self.frame.size < 2:
            raise FrameSizeError("Dichotomous evidence needs a frame of at least two labels")
        if not 0 <= self.focus < self.frame.size:
            raise FocusMismatchError(f"Focus index {self.focus} out of range for {self.frame}")
        for name in ("p", "c", "r"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidMassError(f"{name}={value} is outside [0, 1]")
        if abs(self.p + self.c + self.r - 1.0) > SUM_TOLERANCE:
            raise InvalidMassError(
                f"p + c + r = {self.p + self.c + self.r}, expected 1"
            )

    @classmethod
    def from_pc(cls, frame: Frame, focus: int, p: float, c: float) -> "DichotomousMass":
        """Builds the function with the residual r = 1 - p - c."""
        r = 1.0 - p - c
        if -SUM_TOLERANCE <= r < 0.0:
            r = 0.0
        return cls(frame, focus, p, c, r)

    @classmethod
    def vacuous(cls, frame: Frame, focus: int) -> "DichotomousMass":
        return cls(frame, focus, 0.0, 0.0, 1.0)

    @classmethod
    def from_general(cls, m: MassFunction, focus: int) -> "DichotomousMass":
        """Reads a general mass function whose focal elements are {x}, its complement and Θ."""
        full = m.frame.full_mask
        x = 1 << focus
        allowed = {x, full & ~x, full}
        extra = [mask for mask in m.masses if mask not in allowed]
        if extra:
            raise FocusMismatchError(
                f"{m} is not dichotomous with focus {m.frame.label(focus)!r}"
            )
        p = m.masses.get(x, 0.0)
        c = m.masses.get(full & ~x, 0.0)
        r = m.masses.get(full, 0.0)
        return cls(m.frame, focus, p, c, r)

    @property
    def d(self) -> float:
        """Mass not committed to the focus, 1 - p."""
        return self.c + self.r


def to_general(d: DichotomousMass) -> MassFunction:
    full = d.frame.full_mask
    x = 1 << d.focus
    focal = {x: d.p, full & ~x: d.c, full: d.r}
    return MassFunction.from_masks(
        d.frame, {mask: mass for mask, mass in focal.items() if mass > 0.0}
    )


def _check_pool(ds: Sequence[DichotomousMass]) -> None:
    if len(ds) == 0:
        raise EvidenceError("At least one dichotomous mass function is required")
    check_same_frame(*ds)
    focus = ds[0].focus
    for i, d in enumerate(ds):
        if d.focus != focus:
            raise FocusMismatchError(
                f"Item {i} has focus {d.frame.label(d.focus)!r}, "
                f"expected {d.frame.label(focus)!r}"
            )


def _telescoping_terms(ds: Sequence[DichotomousMass]) -> Tuple[float, float, float]:
    """
    Returns the unnormalized masses of {x}, its complement and Θ for a repeated-focus pool.

    The {x} term is sum_k (prod_{i<k} r_i) p_k prod_{i>k} (p_i + r_i), the complement term the
    same with c in place of p, and the Θ term prod_i r_i. Both suffix products are built in a
    single reverse pass.
    """
    n = len(ds)
    suffix_p = [1.0] * n
    suffix_c = [1.0] * n
    running_p = 1.0
    running_c = 1.0
    for k in range(n - 1, -1, -1):
        suffix_p[k] = running_p
        suffix_c[k] = running_c
        running_p *= ds[k].p + ds[k].r
        running_c *= ds[k].c + ds[k].r

    p_term = 0.0
    c_term = 0.0
    prefix_r = 1.0
    for k, d in enumerate(ds):
        p_term += prefix_r * d.p * suffix_p[k]
        c_term += prefix_r * d.c * suffix_c[k]
        prefix_r *= d.r
    return p_term, c_term, prefix_r


def normalization_repeated(ds: Sequence[DichotomousMass]) -> float:
    """
    Returns K^-1 for combining dichotomous functions that share a focus.

    Args:
        * ds (Sequence[DichotomousMass]): one or more functions with the same frame and focus
    Returns:
        * float: K^-1; zero means the pool is not combinable
    """
    _check_pool(ds)
    if len(ds) == 1:
        return 1.0

    for i, d in enumerate(ds):
        if d.p == 1.0:
            result = 1.0
            for j, other in enumerate(ds):
                if j != i:
                    result *= 1.0 - other.c
            return result
    for i, d in enumerate(ds):
        if d.c == 1.0:
            result = 1.0
            for j, other in enumerate(ds):
                if j != i:
                    result *= other.d
            return result

    p_term, c_term, t_term = _telescoping_terms(ds)
    return p_term + c_term + t_term


def combine_repeated(ds: Sequence[DichotomousMass]) -> DichotomousMass:
    """
    Combines dichotomous functions with the same focus in time linear in their number.

    Args:
        * ds (Sequence[DichotomousMass]): one or more functions with the same frame and focus
    Returns:
        * DichotomousMass: the orthogonal sum, again dichotomous with the same focus
    Raises:
        * NonCombinableError: when K^-1 is zero
    """
    _check_pool(ds)
    if len(ds) == 1:
        return ds[0]

    p_term, c_term, t_term = _telescoping_terms(ds)
    k_inv = p_term + c_term + t_term
    check_combinable(k_inv)

    first = ds[0]
    return DichotomousMass(
        first.frame, first.focus, p_term / k_inv, c_term / k_inv, t_term / k_inv
    )


def combine_pools(
    ds: Sequence[DichotomousMass],
) -> Union[DichotomousMass, MassFunction]:
    """
    Splits the functions into pools of repeated focuses, combines each pool in linear time and
    combines the pool results with the general rule.

    Returns:
        * Union[DichotomousMass, MassFunction]: a DichotomousMass when every input shares one
            focus, otherwise the general mass function of the combined pools
    """
    if len(ds) == 0:
        raise EvidenceError("At least one dichotomous mass function is required")
    check_same_frame(*ds)

    pools: Dict[int, List[DichotomousMass]] = {}
    for d in ds:
        pools.setdefault(d.focus, []).append(d)

    combined = [combine_repeated(pool) for pool in pools.values()]
    if len(combined) == 1:
        return combined[0]
    return combine_all([to_general(d) for d in combined])
