""" Triplet mass functions and the outstanding rule that focuses evidence onto them """

from dataclasses import dataclass
from typing import Dict, Mapping, Sequence, Tuple

from src.core import Frame, MassFunction
from src.errors import FocusMismatchError, FrameSizeError, InvalidMassError

SUM_TOLERANCE = 1e-9

# (a1, a2, m1, m2, mt) of a triplet, unvalidated
Focused = Tuple[int, int, float, float, float]


def _residual(*masses: float) -> float:
    """1 minus the given masses, with rounding below zero clamped away."""
    residual = 1.0 - sum(masses)
    return residual if residual > 0.0 else 0.0


@dataclass(frozen=True)
class TripletMass:
    """
    Evidence committed to two singletons {a1}, {a2} and the whole frame.

    a1 always carries the larger singleton mass (m1 >= m2).
    """

    frame: Frame
    a1: int
    a2: int
    m1: float
    m2: float
    mt: float

    def __post_init__(self):
        size = self.frame.size
        if size < 2:
            raise FrameSizeError("Triplet evidence needs a frame of at least two labels")
        if self.a1 == self.a2:
            raise FocusMismatchError(
                f"Triplet focuses must differ, got {self.frame.label(self.a1)!r} twice"
            )
        for index in (self.a1, self.a2):
            if not 0 <= index < size:
                raise FocusMismatchError(f"Focus index {index} out of range for {self.frame}")
        for name in ("m1", "m2", "mt"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidMassError(f"{name}={value} is outside [0, 1]")
        if abs(self.m1 + self.m2 + self.mt - 1.0) > SUM_TOLERANCE:
            raise InvalidMassError(
                f"m1 + m2 + mt = {self.m1 + self.m2 + self.mt}, expected 1"
            )
        if self.m1 < self.m2:
            raise InvalidMassError(
                f"The first focus must carry the larger mass, got m1={self.m1} < m2={self.m2}"
            )

    @classmethod
    def from_masses(
        cls, frame: Frame, a1: int, a2: int, m1: float, m2: float
    ) -> "TripletMass":
        """Builds the triplet with the ignorance implied as 1 - m1 - m2."""
        return cls(frame, a1, a2, m1, m2, _residual(m1, m2))

    @classmethod
    def vacuous(cls, frame: Frame, a1: int = 0, a2: int = 1) -> "TripletMass":
        return cls(frame, a1, a2, 0.0, 0.0, 1.0)

    @property
    def focuses(self) -> Tuple[int, int]:
        return (self.a1, self.a2)

    def mass_of(self, index: int) -> float:
        """Mass of the singleton {index}, zero when index is not one of the focuses."""
        if index == self.a1:
            return self.m1
        if index == self.a2:
            return self.m2
        return 0.0

    def is_vacuous(self) -> bool:
        return self.m1 == 0.0 and self.m2 == 0.0


def _tie_key(index: int, mass: float, prefer: Sequence[int]) -> Tuple[float, int, int]:
    # equal positive masses go to the lowest index, zero masses to the earliest preferred index
    if mass <= 0.0 and index in prefer:
        return (mass, 1, -prefer.index(index))
    return (mass, 0, -index)


def _top_two(masses: Mapping[int, float], prefer: Sequence[int] = ()) -> Tuple[int, int]:
    """Indexes of the largest and second largest masses."""
    ranked = sorted(masses, key=lambda i: _tie_key(i, masses[i], prefer), reverse=True)
    return ranked[0], ranked[1]


def refocus_masses(singletons: Mapping[int, float]) -> Focused:
    """
    Keeps the two largest singletons of an intermediate and moves the rest into the frame.

    Zero-mass ties go to the singleton listed first in singletons.
    """
    first, second = _top_two(singletons, list(singletons))
    m1, m2 = singletons[first], singletons[second]
    return first, second, m1, m2, _residual(m1, m2)


def outstanding(
    frame: Frame, singleton_masses: Sequence[float], prefer: Sequence[int] = ()
) -> TripletMass:
    """
    Applies the outstanding rule: keeps the two largest singleton masses and pools everything
    else into the whole frame.

    Args:
        * frame (Frame): The frame of discernment, at least two labels
        * singleton_masses (Sequence[float]): m({i}) for every index i of the frame
        * prefer (Sequence[int]): indexes that win ties at zero mass, earliest first; passing
            a triplet's (a1, a2) keeps a zero-mass a2 when its evidence is focused again
    Returns:
        * TripletMass: a1 is the argmax, a2 the runner-up, other ties broken by the lowest index
    """
    if frame.size < 2:
        raise FrameSizeError("The outstanding rule needs a frame of at least two labels")
    if len(singleton_masses) != frame.size:
        raise InvalidMassError(
            f"Expected {frame.size} singleton masses, got {len(singleton_masses)}"
        )
    if any(not mass >= 0.0 for mass in singleton_masses):
        raise InvalidMassError("Singleton masses must be non-negative")
    if sum(singleton_masses) > 1.0 + SUM_TOLERANCE:
        raise InvalidMassError(f"Singleton masses sum to {sum(singleton_masses)} > 1")

    masses = {index: float(mass) for index, mass in enumerate(singleton_masses)}
    a1, a2 = _top_two(masses, list(prefer))
    m1, m2 = masses[a1], masses[a2]
    return TripletMass(frame, a1, a2, m1, m2, _residual(m1, m2))


@dataclass(frozen=True)
class MultiFocusIntermediate:
    """
    Exact result of combining two triplets, before it is focused back onto a triplet.

    singletons holds every singleton that took part in the combination, including those that
    ended up with zero mass, listing the first triplet's focuses before the second's.
    """

    frame: Frame
    singletons: Dict[int, float]
    mt: float

    def __post_init__(self):
        if not 2 <= len(self.singletons) <= 4:
            raise FocusMismatchError(
                f"An intermediate holds 2 to 4 singletons, got {len(self.singletons)}"
            )
        if any(not mass >= 0.0 for mass in self.singletons.values()) or self.mt < 0.0:
            raise InvalidMassError("Intermediate masses must be non-negative")
        total = sum(self.singletons.values()) + self.mt
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidMassError(f"Intermediate masses sum to {total}, expected 1")

    def refocus(self) -> TripletMass:
        """Keeps the two largest singletons and moves the rest into the frame mass."""
        return TripletMass(self.frame, *refocus_masses(self.singletons))

    def to_general(self) -> MassFunction:
        focal = {1 << index: mass for index, mass in self.singletons.items() if mass > 0.0}
        if self.mt > 0.0:
            focal[self.frame.full_mask] = self.mt
        return MassFunction.from_masks(self.frame, focal)


def to_general(t: TripletMass) -> MassFunction:
    focal = {1 << t.a1: t.m1, 1 << t.a2: t.m2, t.frame.full_mask: t.mt}
    return MassFunction.from_masks(
        t.frame, {mask: mass for mask, mass in focal.items() if mass > 0.0}
    )
