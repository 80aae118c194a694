""" General mass functions and the evidential functions derived from them """

from math import fsum
from typing import Dict, List, Mapping, Tuple, Union

from src.errors import FrameMismatchError, InvalidMassError

from .frame import Frame, SubsetRef

# masses must sum to one within this tolerance
SUM_TOLERANCE = 1e-9


class MassFunction:
    """
    A basic probability assignment over the subsets of a frame.

    Focal elements are stored sparsely as a mapping from subset bitmask to mass. Zero masses
    are never stored and the empty set never carries mass.
    """

    __slots__ = ("frame", "_masses")

    def __init__(
        self,
        frame: Frame,
        focal: Mapping[Union[SubsetRef, int], float],
    ):
        """
        Args:
            * frame (Frame): The frame of discernment
            * focal (Mapping[Union[SubsetRef, int], float]): Mass per subset, keyed either by
                SubsetRef or by raw bitmask. Repeated subsets are summed.
        """
        masses: Dict[int, float] = {}
        for subset, mass in focal.items():
            if isinstance(subset, SubsetRef):
                if subset.frame is not frame:
                    raise FrameMismatchError(
                        f"Subset {subset} does not belong to {frame}"
                    )
                mask = subset.mask
            else:
                mask = int(subset)
                if mask < 0 or mask & ~frame.full_mask:
                    raise InvalidMassError(f"Bitmask {mask:b} does not fit {frame}")

            mass = float(mass)
            if not mass >= 0.0:
                raise InvalidMassError(f"Negative or undefined mass {mass} on {mask:b}")
            if mass == 0.0:
                continue
            if mass > 1.0 + SUM_TOLERANCE:
                raise InvalidMassError(f"Mass {mass} exceeds one")
            if mask == 0:
                raise InvalidMassError("The empty set cannot carry mass")
            masses[mask] = masses.get(mask, 0.0) + mass

        total = fsum(masses.values())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidMassError(f"Masses sum to {total}, expected 1")

        self.frame = frame
        self._masses = masses

    @classmethod
    def from_masks(cls, frame: Frame, masses: Dict[int, float]) -> "MassFunction":
        """Wraps an already validated bitmask->mass mapping without copying or checking it."""
        m = cls.__new__(cls)
        m.frame = frame
        m._masses = masses
        return m

    @property
    def masses(self) -> Mapping[int, float]:
        """The focal elements keyed by bitmask. Callers must not mutate the mapping."""
        return self._masses

    @property
    def focal(self) -> Dict[SubsetRef, float]:
        return {SubsetRef(self.frame, mask): mass for mask, mass in self._masses.items()}

    def focal_elements(self) -> List[SubsetRef]:
        return [SubsetRef(self.frame, mask) for mask in sorted(self._masses)]

    def mass(self, subset: SubsetRef) -> float:
        _check_frame(self, subset)
        return self._masses.get(subset.mask, 0.0)

    def singleton_masses(self) -> List[float]:
        """Returns m({i}) for every index i of the frame."""
        return [self._masses.get(1 << index, 0.0) for index in range(self.frame.size)]

    def items(self) -> List[Tuple[SubsetRef, float]]:
        return [(SubsetRef(self.frame, mask), self._masses[mask]) for mask in sorted(self._masses)]

    def is_vacuous(self) -> bool:
        return list(self._masses) == [self.frame.full_mask]

    def __len__(self) -> int:
        return len(self._masses)

    def __repr__(self) -> str:
        body = ", ".join(f"{subset}: {mass:.6g}" for subset, mass in self.items())
        return f"MassFunction({body})"


def _check_frame(m: MassFunction, subset: SubsetRef) -> None:
    if subset.frame is not m.frame:
        raise FrameMismatchError(f"Subset {subset} is not defined over {m.frame}")


def vacuous(frame: Frame) -> MassFunction:
    """Total ignorance: all mass on the whole frame."""
    return MassFunction.from_masks(frame, {frame.full_mask: 1.0})


def belief(m: MassFunction, a: SubsetRef) -> float:
    """
    Total mass committed to subsets of a.

    Args:
        * m (MassFunction): The mass function
        * a (SubsetRef): A subset of m's frame
    Returns:
        * float: bel(a); bel of the whole frame is exactly 1
    """
    _check_frame(m, a)
    if a.is_theta():
        return 1.0
    outside = ~a.mask
    return fsum(mass for mask, mass in m.masses.items() if mask & outside == 0)


def plausibility(m: MassFunction, a: SubsetRef) -> float:
    """Total mass of the focal elements that intersect a; equals 1 - bel(complement of a)."""
    _check_frame(m, a)
    return fsum(mass for mask, mass in m.masses.items() if mask & a.mask)


def commonality(m: MassFunction, a: SubsetRef) -> float:
    _check_frame(m, a)
    return fsum(mass for mask, mass in m.masses.items() if mask & a.mask == a.mask)


def doubt(m: MassFunction, a: SubsetRef) -> float:
    _check_frame(m, a)
    return belief(m, a.complement())
