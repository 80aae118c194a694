""" Implements an abstract base class for the methods that fuse an item's classifier scores. """

from abc import ABCMeta, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.core import Frame, MassFunction, iter_indexes
from src.triplet import TripletMass, outstanding


@dataclass(frozen=True)
class FusedEvidence:
    """
    Combined evidence for one item.

    fast_steps counts pairwise combinations done with a linear-time formula, general_steps
    those done with the general orthogonal sum.
    """

    mass: MassFunction
    fast_steps: int
    general_steps: int
    triplet: Optional[TripletMass] = None


@dataclass(frozen=True)
class ItemDecision:
    item_id: str
    decision: Optional[int]
    triplet: Optional[TripletMass]
    fast_steps: int = 0
    general_steps: int = 0
    error: Optional[str] = None


def decide(m: MassFunction) -> int:
    """
    Returns the category with the largest singleton belief.

    Ties are broken by the larger plausibility, then by the lowest index.
    """
    size = m.frame.size
    beliefs = m.singleton_masses()
    plausibilities = [0.0] * size
    for mask, mass in m.masses.items():
        for index in iter_indexes(mask):
            plausibilities[index] += mass
    return max(range(size), key=lambda i: (beliefs[i], plausibilities[i], -i))


class BaseFusionMethod(metaclass=ABCMeta):
    name: str = ""

    def __init__(self, ignorance_floor: float = 0.1, oracle_max_frame_size: int = 16):
        self.ignorance_floor = ignorance_floor
        self.oracle_max_frame_size = oracle_max_frame_size

    def check_frame(self, frame: Frame) -> None:
        """Hook for methods that cannot handle every frame size."""

    @abstractmethod
    def combine_scores(self, scores: np.ndarray, frame: Frame) -> FusedEvidence:
        """
        Maps every classifier's score vector to evidence and combines the evidence.

        Args:
            * scores (np.ndarray): array of shape (num_classifiers, num_categories)
            * frame (Frame): the categories
        Returns:
            * FusedEvidence: the combined evidence for the item
        Raises:
            * NonCombinableError: when the classifiers' evidence is totally conflicting
        """
        raise NotImplementedError

    def fuse_item(self, item_id: str, scores: np.ndarray, frame: Frame) -> ItemDecision:
        fused = self.combine_scores(scores, frame)
        triplet = fused.triplet
        if triplet is None:
            triplet = outstanding(frame, fused.mass.singleton_masses())
        return ItemDecision(
            item_id,
            decide(fused.mass),
            triplet,
            fused.fast_steps,
            fused.general_steps,
        )
