""" Score matrices and the mappings from a classifier's score vector to evidence """

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from src.core import Frame
from src.dichotomous import DichotomousMass
from src.errors import EvidenceError, InvalidMassError
from src.triplet import TripletMass, outstanding


@dataclass(frozen=True)
class ScoreMatrix:
    """
    Scores of every classifier for every item.

    scores has shape (num_items, num_classifiers, num_categories); scores[i, j] is the score
    vector classifier_ids[j] produced for item_ids[i].
    """

    categories: Frame
    item_ids: List[str]
    classifier_ids: List[str]
    scores: np.ndarray

    def __post_init__(self):
        expected = (len(self.item_ids), len(self.classifier_ids), self.categories.size)
        if self.scores.shape != expected:
            raise EvidenceError(
                f"Score array has shape {self.scores.shape}, expected {expected}"
            )
        if not np.all(np.isfinite(self.scores)) or np.any(self.scores < 0):
            raise InvalidMassError("Scores must be finite and non-negative")
        if len(set(self.item_ids)) != len(self.item_ids):
            raise EvidenceError("Item ids must be unique")
        if len(set(self.classifier_ids)) != len(self.classifier_ids):
            raise EvidenceError("Classifier ids must be unique")

    @property
    def num_items(self) -> int:
        return len(self.item_ids)

    @property
    def num_classifiers(self) -> int:
        return len(self.classifier_ids)

    def select_classifiers(self, classifier_indices: Sequence[int]) -> "ScoreMatrix":
        """Returns the matrix restricted to a subset of the classifiers, in the given order."""
        indices = list(classifier_indices)
        return ScoreMatrix(
            self.categories,
            list(self.item_ids),
            [self.classifier_ids[j] for j in indices],
            self.scores[:, indices, :],
        )


def _normalized(scores: Sequence[float], frame: Frame) -> np.ndarray:
    vector = np.asarray(scores, dtype=np.float64)
    if vector.shape != (frame.size,):
        raise InvalidMassError(
            f"Score vector has {vector.size} entries, the frame has {frame.size} categories"
        )
    if np.any(vector < 0) or not np.all(np.isfinite(vector)):
        raise InvalidMassError("Scores must be finite and non-negative")
    total = vector.sum()
    if total <= 0.0:
        raise InvalidMassError("Cannot build evidence from an all-zero score vector")
    return vector / total


def scores_to_triplet(scores: Sequence[float], frame: Frame) -> TripletMass:
    """
    Normalizes a score vector and focuses it onto its two best categories.

    Args:
        * scores (Sequence[float]): one non-negative score per category, not all zero
        * frame (Frame): the categories
    Returns:
        * TripletMass: the two largest normalized scores, the rest as ignorance
    """
    return outstanding(frame, _normalized(scores, frame).tolist())


def _normalized_rows(scores: np.ndarray, frame: Frame) -> np.ndarray:
    matrix = np.asarray(scores, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[1] != frame.size:
        raise InvalidMassError(
            f"Expected score vectors of {frame.size} entries, got an array of shape "
            f"{matrix.shape}"
        )
    if not np.all(np.isfinite(matrix)) or np.any(matrix < 0):
        raise InvalidMassError("Scores must be finite and non-negative")
    totals = matrix.sum(axis=1, keepdims=True)
    if np.any(totals <= 0.0):
        raise InvalidMassError("Cannot build evidence from an all-zero score vector")
    return matrix / totals


def scores_to_triplets(scores: np.ndarray, frame: Frame) -> List[TripletMass]:
    """
    scores_to_triplet over every row of a (num_classifiers, num_categories) array at once.

    Ties go to the lowest index, as in the outstanding rule.
    """
    normalized = _normalized_rows(scores, frame)
    rows = np.arange(normalized.shape[0])
    first = np.argmax(normalized, axis=1)
    rest = normalized.copy()
    rest[rows, first] = -1.0
    second = np.argmax(rest, axis=1)
    return [
        TripletMass.from_masses(frame, a1, a2, m1, m2)
        for a1, a2, m1, m2 in zip(
            first.tolist(),
            second.tolist(),
            normalized[rows, first].tolist(),
            normalized[rows, second].tolist(),
        )
    ]


def scores_to_dichotomous(
    scores: Sequence[float], frame: Frame, ignorance_floor: float = 0.1
) -> DichotomousMass:
    """
    Maps a score vector to dichotomous evidence on its best category.

    The focus gets its normalized score p. The mass of all other categories, scaled by
    (1 - ignorance_floor), goes against the focus, and the remainder is ignorance.

    Args:
        * scores (Sequence[float]): one non-negative score per category, not all zero
        * frame (Frame): the categories
        * ignorance_floor (float): share of the non-focus mass moved to ignorance, in [0, 1]
    Returns:
        * DichotomousMass: (p, c, r) on the argmax category
    """
    if not 0.0 <= ignorance_floor <= 1.0:
        raise ValueError(f"ignorance_floor must lie in [0, 1], got {ignorance_floor}")
    normalized = _normalized(scores, frame)
    focus = int(np.argmax(normalized))
    p = float(normalized[focus])
    c = (1.0 - p) * (1.0 - ignorance_floor)
    return DichotomousMass.from_pc(frame, focus, p, c)
