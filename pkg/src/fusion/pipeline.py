""" Fuses every item of a score matrix and scores the decisions against labels """

import logging
import time
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Mapping, Optional, Union

import numpy as np
from tqdm import tqdm

from src.core import Frame
from src.errors import MissingLabelError, NonCombinableError

from .base_method import BaseFusionMethod, ItemDecision
from .mapping import ScoreMatrix
from .registry import get_fusion_method

fusion_logger = logging.getLogger("Fusion")


@dataclass(frozen=True)
class FusionReport:
    method: str
    categories: Frame
    decisions: List[ItemDecision]
    timings_s: Dict[str, float]
    combinations: Dict[str, int]
    accuracy: Optional[float] = None
    individual_accuracies: Optional[Dict[str, float]] = None

    @property
    def undecided(self) -> List[str]:
        return [d.item_id for d in self.decisions if d.decision is None]

    def to_dict(self) -> Dict[str, Any]:
        labels = self.categories.labels
        decisions = []
        for d in self.decisions:
            entry: Dict[str, Any] = {
                "item": d.item_id,
                "decision": labels[d.decision] if d.decision is not None else None,
            }
            if d.triplet is not None:
                entry.update(
                    a1=labels[d.triplet.a1],
                    a2=labels[d.triplet.a2],
                    m1=d.triplet.m1,
                    m2=d.triplet.m2,
                    mt=d.triplet.mt,
                )
            if d.error is not None:
                entry["error"] = d.error
            decisions.append(entry)

        report: Dict[str, Any] = {
            "method": self.method,
            "decisions": decisions,
            "undecided": self.undecided,
            "timings_s": dict(self.timings_s),
            "combinations": dict(self.combinations),
        }
        if self.accuracy is not None:
            report["accuracy"] = self.accuracy
            report["individual_accuracies"] = dict(self.individual_accuracies or {})
        return report


def _resolve_method(
    method: Union[str, BaseFusionMethod],
    ignorance_floor: float,
    oracle_max_frame_size: int,
) -> BaseFusionMethod:
    if isinstance(method, BaseFusionMethod):
        return method
    return get_fusion_method(
        method,
        ignorance_floor=ignorance_floor,
        oracle_max_frame_size=oracle_max_frame_size,
    )


def fuse_item(
    scores: np.ndarray,
    frame: Frame,
    method: Union[str, BaseFusionMethod] = "triplet",
    item_id: str = "item",
    ignorance_floor: float = 0.1,
    oracle_max_frame_size: int = 16,
) -> ItemDecision:
    """
    Combines the score vectors every classifier produced for one item and decides on a category.

    Args:
        * scores (np.ndarray): array of shape (num_classifiers, num_categories)
        * frame (Frame): the categories
        * method (Union[str, BaseFusionMethod]): fusion method or its registered name
        * item_id (str): identifier carried into the decision
        * ignorance_floor (float): ignorance share of the dichotomous mapping
        * oracle_max_frame_size (int): frame size cap of the oracle method
    Returns:
        * ItemDecision: the decision, or an undecided record when the evidence is totally
            conflicting
    """
    fusion_method = _resolve_method(method, ignorance_floor, oracle_max_frame_size)
    scores = np.asarray(scores, dtype=np.float64)
    assert scores.ndim == 2 and scores.shape[0] >= 1, "Expected at least one score vector"
    try:
        return fusion_method.fuse_item(item_id, scores, frame)
    except NonCombinableError as err:
        fusion_logger.debug(f"Item {item_id} is undecided: {err}")
        return ItemDecision(item_id, None, None, error=str(err))


def fuse_matrix(
    matrix: ScoreMatrix,
    method: str = "triplet",
    ignorance_floor: float = 0.1,
    oracle_max_frame_size: int = 16,
    show_progress: bool = False,
) -> FusionReport:
    """
    Fuses every item of the matrix with a single method.

    Args:
        * matrix (ScoreMatrix): the scores to fuse
        * method (str): name of the fusion method
        * ignorance_floor (float): ignorance share of the dichotomous mapping
        * oracle_max_frame_size (int): frame size cap of the oracle method
        * show_progress (bool): whether to show a progress bar over the items
    Returns:
        * FusionReport: decisions, wall time and combination counts, without accuracies
    """
    fusion_method = get_fusion_method(
        method,
        ignorance_floor=ignorance_floor,
        oracle_max_frame_size=oracle_max_frame_size,
    )
    fusion_method.check_frame(matrix.categories)

    frame = matrix.categories
    decisions: List[ItemDecision] = []
    start = time.perf_counter()
    for i in tqdm(
        range(matrix.num_items), desc=f"Fusing ({method})", disable=not show_progress
    ):
        decisions.append(
            fuse_item(matrix.scores[i], frame, fusion_method, matrix.item_ids[i])
        )
    elapsed = time.perf_counter() - start

    combinations = {
        "fast": sum(d.fast_steps for d in decisions),
        "general": sum(d.general_steps for d in decisions),
    }
    report = FusionReport(
        method=method,
        categories=frame,
        decisions=decisions,
        timings_s={method: elapsed},
        combinations=combinations,
    )
    if report.undecided:
        fusion_logger.warning(
            f"{len(report.undecided)} of {matrix.num_items} items are undecided ({method})"
        )
    fusion_logger.info(
        f"Fused {matrix.num_items} items from {matrix.num_classifiers} classifiers "
        f"with {method} in {elapsed:.3f}s"
    )
    return report


def label_indices(matrix: ScoreMatrix, labels: Mapping[str, str]) -> np.ndarray:
    """Maps the label of every item of the matrix to its category index."""
    frame = matrix.categories
    indices = np.empty(matrix.num_items, dtype=np.int64)
    for i, item_id in enumerate(matrix.item_ids):
        if item_id not in labels:
            raise MissingLabelError(f"No label for item {item_id!r}")
        label = labels[item_id]
        try:
            indices[i] = frame.index(label)
        except KeyError:
            raise MissingLabelError(
                f"Label {label!r} of item {item_id!r} is not one of the categories"
            ) from None
    return indices


def individual_accuracies(matrix: ScoreMatrix, truth: np.ndarray) -> Dict[str, float]:
    """Accuracy of every classifier's top score taken on its own."""
    top = np.argmax(matrix.scores, axis=-1)
    correct = (top == truth[:, None]).mean(axis=0)
    return {cid: float(acc) for cid, acc in zip(matrix.classifier_ids, correct)}


def evaluate(
    matrix: ScoreMatrix,
    labels: Mapping[str, str],
    method: str = "triplet",
    ignorance_floor: float = 0.1,
    oracle_max_frame_size: int = 16,
    show_progress: bool = False,
) -> FusionReport:
    """
    Fuses the matrix and scores the decisions against the labels.

    Undecided items count as incorrect.

    Args:
        * matrix (ScoreMatrix): the scores to fuse
        * labels (Mapping[str, str]): category label of every item id
        * method (str): name of the fusion method
    Returns:
        * FusionReport: the report with fused and individual accuracies
    """
    truth = label_indices(matrix, labels)
    report = fuse_matrix(
        matrix,
        method,
        ignorance_floor=ignorance_floor,
        oracle_max_frame_size=oracle_max_frame_size,
        show_progress=show_progress,
    )
    correct = sum(
        1
        for d, label in zip(report.decisions, truth)
        if d.decision is not None and d.decision == label
    )
    accuracy = correct / matrix.num_items if matrix.num_items else 0.0
    individual = individual_accuracies(matrix, truth)
    fusion_logger.info(
        f"{method}: fused accuracy {accuracy:.4f}, "
        f"mean individual accuracy {np.mean(list(individual.values())):.4f}"
    )
    return replace(report, accuracy=accuracy, individual_accuracies=individual)
