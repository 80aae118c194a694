""" Compares fusion methods over ensembles of growing size """

import logging
from itertools import combinations
from typing import List, Mapping, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from .mapping import ScoreMatrix
from .pipeline import evaluate

fusion_logger = logging.getLogger("Fusion")

SWEEP_COLUMNS = [
    "method",
    "ensemble_size",
    "classifiers",
    "accuracy",
    "mean_individual_accuracy",
    "undecided",
    "time_s",
    "selected",
]


def sweep_ensemble(
    matrix: ScoreMatrix,
    labels: Mapping[str, str],
    methods: Sequence[str],
    sizes: Sequence[int],
    accuracy_cutoff: float = 0.7,
    max_combinations: int = 10,
    seed: int = 0,
    ignorance_floor: float = 0.1,
    oracle_max_frame_size: int = 16,
) -> pd.DataFrame:
    """
    Fuses every ensemble of the requested sizes with every method.

    For each size, the classifier combinations are enumerated in lexicographic order and, when
    there are more than max_combinations of them, a seeded sample is kept. An ensemble is
    selected when its fused accuracy reaches accuracy_cutoff.

    Args:
        * matrix (ScoreMatrix): the scores of the full ensemble
        * labels (Mapping[str, str]): category label of every item
        * methods (Sequence[str]): names of the fusion methods to compare
        * sizes (Sequence[int]): ensemble sizes, each between 1 and the number of classifiers
        * accuracy_cutoff (float): fused accuracy an ensemble needs to be selected
        * max_combinations (int): largest number of ensembles evaluated per size
        * seed (int): seed of the ensemble sample
    Returns:
        * pd.DataFrame: one row per method and ensemble, with the columns of SWEEP_COLUMNS
    """
    for size in sizes:
        if not 1 <= size <= matrix.num_classifiers:
            raise ValueError(
                f"Ensemble size {size} must lie in [1, {matrix.num_classifiers}]"
            )

    rng = np.random.default_rng(seed)
    rows: List[dict] = []
    for size in tqdm(sizes, desc="Ensemble sizes"):
        ensembles = list(combinations(range(matrix.num_classifiers), size))
        if len(ensembles) > max_combinations:
            keep = np.sort(rng.choice(len(ensembles), max_combinations, replace=False))
            ensembles = [ensembles[i] for i in keep]

        for ensemble in ensembles:
            sub_matrix = matrix.select_classifiers(ensemble)
            for method in methods:
                report = evaluate(
                    sub_matrix,
                    labels,
                    method,
                    ignorance_floor=ignorance_floor,
                    oracle_max_frame_size=oracle_max_frame_size,
                )
                individual = list((report.individual_accuracies or {}).values())
                rows.append(
                    {
                        "method": method,
                        "ensemble_size": size,
                        "classifiers": "+".join(sub_matrix.classifier_ids),
                        "accuracy": report.accuracy,
                        "mean_individual_accuracy": float(np.mean(individual)),
                        "undecided": len(report.undecided),
                        "time_s": report.timings_s[method],
                        "selected": bool(report.accuracy >= accuracy_cutoff),
                    }
                )

    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def summarize_sweep(sweep: pd.DataFrame) -> pd.DataFrame:
    """Mean accuracy of the selected ensembles per method and size."""
    selected = sweep[sweep["selected"]]
    summary = (
        selected.groupby(["method", "ensemble_size"])["accuracy"]
        .agg(["mean", "count"])
        .reset_index()
        .rename(columns={"mean": "mean_selected_accuracy", "count": "num_selected"})
    )
    for method in sweep["method"].unique():
        fusion_logger.info(
            f"{method}: mean accuracy of selected ensembles "
            f"{selected[selected['method'] == method]['accuracy'].mean():.4f}"
        )
    return summary
