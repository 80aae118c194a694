""" Seeded synthetic classifier ensembles """

import logging
from typing import Dict, Tuple

import numpy as np

from src.core import make_frame

from .mapping import ScoreMatrix

logger = logging.getLogger(__name__)

NOISE_MODELS = ("dirichlet", "uniform")

# smallest score a category can receive, so that every score vector is strictly positive
SCORE_FLOOR = 1e-12


def _swap_in_truth(scores: np.ndarray, truth: np.ndarray, where: np.ndarray) -> None:
    """Swaps, in place, the background score of the true category with the largest one."""
    items, classifiers = np.nonzero(where)
    true_idx = truth[items]
    best_idx = scores[items, classifiers].argmax(axis=-1)
    true_scores = scores[items, classifiers, true_idx]
    scores[items, classifiers, true_idx] = scores[items, classifiers, best_idx]
    scores[items, classifiers, best_idx] = true_scores


def synth_workload(
    num_categories: int,
    num_items: int,
    num_classifiers: int,
    accuracy: float,
    noise: str = "dirichlet",
    seed: int = 0,
    concentration: float = 1.0,
    max_margin: float = 0.5,
    runner_up_truth: float = 1.0,
) -> Tuple[ScoreMatrix, Dict[str, str]]:
    """
    Generates an ensemble of conditionally independent classifiers with a known accuracy.

    Each classifier puts its top score on the true category for exactly
    round(accuracy * num_items) items, chosen at random, and on a uniformly chosen wrong
    category otherwise. When it misses, it ranks the true category
    second with probability runner_up_truth. The remaining scores are background noise.

    Args:
        * num_categories (int): number of categories, at least 2
        * num_items (int): number of items
        * num_classifiers (int): number of classifiers
        * accuracy (float): share of items each classifier gets right, in (1/k, 1]
        * noise (str): background score model, one of ['dirichlet', 'uniform']
        * seed (int): seed of the generator
        * concentration (float): dirichlet concentration of the background scores
        * max_margin (float): largest lead of the top score over the background, before
            normalization
        * runner_up_truth (float): probability that a classifier which misses an item still
            ranks the true category second
    Returns:
        * ScoreMatrix: the scores, with categories cat0..cat{k-1}
        * Dict[str, str]: the true category label of every item
    """
    if num_categories < 2:
        raise ValueError(f"Need at least two categories, got {num_categories}")
    if num_items < 1 or num_classifiers < 1:
        raise ValueError("Need at least one item and one classifier")
    if not 1.0 / num_categories < accuracy <= 1.0:
        raise ValueError(
            f"Accuracy must lie in (1/{num_categories}, 1], got {accuracy}"
        )
    if noise not in NOISE_MODELS:
        raise ValueError(f"Noise model {noise} not supported.")
    if concentration <= 0.0 or max_margin <= 0.0:
        raise ValueError("concentration and max_margin must be positive")
    if not 0.0 <= runner_up_truth <= 1.0:
        raise ValueError(f"runner_up_truth must lie in [0, 1], got {runner_up_truth}")

    rng = np.random.default_rng(seed)
    k, n, c = num_categories, num_items, num_classifiers

    truth = rng.integers(0, k, size=n)
    num_correct = int(round(accuracy * n))

    targets = np.empty((n, c), dtype=np.int64)
    for j in range(c):
        correct = np.zeros(n, dtype=bool)
        correct[rng.permutation(n)[:num_correct]] = True
        wrong = (truth + rng.integers(1, k, size=n)) % k
        targets[:, j] = np.where(correct, truth, wrong)

    if noise == "dirichlet":
        scores = rng.dirichlet(np.full(k, concentration), size=(n, c))
    else:
        scores = rng.random((n, c, k))

    margin = max_margin * (1.0 - rng.random((n, c)))
    runner_up = (targets != truth[:, None]) & (rng.random((n, c)) < runner_up_truth)
    _swap_in_truth(scores, truth, runner_up)

    top = scores.max(axis=-1) + margin
    np.put_along_axis(scores, targets[..., None], top[..., None], axis=-1)
    scores = np.maximum(scores, SCORE_FLOOR)
    scores /= scores.sum(axis=-1, keepdims=True)

    categories = make_frame([f"cat{i}" for i in range(k)])
    item_ids = [f"item{i}" for i in range(n)]
    classifier_ids = [f"clf{j}" for j in range(c)]
    labels = {item_ids[i]: categories.label(int(truth[i])) for i in range(n)}

    logger.debug(
        f"Generated {n} items x {c} classifiers over {k} categories (seed {seed})"
    )
    return ScoreMatrix(categories, item_ids, classifier_ids, scores), labels
