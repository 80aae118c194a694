"""
Checks the linear-time combination formulas against the brute-force orthogonal sum on seeded
random evidence.
"""

import logging
from typing import Callable, Dict, List

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.core import MassFunction, combine_all, combine_pair, conflict
from src.dichotomous import (
    DichotomousMass,
    combine_repeated,
    normalization_repeated,
)
from src.dichotomous import to_general as dichotomous_to_general
from src.errors import NonCombinableError
from src.triplet import (
    DISJOINT,
    EQUAL,
    ONE_SHARED,
    combine_pair_auto,
    combine_with_intermediate,
)
from src.triplet import to_general as triplet_to_general
from src.utils.sampling import (
    MIN_FRAME_SIZE,
    conflicting_triplet_pair,
    random_dichotomous_chain,
    random_frame,
    random_triplet_pair,
)

logger = logging.getLogger(__name__)

CHECK_COLUMNS = ["check", "cases", "max_abs_error", "passed"]

NUM_BOUNDARY_CASES = 100


def max_abs_difference(m_a: MassFunction, m_b: MassFunction) -> float:
    """Largest absolute mass difference over the focal elements of either function."""
    masks = set(m_a.masses) | set(m_b.masses)
    return max(abs(m_a.masses.get(mask, 0.0) - m_b.masses.get(mask, 0.0)) for mask in masks)


def _frame_size(rng: np.random.Generator, low: int, high: int) -> int:
    return int(rng.integers(low, high + 1))


def check_triplet_case(
    rng: np.random.Generator, case: str, num_cases: int, min_frame_size: int, max_frame_size: int
) -> float:
    """Largest gap between the pre-refocus result and the general orthogonal sum."""
    low = max(min_frame_size, MIN_FRAME_SIZE[case])
    high = max(max_frame_size, low)
    worst = 0.0
    for _ in range(num_cases):
        frame = random_frame(_frame_size(rng, low, high))
        t1, t2 = random_triplet_pair(rng, frame, case)
        _, intermediate, _ = combine_with_intermediate(t1, t2)
        exact = combine_pair(triplet_to_general(t1), triplet_to_general(t2))
        worst = max(worst, max_abs_difference(intermediate.to_general(), exact))
    return worst


def _dichotomous_gap(d: DichotomousMass, exact: MassFunction) -> float:
    full = d.frame.full_mask
    x = 1 << d.focus
    return max(
        abs(d.p - exact.masses.get(x, 0.0)),
        abs(d.c - exact.masses.get(full & ~x, 0.0)),
        abs(d.r - exact.masses.get(full, 0.0)),
    )


def check_dichotomous_chains(
    rng: np.random.Generator,
    num_chains: int,
    max_chain_length: int,
    min_frame_size: int,
    max_frame_size: int,
) -> float:
    """
    Largest gap between the repeated-focus formulas and the folded general orthogonal sum, over
    chains of every length up to max_chain_length. Every tenth chain holds a member with p = 1
    and every tenth, shifted by five, a member with c = 1.
    """
    worst = 0.0
    for length in range(1, max_chain_length + 1):
        for i in range(num_chains):
            special = {0: "p_one", 5: "c_one"}.get(i % 10)
            frame = random_frame(_frame_size(rng, max(min_frame_size, 2), max_frame_size))
            focus = int(rng.integers(frame.size))
            chain = random_dichotomous_chain(rng, frame, length, focus, special)

            combined = combine_repeated(chain)
            exact = combine_all([dichotomous_to_general(d) for d in chain])
            worst = max(worst, _dichotomous_gap(combined, exact))

            if length == 2:
                general = [dichotomous_to_general(d) for d in chain]
                k_gap = abs(normalization_repeated(chain) - (1.0 - conflict(*general)))
                worst = max(worst, k_gap)
    return worst


def check_combinability_boundary(
    rng: np.random.Generator, num_cases: int, min_frame_size: int, max_frame_size: int
) -> float:
    """
    Builds totally conflicting triplet pairs of every overlap case. Returns the largest gap
    between the general conflict and one, or infinity if a pair was combined.
    """
    worst = 0.0
    cases = [EQUAL, ONE_SHARED, DISJOINT]
    for i in range(num_cases):
        case = cases[i % len(cases)]
        low = max(min_frame_size, MIN_FRAME_SIZE[case])
        frame = random_frame(_frame_size(rng, low, max(max_frame_size, low)))
        t1, t2 = conflicting_triplet_pair(rng, frame, case)
        try:
            combine_pair_auto(t1, t2)
        except NonCombinableError:
            pass
        else:
            return float("inf")
        worst = max(worst, abs(1.0 - conflict(triplet_to_general(t1), triplet_to_general(t2))))
    return worst


def check_two_label_degeneracy(rng: np.random.Generator, num_cases: int) -> float:
    """Over a two-label frame, triplet and dichotomous combination must agree."""
    frame = random_frame(2)
    worst = 0.0
    for _ in range(num_cases):
        t1, t2 = random_triplet_pair(rng, frame, EQUAL)
        combined = combine_pair_auto(t1, t2)
        as_dichotomous = [
            DichotomousMass(frame, 0, t.mass_of(0), t.mass_of(1), t.mt) for t in (t1, t2)
        ]
        d = combine_repeated(as_dichotomous)
        worst = max(
            worst,
            abs(combined.mass_of(0) - d.p),
            abs(combined.mass_of(1) - d.c),
            abs(combined.mt - d.r),
        )
    return worst


def run_oracle_check(
    seed: int,
    num_cases: int = 1000,
    num_chains: int = 500,
    min_frame_size: int = 3,
    max_frame_size: int = 10,
    max_chain_length: int = 10,
    tolerance: float = 1e-12,
) -> pd.DataFrame:
    """
    Runs every equivalence check on seeded random evidence.

    Args:
        * seed (int): seed of the random evidence
        * num_cases (int): random triplet pairs per overlap case
        * num_chains (int): random dichotomous chains per chain length
        * min_frame_size (int): smallest frame drawn
        * max_frame_size (int): largest frame drawn
        * max_chain_length (int): longest dichotomous chain
        * tolerance (float): largest accepted absolute gap
    Returns:
        * pd.DataFrame: one row per check with the columns of CHECK_COLUMNS
    """
    rng = np.random.default_rng(seed)
    checks: Dict[str, Callable[[], float]] = {
        "triplet_equal": lambda: check_triplet_case(
            rng, EQUAL, num_cases, min_frame_size, max_frame_size
        ),
        "triplet_one_shared": lambda: check_triplet_case(
            rng, ONE_SHARED, num_cases, min_frame_size, max_frame_size
        ),
        "triplet_disjoint": lambda: check_triplet_case(
            rng, DISJOINT, num_cases, min_frame_size, max_frame_size
        ),
        "dichotomous_repeated": lambda: check_dichotomous_chains(
            rng, num_chains, max_chain_length, min_frame_size, max_frame_size
        ),
        "combinability_boundary": lambda: check_combinability_boundary(
            rng, NUM_BOUNDARY_CASES, min_frame_size, max_frame_size
        ),
        "two_label_degeneracy": lambda: check_two_label_degeneracy(rng, num_chains),
    }
    counts = {
        "triplet_equal": num_cases,
        "triplet_one_shared": num_cases,
        "triplet_disjoint": num_cases,
        "dichotomous_repeated": num_chains * max_chain_length,
        "combinability_boundary": NUM_BOUNDARY_CASES,
        "two_label_degeneracy": num_chains,
    }

    rows: List[dict] = []
    for name, check in tqdm(checks.items(), desc="Oracle checks"):
        error = check()
        passed = error <= tolerance
        rows.append(
            {"check": name, "cases": counts[name], "max_abs_error": error, "passed": passed}
        )
        log = logger.info if passed else logger.error
        log(f"{name}: {counts[name]} cases, max abs error {error:.3g}")
    return pd.DataFrame(rows, columns=CHECK_COLUMNS)
