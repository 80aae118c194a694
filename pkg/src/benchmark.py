"""
Runtime benchmarks: folds of n evidences at a fixed frame size, the fusion pipeline over growing
ensembles and the general orthogonal sum over growing frames.
"""

import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.core import Frame, combine_all, combine_pair
from src.dichotomous import combine_repeated
from src.errors import OracleCapError
from src.fusion import fuse_matrix, synth_workload
from src.triplet import fold_combine
from src.triplet import to_general as triplet_to_general
from src.utils.sampling import (
    low_conflict_dichotomous_chain,
    random_frame,
    random_mass_function,
    random_triplet,
)

# A logger for this file
logger = logging.getLogger("Benchmark")

BENCH_COLUMNS = ["method", "n", "frame_size", "mean_ns", "std_ns", "reps", "min_ns"]

CHAIN_METHODS = ("triplet", "dichotomous", "oracle")
PIPELINE_METHODS = ("triplet", "dichotomous")

# items of the synthetic ensemble timed by the 'pipeline' kind
PIPELINE_ITEMS = 500
PIPELINE_ACCURACY = 0.7

# keeps long random triplet folds away from total conflict
CHAIN_MIN_IGNORANCE = 0.05

# oracle calls slower than this are timed once, without warm-up
SLOW_CALL_NS = 1e9


@dataclass(frozen=True)
class BenchRecord:
    method: str
    n_evidences: int
    frame_size: int
    # median over the repetitions
    mean_ns: float
    std_ns: float
    repetitions: int
    # fastest repetition, the statistic the fits use
    min_ns: float = 0.0

    def __post_init__(self):
        assert self.repetitions >= 1, "A record needs at least one repetition"

    @property
    def fastest_ns(self) -> float:
        return self.min_ns or self.mean_ns

    def to_row(self) -> Dict[str, object]:
        return {
            "method": self.method,
            "n": self.n_evidences,
            "frame_size": self.frame_size,
            "mean_ns": self.mean_ns,
            "std_ns": self.std_ns,
            "reps": self.repetitions,
            "min_ns": self.fastest_ns,
        }


def records_to_frame(records: Sequence[BenchRecord]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in records], columns=BENCH_COLUMNS)


def bench_sizes(n_start: int, n_stop: int, n_step: int) -> List[int]:
    """The inclusive range n_start, n_start + n_step, ..., up to n_stop."""
    if n_start < 1 or n_step < 1 or n_stop < n_start:
        raise ValueError(
            f"Invalid range: start {n_start}, stop {n_stop}, step {n_step}"
        )
    return list(range(n_start, n_stop + 1, n_step))


def time_callable(
    fn: Callable[[], object], repetitions: int, warmup: int
) -> Tuple[float, float, float]:
    """
    Times fn after discarding the warm-up calls.

    Returns:
        * Tuple[float, float, float]: median, standard deviation and minimum of the wall time,
            in nanoseconds
    """
    if repetitions < 1 or warmup < 0:
        raise ValueError(
            f"Invalid timing setup: {repetitions} repetitions, {warmup} warm-up calls"
        )
    for _ in range(warmup):
        fn()
    timings = np.empty(repetitions, dtype=np.float64)
    for i in range(repetitions):
        start = time.perf_counter_ns()
        fn()
        timings[i] = time.perf_counter_ns() - start
    # clock resolution can report zero for very short calls
    return (
        max(float(np.median(timings)), 1.0),
        float(np.std(timings)),
        max(float(timings.min()), 1.0),
    )


def check_oracle_cap(frame_size: int, oracle_max_frame_size: int) -> None:
    if frame_size > oracle_max_frame_size:
        raise OracleCapError(
            f"The oracle is capped at frame size {oracle_max_frame_size}, got {frame_size}"
        )


### --- Chain workloads --- ###


def _triplet_chain(rng: np.random.Generator, frame: Frame, n: int) -> Callable[[], object]:
    triplets = [random_triplet(rng, frame, min_ignorance=CHAIN_MIN_IGNORANCE) for _ in range(n)]
    return lambda: fold_combine(triplets)


def _dichotomous_chain(
    rng: np.random.Generator, frame: Frame, n: int
) -> Callable[[], object]:
    focus = int(rng.integers(frame.size))
    chain = low_conflict_dichotomous_chain(rng, frame, n, focus)
    return lambda: combine_repeated(chain)


def _oracle_chain(rng: np.random.Generator, frame: Frame, n: int) -> Callable[[], object]:
    evidence = [
        triplet_to_general(random_triplet(rng, frame, min_ignorance=CHAIN_MIN_IGNORANCE))
        for _ in range(n)
    ]
    return lambda: combine_all(evidence)


CHAIN_WORKLOADS = {
    "triplet": _triplet_chain,
    "dichotomous": _dichotomous_chain,
    "oracle": _oracle_chain,
}


### --- Bench kinds --- ###

BENCH_KIND_REGISTRY: Dict[str, Callable[..., List[BenchRecord]]] = {}


def register_bench_kind(name: str):
    def _register(fn: Callable[..., List[BenchRecord]]) -> Callable[..., List[BenchRecord]]:
        BENCH_KIND_REGISTRY[name] = fn
        return fn

    return _register


def get_bench_kind(bench_kind_name: str) -> Callable[..., List[BenchRecord]]:
    if bench_kind_name in BENCH_KIND_REGISTRY:
        return BENCH_KIND_REGISTRY[bench_kind_name]
    else:
        raise ValueError(f"Bench kind {bench_kind_name} not supported.")


@register_bench_kind("chain")
def bench_chain(
    method: str,
    n_values: Sequence[int],
    frame_size: int,
    repetitions: int,
    warmup: int,
    oracle_max_frame_size: int,
    seed: int,
    **kwargs,
) -> List[BenchRecord]:
    """Times the combination of n seeded random evidences for every n."""
    if method not in CHAIN_METHODS:
        raise ValueError(f"Bench method {method} not supported.")
    if method == "oracle":
        check_oracle_cap(frame_size, oracle_max_frame_size)

    frame = random_frame(frame_size)
    records = []
    for n in tqdm(n_values, desc=f"Bench chain ({method})"):
        rng = np.random.default_rng([seed, n])
        run = CHAIN_WORKLOADS[method](rng, frame, n)
        median_ns, std_ns, min_ns = time_callable(run, repetitions, warmup)
        records.append(
            BenchRecord(method, n, frame_size, median_ns, std_ns, repetitions, min_ns)
        )
        logger.info(f"{method} n={n}: {median_ns / 1e6:.3f} ms")
    return records


@register_bench_kind("pipeline")
def bench_pipeline(
    n_values: Sequence[int],
    frame_size: int,
    repetitions: int,
    warmup: int,
    seed: int,
    num_items: int = PIPELINE_ITEMS,
    **kwargs,
) -> List[BenchRecord]:
    """
    Times triplet and dichotomous fusion of the same synthetic ensemble, with n classifiers
    and frame_size categories, for every n.
    """
    records = []
    for n in tqdm(n_values, desc="Bench pipeline"):
        matrix, _ = synth_workload(
            num_categories=frame_size,
            num_items=num_items,
            num_classifiers=n,
            accuracy=PIPELINE_ACCURACY,
            seed=seed,
        )
        for method in PIPELINE_METHODS:
            median_ns, std_ns, min_ns = time_callable(
                lambda: fuse_matrix(matrix, method), repetitions, warmup
            )
            records.append(
                BenchRecord(method, n, frame_size, median_ns, std_ns, repetitions, min_ns)
            )
            logger.info(f"{method} pipeline, {n} classifiers: {median_ns / 1e6:.3f} ms")
    return records


@register_bench_kind("oracle_scaling")
def bench_oracle_scaling(
    frame_sizes: Sequence[int],
    repetitions: int,
    warmup: int,
    oracle_max_frame_size: int,
    seed: int,
    **kwargs,
) -> List[BenchRecord]:
    """Times one general combination of two full-support mass functions per frame size."""
    for size in frame_sizes:
        check_oracle_cap(size, oracle_max_frame_size)

    records = []
    for size in tqdm(frame_sizes, desc="Bench oracle scaling"):
        rng = np.random.default_rng([seed, size])
        frame = random_frame(size)
        m1 = random_mass_function(rng, frame, full_support=True)
        m2 = random_mass_function(rng, frame, full_support=True)
        first_ns, _, _ = time_callable(lambda: combine_pair(m1, m2), 1, 0)
        if first_ns > SLOW_CALL_NS:
            logger.info(f"oracle, frame size {size}: {first_ns / 1e9:.1f} s, timed once")
            records.append(BenchRecord("oracle", 2, size, first_ns, 0.0, 1, first_ns))
            continue
        median_ns, std_ns, min_ns = time_callable(
            lambda: combine_pair(m1, m2), repetitions, warmup
        )
        records.append(BenchRecord("oracle", 2, size, median_ns, std_ns, repetitions, min_ns))
        logger.info(f"oracle, frame size {size}: {median_ns / 1e6:.3f} ms")
    return records


def run_benchmark(
    kind: str,
    seed: int,
    method: str = "triplet",
    n_values: Sequence[int] = (),
    frame_size: int = 20,
    frame_sizes: Sequence[int] = (8, 12, 16),
    repetitions: int = 5,
    warmup: int = 3,
    oracle_max_frame_size: int = 16,
) -> List[BenchRecord]:
    """
    Runs one benchmark kind.

    Args:
        * kind (str): one of the registered kinds ('chain', 'pipeline', 'oracle_scaling')
        * seed (int): seed of the generated workloads
        * method (str): combination method timed by 'chain'
        * n_values (Sequence[int]): numbers of evidences ('chain') or classifiers ('pipeline')
        * frame_size (int): frame size of 'chain' and number of categories of 'pipeline'
        * frame_sizes (Sequence[int]): frame sizes of 'oracle_scaling'
        * repetitions (int): timed calls per row
        * warmup (int): untimed calls before the timed ones
        * oracle_max_frame_size (int): largest frame the oracle accepts
    Returns:
        * List[BenchRecord]: one record per (method, n) or per frame size
    """
    bench_kind = get_bench_kind(kind)
    return bench_kind(
        method=method,
        n_values=list(n_values),
        frame_size=frame_size,
        frame_sizes=list(frame_sizes),
        repetitions=repetitions,
        warmup=warmup,
        oracle_max_frame_size=oracle_max_frame_size,
        seed=seed,
    )


def linear_fit(records: Sequence[BenchRecord]) -> Tuple[float, float, float]:
    """
    Least-squares fit of the fastest repetition time against the number of evidences.

    Returns:
        * Tuple[float, float, float]: slope, intercept and coefficient of determination
    """
    assert len(records) >= 2, "A linear fit needs at least two records"
    x = np.array([r.n_evidences for r in records], dtype=np.float64)
    y = np.array([r.fastest_ns for r in records], dtype=np.float64)
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    total = np.sum((y - y.mean()) ** 2)
    r_squared = 1.0 - np.sum(residual**2) / total if total > 0 else 1.0
    return float(slope), float(intercept), float(r_squared)


def growth_ratios(records: Sequence[BenchRecord]) -> List[float]:
    """Ratio of each record's fastest time to the previous one's."""
    return [b.fastest_ns / a.fastest_ns for a, b in zip(records, records[1:])]


def summarize(records: Sequence[BenchRecord]) -> Dict[str, float]:
    """Summary metrics of a benchmark run, per method."""
    summary: Dict[str, float] = {}
    by_method: Dict[str, List[BenchRecord]] = {}
    for r in records:
        by_method.setdefault(r.method, []).append(r)
    for method, rows in by_method.items():
        if len({r.n_evidences for r in rows}) >= 2:
            slope, _, r_squared = linear_fit(rows)
            summary[f"{method}/slope_ns"] = slope
            summary[f"{method}/r_squared"] = r_squared
        summary[f"{method}/total_ms"] = sum(r.mean_ns for r in rows) / 1e6
    return summary
