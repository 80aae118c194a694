"""
The combine, fuse, bench and oracle-check commands behind the root entry scripts.

Each command takes the composed hydra config and returns its result; run_command maps the
exceptions they raise onto process exit codes.
"""

import logging
import os
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from hydra.utils import to_absolute_path
from omegaconf import DictConfig

# wandb for logging metrics
import wandb
from src.benchmark import (
    BenchRecord,
    bench_sizes,
    records_to_frame,
    run_benchmark,
    summarize,
)
from src.core import MassFunction, check_same_frame, combine_pair, normalization
from src.dichotomous import (
    DichotomousMass,
    combine_repeated,
    normalization_repeated,
)
from src.dichotomous import to_general as dichotomous_to_general
from src.errors import (
    EvidenceError,
    EvidenceFormatError,
    NonCombinableError,
    OracleCapError,
)
from src.fusion import (
    FUSION_METHOD_REGISTRY,
    FusionReport,
    evaluate,
    fuse_matrix,
    summarize_sweep,
    sweep_ensemble,
    synth_workload,
)
from src.triplet import TripletMass, approx_combine, fold_with_trail
from src.triplet import to_general as triplet_to_general
from src.utils.data import (
    DICHOTOMOUS,
    GENERAL,
    TRIPLET,
    Evidence,
    dump_json,
    evidence_kind,
    evidence_to_dict,
    load_evidence,
    load_labels,
    load_score_matrix,
    write_csv,
)
from src.utils.setup import check_config, set_seed, setup_wandb
from src.verification import run_oracle_check

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_FORMAT_ERROR = 2
EXIT_NON_COMBINABLE = 3
EXIT_EVIDENCE_ERROR = 4
EXIT_USAGE_ERROR = 5

COMBINE_METHODS = ("auto", "triplet", "dichotomous", "oracle", "approx")

# evidence kinds each combine method accepts
_ACCEPTED_KINDS = {
    "auto": (TRIPLET, DICHOTOMOUS, GENERAL),
    "triplet": (TRIPLET,),
    "dichotomous": (DICHOTOMOUS,),
    "oracle": (TRIPLET, DICHOTOMOUS, GENERAL),
    "approx": (TRIPLET,),
}

DRY_RUN_ITEMS = 100
DRY_RUN_CASES = 20
DRY_RUN_SIZES = 2


def exit_code_for(err: BaseException) -> int:
    """Exit code of a command that raised err."""
    if isinstance(err, EvidenceFormatError):
        return EXIT_FORMAT_ERROR
    if isinstance(err, NonCombinableError):
        return EXIT_NON_COMBINABLE
    if isinstance(err, EvidenceError):
        return EXIT_EVIDENCE_ERROR
    if isinstance(err, (OracleCapError, ValueError, FileNotFoundError)):
        return EXIT_USAGE_ERROR
    raise err


def run_command(command: Callable[[DictConfig], Any], cfg: DictConfig) -> int:
    """Runs a command and returns its exit code, logging the error that stopped it."""
    try:
        result = command(cfg)
    except Exception as err:
        code = exit_code_for(err)
        logger.error(f"{type(err).__name__}: {err}")
        return code
    if isinstance(result, pd.DataFrame) and "passed" in result and not result["passed"].all():
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _resolve(path: Optional[str]) -> Optional[str]:
    return to_absolute_path(path) if path else None


def _require_path(path: Optional[str], key: str) -> str:
    if not path:
        raise ValueError(f"{key} must be set")
    return to_absolute_path(path)


### --- combine --- ###


def oracle_fold_with_trail(
    ms: Sequence[MassFunction], steps: Optional[Sequence[int]] = None
) -> Tuple[MassFunction, List[float]]:
    """
    Left fold of the general orthogonal sum, with K^-1 of every step.

    steps labels every mass function for error messages, its position by default.
    """
    if len(ms) == 0:
        raise EvidenceError("At least one mass function is required")
    labels = list(range(len(ms))) if steps is None else list(steps)
    result = ms[0]
    trail: List[float] = []
    for step, m in zip(labels[1:], ms[1:]):
        try:
            k_inv = normalization(result, m)
            result = combine_pair(result, m)
        except NonCombinableError as err:
            raise err.at_step(step) from err
        trail.append(k_inv)
    return result, trail


def _as_general(evidence: Evidence) -> MassFunction:
    if isinstance(evidence, TripletMass):
        return triplet_to_general(evidence)
    if isinstance(evidence, DichotomousMass):
        return dichotomous_to_general(evidence)
    return evidence


def _combine_dichotomous(
    ds: Sequence[DichotomousMass],
) -> Tuple[Evidence, List[Tuple[int, float]]]:
    if len(ds) == 0:
        raise EvidenceError("At least one dichotomous mass function is required")
    check_same_frame(*ds)

    # a pool of repeated focuses is folded first and reported at its last item; pools enter
    # the general rule at the index of their first item
    members: Dict[int, List[int]] = {}
    for index, d in enumerate(ds):
        members.setdefault(d.focus, []).append(index)

    pooled = []
    for indexes in members.values():
        pool = [ds[i] for i in indexes]
        try:
            pooled.append(combine_repeated(pool))
        except NonCombinableError as err:
            raise err.at_step(indexes[-1]) from err

    if len(pooled) == 1:
        steps = [] if len(ds) == 1 else [(len(ds) - 1, normalization_repeated(ds))]
        return pooled[0], steps

    entries = [indexes[0] for indexes in members.values()]
    result, trail = oracle_fold_with_trail(
        [dichotomous_to_general(d) for d in pooled], steps=entries
    )
    return result, list(zip(entries[1:], trail))


def combine_evidence(
    kind: str,
    evidence: Sequence[Evidence],
    method: str = "auto",
    approx_lambda: float = 0.0,
) -> Tuple[Evidence, List[Tuple[int, float]]]:
    """
    Combines parsed evidence with the requested method.

    Args:
        * kind (str): evidence kind, one of ['triplet', 'dichotomous', 'general']
        * evidence (Sequence[Evidence]): the items, all of that kind
        * method (str): one of ['auto', 'triplet', 'dichotomous', 'oracle', 'approx']; 'auto'
            picks the fast path of the kind
        * approx_lambda (float): constant of the approximate l-fold formulas
    Returns:
        * Evidence: the combined result
        * List[Tuple[int, float]]: (step, K^-1) for every combination step, where step is the
            index of the input item the step brings in; a single repeated-focus pool reports
            one step at its last item, pools of different focuses enter at their first item
            and 'approx' reports none
    """
    if method not in COMBINE_METHODS:
        raise ValueError(f"Combine method {method} not supported.")
    if kind not in _ACCEPTED_KINDS[method]:
        raise ValueError(f"Combine method {method} does not accept {kind} evidence")

    if method == "approx":
        return approx_combine(evidence, approx_lambda), []
    if method == "oracle" or kind == GENERAL:
        result, trail = oracle_fold_with_trail([_as_general(e) for e in evidence])
        return result, list(enumerate(trail, start=1))
    if kind == TRIPLET:
        result, trail = fold_with_trail(evidence)
        return result, list(enumerate(trail, start=1))
    return _combine_dichotomous(evidence)


def cmd_combine(cfg: DictConfig) -> Dict[str, Any]:
    """Combines the evidence file and writes the result with its K^-1 trail."""
    params = cfg.evidence
    path = _require_path(params.input_path, "evidence.input_path")
    kind, _, evidence = load_evidence(path)
    logger.info(f"Combining {len(evidence)} {kind} evidence items with '{params.method}'")

    result, steps = combine_evidence(kind, evidence, params.method, params.approx_lambda)
    output = {
        "method": params.method,
        "kind": evidence_kind(result),
        "result": evidence_to_dict(result),
        "steps": [{"step": step, "normalization": k_inv} for step, k_inv in steps],
    }

    output_path = _resolve(params.output_path)
    if output_path:
        dump_json(output, output_path)
        logger.info(f"Wrote combined evidence to {output_path}")
    else:
        logger.info(f"Combined evidence: {output}")
    return output


### --- fuse --- ###


def _load_fusion_inputs(cfg: DictConfig):
    params = cfg.fusion
    if params.synthetic:
        workload = cfg.workload
        num_items = workload.num_items
        if cfg.experiment.dry_run:
            num_items = min(num_items, DRY_RUN_ITEMS)
        return synth_workload(
            num_categories=workload.num_categories,
            num_items=num_items,
            num_classifiers=workload.num_classifiers,
            accuracy=workload.accuracy,
            noise=workload.noise,
            seed=cfg.experiment.seed,
            concentration=workload.concentration,
            max_margin=workload.max_margin,
            runner_up_truth=workload.runner_up_truth,
        )
    matrix = load_score_matrix(_require_path(params.scores_path, "fusion.scores_path"))
    labels_path = _resolve(params.labels_path)
    return matrix, (load_labels(labels_path) if labels_path else None)


def _sweep_path(output_path: str) -> str:
    root, _ = os.path.splitext(output_path)
    return f"{root}_sweep.csv"


def cmd_fuse(cfg: DictConfig) -> FusionReport:
    """Fuses a score matrix into per-item decisions, with accuracies when labels are known."""
    params = cfg.fusion
    if params.method not in FUSION_METHOD_REGISTRY:
        raise ValueError(f"Fusion method {params.method} not supported.")
    matrix, labels = _load_fusion_inputs(cfg)
    run = setup_wandb(cfg, job_type="fuse")

    if labels is not None:
        report = evaluate(
            matrix,
            labels,
            params.method,
            ignorance_floor=params.ignorance_floor,
            oracle_max_frame_size=params.oracle_max_frame_size,
            show_progress=True,
        )
    else:
        report = fuse_matrix(
            matrix,
            params.method,
            ignorance_floor=params.ignorance_floor,
            oracle_max_frame_size=params.oracle_max_frame_size,
            show_progress=True,
        )

    output_path = to_absolute_path(params.output_path)
    dump_json(report.to_dict(), output_path)
    logger.info(f"Wrote fusion report to {output_path}")

    sweep = None
    if params.sweep_sizes:
        if labels is None:
            logger.warning("Skipping the ensemble sweep: it needs labels")
        else:
            methods = [
                m
                for m in FUSION_METHOD_REGISTRY
                if m != "oracle" or matrix.categories.size <= params.oracle_max_frame_size
            ]
            sweep = sweep_ensemble(
                matrix,
                labels,
                methods,
                params.sweep_sizes,
                accuracy_cutoff=params.accuracy_cutoff,
                seed=cfg.experiment.seed,
                ignorance_floor=params.ignorance_floor,
                oracle_max_frame_size=params.oracle_max_frame_size,
            )
            write_csv(sweep, _sweep_path(output_path))
            logger.info(f"Sweep summary:\n{summarize_sweep(sweep)}")

    if run is not None:
        metrics: Dict[str, Any] = {
            f"{params.method}/time_s": report.timings_s[params.method],
            f"{params.method}/undecided": len(report.undecided),
        }
        if report.accuracy is not None:
            metrics[f"{params.method}/accuracy"] = report.accuracy
        run.log(metrics)
        if sweep is not None:
            run.log({"sweep": wandb.Table(dataframe=sweep)})
        run.finish()
    return report


### --- bench --- ###


def cmd_bench(cfg: DictConfig) -> List[BenchRecord]:
    """Runs the configured benchmark and writes one CSV row per record."""
    params = cfg.bench
    n_values = bench_sizes(params.n_start, params.n_stop, params.n_step)
    repetitions, warmup = params.repetitions, params.warmup
    if cfg.experiment.dry_run:
        logger.info("Running in dry run mode -- overriding config with values: ")
        logger.info(f"\t n: {n_values[:DRY_RUN_SIZES]}")
        logger.info("\t repetitions: 1, warmup: 0")
        n_values = n_values[:DRY_RUN_SIZES]
        repetitions, warmup = 1, 0

    run = setup_wandb(cfg, job_type="bench")
    records = run_benchmark(
        params.kind,
        seed=cfg.experiment.seed,
        method=params.method,
        n_values=n_values,
        frame_size=params.frame_size,
        frame_sizes=params.frame_sizes,
        repetitions=repetitions,
        warmup=warmup,
        oracle_max_frame_size=params.oracle_max_frame_size,
    )

    table = records_to_frame(records)
    output_path = to_absolute_path(params.output_path)
    write_csv(table, output_path)
    summary = summarize(records)
    logger.info(f"Wrote {len(records)} bench records to {output_path}; summary: {summary}")

    if run is not None:
        run.log(summary)
        run.log({"bench": wandb.Table(dataframe=table)})
        run.finish()
    return records


### --- oracle-check --- ###


def cmd_oracle_check(cfg: DictConfig) -> pd.DataFrame:
    """Runs the equivalence checks of the fast paths against the general orthogonal sum."""
    params = cfg.oracle_check
    num_cases, num_chains = params.num_cases, params.num_chains
    if cfg.experiment.dry_run:
        logger.info("Running in dry run mode -- overriding config with values: ")
        logger.info(f"\t num_cases: {DRY_RUN_CASES}, num_chains: {DRY_RUN_CASES}")
        num_cases = num_chains = DRY_RUN_CASES

    results = run_oracle_check(
        seed=cfg.experiment.seed,
        num_cases=num_cases,
        num_chains=num_chains,
        min_frame_size=params.min_frame_size,
        max_frame_size=params.max_frame_size,
        max_chain_length=params.max_chain_length,
        tolerance=params.tolerance,
    )
    logger.info(f"Oracle check results:\n{results.to_string(index=False)}")
    return results


def launch(command: Callable[[DictConfig], Any], cfg: DictConfig) -> int:
    """Shared start-up of the entry scripts: checks the config, seeds, then runs the command."""
    check_config(cfg)
    set_seed(cfg.experiment.seed)
    return run_command(command, cfg)
