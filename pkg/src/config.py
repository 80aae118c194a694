"""Defines the set of hyperparameters to be specified in the config file."""

from dataclasses import dataclass, field
from typing import List, Optional

from omegaconf import MISSING, DictConfig


@dataclass
class ExperimentParams(DictConfig):
    seed: int

    # Name of the run, used for output files and the wandb run name
    name: str = "triplet-evidence"

    # Name of the group that the current run belongs to
    # analogous to 'project' in wandb
    group: str = "triplet-evidence"

    # whether to run a minimal version of the workloads
    dry_run: bool = False

    # whether to skip logging to wandb
    offline_run: bool = True

    wandb_entity: Optional[str] = None


@dataclass
class EvidenceParams(DictConfig):
    # JSON file holding the evidence to combine
    input_path: Optional[str] = None

    # where to write the combined result; printed to the log when None
    output_path: Optional[str] = None

    # one of ['auto', 'triplet', 'dichotomous', 'oracle', 'approx']
    method: str = "auto"

    # the constant of the approximate l-fold formulas
    approx_lambda: float = 0.0


@dataclass
class FusionParams(DictConfig):
    # long-form score CSV: item,classifier,<cat1>,...,<catk>
    scores_path: Optional[str] = None

    # optional CSV: item,label
    labels_path: Optional[str] = None

    output_path: str = "fusion_report.json"

    # one of ['triplet', 'dichotomous', 'oracle']
    method: str = "triplet"

    # share of the non-focus score mass moved to ignorance by the dichotomous mapping
    ignorance_floor: float = 0.1

    oracle_max_frame_size: int = 16

    # ensemble sizes for the method comparison sweep; empty disables the sweep
    sweep_sizes: List[int] = field(default_factory=list)

    # fused accuracy needed for an ensemble to be selected in the sweep
    accuracy_cutoff: float = 0.7

    # generate the score matrix from the workload config instead of reading scores_path
    synthetic: bool = False


@dataclass
class WorkloadParams(DictConfig):
    num_categories: int = 10
    num_items: int = 1000
    num_classifiers: int = 5

    # probability that a classifier's top score lands on the true category
    accuracy: float = 0.7

    # one of ['dirichlet', 'uniform']
    noise: str = "dirichlet"

    # dirichlet concentration of the background scores
    concentration: float = 1.0

    # largest lead of the top score over the runner-up, before normalization
    max_margin: float = 0.5

    # probability that a classifier which misses an item ranks the true category second
    runner_up_truth: float = 1.0


@dataclass
class BenchParams(DictConfig):
    # one of ['chain', 'pipeline', 'oracle_scaling']
    kind: str = "chain"

    # one of ['triplet', 'dichotomous', 'oracle']; ignored by 'pipeline', which runs both
    # triplet and dichotomous
    method: str = "triplet"

    # number of evidences (chain) or classifiers (pipeline): range(n_start, n_stop + 1, n_step)
    n_start: int = 100
    n_stop: int = 1000
    n_step: int = 100

    frame_size: int = 20

    # only used by 'oracle_scaling'
    frame_sizes: List[int] = field(default_factory=lambda: [8, 12, 16])

    repetitions: int = 5
    warmup: int = 3
    oracle_max_frame_size: int = 16

    output_path: str = "bench.csv"


@dataclass
class OracleCheckParams(DictConfig):
    num_cases: int = 1000
    num_chains: int = 500
    min_frame_size: int = 3
    max_frame_size: int = 10
    max_chain_length: int = 10
    tolerance: float = 1e-12


### Container for entire config ###


@dataclass
class TripletEvidenceConfig(DictConfig):
    experiment: ExperimentParams
    evidence: EvidenceParams = MISSING
    fusion: FusionParams = MISSING
    workload: WorkloadParams = MISSING
    bench: BenchParams = MISSING
    oracle_check: OracleCheckParams = MISSING
