""" Classifier-ensemble fusion: score mappings, fusion methods and evaluation """

from .base_method import BaseFusionMethod, FusedEvidence, ItemDecision, decide
from .mapping import ScoreMatrix, scores_to_dichotomous, scores_to_triplet, scores_to_triplets

# importing for registry to register fusion methods
from .methods import DichotomousFusion, OracleFusion, TripletFusion
from .pipeline import FusionReport, evaluate, fuse_item, fuse_matrix
from .registry import FUSION_METHOD_REGISTRY, get_fusion_method
from .sweep import summarize_sweep, sweep_ensemble
from .workload import synth_workload
