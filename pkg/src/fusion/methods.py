"""
Fusion methods: triplet fold, dichotomous pools and the general orthogonal sum.
"""

import numpy as np

from src.core import Frame, combine_all
from src.dichotomous import DichotomousMass, combine_pools
from src.dichotomous import to_general as dichotomous_to_general
from src.errors import OracleCapError
from src.triplet import fold_combine
from src.triplet import to_general as triplet_to_general

from .base_method import BaseFusionMethod, FusedEvidence
from .mapping import scores_to_dichotomous, scores_to_triplets
from .registry import register_fusion_method


@register_fusion_method("triplet")
class TripletFusion(BaseFusionMethod):
    def combine_scores(self, scores: np.ndarray, frame: Frame) -> FusedEvidence:
        triplets = scores_to_triplets(scores, frame)
        combined = fold_combine(triplets)
        return FusedEvidence(
            triplet_to_general(combined),
            fast_steps=len(triplets) - 1,
            general_steps=0,
            triplet=combined,
        )


@register_fusion_method("dichotomous")
class DichotomousFusion(BaseFusionMethod):
    def combine_scores(self, scores: np.ndarray, frame: Frame) -> FusedEvidence:
        evidence = [
            scores_to_dichotomous(row, frame, self.ignorance_floor) for row in scores
        ]
        num_pools = len({d.focus for d in evidence})
        combined = combine_pools(evidence)
        if isinstance(combined, DichotomousMass):
            combined = dichotomous_to_general(combined)
        return FusedEvidence(
            combined,
            fast_steps=len(evidence) - num_pools,
            general_steps=num_pools - 1,
        )


@register_fusion_method("oracle")
class OracleFusion(BaseFusionMethod):
    def check_frame(self, frame: Frame) -> None:
        if frame.size > self.oracle_max_frame_size:
            raise OracleCapError(
                f"The oracle method is capped at {self.oracle_max_frame_size} categories, "
                f"got {frame.size}"
            )

    def combine_scores(self, scores: np.ndarray, frame: Frame) -> FusedEvidence:
        self.check_frame(frame)
        evidence = [triplet_to_general(t) for t in scores_to_triplets(scores, frame)]
        return FusedEvidence(
            combine_all(evidence),
            fast_steps=0,
            general_steps=len(evidence) - 1,
        )
