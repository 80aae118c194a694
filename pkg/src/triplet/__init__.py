""" Triplet mass functions, their pairwise combination and the l-fold approximation """

from .approximation import approx_combine
from .combination import (
    DISJOINT,
    EQUAL,
    ONE_SHARED,
    combine_disjoint,
    combine_equal,
    combine_one_shared,
    combine_pair_auto,
    combine_with_intermediate,
    fold_combine,
    fold_with_trail,
    normalization,
    overlap_case,
)
from .mass import MultiFocusIntermediate, TripletMass, outstanding, to_general
