""" Frames, general mass functions and the brute-force combination oracle """

from .frame import MAX_FRAME_SIZE, Frame, SubsetRef, iter_indexes, make_bitset, make_frame
from .mass import (
    MassFunction,
    belief,
    commonality,
    doubt,
    plausibility,
    vacuous,
)
from .oracle import (
    COMBINABILITY_TOLERANCE,
    check_combinable,
    check_same_frame,
    combine_all,
    combine_pair,
    conflict,
    normalization,
)
