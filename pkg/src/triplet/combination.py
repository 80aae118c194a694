"""
Pairwise combination of triplet mass functions, dispatched on how their focuses overlap, and
the sequential fold over many triplets.
"""

import logging
from math import fsum
from typing import Callable, Dict, List, Sequence, Tuple

from src.core import check_combinable, check_same_frame
from src.errors import EvidenceError, FocusMismatchError, NonCombinableError

from .mass import Focused, MultiFocusIntermediate, TripletMass, refocus_masses

logger = logging.getLogger(__name__)

EQUAL = "equal"
ONE_SHARED = "one_shared"
DISJOINT = "disjoint"

# unnormalized singleton terms, first triplet's focuses first, and the frame term
PairTerms = Tuple[Dict[int, float], float]


def _focused(t: TripletMass) -> Focused:
    return t.a1, t.a2, t.m1, t.m2, t.mt


def _mass_in(f: Focused, index: int) -> float:
    if index == f[0]:
        return f[2]
    if index == f[1]:
        return f[3]
    return 0.0


def _overlap_of(f1: Focused, f2: Focused) -> str:
    shared = (f1[0] == f2[0]) + (f1[0] == f2[1]) + (f1[1] == f2[0]) + (f1[1] == f2[1])
    return {2: EQUAL, 1: ONE_SHARED, 0: DISJOINT}[shared]


def overlap_case(t1: TripletMass, t2: TripletMass) -> str:
    """Classifies a pair by the number of singleton focuses the two triplets share."""
    return _overlap_of(_focused(t1), _focused(t2))


def _equal_terms(f1: Focused, f2: Focused) -> PairTerms:
    x, y, t1x, t1y, t1t = f1
    t2x, t2y, t2t = _mass_in(f2, x), _mass_in(f2, y), f2[4]
    terms = {
        x: fsum((t1x * t2x, t1x * t2t, t1t * t2x)),
        y: fsum((t1y * t2y, t1y * t2t, t1t * t2y)),
    }
    return terms, t1t * t2t


def _one_shared_terms(f1: Focused, f2: Focused) -> PairTerms:
    a1, a2 = f1[0], f1[1]
    x = a1 if a1 in (f2[0], f2[1]) else a2
    y = a2 if x == a1 else a1
    z = f2[1] if f2[0] == x else f2[0]

    t1x, t1y, t1t = _mass_in(f1, x), _mass_in(f1, y), f1[4]
    t2x, t2z, t2t = _mass_in(f2, x), _mass_in(f2, z), f2[4]
    terms = {
        x: fsum((t1x * t2x, t1x * t2t, t1t * t2x)),
        y: t1y * t2t,
        z: t1t * t2z,
    }
    return {index: terms[index] for index in (a1, a2, z)}, t1t * t2t


def _disjoint_terms(f1: Focused, f2: Focused) -> PairTerms:
    t1t, t2t = f1[4], f2[4]
    terms = {
        f1[0]: f1[2] * t2t,
        f1[1]: f1[3] * t2t,
        f2[0]: t1t * f2[2],
        f2[1]: t1t * f2[3],
    }
    return terms, t1t * t2t


_CASE_TERMS: Dict[str, Callable[[Focused, Focused], PairTerms]] = {
    EQUAL: _equal_terms,
    ONE_SHARED: _one_shared_terms,
    DISJOINT: _disjoint_terms,
}


def _pair_terms(t1: TripletMass, t2: TripletMass, case: str) -> PairTerms:
    check_same_frame(t1, t2)
    f1, f2 = _focused(t1), _focused(t2)
    detected = _overlap_of(f1, f2)
    if detected != case:
        raise FocusMismatchError(
            f"Expected a pair with overlap '{case}', got '{detected}': "
            f"{t1.frame.label(t1.a1)},{t1.frame.label(t1.a2)} vs "
            f"{t2.frame.label(t2.a1)},{t2.frame.label(t2.a2)}"
        )
    return _CASE_TERMS[case](f1, f2)


def _normalization_of(terms: Dict[int, float], theta_term: float) -> float:
    return fsum(list(terms.values()) + [theta_term])


def _normalized(terms: Dict[int, float], theta_term: float, case: str) -> PairTerms:
    """Singleton and frame masses of the combination, after the combinability check."""
    k_inv = _normalization_of(terms, theta_term)
    check_combinable(k_inv, case=case)
    return {index: term / k_inv for index, term in terms.items()}, k_inv


def _intermediate(
    t1: TripletMass, t2: TripletMass, case: str
) -> Tuple[MultiFocusIntermediate, float]:
    terms, theta_term = _pair_terms(t1, t2, case)
    singletons, k_inv = _normalized(terms, theta_term, case)
    return MultiFocusIntermediate(t1.frame, singletons, theta_term / k_inv), k_inv


def normalization(t1: TripletMass, t2: TripletMass) -> float:
    """
    Returns K^-1 for the pair, computed with the formulas of its overlap case.

    A value of zero means the two triplets are not combinable.
    """
    case = overlap_case(t1, t2)
    return _normalization_of(*_pair_terms(t1, t2, case))


def combine_equal(t1: TripletMass, t2: TripletMass) -> TripletMass:
    """
    Combines two triplets focused on the same two singletons.

    The result is exact, with a1 and a2 swapped if the runner-up overtakes.

    Args:
        * t1 (TripletMass): first triplet
        * t2 (TripletMass): second triplet, with {t2.a1, t2.a2} == {t1.a1, t1.a2} in any order
    Returns:
        * TripletMass: the orthogonal sum
    """
    intermediate, _ = _intermediate(t1, t2, EQUAL)
    return intermediate.refocus()


def combine_one_shared(
    t1: TripletMass, t2: TripletMass
) -> Tuple[TripletMass, MultiFocusIntermediate]:
    """
    Combines two triplets that share exactly one singleton focus, in either position.

    Args:
        * t1 (TripletMass): first triplet
        * t2 (TripletMass): second triplet
    Returns:
        * TripletMass: the intermediate focused back onto its two largest singletons
        * MultiFocusIntermediate: the exact orthogonal sum over {x}, {y}, {z} and the frame
    """
    intermediate, _ = _intermediate(t1, t2, ONE_SHARED)
    return intermediate.refocus(), intermediate


def combine_disjoint(
    t1: TripletMass, t2: TripletMass
) -> Tuple[TripletMass, MultiFocusIntermediate]:
    """
    Combines two triplets with four distinct singleton focuses.

    Returns:
        * TripletMass: the refocused triplet
        * MultiFocusIntermediate: the exact orthogonal sum over the four singletons and the frame
    """
    intermediate, _ = _intermediate(t1, t2, DISJOINT)
    return intermediate.refocus(), intermediate


def combine_with_intermediate(
    t1: TripletMass, t2: TripletMass
) -> Tuple[TripletMass, MultiFocusIntermediate, float]:
    """Dispatches on the overlap case and returns the triplet, the intermediate and K^-1."""
    intermediate, k_inv = _intermediate(t1, t2, overlap_case(t1, t2))
    return intermediate.refocus(), intermediate, k_inv


def combine_pair_auto(t1: TripletMass, t2: TripletMass) -> TripletMass:
    """Combines any two triplets over the same frame, refocusing when needed."""
    result, _, _ = combine_with_intermediate(t1, t2)
    return result


def fold_with_trail(ts: Sequence[TripletMass]) -> Tuple[TripletMass, List[float]]:
    """
    Left fold of combine_pair_auto, refocusing after every step.

    Args:
        * ts (Sequence[TripletMass]): one or more triplets over the same frame
    Returns:
        * TripletMass: the combined triplet
        * List[float]: K^-1 of every step, one entry per triplet after the first
    Raises:
        * NonCombinableError: carrying the index of the triplet that could not be folded in
    """
    if len(ts) == 0:
        raise EvidenceError("At least one triplet is required")
    check_same_frame(*ts)

    if len(ts) == 1:
        return ts[0], []

    # intermediate steps stay unvalidated tuples; only the final triplet is built
    current = _focused(ts[0])
    trail: List[float] = []
    for step, t in enumerate(ts[1:], start=1):
        f = _focused(t)
        case = _overlap_of(current, f)
        terms, theta_term = _CASE_TERMS[case](current, f)
        try:
            singletons, k_inv = _normalized(terms, theta_term, case)
        except NonCombinableError as err:
            raise err.at_step(step) from err
        current = refocus_masses(singletons)
        trail.append(k_inv)
    return TripletMass(ts[0].frame, *current), trail


def fold_combine(ts: Sequence[TripletMass]) -> TripletMass:
    result, _ = fold_with_trail(ts)
    return result
