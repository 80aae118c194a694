import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.core import combine_all, combine_pair, make_frame
from src.errors import (
    EvidenceError,
    FocusMismatchError,
    FrameSizeError,
    InvalidMassError,
    NonCombinableError,
)
from src.triplet import (
    DISJOINT,
    EQUAL,
    ONE_SHARED,
    MultiFocusIntermediate,
    TripletMass,
    combine_disjoint,
    combine_equal,
    combine_one_shared,
    combine_pair_auto,
    combine_with_intermediate,
    fold_combine,
    fold_with_trail,
    normalization,
    outstanding,
    overlap_case,
    to_general,
)
from src.utils.sampling import random_frame, random_triplet, random_triplet_pair

from .strategies import frames, triplets

X, Y, Z, U, V = range(5)


def assert_triplet(t, a1, a2, m1, m2, mt, tolerance=1e-6):
    assert (t.a1, t.a2) == (a1, a2)
    assert t.m1 == pytest.approx(m1, abs=tolerance)
    assert t.m2 == pytest.approx(m2, abs=tolerance)
    assert t.mt == pytest.approx(mt, abs=tolerance)


def assert_matches_oracle(intermediate, exact, tolerance=1e-12):
    general = intermediate.to_general()
    for mask in set(general.masses) | set(exact.masses):
        assert general.masses.get(mask, 0.0) == pytest.approx(
            exact.masses.get(mask, 0.0), abs=tolerance
        )


### --- Triplet mass functions --- ###


@pytest.mark.parametrize(
    "a1, a2, m1, m2, mt, error",
    [
        (X, X, 0.5, 0.3, 0.2, FocusMismatchError),
        (X, 7, 0.5, 0.3, 0.2, FocusMismatchError),
        (X, Y, 0.3, 0.5, 0.2, InvalidMassError),
        (X, Y, 0.5, 0.3, 0.3, InvalidMassError),
        (X, Y, 1.2, -0.2, 0.0, InvalidMassError),
    ],
)
def test_invalid_triplets(frame_xyzuv, a1, a2, m1, m2, mt, error):
    with pytest.raises(error):
        TripletMass(frame_xyzuv, a1, a2, m1, m2, mt)


def test_triplet_needs_two_labels():
    with pytest.raises(FrameSizeError):
        TripletMass.vacuous(make_frame(["a"]), 0, 0)


def test_triplet_accessors(triplet_xy):
    assert triplet_xy.focuses == (X, Y)
    assert triplet_xy.mt == pytest.approx(0.2)
    assert triplet_xy.mass_of(Y) == 0.3
    assert triplet_xy.mass_of(Z) == 0.0
    assert not triplet_xy.is_vacuous()


### --- Outstanding rule --- ###


def test_outstanding(frame_abc):
    assert_triplet(outstanding(frame_abc, [0.5, 0.3, 0.2]), 0, 1, 0.5, 0.3, 0.2, 1e-12)


def test_outstanding_tie_goes_to_lowest_index(frame_abc):
    assert_triplet(outstanding(frame_abc, [0.4, 0.4, 0.1]), 0, 1, 0.4, 0.4, 0.2, 1e-12)
    assert_triplet(outstanding(frame_abc, [0.1, 0.4, 0.4]), 1, 2, 0.4, 0.4, 0.2, 1e-12)


def test_outstanding_of_nothing(frame_abc):
    t = outstanding(frame_abc, [0.0, 0.0, 0.0])
    assert_triplet(t, 0, 1, 0.0, 0.0, 1.0)
    assert t.is_vacuous()


@pytest.mark.parametrize("masses", [[0.5, 0.3], [0.5, -0.1, 0.2], [0.6, 0.3, 0.2]])
def test_invalid_outstanding(frame_abc, masses):
    with pytest.raises(InvalidMassError):
        outstanding(frame_abc, masses)


def test_outstanding_is_identity_on_triplets(triplet_xy):
    general = to_general(triplet_xy)
    assert outstanding(triplet_xy.frame, general.singleton_masses()) == triplet_xy


def test_outstanding_keeps_preferred_zero_runner_up(frame_xyzuv):
    t = TripletMass(frame_xyzuv, X, Z, 1.0, 0.0, 0.0)
    masses = to_general(t).singleton_masses()
    assert outstanding(frame_xyzuv, masses).a2 == Y
    assert outstanding(frame_xyzuv, masses, prefer=t.focuses) == t


def test_outstanding_positive_ties_ignore_preference(frame_abc):
    t = outstanding(frame_abc, [0.4, 0.4, 0.1], prefer=(1, 0))
    assert_triplet(t, 0, 1, 0.4, 0.4, 0.2, 1e-12)


def test_to_general(frame_xyzuv, triplet_xy):
    assert to_general(TripletMass.vacuous(frame_xyzuv)).is_vacuous()
    masses = to_general(triplet_xy).masses
    assert masses[1 << X] == 0.5 and masses[1 << Y] == 0.3
    assert masses[frame_xyzuv.full_mask] == pytest.approx(0.2)


def test_intermediate_validation(frame_xyzuv):
    with pytest.raises(FocusMismatchError):
        MultiFocusIntermediate(frame_xyzuv, {X: 1.0}, 0.0)
    with pytest.raises(InvalidMassError):
        MultiFocusIntermediate(frame_xyzuv, {X: 0.5, Y: 0.4}, 0.2)


### --- Equal focuses --- ###


def test_combine_equal(frame_xyzuv):
    t = TripletMass(frame_xyzuv, X, Y, 0.6, 0.3, 0.1)
    assert normalization(t, t) == pytest.approx(0.64, abs=1e-12)
    assert_triplet(combine_equal(t, t), X, Y, 0.75, 0.234375, 0.015625)


def test_combine_equal_swaps_when_runner_up_overtakes(frame_xyzuv):
    t1 = TripletMass(frame_xyzuv, X, Y, 0.4, 0.3, 0.3)
    t2 = TripletMass(frame_xyzuv, Y, X, 0.8, 0.1, 0.1)
    combined = combine_equal(t1, t2)
    assert (combined.a1, combined.a2) == (Y, X)
    assert combined.m1 >= combined.m2


def test_combine_equal_with_vacuous(frame_xyzuv):
    t = TripletMass(frame_xyzuv, X, Y, 0.6, 0.3, 0.1)
    assert_triplet(
        combine_equal(t, TripletMass.vacuous(frame_xyzuv, Y, X)), X, Y, 0.6, 0.3, 0.1, 1e-12
    )


def test_combine_equal_total_conflict(frame_xyzuv):
    t1 = TripletMass(frame_xyzuv, X, Y, 1.0, 0.0, 0.0)
    t2 = TripletMass(frame_xyzuv, Y, X, 1.0, 0.0, 0.0)
    with pytest.raises(NonCombinableError) as info:
        combine_equal(t1, t2)
    assert info.value.case == EQUAL


def test_wrong_overlap(triplet_xy, frame_xyzuv):
    with pytest.raises(FocusMismatchError):
        combine_equal(triplet_xy, TripletMass.vacuous(frame_xyzuv, X, Z))
    with pytest.raises(FocusMismatchError):
        combine_disjoint(triplet_xy, TripletMass.vacuous(frame_xyzuv, X, Z))


### --- One shared focus --- ###


def test_combine_one_shared(frame_xyzuv, triplet_xy):
    t2 = TripletMass.from_masses(frame_xyzuv, X, Z, 0.4, 0.4)
    assert normalization(triplet_xy, t2) == pytest.approx(0.56, abs=1e-12)

    triplet, intermediate = combine_one_shared(triplet_xy, t2)
    assert intermediate.singletons[X] == pytest.approx(0.678571, abs=1e-6)
    assert intermediate.singletons[Y] == pytest.approx(0.107143, abs=1e-6)
    assert intermediate.singletons[Z] == pytest.approx(0.142857, abs=1e-6)
    assert intermediate.mt == pytest.approx(0.071429, abs=1e-6)
    assert_triplet(triplet, X, Z, 0.678571, 0.142857, 0.178571)
    assert_matches_oracle(intermediate, combine_pair(to_general(triplet_xy), to_general(t2)))


def test_combine_one_shared_crossed_positions(frame_xyzuv, triplet_xy):
    canonical = TripletMass.from_masses(frame_xyzuv, X, Z, 0.4, 0.4)
    crossed = TripletMass.from_masses(frame_xyzuv, Z, X, 0.4, 0.4)
    assert combine_one_shared(triplet_xy, crossed) == combine_one_shared(triplet_xy, canonical)

    # shared focus as the first triplet's runner-up
    t1 = TripletMass.from_masses(frame_xyzuv, Y, X, 0.5, 0.3)
    _, intermediate = combine_one_shared(t1, canonical)
    assert_matches_oracle(intermediate, combine_pair(to_general(t1), to_general(canonical)))


def test_combine_one_shared_with_vacuous(frame_xyzuv, triplet_xy):
    triplet, intermediate = combine_one_shared(
        triplet_xy, TripletMass.vacuous(frame_xyzuv, X, Z)
    )
    assert_triplet(triplet, X, Y, 0.5, 0.3, 0.2, 1e-12)
    assert intermediate.singletons[Z] == 0.0
    assert_matches_oracle(intermediate, to_general(triplet_xy))


### --- Disjoint focuses --- ###


def test_combine_disjoint(frame_xyzuv, triplet_xy):
    t2 = TripletMass.from_masses(frame_xyzuv, U, V, 0.4, 0.3)
    assert normalization(triplet_xy, t2) == pytest.approx(0.44, abs=1e-12)

    triplet, intermediate = combine_disjoint(triplet_xy, t2)
    expected = {X: 0.340909, Y: 0.204545, U: 0.181818, V: 0.136364}
    for index, mass in expected.items():
        assert intermediate.singletons[index] == pytest.approx(mass, abs=1e-6)
    assert intermediate.mt == pytest.approx(0.136364, abs=1e-6)
    assert_triplet(triplet, X, Y, 0.340909, 0.204545, 0.454545)
    assert_matches_oracle(intermediate, combine_pair(to_general(triplet_xy), to_general(t2)))


def test_combine_disjoint_certainties(frame_xyzuv):
    t1 = TripletMass(frame_xyzuv, X, Y, 0.7, 0.3, 0.0)
    t2 = TripletMass(frame_xyzuv, U, V, 0.6, 0.4, 0.0)
    with pytest.raises(NonCombinableError) as info:
        combine_disjoint(t1, t2)
    assert info.value.case == DISJOINT


def test_combine_disjoint_commutes(frame_xyzuv, triplet_xy):
    t2 = TripletMass.from_masses(frame_xyzuv, U, V, 0.4, 0.3)
    _, forward = combine_disjoint(triplet_xy, t2)
    _, backward = combine_disjoint(t2, triplet_xy)
    for index in forward.singletons:
        assert forward.singletons[index] == pytest.approx(backward.singletons[index], abs=1e-12)
    assert forward.mt == pytest.approx(backward.mt, abs=1e-12)


### --- Dispatch and fold --- ###


@pytest.mark.parametrize("case", [EQUAL, ONE_SHARED, DISJOINT])
def test_dispatch(rng, case):
    frame = random_frame(6)
    for _ in range(20):
        t1, t2 = random_triplet_pair(rng, frame, case)
        assert overlap_case(t1, t2) == case
        specific = {
            EQUAL: lambda: combine_equal(t1, t2),
            ONE_SHARED: lambda: combine_one_shared(t1, t2)[0],
            DISJOINT: lambda: combine_disjoint(t1, t2)[0],
        }[case]()
        assert combine_pair_auto(t1, t2) == specific


def test_fold_single(triplet_xy):
    assert fold_combine([triplet_xy]) is triplet_xy
    assert fold_with_trail([triplet_xy]) == (triplet_xy, [])


def test_fold_with_vacuous(frame_xyzuv, triplet_xy):
    combined = fold_combine(
        [triplet_xy, TripletMass.vacuous(frame_xyzuv, U, V), TripletMass.vacuous(frame_xyzuv)]
    )
    assert_triplet(combined, X, Y, 0.5, 0.3, 0.2, 1e-12)


def test_fold_with_vacuous_keeps_zero_runner_up(frame_xyzuv):
    t = TripletMass(frame_xyzuv, Z, U, 0.7, 0.0, 0.3)
    vacuous = TripletMass.vacuous(frame_xyzuv)
    combined = fold_combine([t, vacuous, vacuous])
    assert_triplet(combined, Z, U, 0.7, 0.0, 0.3, 1e-12)


def test_refocus_prefers_first_triplet_on_zero_ties(frame_xyzuv):
    t1 = TripletMass(frame_xyzuv, U, V, 0.6, 0.0, 0.4)
    t2 = TripletMass(frame_xyzuv, X, Y, 0.0, 0.0, 1.0)
    assert combine_disjoint(t1, t2)[0].focuses == (U, V)
    assert combine_disjoint(t2, t1)[0].focuses == (U, X)


def test_fold_matches_pairwise_chain(rng):
    frame = random_frame(6)
    for _ in range(20):
        ts = [random_triplet(rng, frame, min_ignorance=0.05) for _ in range(6)]
        chained = ts[0]
        for t in ts[1:]:
            chained = combine_pair_auto(chained, t)
        assert fold_combine(ts) == chained


def test_fold_equal_focuses_is_exact(rng):
    frame = random_frame(4)
    ts = [random_triplet(rng, frame, focuses=(1, 3)) for _ in range(3)]
    combined = fold_combine(ts)
    exact = combine_all([to_general(t) for t in ts])
    general = to_general(combined)
    for mask in set(general.masses) | set(exact.masses):
        assert general.masses.get(mask, 0.0) == pytest.approx(
            exact.masses.get(mask, 0.0), abs=1e-12
        )


def test_fold_trail(frame_xyzuv, triplet_xy):
    t2 = TripletMass.from_masses(frame_xyzuv, X, Z, 0.4, 0.4)
    _, trail = fold_with_trail([triplet_xy, t2])
    assert trail == [pytest.approx(0.56, abs=1e-12)]


def test_fold_reports_failing_step(frame_xyzuv):
    ts = [
        TripletMass(frame_xyzuv, X, Y, 1.0, 0.0, 0.0),
        TripletMass.vacuous(frame_xyzuv),
        TripletMass(frame_xyzuv, U, V, 1.0, 0.0, 0.0),
    ]
    with pytest.raises(NonCombinableError, match="step 2") as info:
        fold_combine(ts)
    assert info.value.step == 2


def test_fold_of_nothing():
    with pytest.raises(EvidenceError):
        fold_combine([])


### --- Properties --- ###


@given(st.data())
def test_combined_triplets_are_normalized_and_ordered(data):
    frame = data.draw(frames(min_size=4, max_size=8))
    ts = [data.draw(triplets(frame)) for _ in range(data.draw(st.integers(2, 6)))]
    try:
        combined = fold_combine(ts)
    except NonCombinableError:
        return
    assert combined.m1 + combined.m2 + combined.mt == pytest.approx(1.0, abs=1e-9)
    assert combined.m1 >= combined.m2


@given(st.data())
def test_pairwise_combination_commutes(data):
    frame = data.draw(frames(min_size=4, max_size=8))
    t1 = data.draw(triplets(frame))
    t2 = data.draw(triplets(frame))
    assume(normalization(t1, t2) > 1e-12)
    forward, forward_intermediate, _ = combine_with_intermediate(t1, t2)
    backward, backward_intermediate, _ = combine_with_intermediate(t2, t1)
    assert (forward.m1, forward.m2, forward.mt) == (backward.m1, backward.m2, backward.mt)
    # a zero-mass focus is kept for provenance and follows the argument order
    assert forward.a1 == backward.a1 or forward.m1 == 0.0
    assert forward.a2 == backward.a2 or forward.m2 == 0.0
    assert forward_intermediate == backward_intermediate


@given(st.data())
@settings(max_examples=200)
def test_intermediate_matches_oracle(data):
    frame = data.draw(frames(min_size=3, max_size=10))
    t1 = data.draw(triplets(frame))
    t2 = data.draw(triplets(frame))
    assume(normalization(t1, t2) > 1e-9)
    _, intermediate, _ = combine_with_intermediate(t1, t2)
    assert_matches_oracle(intermediate, combine_pair(to_general(t1), to_general(t2)))
