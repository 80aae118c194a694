import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.core import (
    MassFunction,
    belief,
    combine_all,
    combine_pair,
    commonality,
    conflict,
    doubt,
    make_frame,
    normalization,
    plausibility,
    vacuous,
)
from src.core.oracle import _intersection_table, _intersection_table_numpy
from src.errors import FrameMismatchError, InvalidMassError, NonCombinableError
from src.utils.sampling import random_frame, random_mass_function

from .strategies import frames, mass_functions


def _m1(frame):
    return MassFunction(
        frame, {frame.subset(["a"]): 0.6, frame.subset(["b"]): 0.3, frame.theta(): 0.1}
    )


def _m2(frame):
    return MassFunction(
        frame, {frame.subset(["a"]): 0.4, frame.subset(["b"]): 0.4, frame.theta(): 0.2}
    )


def assert_masses_close(m_a, m_b, tolerance):
    for mask in set(m_a.masses) | set(m_b.masses):
        expected = m_b.masses.get(mask, 0.0)
        assert m_a.masses.get(mask, 0.0) == pytest.approx(expected, abs=tolerance)


### --- Mass functions --- ###


def test_vacuous(frame_abc):
    m = vacuous(frame_abc)
    assert m.masses == {0b111: 1.0}
    assert m.is_vacuous()
    assert m.mass(frame_abc.subset(["a", "b"])) == 0.0


@pytest.mark.parametrize(
    "focal",
    [
        {0b001: 0.5, 0b010: 0.4},
        {0b001: -0.1, 0b111: 1.1},
        {0b000: 0.2, 0b111: 0.8},
        {0b001: float("nan"), 0b111: 1.0},
        {0b1000: 1.0},
    ],
)
def test_invalid_mass_functions(frame_abc, focal):
    with pytest.raises(InvalidMassError):
        MassFunction(frame_abc, focal)


def test_mass_function_accessors(frame_abc):
    m = _m1(frame_abc)
    assert [s.labels for s in m.focal_elements()] == [["a"], ["b"], ["a", "b", "c"]]
    assert m.singleton_masses() == [0.6, 0.3, 0.0]
    assert m.mass(frame_abc.subset(["a"])) == 0.6
    assert len(m) == 3
    assert frame_abc.theta() in m.focal
    # zero masses are dropped
    assert len(MassFunction(frame_abc, {0b001: 1.0, 0b010: 0.0})) == 1


def test_subset_from_other_frame(frame_abc):
    other = make_frame(["a", "b", "c"])
    with pytest.raises(FrameMismatchError):
        MassFunction(frame_abc, {other.theta(): 1.0})
    with pytest.raises(FrameMismatchError):
        belief(vacuous(frame_abc), other.theta())


### --- Evidential functions --- ###


def test_vacuous_belief_and_plausibility(frame_abc):
    m = vacuous(frame_abc)
    for subset in frame_abc.all_subsets():
        if subset.is_empty() or subset.is_theta():
            continue
        assert belief(m, subset) == 0.0
        assert plausibility(m, subset) == 1.0


def test_certainty(frame_abc):
    m = MassFunction(frame_abc, {frame_abc.subset(["a"]): 1.0})
    a = frame_abc.subset(["a"])
    assert belief(m, a) == plausibility(m, a) == commonality(m, a) == 1.0
    assert doubt(m, a) == 0.0


def test_belief_of_pair(frame_abc):
    m = _m1(frame_abc)
    ab = frame_abc.subset(["a", "b"])
    assert belief(m, ab) == pytest.approx(0.9)
    assert plausibility(m, ab) == pytest.approx(1.0)
    assert commonality(m, frame_abc.subset(["a"])) == pytest.approx(0.7)
    assert doubt(m, frame_abc.subset(["a"])) == pytest.approx(0.3)
    assert belief(m, frame_abc.theta()) == 1.0


@given(st.data())
def test_belief_bounds(data):
    frame = data.draw(frames(max_size=5))
    m = data.draw(mass_functions(frame))
    for subset in frame.all_subsets():
        bel, pl = belief(m, subset), plausibility(m, subset)
        assert bel <= pl + 1e-12
        assert pl == pytest.approx(1.0 - belief(m, subset.complement()), abs=1e-12)


### --- Orthogonal sum --- ###


def test_conflict(frame_abc):
    certain_a = MassFunction(frame_abc, {frame_abc.subset(["a"]): 1.0})
    certain_b = MassFunction(frame_abc, {frame_abc.subset(["b"]): 1.0})
    assert conflict(certain_a, certain_b) == 1.0
    assert conflict(_m1(frame_abc), vacuous(frame_abc)) == 0.0
    assert conflict(_m1(frame_abc), _m2(frame_abc)) == pytest.approx(0.36)
    assert normalization(_m1(frame_abc), _m2(frame_abc)) == pytest.approx(0.64)


def test_combine_pair_worked_example(frame_abc):
    combined = combine_pair(_m1(frame_abc), _m2(frame_abc))
    assert combined.masses[0b001] == pytest.approx(0.625, abs=1e-12)
    assert combined.masses[0b010] == pytest.approx(0.34375, abs=1e-12)
    assert combined.masses[0b111] == pytest.approx(0.03125, abs=1e-12)


def test_total_conflict(frame_abc):
    certain_a = MassFunction(frame_abc, {frame_abc.subset(["a"]): 1.0})
    certain_b = MassFunction(frame_abc, {frame_abc.subset(["b"]): 1.0})
    with pytest.raises(NonCombinableError):
        combine_pair(certain_a, certain_b)


def test_combine_with_vacuous(frame_abc):
    m = _m1(frame_abc)
    assert_masses_close(combine_pair(m, vacuous(frame_abc)), m, 1e-12)
    assert_masses_close(combine_all([m, vacuous(frame_abc), vacuous(frame_abc)]), m, 1e-12)


def test_combine_all_single(frame_abc):
    m = _m1(frame_abc)
    assert combine_all([m]) is m


def test_combine_all_reports_step(frame_abc):
    certain_a = MassFunction(frame_abc, {frame_abc.subset(["a"]): 1.0})
    certain_b = MassFunction(frame_abc, {frame_abc.subset(["b"]): 1.0})
    with pytest.raises(NonCombinableError, match="step 2") as info:
        combine_all([certain_a, vacuous(frame_abc), certain_b])
    assert info.value.step == 2


def test_combine_across_frames(frame_abc):
    with pytest.raises(FrameMismatchError):
        combine_pair(_m1(frame_abc), vacuous(make_frame(["a", "b", "c"])))


@given(st.data())
def test_commutativity(data):
    frame = data.draw(frames(max_size=6))
    m1 = data.draw(mass_functions(frame))
    m2 = data.draw(mass_functions(frame))
    assume(normalization(m1, m2) > 1e-6)
    assert_masses_close(combine_pair(m1, m2), combine_pair(m2, m1), 1e-12)


@given(st.data())
@settings(max_examples=50)
def test_associativity(data):
    frame = data.draw(frames(max_size=6))
    m1, m2, m3 = (data.draw(mass_functions(frame)) for _ in range(3))
    assume(normalization(m1, m2) > 1e-3 and normalization(m2, m3) > 1e-3)
    assume(normalization(combine_pair(m1, m2), m3) > 1e-3)
    left = combine_pair(combine_pair(m1, m2), m3)
    right = combine_pair(m1, combine_pair(m2, m3))
    assert_masses_close(left, right, 1e-9)


def test_order_of_combine_all(rng):
    frame = random_frame(4)
    ms = [random_mass_function(rng, frame, full_support=True) for _ in range(3)]
    reference = combine_all(ms)
    for order in itertools.permutations(ms):
        assert_masses_close(combine_all(list(order)), reference, 1e-9)


@given(st.data())
def test_normalization_sums_to_one(data):
    frame = data.draw(frames(max_size=6))
    m1 = data.draw(mass_functions(frame))
    m2 = data.draw(mass_functions(frame))
    assume(normalization(m1, m2) > 1e-9)
    combined = combine_pair(m1, m2)
    assert sum(combined.masses.values()) == pytest.approx(1.0, abs=1e-9)
    assert 0 not in combined.masses


def test_vectorized_intersection_table(rng):
    frame = random_frame(7)
    m1 = random_mass_function(rng, frame, full_support=True)
    m2 = random_mass_function(rng, frame, full_support=True)
    loop = _intersection_table(m1, m2)
    vectorized = _intersection_table_numpy(m1, m2)
    assert set(loop) == set(vectorized)
    for mask, mass in loop.items():
        assert vectorized[mask] == pytest.approx(mass, abs=1e-12)


def test_full_support_combination(rng):
    # large enough to take the vectorized path
    frame = random_frame(9)
    m1 = random_mass_function(rng, frame, full_support=True)
    m2 = random_mass_function(rng, frame, full_support=True)
    combined = combine_pair(m1, m2)
    assert sum(combined.masses.values()) == pytest.approx(1.0, abs=1e-9)
