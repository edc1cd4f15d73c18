import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cyclohedra.constructions import (
    bridge_path,
    build_abcd_pair,
    build_fan_minus,
    build_fan_plus,
    choose_a,
    comb_transform,
    enumerate_abcd_pairs,
    enumerate_staircases,
    pair_report,
    theorem2_bound,
    theorem3_bound,
    theorem3_intermediate_bound,
    theorem3_pair,
    theorem3_window,
    upper_bound_path,
)
from cyclohedra.errors import (
    ConstraintViolationError,
    DimensionTooSmallError,
    InvalidStaircaseError,
    OutOfRangeError,
)
from cyclohedra.geodesic_service import upper_bound, validate_path
from cyclohedra.models import AbcdParams
from cyclohedra.triangulation import CsTriangulation, Edge, PolygonDim, enumerate_cs, random_cs, validate


def edge_set(pairs):
    return {Edge(min(u, v), max(u, v)) for u, v in pairs}


def test_fan_minus_examples():
    assert build_fan_minus(PolygonDim.of(2)) == CsTriangulation.build(2, [(0, 3), (0, 2), (3, 5)])
    fan = build_fan_minus(PolygonDim.of(4))
    assert set(fan.interior) == edge_set([(0, 5), (0, 2), (0, 3), (0, 4), (5, 7), (5, 8), (5, 9)])


def test_fan_plus_example():
    assert build_fan_plus(PolygonDim.of(2), 1) == CsTriangulation.build(2, [(1, 4), (0, 4), (1, 3)])


@pytest.mark.parametrize("d", range(1, 9))
def test_fans_are_valid(d):
    dim = PolygonDim.of(d)
    assert validate(build_fan_minus(dim)).is_valid
    for x in range(1, d + 1):
        fan = build_fan_plus(dim, x)
        assert validate(fan).is_valid
        assert fan.diagonal() == dim.edge(x, dim.opposite(x))


def test_fan_plus_range():
    with pytest.raises(OutOfRangeError):
        build_fan_plus(PolygonDim.of(4), 0)
    with pytest.raises(OutOfRangeError):
        build_fan_plus(PolygonDim.of(4), 5)


def test_comb_of_a_fan_is_empty():
    assert comb_transform(build_fan_minus(PolygonDim.of(6))).length == 0


def test_comb_of_hexagon_fan_plus():
    t = build_fan_plus(PolygonDim.of(2), 1)
    path = comb_transform(t)
    assert path.length <= 1


@pytest.mark.parametrize("d", range(2, 7))
def test_comb_needs_at_most_d_minus_one_flips(d):
    dim = PolygonDim.of(d)
    fan = build_fan_minus(dim)
    for t in enumerate_cs(dim):
        path = comb_transform(t)
        assert path.length <= d - 1
        assert validate_path(path) == []
        if t.diagonal() == Edge(0, d + 1):
            assert path.end == fan


def test_comb_at_another_apex():
    t = random_cs(PolygonDim.of(6), random.Random(1))
    path = comb_transform(t, apex=3)
    assert path.start == t
    assert path.length <= 5
    assert validate_path(path) == []


@pytest.mark.parametrize("d", range(1, 9))
def test_bridge_length(d):
    dim = PolygonDim.of(d)
    for x in range(1, d + 1):
        path = bridge_path(x, dim)
        assert path.length == d - x + 1
        assert path.start == build_fan_plus(dim, x)
        assert path.end == build_fan_minus(dim)


def test_bridge_bounds_fan_distances(geodesics):
    dim = PolygonDim.of(4)
    for x in range(1, 5):
        assert geodesics.distance(build_fan_plus(dim, x), build_fan_minus(dim)).value <= 4 - x + 1


def test_upper_path_between_equal_states(hexagon):
    assert upper_bound_path(hexagon, hexagon).length == 0


def _check_all_pairs(geodesics, d):
    dim = PolygonDim.of(d)
    space = geodesics.state_space(dim)
    bound = upper_bound(d)
    for i, t1 in enumerate(space.states):
        levels = space.bfs_levels(i)
        for j, t2 in enumerate(space.states):
            path = upper_bound_path(t1, t2)
            assert path.start == t1 and path.end == t2
            assert levels[j] <= path.length <= bound


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_upper_path_exhaustive(geodesics, d):
    _check_all_pairs(geodesics, d)


@pytest.mark.slow
def test_upper_path_exhaustive_d5(geodesics):
    _check_all_pairs(geodesics, 5)


@settings(max_examples=120, deadline=None)
@given(d=st.integers(min_value=1, max_value=8), rng=st.randoms(use_true_random=False))
def test_upper_path_random_pairs(d, rng):
    dim = PolygonDim.of(d)
    t1, t2 = random_cs(dim, rng), random_cs(dim, rng)
    path = upper_bound_path(t1, t2)
    assert validate_path(path) == []
    assert path.start == t1
    assert path.end == t2
    assert path.length <= upper_bound(d)


def test_upper_path_on_d7_diameter_witnesses(geodesics):
    report = geodesics.diameter(PolygonDim.of(7), want_witness=True)
    assert report.value == 14
    path = upper_bound_path(report.witness.start, report.witness.end)
    assert 14 <= path.length <= 16


def test_pair_rejected_by_the_l_k_gate():
    with pytest.raises(ConstraintViolationError) as info:
        build_abcd_pair(3, 4, 4, [2])
    assert info.value.inequality == "l < k"


def test_pair_4_5_6():
    pair = build_abcd_pair(4, 5, 6, [2, 2])
    p = pair.params
    assert (p.a, p.b, p.c, p.d, p.k) == (2, 4, 5, 6, 3)
    assert (pair.tau_minus, pair.tau_plus) == (2, 0)
    assert set(pair.a_minus.interior) == edge_set([
        (0, 7), (0, 5), (0, 6), (1, 4), (1, 5), (2, 4),
        (7, 12), (7, 13), (8, 11), (8, 12), (9, 11),
    ])
    # the interior edges of A+ form a single zigzag
    assert set(pair.a_plus.interior) == edge_set([
        (1, 13), (2, 13), (2, 12), (3, 12), (3, 11), (4, 11),
        (4, 10), (5, 10), (5, 9), (6, 9), (6, 8),
    ])
    assert pair.shared_edges() == []


def test_default_staircase_matches_explicit():
    assert build_abcd_pair(4, 5, 6).params == build_abcd_pair(4, 5, 6, [2, 2]).params


def test_pair_argument_errors():
    with pytest.raises(ConstraintViolationError) as info:
        build_abcd_pair(2, 4, 6, [2, 2, 2])
    assert info.value.inequality == "b >= 3"
    with pytest.raises(ConstraintViolationError) as info:
        build_abcd_pair(4, 7, 6, [2])
    assert info.value.inequality == "b < c <= d"
    with pytest.raises(InvalidStaircaseError):
        build_abcd_pair(4, 5, 6, [2])
    with pytest.raises(InvalidStaircaseError):
        build_abcd_pair(4, 5, 6, [1, 2])
    with pytest.raises(InvalidStaircaseError):
        build_abcd_pair(4, 5, 6, [4, 2])
    with pytest.raises(DimensionTooSmallError):
        build_abcd_pair(3, 4, 1, [2])


def test_staircases_leave_room_for_the_zigzag():
    for staircase in enumerate_staircases(4, 5, 7):
        assert len(staircase) == 3
        assert min(staircase) >= 2
        assert sum(staircase) - 2 <= 4


@pytest.mark.parametrize("d", range(5, 9))
def test_constructible_pairs_are_disjoint_and_gated(d):
    pairs = list(enumerate_abcd_pairs(d))
    assert pairs
    for pair in pairs:
        p = pair.params
        assert validate(pair.a_minus).is_valid
        assert validate(pair.a_plus).is_valid
        assert pair.shared_edges() == []
        assert b_c_d_gates_hold(p)
        assert 2 * (p.a - 1) == pair.tau_minus + pair.tau_plus


def b_c_d_gates_hold(p):
    return p.b < p.c <= p.d and p.d <= p.a + p.b and 2 * p.a + p.b + 2 < 2 * p.d


@pytest.mark.parametrize("d", [5, 6])
def test_pair_distances_respect_the_pair_bound(geodesics, d):
    for pair in enumerate_abcd_pairs(d, c_equals_d_only=True):
        assert geodesics.distance(pair.a_minus, pair.a_plus).value >= theorem2_bound(pair.params)


def test_theorem2_bound_examples():
    def params(a, b, c, d):
        return AbcdParams(a=a, b=b, c=c, d=d, k=b // 2 + 1, l=0, staircase=[])

    assert theorem2_bound(params(1, 3, 4, 4)) == Fraction(-5, 2)
    assert theorem2_bound(params(3, 7, 8, 9)) == Fraction(13, 2)
    assert theorem2_bound(params(2, 4, 5, 6)) == 2


def test_choose_a_examples():
    assert choose_a(6) == 2
    a = choose_a(100)
    assert a == 4
    assert Fraction(5, 2) * a + Fraction(102, a) <= 40


def test_choose_a_needs_d_above_five():
    with pytest.raises(DimensionTooSmallError):
        choose_a(5)


def test_choose_a_satisfies_both_constraints():
    for d in range(6, 10_001):
        a = choose_a(d)
        assert 1 <= a and 2 * a < d - 1
        assert (5 * a * a + 2 * d + 4) ** 2 <= 64 * a * a * d


def test_theorem3_window_d6():
    low, high = theorem3_window(6)
    assert low == pytest.approx(1.16, abs=0.01)
    assert high == pytest.approx(2.76, abs=0.01)


def test_theorem3_bounds():
    assert theorem3_bound(4) == pytest.approx(-2.0)
    assert theorem3_bound(100) == pytest.approx(206.0)
    assert theorem3_intermediate_bound(6, 2) == 2


@pytest.mark.parametrize("d", range(6, 13))
def test_theorem3_pair_parameters(d):
    pair = theorem3_pair(d)
    a = choose_a(d)
    p = pair.params
    assert (p.a, p.b, p.c) == (a, d - a, d - a + 1)
    assert pair.shared_edges() == []


def test_theorem3_pair_d6_is_the_4_5_6_pair():
    assert theorem3_pair(6).params == build_abcd_pair(4, 5, 6, [2, 2]).params


@pytest.mark.parametrize("d", [6, 7, pytest.param(8, marks=pytest.mark.slow)])
def test_theorem3_pair_distance(geodesics, d):
    pair = theorem3_pair(d)
    value = geodesics.distance(pair.a_minus, pair.a_plus).value
    assert value >= theorem3_intermediate_bound(d, pair.params.a)
    assert value >= math.ceil(theorem3_bound(d))


def test_pair_report_fields():
    report = pair_report(build_abcd_pair(4, 5, 6, [2, 2]))
    assert report.params.a == 2
    assert report.l_operational == 3
    assert report.l_body == 2
    assert report.l_caption == 5
    assert all(report.gates.values())
    assert report.theorem2_bound == "2"
    assert report.shared_edges == []
    assert len(report.a_minus) == len(report.a_plus) == 11


@pytest.mark.slow
@pytest.mark.parametrize("d, expected", [(6, 1), (7, 3)])
def test_every_staircase_respects_the_pair_bound(geodesics, d, expected):
    pairs = [pair for pair in enumerate_abcd_pairs(d) if pair.params.c < d]
    assert len(pairs) >= expected
    for pair in pairs:
        assert geodesics.distance(pair.a_minus, pair.a_plus).value >= theorem2_bound(pair.params)


@pytest.mark.slow
@pytest.mark.parametrize("d", [7, 8])
def test_c_equals_d_pairs_respect_the_pair_bound(geodesics, d):
    pairs = list(enumerate_abcd_pairs(d, c_equals_d_only=True))
    assert pairs
    for pair in pairs:
        assert geodesics.distance(pair.a_minus, pair.a_plus).value >= theorem2_bound(pair.params)


@pytest.mark.parametrize("d", [6, 7, pytest.param(8, marks=pytest.mark.slow)])
def test_upper_path_is_no_shorter_than_the_distance(geodesics, d):
    rng = random.Random(100 + d)
    dim = PolygonDim.of(d)
    for _ in range(25):
        t1, t2 = random_cs(dim, rng), random_cs(dim, rng)
        path = upper_bound_path(t1, t2)
        exact = geodesics.distance(t1, t2).value
        assert exact <= path.length <= upper_bound(d)
        assert validate_path(path) == []
