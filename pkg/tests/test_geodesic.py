import itertools
import random

import networkx as nx
import numpy as np
import pytest

from cyclohedra.config import Settings
from cyclohedra.constructions import build_fan_minus, build_fan_plus
from cyclohedra.errors import DimensionMismatchError, NotBoundaryEdgeError, ResourceLimitError
from cyclohedra.flips import FlipMove, FlipPath, flip, neighbors
from cyclohedra.geodesic_service import (
    GeodesicService,
    count_incident_flips,
    lower_bound,
    upper_bound,
    validate_path,
)
from cyclohedra.models import SearchMethod
from cyclohedra.state_space import StateSpace
from cyclohedra.triangulation import CsTriangulation, PolygonDim, apply_symmetry, enumerate_cs, random_cs

DIAMETERS = {1: 1, 2: 3, 3: 5, 4: 7, 5: 9, 6: 11, 7: 14, 8: 16, 9: 18, 10: 21}


def flip_graph(d):
    graph = nx.Graph()
    for t in enumerate_cs(PolygonDim.of(d)):
        for _, s in neighbors(t):
            graph.add_edge(t, s)
    return graph


def test_bound_summaries():
    assert upper_bound(1) == 1
    assert upper_bound(7) == 16
    assert upper_bound(10) == 23
    assert lower_bound(4) == pytest.approx(-2.0)
    assert lower_bound(100) == pytest.approx(206.0)


def test_distance_to_itself(geodesics, hexagon):
    report = geodesics.distance(hexagon, hexagon, want_witness=True)
    assert report.value == 0
    assert report.witness.length == 0


def test_distance_to_a_neighbour(geodesics, hexagon):
    assert geodesics.distance(hexagon, flip(hexagon, (0, 2))).value == 1


def test_distance_rejects_mixed_dimensions(geodesics, hexagon):
    with pytest.raises(DimensionMismatchError):
        geodesics.distance(hexagon, build_fan_minus(PolygonDim.of(3)))


def test_max_distance_d2_is_three(geodesics):
    states = list(enumerate_cs(PolygonDim.of(2)))
    assert max(geodesics.distance(a, b).value for a, b in itertools.product(states, states)) == 3


@pytest.mark.parametrize("d", [3, 4])
def test_distances_match_networkx(geodesics, d):
    graph = flip_graph(d)
    states = list(enumerate_cs(PolygonDim.of(d)))
    rng = random.Random(d)
    for source in rng.sample(states, 6):
        oracle = nx.single_source_shortest_path_length(graph, source)
        table = geodesics.distances_from(source)
        space = geodesics.state_space(PolygonDim.of(d))
        for target in rng.sample(states, 10):
            assert geodesics.distance(source, target).value == oracle[target]
            assert table[space.index_of(target)] == oracle[target]


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_diameter_matches_networkx(geodesics, d):
    assert geodesics.diameter(PolygonDim.of(d)).value == nx.diameter(flip_graph(d))


@pytest.mark.parametrize("d", range(1, 8))
def test_diameter_small_dimensions(geodesics, d):
    report = geodesics.diameter(PolygonDim.of(d))
    assert report.value == DIAMETERS[d]
    assert report.method == SearchMethod.ORBIT_REDUCED
    assert not report.partial


@pytest.mark.slow
def test_diameter_d8(geodesics):
    assert geodesics.diameter(PolygonDim.of(8)).value == 16


@pytest.mark.slow
@pytest.mark.parametrize("d", [9, 10])
def test_diameter_deep(geodesics, d):
    assert geodesics.diameter(PolygonDim.of(d)).value == DIAMETERS[d]


def test_diameter_witness_is_a_geodesic(geodesics):
    report = geodesics.diameter(PolygonDim.of(5), want_witness=True)
    witness = report.witness
    assert witness.length == report.value == 9
    assert validate_path(witness) == []
    assert geodesics.distance(witness.start, witness.end).value == 9


def test_eccentricity_square(geodesics):
    assert geodesics.eccentricity(CsTriangulation.build(1, [(0, 2)])).value == 1


def test_eccentricity_hexagon(geodesics):
    for t in enumerate_cs(PolygonDim.of(2)):
        assert geodesics.eccentricity(t).value == 3


def test_eccentricity_is_constant_on_orbits(geodesics):
    t = random_cs(PolygonDim.of(5), random.Random(2))
    value = geodesics.eccentricity(t).value
    for rotation, reflected in [(1, False), (4, True), (7, False)]:
        assert geodesics.eccentricity(apply_symmetry(t, rotation, reflected)).value == value


def test_bit_parallel_eccentricities_match_table_bfs():
    space = StateSpace(PolygonDim.of(5))
    sources = list(range(0, space.size, 4))[:64]
    ecc = space.eccentricities(sources)
    expected = [int(space.bfs_levels(s).max()) for s in sources]
    assert ecc.tolist() == expected


def test_distance_is_a_metric_d3(geodesics):
    space = geodesics.state_space(PolygonDim.of(3))
    matrix = np.stack([space.bfs_levels(i) for i in range(space.size)])
    assert (matrix == matrix.T).all()
    assert (np.diag(matrix) == 0).all()
    for k in range(space.size):
        assert (matrix <= matrix[:, [k]] + matrix[[k], :]).all()


def test_single_source_matches_bidirectional(geodesics):
    rng = random.Random(9)
    dim = PolygonDim.of(5)
    for _ in range(20):
        a, b = random_cs(dim, rng), random_cs(dim, rng)
        plain = geodesics.single_source_distance(a, b, want_witness=True)
        assert plain.method == SearchMethod.BFS
        assert plain.value == geodesics.distance(a, b).value
        assert plain.witness.length == plain.value


def test_witness_runs_between_the_endpoints(geodesics):
    dim = PolygonDim.of(6)
    a, b = build_fan_minus(dim), build_fan_plus(dim, 3)
    report = geodesics.distance(a, b, want_witness=True)
    assert report.witness.start == a
    assert report.witness.end == b
    assert report.witness.length == report.value
    assert validate_path(report.witness) == []


def test_search_cap_is_enforced(tmp_path):
    service = GeodesicService(Settings(cache_dir=tmp_path, search_cap=5))
    dim = PolygonDim.of(5)
    a, b = build_fan_minus(dim), build_fan_plus(dim, 1)
    with pytest.raises(ResourceLimitError) as info:
        service.distance(a, b)
    assert info.value.cap == 5
    exact = GeodesicService(Settings(cache_dir=tmp_path)).distance(a, b).value
    assert 1 <= info.value.partial_lower_bound <= exact


@pytest.mark.parametrize("cap", [20, 60, 150])
def test_interrupted_search_bound_never_exceeds_the_distance(tmp_path, cap):
    rng = random.Random(cap)
    dim = PolygonDim.of(6)
    exact_service = GeodesicService(Settings(cache_dir=tmp_path))
    capped = GeodesicService(Settings(cache_dir=tmp_path, search_cap=cap))
    for _ in range(10):
        a, b = random_cs(dim, rng), random_cs(dim, rng)
        exact = exact_service.distance(a, b).value
        try:
            assert capped.distance(a, b).value == exact
        except ResourceLimitError as error:
            assert error.partial_lower_bound <= exact


def test_neighbour_search_is_not_cut_short_by_the_cap(tmp_path):
    service = GeodesicService(Settings(cache_dir=tmp_path, search_cap=3))
    dim = PolygonDim.of(5)
    assert service.distance(build_fan_minus(dim), build_fan_plus(dim, 5)).value == 1


def test_enumeration_cap_and_partial_diameter(tmp_path):
    service = GeodesicService(Settings(cache_dir=tmp_path, enumeration_cap=10, search_cap=40))
    dim = PolygonDim.of(4)
    with pytest.raises(ResourceLimitError):
        service.diameter(dim)
    report = service.diameter(dim, allow_partial=True)
    assert report.partial
    assert 1 <= report.value <= DIAMETERS[4]


def test_validate_path_flags_a_wrong_move(hexagon):
    step = flip(hexagon, (0, 2))
    other = flip(hexagon, (0, 3))
    wrong = FlipPath([hexagon, step], moves=[FlipPath([hexagon, other]).moves[0]])
    problems = validate_path(wrong)
    assert [p.invariant for p in problems] == ["flip"]


def test_count_incident_flips_examples(hexagon):
    assert count_incident_flips(FlipPath([hexagon]), (1, 2)) == 0
    path = FlipPath([hexagon, flip(hexagon, (0, 2))])
    assert count_incident_flips(path, (1, 2)) == 1
    assert count_incident_flips(path, (2, 1)) == 1


def test_count_incident_flips_rejects_chords(hexagon):
    with pytest.raises(NotBoundaryEdgeError):
        count_incident_flips(FlipPath([hexagon]), (0, 2))


def test_geodesic_changing_a_boundary_triangle_is_incident(geodesics):
    rng = random.Random(4)
    dim = PolygonDim.of(4)
    for _ in range(30):
        a, b = random_cs(dim, rng), random_cs(dim, rng)
        witness = geodesics.distance(a, b, want_witness=True).witness
        for p in range(dim.n):
            q = (p + 1) % dim.n
            apex_a = a.neighbour_sets()[p] & a.neighbour_sets()[q]
            apex_b = b.neighbour_sets()[p] & b.neighbour_sets()[q]
            if apex_a != apex_b:
                assert count_incident_flips(witness, (p, q)) >= 1


def test_flip_move_survives_serialization(hexagon):
    move = FlipPath([hexagon, flip(hexagon, (0, 3))]).moves[0]
    assert FlipMove.from_dict(move.to_dict()) == move
