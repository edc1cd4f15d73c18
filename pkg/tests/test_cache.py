import random

from cyclohedra.cache_service import ResultCache
from cyclohedra.config import SCHEMA_VERSION
from cyclohedra.models import CacheRecord, DistanceReport, SearchMethod
from cyclohedra.triangulation import PolygonDim, random_cs


def test_miss_then_hit(tmp_path, geodesics, hexagon):
    cache = ResultCache(tmp_path)
    params = {"d": 2}
    assert cache.get("diameter", params) is None
    report = geodesics.diameter(PolygonDim.of(2))
    cache.put("diameter", params, report)
    assert ResultCache(tmp_path).get("diameter", params) == report


def test_witness_survives_the_cache(tmp_path, geodesics):
    dim = PolygonDim.of(4)
    rng = random.Random(1)
    a, b = random_cs(dim, rng), random_cs(dim, rng)
    report = geodesics.distance(a, b, want_witness=True)
    cache = ResultCache(tmp_path)
    cache.put("distance", {"pair": 1}, report)
    cached = ResultCache(tmp_path).get("distance", {"pair": 1})
    assert cached.witness.states == report.witness.states
    assert cached.model_dump_json() == report.model_dump_json()


def test_cached_values_match_recomputation(tmp_path, geodesics):
    cache = ResultCache(tmp_path)
    dim = PolygonDim.of(5)
    rng = random.Random(17)
    queries = [(random_cs(dim, rng), random_cs(dim, rng)) for _ in range(100)]
    for i, (a, b) in enumerate(queries):
        cache.put("distance", {"i": i}, geodesics.distance(a, b))
    reloaded = ResultCache(tmp_path)
    for i, (a, b) in enumerate(queries):
        assert reloaded.get("distance", {"i": i}).value == geodesics.distance(a, b).value


def test_partial_reports_are_not_stored(tmp_path):
    cache = ResultCache(tmp_path)
    cache.put("diameter", {"d": 9}, DistanceReport(d=9, value=17, partial=True))
    assert ResultCache(tmp_path).get("diameter", {"d": 9}) is None


def test_disabled_cache_never_hits(tmp_path):
    cache = ResultCache(tmp_path, enabled=False)
    cache.put("diameter", {"d": 1}, DistanceReport(d=1, value=1))
    assert cache.get("diameter", {"d": 1}) is None
    assert not cache.path.exists()


def test_stale_and_malformed_records_are_skipped(tmp_path):
    cache = ResultCache(tmp_path)
    good = CacheRecord(command="diameter", params={"d": 2},
                       report=DistanceReport(d=2, value=3, method=SearchMethod.ORBIT_REDUCED).model_dump(mode="json"))
    stale = good.model_copy(update={"schema_version": SCHEMA_VERSION + 1, "params": {"d": 3}})
    cache.path.parent.mkdir(parents=True, exist_ok=True)
    cache.path.write_text("not json\n" + stale.model_dump_json() + "\n" + good.model_dump_json() + "\n")
    assert cache.get("diameter", {"d": 2}).value == 3
    assert cache.get("diameter", {"d": 3}) is None


def test_clear(tmp_path):
    cache = ResultCache(tmp_path)
    cache.put("diameter", {"d": 1}, DistanceReport(d=1, value=1))
    cache.clear()
    assert not cache.path.exists()
    assert ResultCache(tmp_path).get("diameter", {"d": 1}) is None
