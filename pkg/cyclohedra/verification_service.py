"""
Verification Service

Handles:
- The table of diameters for small dimensions, with +3 jumps and bounds
- Empirical checks of the upper bound, the pair lower bounds and the
  deletion inequality for a range of dimensions
- Running independent dimensions in worker processes, ordered by dimension
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from .cache_service import ResultCache
from .config import Settings
from .constructions import (
    build_fan_minus,
    build_fan_plus,
    enumerate_abcd_pairs,
    theorem2_bound,
    theorem3_bound,
    theorem3_intermediate_bound,
    theorem3_pair,
    upper_bound_path,
)
from .deletion import LemmaVerifier
from .geodesic_service import GeodesicService, lower_bound, upper_bound, validate_path
from .models import BoundCheck, DistanceReport, VerifyReport, VerifyRow
from .triangulation import PolygonDim, cs_count, random_cs

logger = logging.getLogger(__name__)

# every staircase of the c < d pairs is checked up to this dimension
STAIRCASE_DIM_LIMIT = 7

T = TypeVar("T")
R = TypeVar("R")


def _ordered_map(fn: Callable[[T], R], items: Sequence[T], jobs: int) -> List[R]:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


class _RowTask:
    """Picklable diameter computation for one dimension."""

    def __init__(self, settings: Settings, deep: bool, use_cache: bool, progress: bool):
        self.settings = settings
        self.deep = deep
        self.use_cache = use_cache
        self.progress = progress

    def __call__(self, d: int) -> DistanceReport:
        settings = self.settings
        if not self.deep:
            cap = min(settings.table_cap, settings.enumeration_cap)
            settings = settings.model_copy(update={"enumeration_cap": cap,
                                                   "search_cap": min(cap, settings.search_cap)})
        cache = ResultCache(settings.cache_dir, enabled=self.use_cache)
        params = {"d": d}
        cached = cache.get("diameter", params)
        if cached is not None:
            return cached
        report = GeodesicService(settings).diameter(PolygonDim.of(d), allow_partial=True, progress=self.progress)
        cache.put("diameter", params, report)
        return report


class _BoundsTask:
    """Picklable verify-bounds run for one dimension."""

    def __init__(self, settings: Settings, samples: int, seed: int):
        self.settings = settings
        self.samples = samples
        self.seed = seed

    def __call__(self, d: int) -> List[BoundCheck]:
        return VerificationService(GeodesicService(self.settings)).bound_checks(d, self.samples, self.seed)


class VerificationService:
    """
    Diameter tables and empirical bound checks.
    """

    def __init__(self, geodesics: GeodesicService):
        """
        Initialize Verification Service.

        Args:
            geodesics: GeodesicService providing distances and diameters
        """
        self.geodesics = geodesics
        self.lemmas = LemmaVerifier(geodesics)
        logger.info("Verification Service initialized")

    def table(self, d_max: int, d_min: int = 1, deep: bool = False, use_cache: bool = True,
              jobs: int = 1, progress: bool = False) -> VerifyReport:
        """
        Diameters for d_min..d_max.

        Rows whose state space exceeds the table cap (without deep) or the
        enumeration cap are computed as tagged lower bounds.
        """
        dims = list(range(d_min, d_max + 1))
        task = _RowTask(self.geodesics.settings, deep, use_cache, progress and jobs <= 1)
        reports = _ordered_map(task, dims, jobs)
        report = VerifyReport()
        previous: Optional[DistanceReport] = None
        for d, result in zip(dims, reports):
            row = VerifyRow(
                d=d, value=result.value, partial=result.partial, upper=upper_bound(d),
                lower=round(lower_bound(d), 6), states=cs_count(d), orbits=result.orbits,
            )
            if not result.partial:
                row.within_bounds = lower_bound(d) <= result.value <= upper_bound(d)
                if previous is not None and not previous.partial and previous.d == d - 1:
                    row.jump = result.value - previous.value == 3
            report.rows.append(row)
            previous = result
        logger.info(f"Table d={d_min}..{d_max}: {[r.value for r in report.rows]}")
        return report

    def verify_bounds(self, d_min: int, d_max: int, samples: int = 200, seed: int = 0,
                      jobs: int = 1) -> List[BoundCheck]:
        dims = list(range(d_min, d_max + 1))
        task = _BoundsTask(self.geodesics.settings, samples, seed)
        if jobs <= 1:
            rows = [self.bound_checks(d, samples, seed) for d in dims]
        else:
            rows = _ordered_map(task, dims, jobs)
        return [check for row in rows for check in row]

    def bound_checks(self, d: int, samples: int = 200, seed: int = 0) -> List[BoundCheck]:
        """Every check for one dimension."""
        checks = [self.check_upper_bound(d, samples, seed)]
        checks += self.check_pair_bounds(d)
        checks += self.check_deletion(d)
        return checks

    def check_upper_bound(self, d: int, samples: int = 200, seed: int = 0) -> BoundCheck:
        """Upper-bound paths between random pairs: valid, at least the distance, at most ceil(5d/2)-2."""
        dim = PolygonDim.of(d)
        rng = random.Random(seed * 1_000 + d)
        bound = upper_bound(d)
        failures = []
        longest = 0
        for _ in range(samples):
            t1, t2 = random_cs(dim, rng), random_cs(dim, rng)
            path = upper_bound_path(t1, t2)
            longest = max(longest, path.length)
            exact = self.geodesics.distance(t1, t2).value
            problems = validate_path(path)
            if problems or path.start != t1 or path.end != t2 or not exact <= path.length <= bound:
                failures.append(f"{t1} -> {t2}: length {path.length}, distance {exact}")
        if failures:
            logger.error(f"Upper-bound path failures at d={d}: {failures[:3]}")
        return BoundCheck(
            name="upper-bound-path", d=d, value=longest, bound=str(bound), passed=not failures,
            detail=f"{samples} random pairs" + (f", {len(failures)} failure(s)" if failures else ""),
        )

    def check_pair_bounds(self, d: int) -> List[BoundCheck]:
        """
        Pair distances against the pair formula.

        Covers every constructible pair (each staircase of the c < d pairs
        included) up to STAIRCASE_DIM_LIMIT, the c = d pairs above it, and the
        lower-bound pair.
        """
        checks = []
        pairs = list(enumerate_abcd_pairs(d, c_equals_d_only=d > STAIRCASE_DIM_LIMIT))
        special = theorem3_pair(d) if d > 5 else None
        if special is not None and all(p.params != special.params for p in pairs):
            pairs.append(special)
        for pair in pairs:
            p = pair.params
            value = self.geodesics.distance(pair.a_minus, pair.a_plus).value
            bound = theorem2_bound(p)
            checks.append(BoundCheck(
                name="pair-bound", d=d, value=value, bound=str(bound), passed=value >= bound,
                detail=f"a={p.a} b={p.b} c={p.c} staircase={p.staircase}",
            ))
        if special is not None:
            p = special.params
            value = self.geodesics.distance(special.a_minus, special.a_plus).value
            overall = theorem3_bound(d)
            intermediate = theorem3_intermediate_bound(d, p.a)
            checks.append(BoundCheck(
                name="lower-bound-pair", d=d, value=value, bound=f"{overall:.4f}",
                passed=value >= overall and value >= intermediate,
                detail=f"a={p.a}, intermediate bound {intermediate}",
            ))
        return checks

    def check_deletion(self, d: int) -> List[BoundCheck]:
        """The deletion inequality at every vertex 0..d for the fan pair and the lower-bound pair."""
        if d < 2:
            return []
        dim = PolygonDim.of(d)
        pairs = [("fan pair", (build_fan_minus(dim), build_fan_plus(dim, d)))]
        if d > 5:
            special = theorem3_pair(d)
            pairs.append(("lower-bound pair", (special.a_minus, special.a_plus)))
        checks = []
        for label, pair in pairs:
            reports = [self.lemmas.lemma1_check(pair, p) for p in range(d + 1)]
            bad = [r.p for r in reports if not r.holds]
            checks.append(BoundCheck(
                name="deletion", d=d, value=max(r.incident_flips for r in reports),
                passed=not bad, detail=f"{label}, vertices 0..{d}" + (f", violated at {bad}" if bad else ""),
            ))
        return checks
