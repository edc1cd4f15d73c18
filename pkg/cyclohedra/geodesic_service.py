"""
Geodesic Service

Handles:
- Exact flip distances by bidirectional BFS, with witness geodesics
- Plain single-source BFS (oracle and --method bfs)
- Eccentricities and diameters over memoised state tables
- Dihedral orbit reduction of diameter sources
- Certified partial lower bounds when a state cap is hit
- Counting flips incident to a boundary edge along a path
"""

import logging
import math
from collections import deque
from typing import Dict, List, Optional, Tuple

import numpy as np
from cachetools import LRUCache
from tqdm import tqdm

from .config import Settings, load_settings
from .constructions import build_fan_minus, build_fan_plus, theorem3_pair
from .errors import (
    CyclohedraError,
    DimensionMismatchError,
    NotBoundaryEdgeError,
    ResourceLimitError,
)
from .flips import FlipPath, apply_move, neighbors
from .models import DistanceReport, SearchMethod
from .state_space import StateSpace
from .triangulation import (
    CsTriangulation,
    Edge,
    PolygonDim,
    Violation,
    boundary_apex,
    cs_count,
    mirror_edge,
    validate,
)

logger = logging.getLogger(__name__)


def lower_bound(d: int) -> float:
    """5d/2 - 4√d - 4."""
    return 5 * d / 2 - 4 * math.sqrt(d) - 4


def upper_bound(d: int) -> int:
    """ceil(5d/2) - 2."""
    return (5 * d + 1) // 2 - 2


def _edge_list(t: CsTriangulation) -> List[Tuple[int, int]]:
    return [tuple(e) for e in t.interior]


def _ordered_neighbors(t: CsTriangulation):
    return sorted(neighbors(t), key=lambda item: item[0].introduced)


def _walk_back(parents: Dict[CsTriangulation, Optional[CsTriangulation]], end: CsTriangulation) -> List[CsTriangulation]:
    chain = [end]
    while parents[chain[-1]] is not None:
        chain.append(parents[chain[-1]])
    return chain


def validate_path(path: FlipPath) -> List[Violation]:
    """FlipPath invariants; an empty list means the path is valid."""
    violations: List[Violation] = []
    d = path.d
    if len(path.moves) != len(path.states) - 1:
        violations.append(Violation(
            invariant="move-count",
            detail=f"{len(path.states)} states but {len(path.moves)} moves",
        ))
    for i, state in enumerate(path.states):
        if state.d != d:
            violations.append(Violation(invariant="dimension", detail=f"state {i} has d={state.d}, expected {d}"))
            continue
        report = validate(state)
        if not report.is_valid:
            violations.append(Violation(invariant="state", detail=f"state {i}: {report.summary()}"))
    for i, move in enumerate(path.moves[:len(path.states) - 1]):
        try:
            ok = apply_move(path.states[i], move) == path.states[i + 1]
        except CyclohedraError as error:
            ok = False
            logger.debug(f"move {i} not applicable: {error}")
        if not ok:
            violations.append(Violation(
                invariant="flip",
                edges=[tuple(move.removed), tuple(move.introduced)],
                detail=f"move {i} does not turn state {i} into state {i + 1}",
            ))
    return violations


def _oriented_boundary(boundary, n: int) -> Tuple[int, int]:
    p, q = boundary[0] % n, boundary[1] % n
    if q == (p + 1) % n:
        return p, q
    if p == (q + 1) % n:
        return q, p
    raise NotBoundaryEdgeError(Edge.of(p, q, n) if p != q else (p, q))


def count_incident_flips(path: FlipPath, boundary) -> int:
    """
    Number of moves along path that change the triangle over a boundary edge.

    A move is incident to {p, q} when it removes {p, r} or {q, r}, r being the
    apex over {p, q} in the state the move is applied to.

    Raises:
        NotBoundaryEdgeError: if the vertices are not adjacent on the polygon
    """
    dim = path.start.dim
    p, q = _oriented_boundary(boundary, dim.n)
    count = 0
    for state, move in zip(path.states, path.moves):
        r = boundary_apex(state, p, q)
        removed = {move.removed, mirror_edge(move.removed, dim)}
        touched = {dim.edge(p, r), dim.edge(q, r)}
        if removed & touched:
            count += 1
    return count


class GeodesicService:
    """
    Distances, eccentricities and diameters on the cyclohedron flip graph.
    """

    def __init__(self, settings: Optional[Settings] = None, space_cache_size: int = 4):
        """
        Initialize Geodesic Service.

        Args:
            settings: caps and batch width; loaded from the environment if omitted
            space_cache_size: number of state tables kept in memory
        """
        self.settings = settings or load_settings()
        self._spaces: LRUCache = LRUCache(maxsize=space_cache_size)
        logger.info("Geodesic Service initialized")

    def state_space(self, dim: PolygonDim) -> StateSpace:
        space = self._spaces.get(dim.d)
        if space is None:
            space = StateSpace(dim, cap=self.settings.enumeration_cap)
            self._spaces[dim.d] = space
        return space

    def distance(self, t1: CsTriangulation, t2: CsTriangulation, want_witness: bool = False) -> DistanceReport:
        """
        Flip distance by breadth-first search from both ends.

        Layers are expanded whole, smaller frontier first; the first meeting
        state fixes the value. Neighbours are visited in order of introduced
        edge so witnesses are reproducible.

        Raises:
            ResourceLimitError: when more than search_cap states are visited
        """
        if t1.d != t2.d:
            raise DimensionMismatchError(t1.d, t2.d)
        if t1 == t2:
            return DistanceReport(
                d=t1.d, value=0, explored=1, method=SearchMethod.BIDIRECTIONAL,
                witness=FlipPath([t1]) if want_witness else None,
                endpoints=(_edge_list(t1), _edge_list(t2)),
            )
        cap = self.settings.search_cap
        forward: Dict[CsTriangulation, Optional[CsTriangulation]] = {t1: None}
        backward: Dict[CsTriangulation, Optional[CsTriangulation]] = {t2: None}
        frontiers = {True: [t1], False: [t2]}
        depths = {True: 0, False: 0}
        meeting = None
        while frontiers[True] and frontiers[False] and meeting is None:
            side = len(frontiers[True]) <= len(frontiers[False])
            own, other = (forward, backward) if side else (backward, forward)
            layer = []
            for state in frontiers[side]:
                for _, nxt in _ordered_neighbors(state):
                    if nxt in own:
                        continue
                    own[nxt] = state
                    layer.append(nxt)
                    if meeting is None and nxt in other:
                        meeting = nxt
                if meeting is None and len(forward) + len(backward) > cap:
                    # completed layers never met, so the distance exceeds their depths
                    raise ResourceLimitError(cap=cap, explored=len(forward) + len(backward),
                                             partial_lower_bound=depths[True] + depths[False] + 1)
            frontiers[side] = layer
            depths[side] += 1
        if meeting is None:
            raise CyclohedraError(f"no flip path between {t1} and {t2}")

        value = len(_walk_back(forward, meeting)) + len(_walk_back(backward, meeting)) - 2
        witness = None
        if want_witness:
            states = _walk_back(forward, meeting)[::-1] + _walk_back(backward, meeting)[1:]
            witness = FlipPath(states)
        return DistanceReport(
            d=t1.d, value=value, witness=witness, explored=len(forward) + len(backward),
            method=SearchMethod.BIDIRECTIONAL, endpoints=(_edge_list(t1), _edge_list(t2)),
        )

    def single_source_distance(self, t1: CsTriangulation, t2: CsTriangulation,
                               want_witness: bool = False) -> DistanceReport:
        """Plain BFS from t1 until t2 is reached."""
        if t1.d != t2.d:
            raise DimensionMismatchError(t1.d, t2.d)
        cap = self.settings.search_cap
        parents: Dict[CsTriangulation, Optional[CsTriangulation]] = {t1: None}
        queue = deque([t1])
        while queue and t2 not in parents:
            state = queue.popleft()
            for _, nxt in _ordered_neighbors(state):
                if nxt not in parents:
                    parents[nxt] = state
                    queue.append(nxt)
            if len(parents) > cap:
                raise ResourceLimitError(cap=cap, explored=len(parents))
        if t2 not in parents:
            raise CyclohedraError(f"no flip path between {t1} and {t2}")
        chain = _walk_back(parents, t2)[::-1]
        return DistanceReport(
            d=t1.d, value=len(chain) - 1, explored=len(parents), method=SearchMethod.BFS,
            witness=FlipPath(chain) if want_witness else None,
            endpoints=(_edge_list(t1), _edge_list(t2)),
        )

    def distances_from(self, t: CsTriangulation) -> np.ndarray:
        """Distance from t to every state of its dimension, in enumeration order."""
        space = self.state_space(t.dim)
        return space.bfs_levels(space.index_of(t))

    def eccentricity(self, t: CsTriangulation, want_witness: bool = False) -> DistanceReport:
        """Largest distance from t; endpoints name the first farthest state."""
        space = self.state_space(t.dim)
        levels = space.bfs_levels(space.index_of(t))
        far = int(np.argmax(levels))
        return self._farthest_report(space, t, space.states[far], int(levels[far]),
                                     want_witness, SearchMethod.BFS, None)

    def diameter(self, dim: PolygonDim, want_witness: bool = False, allow_partial: bool = False,
                 progress: bool = False) -> DistanceReport:
        """
        Largest flip distance between two CS triangulations of dim.

        Only one source per dihedral orbit is searched, since relabelings are
        graph automorphisms and eccentricity is constant on orbits.

        Raises:
            ResourceLimitError: when the state space exceeds enumeration_cap
                and allow_partial is not set
        """
        total = cs_count(dim.d)
        if total > self.settings.enumeration_cap:
            if not allow_partial:
                raise ResourceLimitError(cap=self.settings.enumeration_cap, explored=total)
            return self.partial_diameter(dim)

        space = self.state_space(dim)
        orbits = space.orbits()
        sources = [index for index, _ in orbits]
        best_value, best_source = -1, sources[0]
        batches = space.batched_eccentricities(sources, self.settings.batch_width)
        total_batches = math.ceil(len(sources) / self.settings.batch_width)
        for batch, ecc in tqdm(batches, total=total_batches, desc=f"diameter d={dim.d}",
                               disable=not progress, leave=False):
            j = int(np.argmax(ecc))
            if ecc[j] > best_value:
                best_value, best_source = int(ecc[j]), batch[j]
        levels = space.bfs_levels(best_source)
        far = int(np.argmax(levels))
        logger.info(f"Diameter d={dim.d}: {best_value} over {len(orbits)} orbits ({space.size} states)")
        return self._farthest_report(space, space.states[best_source], space.states[far], best_value,
                                     want_witness, SearchMethod.ORBIT_REDUCED, len(orbits))

    def partial_diameter(self, dim: PolygonDim) -> DistanceReport:
        """
        A certified lower bound on the diameter when the state space is too big.

        Takes the deepest BFS level reached from U- before search_cap states,
        and the exact distances of the fan pair U-/U+(d) and of the lower-bound
        pair when their searches fit under the cap, or the depth their
        searches certified before stopping.
        """
        cap = self.settings.search_cap
        start = build_fan_minus(dim)
        seen = {start}
        frontier = [start]
        level = 0
        far = start
        while frontier and len(seen) <= cap:
            layer = []
            for state in frontier:
                for _, nxt in _ordered_neighbors(state):
                    if nxt not in seen:
                        seen.add(nxt)
                        layer.append(nxt)
                if len(seen) > cap:
                    break
            if layer:
                level += 1
                far = layer[0]
            frontier = layer
        best = (level, start, far)

        candidates = [(start, build_fan_plus(dim, dim.d))]
        if dim.d > 5:
            pair = theorem3_pair(dim.d)
            candidates.append((pair.a_minus, pair.a_plus))
        for t1, t2 in candidates:
            try:
                report = self.distance(t1, t2)
            except ResourceLimitError as error:
                logger.info(f"Partial diameter d={dim.d}: pair search stopped at {error.explored} states")
                if error.partial_lower_bound is not None and error.partial_lower_bound > best[0]:
                    best = (error.partial_lower_bound, t1, t2)
                continue
            if report.value > best[0]:
                best = (report.value, t1, t2)
        value, t1, t2 = best
        logger.info(f"Partial diameter d={dim.d}: lower bound {value}")
        return DistanceReport(
            d=dim.d, value=value, explored=len(seen), method=SearchMethod.BIDIRECTIONAL,
            endpoints=(_edge_list(t1), _edge_list(t2)), partial=True,
        )

    def _farthest_report(self, space: StateSpace, source: CsTriangulation, target: CsTriangulation,
                         value: int, want_witness: bool, method: SearchMethod,
                         orbits: Optional[int]) -> DistanceReport:
        witness = None
        if want_witness:
            witness = self.distance(source, target, want_witness=True).witness
        return DistanceReport(
            d=source.d, value=value, witness=witness, explored=space.size, method=method,
            orbits=orbits, endpoints=(_edge_list(source), _edge_list(target)),
        )
