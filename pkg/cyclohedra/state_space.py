"""
Explicit state tables for exhaustive searches on one cyclohedron.

Handles:
- Enumerating every CS triangulation once and indexing it by bit key
- The neighbour table, an (N, d) int32 numpy array
- Dihedral orbit representatives for symmetry-reduced diameter search
- Table BFS from one source and bit-parallel BFS from up to 64 sources
"""

import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ResourceLimitError
from .flips import neighbour_keys
from .triangulation import CsTriangulation, PolygonDim, bit_key, cs_count, enumerate_cs, orbit_representatives

logger = logging.getLogger(__name__)

_ONE = np.uint64(1)


class StateSpace:
    """
    All CS triangulations of one dimension with their flip adjacency.

    Built once per dimension; read-only afterwards, so it can be shared by
    concurrent eccentricity computations.
    """

    def __init__(self, dim: PolygonDim, cap: Optional[int] = None):
        total = cs_count(dim.d)
        if cap is not None and total > cap:
            raise ResourceLimitError(cap=cap, explored=total)
        self.dim = dim
        self.states: List[CsTriangulation] = list(enumerate_cs(dim))
        self.index = {bit_key(t): i for i, t in enumerate(self.states)}
        self.adjacency = np.empty((len(self.states), dim.d), dtype=np.int32)
        for i, t in enumerate(self.states):
            self.adjacency[i] = [self.index[k] for k in neighbour_keys(t)]
        self._orbits: Optional[List[Tuple[int, int]]] = None
        logger.info(f"State space for d={dim.d} built: {len(self.states)} states")

    @property
    def size(self) -> int:
        return len(self.states)

    def index_of(self, t: CsTriangulation) -> int:
        return self.index[bit_key(t)]

    def orbits(self) -> List[Tuple[int, int]]:
        """(state index, orbit size) for one representative per dihedral orbit."""
        if self._orbits is None:
            reps = orbit_representatives(self.states)
            self._orbits = [(self.index[t.key], size) for t, size in reps]
            logger.info(f"d={self.dim.d}: {len(self._orbits)} dihedral orbits")
        return self._orbits

    def bfs_levels(self, source: int) -> np.ndarray:
        """Distance from source to every state, as an int32 array."""
        dist = np.full(self.size, -1, dtype=np.int32)
        dist[source] = 0
        frontier = np.array([source], dtype=np.int32)
        level = 0
        while frontier.size:
            level += 1
            candidates = self.adjacency[frontier].ravel()
            fresh = np.unique(candidates[dist[candidates] < 0])
            dist[fresh] = level
            frontier = fresh
        return dist

    def eccentricities(self, sources: Sequence[int]) -> np.ndarray:
        """
        Eccentricity of each source, advancing up to 64 searches at once.

        Bit j of a state's word says whether search j has reached it; one
        level is a gather over the neighbour table and an OR-reduction.
        """
        if len(sources) > 64:
            raise ValueError("at most 64 sources per batch")
        visited = np.zeros(self.size, dtype=np.uint64)
        for j, s in enumerate(sources):
            visited[s] |= _ONE << np.uint64(j)
        frontier = visited.copy()
        ecc = np.zeros(len(sources), dtype=np.int32)
        level = 0
        while True:
            fresh = np.bitwise_or.reduce(frontier[self.adjacency], axis=1) & ~visited
            reached = int(np.bitwise_or.reduce(fresh))
            if not reached:
                break
            level += 1
            visited |= fresh
            frontier = fresh
            for j in range(len(sources)):
                if reached >> j & 1:
                    ecc[j] = level
        return ecc

    def batched_eccentricities(self, sources: Sequence[int], width: int = 64) -> Iterator[Tuple[Sequence[int], np.ndarray]]:
        for start in range(0, len(sources), width):
            batch = sources[start:start + width]
            yield batch, self.eccentricities(batch)
