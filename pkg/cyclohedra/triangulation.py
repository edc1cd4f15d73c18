"""
Centrally symmetric triangulations of a convex (2d+2)-gon.

Handles:
- Polygon dimension bookkeeping and cyclic vertex arithmetic
- Edge normalization, classification and the crossing predicate
- Validation, enumeration and uniform sampling of CS triangulations
- Dihedral canonical keys and orbit representatives

Vertices are labeled clockwise from 0 to n-1 with n = 2d+2. Only interior
edges are stored; boundary edges are implicit.
"""

import logging
import random
from enum import Enum
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from .errors import InvalidTriangulationError, OutOfRangeError, ResourceLimitError

logger = logging.getLogger(__name__)


class EdgeKind(Enum):
    """Classification of an edge on the polygon."""
    BOUNDARY = "boundary"
    DIAGONAL = "diagonal"
    INTERIOR = "interior"


class Edge(NamedTuple):
    """An edge {u, v} stored with u < v."""
    u: int
    v: int

    @classmethod
    def of(cls, a: int, b: int, n: int) -> "Edge":
        a %= n
        b %= n
        if a == b:
            raise OutOfRangeError(f"degenerate edge {{{a},{b}}}")
        return cls(a, b) if a < b else cls(b, a)

    def __str__(self) -> str:
        return f"{{{self.u},{self.v}}}"


class PolygonDim:
    """
    Dimension d of the cyclohedron and the matching polygon with n = 2d+2 vertices.

    Instances are shared through PolygonDim.of(d); they also hold the pair
    index tables used to encode triangulations as bitsets.
    """

    __slots__ = ("d", "n", "pair_count", "_index", "_pairs", "_mirror", "_crossing", "_group")

    def __init__(self, d: int):
        if d < 1:
            raise OutOfRangeError(f"dimension must be at least 1, got {d}")
        self.d = d
        self.n = 2 * d + 2
        n = self.n
        self._pairs: List[Edge] = [Edge(u, v) for u in range(n) for v in range(u + 1, n)]
        self.pair_count = len(self._pairs)
        self._index: List[int] = [-1] * (n * n)
        for i, (u, v) in enumerate(self._pairs):
            self._index[u * n + v] = i
            self._index[v * n + u] = i
        self._mirror: List[int] = [self._index[self.opposite(u) * n + self.opposite(v)] for u, v in self._pairs]
        self._crossing: Optional[List[int]] = None
        self._group: Optional[List[Tuple[int, bool, List[int]]]] = None

    @staticmethod
    @lru_cache(maxsize=None)
    def of(d: int) -> "PolygonDim":
        return PolygonDim(d)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolygonDim) and other.d == self.d

    def __hash__(self) -> int:
        return hash(("PolygonDim", self.d))

    def __repr__(self) -> str:
        return f"PolygonDim(d={self.d}, n={self.n})"

    def opposite(self, x: int) -> int:
        return (x + self.d + 1) % self.n

    def edge(self, a: int, b: int) -> Edge:
        return Edge.of(a, b, self.n)

    def pair_index(self, u: int, v: int) -> int:
        return self._index[u * self.n + v]

    def pair(self, index: int) -> Edge:
        return self._pairs[index]

    def mirror_index(self, index: int) -> int:
        return self._mirror[index]

    def kind(self, e: Edge) -> EdgeKind:
        u, v = e
        if (v - u) % self.n in (1, self.n - 1):
            return EdgeKind.BOUNDARY
        if v - u == self.d + 1:
            return EdgeKind.DIAGONAL
        return EdgeKind.INTERIOR

    def crossing_masks(self) -> List[int]:
        """Per pair index, the bitset of pair indices whose chords cross it."""
        if self._crossing is None:
            masks = []
            for e in self._pairs:
                mask = 0
                for j, f in enumerate(self._pairs):
                    if edges_cross(e, f):
                        mask |= 1 << j
                masks.append(mask)
            self._crossing = masks
        return self._crossing

    def group(self) -> List[Tuple[int, bool, List[int]]]:
        """
        The 2n dihedral relabelings as (rotation, reflected, pair permutation).

        A relabeling sends v to (rotation + v) mod n, or (rotation - v) mod n
        when reflected.
        """
        if self._group is None:
            n = self.n
            elements = []
            for reflected in (False, True):
                for s in range(n):
                    perm = []
                    for u, v in self._pairs:
                        gu, gv = _relabel(u, s, reflected, n), _relabel(v, s, reflected, n)
                        perm.append(self._index[gu * n + gv])
                    elements.append((s, reflected, perm))
            self._group = elements
        return self._group


def _relabel(x: int, rotation: int, reflected: bool, n: int) -> int:
    return (rotation - x) % n if reflected else (rotation + x) % n


def opposite(x: int, dim: PolygonDim) -> int:
    """The vertex opposite x, (x + d + 1) mod n."""
    return dim.opposite(x)


def mirror_edge(e: Edge, dim: PolygonDim) -> Edge:
    """Central symmetry applied to an edge."""
    return dim.edge(dim.opposite(e.u), dim.opposite(e.v))


def edges_cross(e1: Edge, e2: Edge, dim: Optional[PolygonDim] = None) -> bool:
    """
    True iff the open chords strictly intersect.

    With normalized labels on a convex polygon this is interleaving of the
    endpoints; a shared endpoint is not a crossing.
    """
    a, b = e1
    c, d = e2
    return (a < c < b < d) or (c < a < d < b)


class Violation(BaseModel):
    invariant: str
    edges: List[Tuple[int, int]] = Field(default_factory=list)
    detail: str = ""


class ValidationReport(BaseModel):
    """Violated invariants of one candidate triangulation; empty means valid."""
    d: int
    violations: List[Violation] = Field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.is_valid:
            return "valid"
        return "; ".join(f"{v.invariant}: {v.detail}" for v in self.violations)


class CsTriangulation:
    """
    The interior edges of a triangulation of the (2d+2)-gon.

    The edge set is kept as a sorted tuple plus a bitset over pair indices.
    Instances are immutable; validity is checked by validate(), not here, so
    that invalid candidates can still be reported on.
    """

    __slots__ = ("dim", "interior", "key", "_neighbours")

    def __init__(self, dim: PolygonDim, edges: Iterable[Sequence[int]]):
        n = dim.n
        normalized = {Edge.of(a, b, n) for a, b in edges}
        self.dim = dim
        self.interior: Tuple[Edge, ...] = tuple(sorted(normalized))
        key = 0
        for u, v in self.interior:
            key |= 1 << dim.pair_index(u, v)
        self.key = key
        self._neighbours: Optional[List[set]] = None

    @classmethod
    def build(cls, d: int, edges: Iterable[Sequence[int]]) -> "CsTriangulation":
        """Construct and validate; raises InvalidTriangulationError on failure."""
        t = cls(PolygonDim.of(d), edges)
        report = validate(t)
        if not report.is_valid:
            raise InvalidTriangulationError(report)
        return t

    @classmethod
    def from_key(cls, dim: PolygonDim, key: int) -> "CsTriangulation":
        edges = []
        index = 0
        while key:
            if key & 1:
                edges.append(dim.pair(index))
            key >>= 1
            index += 1
        return cls(dim, edges)

    @property
    def d(self) -> int:
        return self.dim.d

    @property
    def n(self) -> int:
        return self.dim.n

    def __eq__(self, other) -> bool:
        return isinstance(other, CsTriangulation) and other.dim.d == self.dim.d and other.key == self.key

    def __hash__(self) -> int:
        return hash((self.dim.d, self.key))

    def __lt__(self, other: "CsTriangulation") -> bool:
        return (self.dim.d, self.interior) < (other.dim.d, other.interior)

    def __repr__(self) -> str:
        return f"CsTriangulation(d={self.d}, {{{', '.join(str(e) for e in self.interior)}}})"

    def __contains__(self, e) -> bool:
        u, v = e
        if u == v:
            return False
        idx = self.dim.pair_index(u % self.n, v % self.n)
        return bool(self.key >> idx & 1)

    def has_edge(self, a: int, b: int) -> bool:
        """True for boundary edges and stored interior edges."""
        n = self.n
        a %= n
        b %= n
        if (a - b) % n in (1, n - 1):
            return True
        return (a, b) in self

    def neighbour_sets(self) -> List[set]:
        """Vertex adjacency including boundary edges, built once per state."""
        if self._neighbours is None:
            n = self.n
            adj = [{(v - 1) % n, (v + 1) % n} for v in range(n)]
            for u, v in self.interior:
                adj[u].add(v)
                adj[v].add(u)
            self._neighbours = adj
        return self._neighbours

    def diagonal(self) -> Edge:
        """The unique diagonal; raises when the triangulation has none."""
        for e in self.interior:
            if e.v - e.u == self.d + 1:
                return e
        raise InvalidTriangulationError(validate(self))

    def to_dict(self):
        return {"d": self.d, "n": self.n, "interior": [list(e) for e in self.interior]}


def apex_over(t: CsTriangulation, u: int, v: int, inside: bool = True) -> Optional[int]:
    """
    Third vertex of the triangle of t on one side of edge {u, v}.

    inside selects the side holding the labels strictly between min(u,v) and
    max(u,v); for a boundary edge {p, p+1} use boundary_apex instead.
    Returns None when no triangle of t lies on that side.
    """
    u, v = (u, v) if u < v else (v, u)
    adj = t.neighbour_sets()
    for w in adj[u] & adj[v]:
        if (u < w < v) == inside:
            return w
    return None


def boundary_apex(t: CsTriangulation, p: int, q: int) -> int:
    """Apex r of the unique triangle of t over the boundary edge {p, q}."""
    adj = t.neighbour_sets()
    common = adj[p % t.n] & adj[q % t.n]
    return min(common)


def triangles(t: CsTriangulation) -> List[Tuple[int, int, int]]:
    """The 2d triangles of t as sorted vertex triples."""
    adj = t.neighbour_sets()
    found = set()
    for u in range(t.n):
        for v in adj[u]:
            if v <= u:
                continue
            for w in adj[u] & adj[v]:
                if w > v:
                    found.add((u, v, w))
    return sorted(found)


def validate(t: CsTriangulation) -> ValidationReport:
    """
    Check the four CS triangulation invariants.

    Returns:
        ValidationReport listing each violated invariant with its edges
    """
    dim = t.dim
    d = dim.d
    violations: List[Violation] = []

    not_interior = [e for e in t.interior if dim.kind(e) == EdgeKind.BOUNDARY]
    if not_interior:
        violations.append(Violation(
            invariant="interior-edges",
            edges=[tuple(e) for e in not_interior],
            detail=f"{len(not_interior)} boundary edge(s) stored as interior",
        ))

    if len(t.interior) != 2 * d - 1:
        violations.append(Violation(
            invariant="edge-count",
            edges=[tuple(e) for e in t.interior],
            detail=f"expected {2 * d - 1} interior edges, found {len(t.interior)}",
        ))

    masks = dim.crossing_masks()
    crossing = []
    for e in t.interior:
        hits = t.key & masks[dim.pair_index(*e)]
        if hits:
            for f in t.interior:
                if f > e and hits >> dim.pair_index(*f) & 1:
                    crossing.append((e, f))
    if crossing:
        violations.append(Violation(
            invariant="non-crossing",
            edges=[tuple(x) for pair in crossing for x in pair],
            detail=f"{len(crossing)} crossing pair(s)",
        ))

    unmatched = [e for e in t.interior if mirror_edge(e, dim) not in t]
    if unmatched:
        violations.append(Violation(
            invariant="symmetry",
            edges=[tuple(e) for e in unmatched],
            detail="mirror image missing for " + ", ".join(str(e) for e in unmatched),
        ))

    diagonals = [e for e in t.interior if dim.kind(e) == EdgeKind.DIAGONAL]
    if len(diagonals) != 1:
        violations.append(Violation(
            invariant="one-diagonal",
            edges=[tuple(e) for e in diagonals],
            detail=f"expected exactly one diagonal, found {len(diagonals)}",
        ))

    return ValidationReport(d=d, violations=violations)


def cs_count(d: int) -> int:
    """Number of CS triangulations of the (2d+2)-gon, binomial(2d, d)."""
    return comb(2 * d, d)


def catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


@lru_cache(maxsize=None)
def _polygon_triangulations(k: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """
    All triangulations of the polygon with vertices 0..k-1, as chord tuples.

    The side {0, k-1} lies in a triangle with apex m; both sub-polygons are
    triangulated recursively.
    """
    if k <= 3:
        return ((),)
    result = []
    for m in range(1, k - 1):
        own = []
        if m >= 2:
            own.append((0, m))
        if k - 1 - m >= 2:
            own.append((m, k - 1))
        for left in _polygon_triangulations(m + 1):
            for right in _polygon_triangulations(k - m):
                shifted = tuple((i + m, j + m) for i, j in right)
                result.append(tuple(own) + left + shifted)
    return tuple(result)


def _half_polygon_edges(dim: PolygonDim, p: int, chords: Iterable[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Map half-polygon chord offsets to labels, add mirrors and the diagonal {p, p+d+1}."""
    n = dim.n
    edges = [(p, p + dim.d + 1)]
    for i, j in chords:
        a, b = (p + i) % n, (p + j) % n
        edges.append((a, b))
        edges.append((dim.opposite(a), dim.opposite(b)))
    return edges


def enumerate_cs(dim: PolygonDim, cap: Optional[int] = None) -> Iterator[CsTriangulation]:
    """
    Yield every CS triangulation exactly once.

    For each diagonal {p, p+d+1} with 0 <= p <= d, every triangulation of the
    half polygon p..p+d+1 is mirrored to the other half.

    Raises:
        ResourceLimitError: if binomial(2d, d) exceeds cap
    """
    total = cs_count(dim.d)
    if cap is not None and total > cap:
        raise ResourceLimitError(cap=cap, explored=total)
    halves = _polygon_triangulations(dim.d + 2)
    for p in range(dim.d + 1):
        for chords in halves:
            yield CsTriangulation(dim, _half_polygon_edges(dim, p, chords))


def enumerate_all_triangulations(n: int) -> Iterator[Tuple[Edge, ...]]:
    """Every triangulation of the n-gon as sorted interior edges (no symmetry assumed)."""
    for chords in _polygon_triangulations(n):
        yield tuple(sorted(Edge(i, j) for i, j in chords))


def _random_half(k: int, rng: random.Random, offset: int, out: List[Tuple[int, int]]) -> None:
    # apex m is drawn with weight C(m-1) * C(k-m-2), the number of completions
    if k <= 3:
        return
    weights = [catalan(m - 1) * catalan(k - m - 2) for m in range(1, k - 1)]
    m = rng.choices(range(1, k - 1), weights=weights)[0]
    if m >= 2:
        out.append((offset, offset + m))
    if k - 1 - m >= 2:
        out.append((offset + m, offset + k - 1))
    _random_half(m + 1, rng, offset, out)
    _random_half(k - m, rng, offset + m, out)


def random_cs(dim: PolygonDim, rng: Optional[random.Random] = None) -> CsTriangulation:
    """Uniformly random CS triangulation: random diagonal, then a uniform half."""
    rng = rng or random.Random()
    p = rng.randrange(dim.d + 1)
    chords: List[Tuple[int, int]] = []
    _random_half(dim.d + 2, rng, 0, chords)
    return CsTriangulation(dim, _half_polygon_edges(dim, p, chords))


def apply_symmetry(t: CsTriangulation, rotation: int, reflected: bool = False) -> CsTriangulation:
    """Relabel every vertex v as (rotation + v) mod n, or (rotation - v) mod n when reflected."""
    n = t.n
    return CsTriangulation(
        t.dim,
        [(_relabel(u, rotation, reflected, n), _relabel(v, rotation, reflected, n)) for u, v in t.interior],
    )


def rotate(t: CsTriangulation, steps: int = 1) -> CsTriangulation:
    return apply_symmetry(t, steps, False)


def reflect(t: CsTriangulation) -> CsTriangulation:
    return apply_symmetry(t, 0, True)


def _image_keys(t: CsTriangulation) -> Iterator[Tuple[int, int, bool]]:
    indices = [t.dim.pair_index(u, v) for u, v in t.interior]
    for s, reflected, perm in t.dim.group():
        key = 0
        for i in indices:
            key |= 1 << perm[i]
        yield key, s, reflected


class CanonicalKey:
    """
    Least bit key over the dihedral orbit of a triangulation.

    width is the number of vertex pairs, so bits renders a fixed-width string.
    (rotation, reflected) is a group element sending the input to the
    representative.
    """

    __slots__ = ("d", "key", "width", "rotation", "reflected")

    def __init__(self, d: int, key: int, width: int, rotation: int, reflected: bool):
        self.d = d
        self.key = key
        self.width = width
        self.rotation = rotation
        self.reflected = reflected

    @property
    def bits(self) -> str:
        return format(self.key, f"0{self.width}b")

    def representative(self) -> CsTriangulation:
        return CsTriangulation.from_key(PolygonDim.of(self.d), self.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, CanonicalKey) and (self.d, self.key) == (other.d, other.key)

    def __hash__(self) -> int:
        return hash((self.d, self.key))

    def __repr__(self) -> str:
        return f"CanonicalKey(d={self.d}, key={self.key:#x})"


def canonical_key(t: CsTriangulation) -> CanonicalKey:
    best = min(_image_keys(t))
    key, s, reflected = best
    return CanonicalKey(t.d, key, t.dim.pair_count, s, reflected)


def orbit_representatives(states: Sequence[CsTriangulation]) -> List[Tuple[CsTriangulation, int]]:
    """
    One state per dihedral orbit, in first-seen order, with the orbit size.

    Orbits are closed under relabeling, so marking the image keys of each new
    representative visits every state exactly once.
    """
    seen = set()
    reps = []
    for t in states:
        if t.key in seen:
            continue
        images = {key for key, _, _ in _image_keys(t)}
        seen.update(images)
        reps.append((t, len(images)))
    return reps


def bit_key(t: CsTriangulation) -> int:
    """Membership bitset of the interior edges over the lexicographic vertex pairs."""
    return t.key


def interior_teeth(t: CsTriangulation) -> int:
    """
    Total number of interior teeth over all combs of t.

    A comb is a maximal run of interior edges from one vertex to consecutive
    labels; a comb with k teeth has k - 2 interior teeth.
    """
    n = t.n
    adj = t.neighbour_sets()
    total = 0
    for v in range(n):
        offsets = sorted((w - v) % n for w in adj[v] if (w - v) % n not in (1, n - 1))
        run = 0
        previous = None
        for off in offsets:
            if previous is not None and off == previous + 1:
                run += 1
            else:
                total += max(0, run - 2)
                run = 1
            previous = off
        total += max(0, run - 2)
    return total
