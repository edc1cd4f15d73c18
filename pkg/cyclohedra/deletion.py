"""
Vertex deletion on CS triangulations and the deletion lemmas as checkers.

Deleting p removes the boundary edges {p, q} and {p̄, q̄} (q = p+1),
substitutes q for p and q̄ for p̄, and renumbers the 2d surviving vertices in
ascending order of their old labels. The result is a CS triangulation of
dimension d-1.

The lemma checkers certify instances of proven statements; a failure means an
implementation bug and is reported loudly.
"""

import logging
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .errors import DimensionTooSmallError, LemmaViolationError, NotBoundaryEdgeError, OutOfRangeError
from .flips import FlipPath
from .geodesic_service import GeodesicService, count_incident_flips
from .models import LemmaOneReport, LemmaThreeReport, LemmaTwoReport
from .triangulation import CsTriangulation, Edge, PolygonDim, boundary_apex

logger = logging.getLogger(__name__)

Pair = Tuple[CsTriangulation, CsTriangulation]


def deletion_relabeling(dim: PolygonDim, p: int) -> Dict[int, int]:
    """
    Old label to new label after deleting p (and p̄).

    p and p̄ map to the new labels of their clockwise successors, which is
    where the substitution sends their edges.
    """
    if dim.d < 2:
        raise DimensionTooSmallError(f"deleting a vertex needs d >= 2, got d={dim.d}")
    n = dim.n
    p %= n
    p_bar = dim.opposite(p)
    survivors = [v for v in range(n) if v not in (p, p_bar)]
    mapping = {old: new for new, old in enumerate(survivors)}
    mapping[p] = mapping[(p + 1) % n]
    mapping[p_bar] = mapping[(p_bar + 1) % n]
    return mapping


def delete_vertex(t: CsTriangulation, p: int) -> CsTriangulation:
    """
    T with vertices p and p̄ deleted.

    Edges that become degenerate or boundary are dropped and duplicates
    collapse; deleting p̄ gives the same result. delete_vertex_relabeled also
    returns the label map.

    Raises:
        DimensionTooSmallError: for d < 2
    """
    return delete_vertex_relabeled(t, p)[0]


def delete_vertex_relabeled(t: CsTriangulation, p: int) -> Tuple[CsTriangulation, Dict[int, int]]:
    """T with p and p̄ deleted, together with the old-to-new label map."""
    mapping = deletion_relabeling(t.dim, p)
    new_dim = PolygonDim.of(t.d - 1)
    m = new_dim.n
    edges = set()
    for u, v in t.interior:
        a, b = mapping[u], mapping[v]
        if a == b or (a - b) % m in (1, m - 1):
            continue
        edges.add((min(a, b), max(a, b)))
    return CsTriangulation(new_dim, edges), mapping


def delete_pair(pair: Pair, p: int) -> Pair:
    return delete_vertex(pair[0], p), delete_vertex(pair[1], p)


def project_path(path: FlipPath, p: int) -> FlipPath:
    """
    Delete p from every state and drop repeated consecutive states.

    The length drops by exactly the number of flips incident to {p, p+1}.
    """
    states: List[CsTriangulation] = []
    for state in path.states:
        reduced = delete_vertex(state, p)
        if not states or states[-1] != reduced:
            states.append(reduced)
    return FlipPath(states)


def incident(t: CsTriangulation, boundary: Sequence[int]) -> int:
    """
    Apex r of the triangle of t over a boundary edge.

    Raises:
        NotBoundaryEdgeError: if the two vertices are not adjacent
    """
    n = t.n
    p, q = boundary[0] % n, boundary[1] % n
    if (q - p) % n not in (1, n - 1):
        raise NotBoundaryEdgeError((p, q))
    return boundary_apex(t, p, q)


def _triangle_edges(t: CsTriangulation, p: int) -> FrozenSet[Edge]:
    n = t.n
    q = (p + 1) % n
    r = boundary_apex(t, p, q)
    return frozenset({t.dim.edge(p, q), t.dim.edge(q, r), t.dim.edge(p, r)})


def _triangles_disjoint(t: CsTriangulation, starts: Sequence[int]) -> bool:
    triangles = [_triangle_edges(t, p) for p in starts]
    return all(not (x & y) for x, y in combinations(triangles, 2))


class LemmaVerifier:
    """
    Empirical checkers for the deletion lemmas.
    """

    def __init__(self, geodesics: GeodesicService):
        """
        Initialize Lemma Verifier.

        Args:
            geodesics: GeodesicService used for every distance
        """
        self.geodesics = geodesics
        logger.info("Lemma Verifier initialized")

    def _delta(self, pair: Pair) -> int:
        return self.geodesics.distance(pair[0], pair[1]).value

    def lemma1_check(self, pair: Pair, p: int) -> LemmaOneReport:
        """
        δ(P) >= δ(P⊘p) + f, f the flips incident to {p, p+1} along a geodesic.

        Returns:
            LemmaOneReport with both distances and f; holds is False only on a
            counterexample, which is also logged as an error
        """
        t1, t2 = pair
        report = self.geodesics.distance(t1, t2, want_witness=True)
        p %= t1.n
        f = count_incident_flips(report.witness, (p, (p + 1) % t1.n))
        deleted = self._delta(delete_pair(pair, p))
        result = LemmaOneReport(
            d=t1.d, p=p, distance=report.value, deleted_distance=deleted,
            incident_flips=f, holds=report.value >= deleted + f,
        )
        if not result.holds:
            logger.error(f"Deletion inequality violated: {result.model_dump()} for {t1} / {t2}")
        return result

    def lemma2_check(self, pair: Pair, p0: int, p1: int, p2: int) -> LemmaTwoReport:
        """
        Find x in {p0, p1} with δ(P) >= δ(P⊘x) + 2.

        Hypotheses: the T- triangles over (p0,p1) and (p1,p2) share no edge,
        and T+ has an ear at p1. When they fail the report says so and carries
        no witness.

        Raises:
            OutOfRangeError: if the three vertices are not consecutive clockwise
            LemmaViolationError: if the hypotheses hold but neither vertex works
        """
        t_minus, t_plus = pair
        n = t_minus.n
        p0, p1, p2 = p0 % n, p1 % n, p2 % n
        if p1 != (p0 + 1) % n or p2 != (p1 + 1) % n:
            raise OutOfRangeError(f"({p0},{p1},{p2}) are not consecutive clockwise vertices")
        hypotheses = _triangles_disjoint(t_minus, [p0, p1]) and t_plus.has_edge(p0, p2)
        report = LemmaTwoReport(d=t_minus.d, p0=p0, p1=p1, p2=p2, hypotheses_hold=hypotheses)
        if not hypotheses:
            return report
        delta = self._delta(pair)
        report.distance = delta
        for x in (p0, p1):
            deleted = self._delta(delete_pair(pair, x))
            if delta >= deleted + 2:
                report.witness = x
                report.deleted_distance = deleted
                return report
        logger.error(f"Ear deletion found no vertex: {t_minus} / {t_plus} at ({p0},{p1},{p2})")
        raise LemmaViolationError(f"no x in {{{p0},{p1}}} with δ(P) >= δ(P⊘x) + 2 (δ(P)={delta})")

    def lemma2_witness(self, pair: Pair, p0: int, p1: int, p2: int) -> Optional[int]:
        return self.lemma2_check(pair, p0, p1, p2).witness

    def lemma3_check(self, pair: Pair, p0: int, count: int) -> LemmaThreeReport:
        """
        Delete all but one of p0, ..., p_{count-1} and certify δ(P) - δ(Q) >= 2(count-1).

        Each round finds an ear of T+ at an inner vertex of the region cut off
        by {p0, p_count}, deletes the vertex returned by the ear check, and
        follows the region labels through the relabeling.

        Raises:
            OutOfRangeError: unless 2 <= count <= d
            LemmaViolationError: if a round cannot proceed
        """
        t_minus, t_plus = pair
        d, n = t_minus.d, t_minus.n
        if not 2 <= count <= d:
            raise OutOfRangeError(f"count must lie in [2, {d}], got {count}")
        p0 %= n
        region = [(p0 + i) % n for i in range(count + 1)]
        hypotheses = _triangles_disjoint(t_minus, region[:-1]) and t_plus.has_edge(region[0], region[-1])
        report = LemmaThreeReport(d=d, p0=p0, count=count, hypotheses_hold=hypotheses,
                                  required=2 * (count - 1))
        if not hypotheses:
            return report

        report.distance = self._delta(pair)
        current = pair
        while len(region) > 2:
            ear = next(
                (i for i in range(1, len(region) - 1) if current[1].has_edge(region[i - 1], region[i + 1])),
                None,
            )
            if ear is None:
                raise LemmaViolationError(f"no inner ear of T+ on region {region}")
            x = self.lemma2_witness(current, region[ear - 1], region[ear], region[ear + 1])
            if x is None:
                raise LemmaViolationError(f"ear hypotheses failed on region {region} after {report.deleted}")
            reduced_minus, mapping = delete_vertex_relabeled(current[0], x)
            current = (reduced_minus, delete_vertex(current[1], x))
            report.deleted.append(x)
            survivors = [v for v in region if v != x]
            region = [mapping[v] for v in survivors]
        report.final_distance = self._delta(current)
        if not report.holds:
            logger.error(f"Sequential deletion bound violated: {report.model_dump()}")
            raise LemmaViolationError(
                f"slack {report.slack} below {report.required} for region starting at {p0}"
            )
        return report
