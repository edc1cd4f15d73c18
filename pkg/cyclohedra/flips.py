"""
Symmetry-preserving flips and the neighbour structure of the cyclohedron graph.

A flip either exchanges a symmetric pair of interior edges {x,x'}, {x̄,x̄'} for
{y,y'}, {ȳ,ȳ'}, or exchanges the diagonal for the other diagonal of its
(self-symmetric) quadrilateral. Every CS triangulation has exactly d flips.
"""

import logging
import random
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .errors import DimensionMismatchError, NotAdjacentError, NotInteriorEdgeError
from .triangulation import CsTriangulation, Edge, EdgeKind, PolygonDim, apex_over, mirror_edge

logger = logging.getLogger(__name__)


class MoveKind(Enum):
    """The two kinds of flip."""
    SYMMETRIC_PAIR = "symmetric-pair"
    DIAGONAL = "diagonal"


class FlipMove:
    """
    One edge of the flip graph.

    removed is the lexicographically smaller of {x,x'} and {x̄,x̄'} (the
    diagonal itself for a diagonal move); introduced is {y,y'} taken from the
    quadrilateral of removed.
    """

    __slots__ = ("kind", "removed", "introduced")

    def __init__(self, kind: MoveKind, removed: Edge, introduced: Edge):
        self.kind = kind
        self.removed = removed
        self.introduced = introduced

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FlipMove)
            and (self.kind, self.removed, self.introduced) == (other.kind, other.removed, other.introduced)
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.removed, self.introduced))

    def __repr__(self) -> str:
        return f"FlipMove({self.kind.value}, -{self.removed}, +{self.introduced})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "removed": list(self.removed),
            "introduced": list(self.introduced),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FlipMove":
        return cls(MoveKind(data["kind"]), Edge(*data["removed"]), Edge(*data["introduced"]))


def _normalize(t: CsTriangulation, e: Sequence[int]) -> Edge:
    edge = t.dim.edge(e[0], e[1])
    if edge not in t or t.dim.kind(edge) == EdgeKind.BOUNDARY:
        raise NotInteriorEdgeError(edge)
    return edge


def flip_quadrilateral(t: CsTriangulation, e: Sequence[int]) -> Tuple[int, int]:
    """
    The two apexes of the triangles of t flanking interior edge e.

    Returns:
        (y, y') with y strictly between the endpoints of e in label order

    Raises:
        NotInteriorEdgeError: if e is not an interior edge of t
    """
    edge = _normalize(t, e)
    y = apex_over(t, edge.u, edge.v, inside=True)
    y_prime = apex_over(t, edge.u, edge.v, inside=False)
    if y is None or y_prime is None:
        raise NotInteriorEdgeError(edge, f"{edge} is not flanked by two triangles of {t}")
    return y, y_prime


def move_for(t: CsTriangulation, e: Sequence[int]) -> FlipMove:
    """The flip class of interior edge e; e and its mirror give the same move."""
    dim = t.dim
    edge = _normalize(t, e)
    if dim.kind(edge) == EdgeKind.DIAGONAL:
        y, y_prime = flip_quadrilateral(t, edge)
        return FlipMove(MoveKind.DIAGONAL, edge, dim.edge(y, y_prime))
    removed = min(edge, mirror_edge(edge, dim))
    y, y_prime = flip_quadrilateral(t, removed)
    return FlipMove(MoveKind.SYMMETRIC_PAIR, removed, dim.edge(y, y_prime))


def apply_move(t: CsTriangulation, move: FlipMove) -> CsTriangulation:
    dim = t.dim
    edges = set(t.interior)
    edges.discard(move.removed)
    edges.discard(mirror_edge(move.removed, dim))
    edges.add(move.introduced)
    edges.add(mirror_edge(move.introduced, dim))
    return CsTriangulation(dim, edges)


def flip(t: CsTriangulation, e: Sequence[int]) -> CsTriangulation:
    """
    Flip interior edge e together with its mirror image.

    Raises:
        NotInteriorEdgeError: if e is not an interior edge of t
    """
    return apply_move(t, move_for(t, e))


def moves(t: CsTriangulation) -> List[FlipMove]:
    """The d flip classes of t, ordered by removed edge."""
    dim = t.dim
    result = []
    for e in t.interior:
        kind = dim.kind(e)
        if kind == EdgeKind.DIAGONAL or e < mirror_edge(e, dim):
            result.append(move_for(t, e))
    return result


def neighbors(t: CsTriangulation) -> List[Tuple[FlipMove, CsTriangulation]]:
    return [(move, apply_move(t, move)) for move in moves(t)]


def neighbour_keys(t: CsTriangulation) -> List[int]:
    """
    Bit keys of the d neighbours of t without building them.

    Used by the state-space tables, where only identities are needed.
    """
    dim = t.dim
    key = t.key
    result = []
    for e in t.interior:
        i = dim.pair_index(e.u, e.v)
        j = dim.mirror_index(i)
        if j < i:
            continue
        y = apex_over(t, e.u, e.v, inside=True)
        y_prime = apex_over(t, e.u, e.v, inside=False)
        k = dim.pair_index(y, y_prime)
        added = (1 << k) | (1 << dim.mirror_index(k))
        result.append((key & ~((1 << i) | (1 << j))) | added)
    return result


def move_between(t1: CsTriangulation, t2: CsTriangulation) -> FlipMove:
    """
    The flip turning t1 into t2.

    Raises:
        NotAdjacentError: if t1 and t2 are not related by one flip
    """
    if t1.d != t2.d:
        raise DimensionMismatchError(t1.d, t2.d)
    removed = sorted(set(t1.interior) - set(t2.interior))
    if len(removed) not in (1, 2):
        raise NotAdjacentError(f"{t1} and {t2} differ in {len(removed)} interior edges")
    move = move_for(t1, removed[0])
    if apply_move(t1, move) != t2:
        raise NotAdjacentError(f"{t1} and {t2} are not related by a flip")
    return move


class FlipPath:
    """
    A sequence of CS triangulations, consecutive ones related by a flip.

    moves[i] turns states[i] into states[i+1].
    """

    __slots__ = ("states", "moves")

    def __init__(self, states: Sequence[CsTriangulation], moves: Optional[Sequence[FlipMove]] = None):
        if not states:
            raise ValueError("a path holds at least one triangulation")
        self.states: Tuple[CsTriangulation, ...] = tuple(states)
        if moves is None:
            moves = [move_between(a, b) for a, b in zip(self.states, self.states[1:])]
        self.moves: Tuple[FlipMove, ...] = tuple(moves)

    @property
    def length(self) -> int:
        return len(self.moves)

    def __len__(self) -> int:
        return len(self.moves)

    @property
    def start(self) -> CsTriangulation:
        return self.states[0]

    @property
    def end(self) -> CsTriangulation:
        return self.states[-1]

    @property
    def d(self) -> int:
        return self.states[0].d

    def reversed(self) -> "FlipPath":
        return FlipPath(self.states[::-1])

    def concat(self, other: "FlipPath") -> "FlipPath":
        if self.end != other.start:
            raise NotAdjacentError("paths do not meet")
        return FlipPath(self.states + other.states[1:], self.moves + other.moves)

    def without_cycles(self) -> "FlipPath":
        """Drop every detour that returns to an earlier state."""
        kept: List[CsTriangulation] = []
        position: Dict[CsTriangulation, int] = {}
        for state in self.states:
            if state in position:
                cut = position[state]
                for dropped in kept[cut + 1:]:
                    del position[dropped]
                kept = kept[:cut + 1]
            else:
                position[state] = len(kept)
                kept.append(state)
        if len(kept) == len(self.states):
            return self
        return FlipPath(kept)

    def relabeled(self, mapping) -> "FlipPath":
        """Apply a vertex relabeling (a callable on labels) to every state."""
        return FlipPath([
            CsTriangulation(s.dim, [(mapping(u), mapping(v)) for u, v in s.interior]) for s in self.states
        ])

    def __repr__(self) -> str:
        return f"FlipPath(d={self.d}, length={self.length})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "states": [[list(e) for e in s.interior] for s in self.states],
            "moves": [m.to_dict() for m in self.moves],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FlipPath":
        dim = PolygonDim.of(data["d"])
        states = [CsTriangulation(dim, edges) for edges in data["states"]]
        return cls(states, [FlipMove.from_dict(m) for m in data["moves"]])


def random_walk(t: CsTriangulation, steps: int, rng: Optional[random.Random] = None) -> FlipPath:
    """A path of random flips starting at t; it may revisit states."""
    rng = rng or random.Random()
    states = [t]
    path_moves = []
    current = t
    for _ in range(steps):
        move = rng.choice(moves(current))
        current = apply_move(current, move)
        states.append(current)
        path_moves.append(move)
    return FlipPath(states, path_moves)
