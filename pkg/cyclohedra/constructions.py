"""
Explicit triangulations and diameter bounds.

Handles:
- The fan triangulations U- and U+(x) and greedy fan completion (combs)
- The upper-bound flip path between any two CS triangulations
- (a,b,c,d)-pairs: A- with its two combs and zigzag, A+ with its ear,
  staircase of combs and central zigzag
- Exact evaluation of the lower-bound formulas and the choice of a

Vertex arithmetic is modulo n = 2d+2 throughout.
"""

import logging
import math
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import (
    ConstraintViolationError,
    DimensionMismatchError,
    DimensionTooSmallError,
    InvalidStaircaseError,
    InvalidTriangulationError,
    NoSolutionError,
    OutOfRangeError,
)
from .flips import FlipPath, flip, flip_quadrilateral
from .models import AbcdParams, PairReport
from .triangulation import (
    CsTriangulation,
    Edge,
    EdgeKind,
    PolygonDim,
    apply_symmetry,
    interior_teeth,
    rotate,
    validate,
)

logger = logging.getLogger(__name__)


def build_fan_minus(dim: PolygonDim) -> CsTriangulation:
    """U-: the diagonal {0, d+1} and the fan {0, x}, 2 <= x <= d, with mirrors."""
    d = dim.d
    edges = [(0, d + 1)]
    for x in range(2, d + 1):
        edges.append((0, x))
        edges.append((dim.opposite(0), dim.opposite(x)))
    return CsTriangulation(dim, edges)


def build_fan_plus(dim: PolygonDim, x: int) -> CsTriangulation:
    """
    U+(x): the diagonal {x, x̄}; every other edge on the side of 0 is incident to 0.

    Raises:
        OutOfRangeError: unless 1 <= x <= d
    """
    d = dim.d
    if not 1 <= x <= d:
        raise OutOfRangeError(f"fan apex side x must lie in [1, {d}], got {x}")
    x_bar = dim.opposite(x)
    edges = [(x, x_bar)]
    for y in list(range(2, x + 1)) + list(range(x_bar, 2 * d + 1)):
        edges.append((0, y))
        edges.append((dim.opposite(0), dim.opposite(y)))
    return CsTriangulation(dim, edges)


def _fan_region(t: CsTriangulation) -> Tuple[int, int]:
    """Label interval [lo, hi] (cyclic, clockwise) of the side of the diagonal holding 0."""
    diag = t.diagonal()
    if diag.u == 0:
        return 0, t.d + 1
    return diag.v, diag.u + t.n


def _in_region(e: Edge, lo: int, hi: int, n: int) -> bool:
    u = e.u if e.u >= lo else e.u + n
    v = e.v if e.v >= lo else e.v + n
    return lo <= u <= hi and lo <= v <= hi


def _comb_at_zero(t: CsTriangulation) -> FlipPath:
    states = [t]
    current = t
    n = t.n
    while True:
        lo, hi = _fan_region(current)
        candidates = []
        for e in current.interior:
            if 0 in e or current.dim.kind(e) == EdgeKind.DIAGONAL or not _in_region(e, lo, hi, n):
                continue
            if 0 in flip_quadrilateral(current, e):
                candidates.append(e)
        if not candidates:
            break
        current = flip(current, min(candidates))
        states.append(current)
    return FlipPath(states)


def comb_transform(t: CsTriangulation, apex: int = 0) -> FlipPath:
    """
    Greedily turn the side of the diagonal holding apex into a comb at apex.

    Each flip introduces one more edge at apex, so the path has at most d-1
    flips. When apex lies on the diagonal, the side is the one clockwise
    after apex; for apex 0 and diagonal {0, d+1} the result is U-.
    """
    apex %= t.n
    if apex == 0:
        return _comb_at_zero(t)
    path = _comb_at_zero(rotate(t, -apex))
    return FlipPath([rotate(s, apex) for s in path.states])


def bridge_path(x: int, dim: PolygonDim) -> FlipPath:
    """
    U+(x) to U- in exactly d-x+1 flips.

    The diagonal {x, x̄} flips to {0, d+1}, then the d-x edges at d+1 on the
    upper side are combed over to 0.
    """
    start = build_fan_plus(dim, x)
    first = flip(start, (x, dim.opposite(x)))
    return FlipPath([start, first]).concat(comb_transform(first))


def upper_bound_path(t1: CsTriangulation, t2: CsTriangulation) -> FlipPath:
    """
    A flip path from t1 to t2 of length at most ceil(5d/2) - 2.

    Labels are normalized internally: t1's diagonal is rotated onto {0, 0̄},
    and t2's diagonal {x, x̄} is reflected if needed so that x > floor(d/2).
    Both ends are combed onto fans at 0 and joined through bridge_path. The
    path is returned in the original labels with revisited states removed.
    """
    if t1.d != t2.d:
        raise DimensionMismatchError(t1.d, t2.d)
    if t1 == t2:
        return FlipPath([t1])
    dim = t1.dim
    d = dim.d
    shift = t1.diagonal().u
    s1 = rotate(t1, -shift)
    s2 = rotate(t2, -shift)
    x = s2.diagonal().u
    reflected = 1 <= x <= d // 2
    if reflected:
        # v -> d+1-v swaps 0 and 0̄ and sends x to d+1-x
        s1 = apply_symmetry(s1, d + 1, True)
        s2 = apply_symmetry(s2, d + 1, True)
        x = s2.diagonal().u

    head = comb_transform(s1)
    tail = comb_transform(s2).reversed()
    if x == 0:
        path = head.concat(tail)
    else:
        path = head.concat(bridge_path(x, dim).reversed()).concat(tail)
    path = path.without_cycles()

    def restore(s: CsTriangulation) -> CsTriangulation:
        if reflected:
            s = apply_symmetry(s, d + 1, True)
        return rotate(s, shift)

    result = FlipPath([restore(s) for s in path.states])
    logger.debug(f"upper bound path d={d}: length {result.length}, x={x}")
    return result


class AbcdPair:
    """A validated (a,b,c,d)-pair {A-, A+} with its parameters."""

    __slots__ = ("params", "a_minus", "a_plus", "tau_minus", "tau_plus")

    def __init__(self, params: AbcdParams, a_minus: CsTriangulation, a_plus: CsTriangulation,
                 tau_minus: int, tau_plus: int):
        self.params = params
        self.a_minus = a_minus
        self.a_plus = a_plus
        self.tau_minus = tau_minus
        self.tau_plus = tau_plus

    def __repr__(self) -> str:
        p = self.params
        return f"AbcdPair(a={p.a}, b={p.b}, c={p.c}, d={p.d}, staircase={p.staircase})"

    def shared_edges(self) -> List[Edge]:
        return sorted(set(self.a_minus.interior) & set(self.a_plus.interior))


def _a_minus_edges(dim: PolygonDim, b: int, c: int) -> List[Tuple[int, int]]:
    d = dim.d
    upper = [(0, x) for x in range(c, d + 1)]
    upper += [(1, x) for x in range(b, c + 1)]
    for j in range(1, b - 2):
        m = (j + 1) // 2
        upper.append((m + 1, b + 1 - m) if j % 2 else (m + 1, b - m))
    edges = [(0, d + 1)]
    for u, v in upper:
        edges.append((u, v))
        edges.append((dim.opposite(u), dim.opposite(v)))
    return edges


def _staircase_low_end(d: int, c: int, staircase: Sequence[int]) -> int:
    return sum(staircase) - (d - c)


def _a_plus_edges(dim: PolygonDim, c: int, staircase: Sequence[int]) -> List[Tuple[int, int]]:
    d = dim.d
    half = []
    low = 1
    for i, teeth in enumerate(staircase):
        w = dim.opposite(d) - i
        half += [(u, w) for u in range(low, low + teeth)]
        low += teeth - 1
    l = low
    c_bar = dim.opposite(c)
    m = c - l
    for i in range(m):
        half.append((l + i, c_bar - 1 - i))
        if i <= m - 2:
            half.append((l + i + 1, c_bar - 1 - i))
    edges = []
    for u, v in half:
        edges.append((u, v))
        edges.append((dim.opposite(u), dim.opposite(v)))
    return edges


def _check_staircase(b: int, c: int, d: int, staircase: Sequence[int]) -> int:
    if len(staircase) != d - c + 1:
        raise InvalidStaircaseError(f"staircase needs {d - c + 1} combs for c={c}, d={d}, got {len(staircase)}")
    if any(t < 2 for t in staircase):
        raise InvalidStaircaseError(f"every comb needs at least 2 teeth: {list(staircase)}")
    l = _staircase_low_end(d, c, staircase)
    if l > c - 1:
        raise InvalidStaircaseError(
            f"staircase {list(staircase)} ends at l={l}, leaving no central zigzag (need l <= c-1={c - 1})"
        )
    return l


def _gates(a: int, b: int, c: int, d: int, k: int) -> Dict[str, bool]:
    l_body = a + b - d + 2
    return {
        "b < c <= d": b < c <= d,
        "d <= a + b": d <= a + b,
        "a + b/2 + 1 < d": 2 * a + b + 2 < 2 * d,
        "l < k": l_body < k,
    }


def _build(b: int, c: int, d: int, staircase: Sequence[int]) -> AbcdPair:
    if d < 2:
        raise DimensionTooSmallError(f"(a,b,c,d)-pairs need d >= 2, got {d}")
    if b < 3:
        raise ConstraintViolationError("b >= 3", f"the zigzag of A- needs b >= 3, got b={b}")
    if not b < c <= d:
        raise ConstraintViolationError("b < c <= d", f"b={b}, c={c}, d={d}")
    l = _check_staircase(b, c, d, staircase)
    dim = PolygonDim.of(d)
    a_minus = CsTriangulation(dim, _a_minus_edges(dim, b, c))
    a_plus = CsTriangulation(dim, _a_plus_edges(dim, c, staircase))
    for t in (a_minus, a_plus):
        report = validate(t)
        if not report.is_valid:
            raise InvalidTriangulationError(report)
    tau_minus = interior_teeth(a_minus)
    tau_plus = interior_teeth(a_plus)
    a = (tau_minus + tau_plus) // 2 + 1
    k = b // 2 + 1
    for name, ok in _gates(a, b, c, d, k).items():
        if not ok:
            raise ConstraintViolationError(
                name, f"a={a}, b={b}, c={c}, d={d}, k={k}, l={a + b - d + 2} (staircase {list(staircase)})"
            )
    if a != l - 2 + c - b:
        logger.warning(f"a={a} from teeth differs from l - 2 + c - b = {l - 2 + c - b}")
    params = AbcdParams(a=a, b=b, c=c, d=d, k=k, l=l, staircase=list(staircase))
    return AbcdPair(params, a_minus, a_plus, tau_minus, tau_plus)


def build_abcd_pair(b: int, c: int, d: int, staircase: Optional[Sequence[int]] = None) -> AbcdPair:
    """
    Construct the (a,b,c,d)-pair for (b, c, d) and a distribution of teeth.

    a is derived from the interior teeth of both triangulations as
    (tau- + tau+)/2 + 1. Without a staircase, the first comb takes the extra
    teeth and every other comb has two; the fewest extra teeth that pass all
    gates are used.

    Raises:
        ConstraintViolationError: naming the first failed inequality
        InvalidStaircaseError: if the staircase cannot describe A+
    """
    if staircase is not None:
        return _build(b, c, d, list(staircase))
    first_error: Optional[Exception] = None
    extra = 0
    while True:
        candidate = [2 + extra] + [2] * (d - c)
        try:
            return _build(b, c, d, candidate)
        except InvalidStaircaseError as error:
            if extra == 0:
                raise
            raise first_error or error
        except ConstraintViolationError as error:
            if first_error is None:
                first_error = error
            if error.inequality in ("b < c <= d", "b >= 3"):
                raise
        extra += 1


def enumerate_staircases(b: int, c: int, d: int) -> Iterator[List[int]]:
    """Teeth distributions for d-c+1 combs, each of at least 2 teeth, with l <= c-1."""
    combs = d - c + 1
    budget = d - 1  # sum of teeth bound from l <= c - 1

    def extend(prefix: List[int], remaining: int, left: int) -> Iterator[List[int]]:
        if left == 0:
            yield list(prefix)
            return
        for t in range(2, remaining - 2 * (left - 1) + 1):
            prefix.append(t)
            yield from extend(prefix, remaining - t, left - 1)
            prefix.pop()

    if combs >= 1 and 2 * combs <= budget:
        yield from extend([], budget, combs)


def enumerate_abcd_pairs(d: int, c_equals_d_only: bool = False) -> Iterator[AbcdPair]:
    """Every constructible (a,b,c,d)-pair of dimension d."""
    for c in range(4, d + 1):
        if c_equals_d_only and c != d:
            continue
        for b in range(3, c):
            for staircase in enumerate_staircases(b, c, d):
                try:
                    yield _build(b, c, d, staircase)
                except (ConstraintViolationError, InvalidStaircaseError):
                    continue


def theorem2_bound(params: AbcdParams) -> Fraction:
    """3d - (b/2 + (2c-b)/a + 3a + 5), exactly; may be negative."""
    a, b, c, d = params.a, params.b, params.c, params.d
    return 3 * d - (Fraction(b, 2) + Fraction(2 * c - b, a) + 3 * a + 5)


def choose_a(d: int) -> int:
    """
    Smallest a with 1 <= a < (d-1)/2 and (5/2)a + (d+2)/a <= 4√d.

    The square root is removed by squaring: (5a² + 2d + 4)² <= 64a²d.

    Raises:
        DimensionTooSmallError: for d <= 5
        NoSolutionError: if no integer qualifies
    """
    if d <= 5:
        raise DimensionTooSmallError(f"the lower-bound pair needs d > 5, got {d}")
    a = 1
    while 2 * a < d - 1:
        if (5 * a * a + 2 * d + 4) ** 2 <= 64 * a * a * d:
            return a
        a += 1
    raise NoSolutionError(f"no integer a satisfies the window for d={d}")


def theorem3_bound(d: int) -> float:
    """5d/2 - 4√d - 4."""
    return 5 * d / 2 - 4 * math.sqrt(d) - 4


def theorem3_intermediate_bound(d: int, a: int) -> Fraction:
    """(5/2)(d-a) - (d+2)/a - 4."""
    return Fraction(5 * (d - a), 2) - Fraction(d + 2, a) - 4


def theorem3_window(d: int) -> Tuple[float, float]:
    """The real interval |a - 4√d/5| <= √(6d-20)/5."""
    if 6 * d - 20 < 0:
        raise NoSolutionError(f"the window is empty for d={d}")
    centre = 4 * math.sqrt(d) / 5
    radius = math.sqrt(6 * d - 20) / 5
    return centre - radius, centre + radius


def theorem3_pair(d: int) -> AbcdPair:
    """The pure-zigzag pair with a = choose_a(d), b = d-a, c = d-a+1."""
    a = choose_a(d)
    pair = build_abcd_pair(d - a, d - a + 1, d, [2] * a)
    if pair.params.a != a:
        raise ConstraintViolationError("a", f"expected a={a}, construction gave a={pair.params.a}")
    return pair


def pair_report(pair: AbcdPair) -> PairReport:
    p = pair.params
    return PairReport(
        params=p,
        tau_minus=pair.tau_minus,
        tau_plus=pair.tau_plus,
        l_operational=p.l,
        l_body=p.a + p.b - p.d + 2,
        l_caption=p.a + p.b - p.c + 4,
        gates=_gates(p.a, p.b, p.c, p.d, p.k),
        shared_edges=[tuple(e) for e in pair.shared_edges()],
        theorem2_bound=str(theorem2_bound(p)),
        a_minus=[tuple(e) for e in pair.a_minus.interior],
        a_plus=[tuple(e) for e in pair.a_plus.interior],
    )
