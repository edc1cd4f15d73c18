"""
Exceptions raised by the cyclohedra library.

Every error derives from CyclohedraError so the CLI can catch the family in
one place. Validation never raises; it returns a report instead.
"""

from typing import Optional


class CyclohedraError(Exception):
    """Base class for all library errors."""


class NotInteriorEdgeError(CyclohedraError):
    """The edge is not an interior edge of the triangulation."""

    def __init__(self, edge, message: Optional[str] = None):
        self.edge = edge
        super().__init__(message or f"{edge} is not an interior edge of the triangulation")


class NotBoundaryEdgeError(CyclohedraError):
    """The edge is not a boundary edge of the polygon."""

    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"{edge} is not a boundary edge of the polygon")


class DimensionMismatchError(CyclohedraError):
    """Two triangulations live on polygons of different sizes."""

    def __init__(self, d1: int, d2: int):
        self.d1 = d1
        self.d2 = d2
        super().__init__(f"dimension mismatch: d={d1} vs d={d2}")


class DimensionTooSmallError(CyclohedraError):
    """The operation needs a larger polygon."""


class OutOfRangeError(CyclohedraError):
    """A vertex or parameter lies outside its allowed range."""


class ResourceLimitError(CyclohedraError):
    """
    A search or enumeration would exceed its configured state cap.

    partial_lower_bound is set when the interrupted search still certifies a
    lower bound, e.g. the layers a distance search completed without meeting.
    """

    def __init__(self, cap: int, explored: int, what: str = "states", partial_lower_bound: Optional[int] = None):
        self.cap = cap
        self.explored = explored
        self.partial_lower_bound = partial_lower_bound
        super().__init__(f"resource limit reached: {explored} {what} exceeds cap {cap}")


class ConstraintViolationError(CyclohedraError):
    """An (a,b,c,d) quadruple fails one of the defining inequalities."""

    def __init__(self, inequality: str, detail: str):
        self.inequality = inequality
        self.detail = detail
        super().__init__(f"constraint {inequality} violated: {detail}")


class InvalidStaircaseError(CyclohedraError):
    """A teeth distribution cannot describe the combs of A+."""


class NoSolutionError(CyclohedraError):
    """No integer parameter satisfies the requested window."""


class TriangulationParseError(CyclohedraError):
    """A triangulation file could not be parsed."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class LemmaViolationError(CyclohedraError):
    """
    A checked instance contradicts a proven lemma.

    Since the lemmas hold, this always points at an implementation bug.
    """


class InvalidTriangulationError(CyclohedraError):
    """An edge set fails the centrally symmetric triangulation invariants."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"invalid triangulation: {report.summary()}")


class NotAdjacentError(CyclohedraError):
    """Two triangulations are not related by a single flip."""
