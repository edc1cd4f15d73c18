"""
Report and record models shared by the services, the cache and the CLI.

Hot-loop types (CsTriangulation, FlipMove, FlipPath) stay plain classes; they
are converted to plain lists at this boundary.
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

from .config import SCHEMA_VERSION
from .flips import FlipPath

EdgeList = List[Tuple[int, int]]


class SearchMethod(Enum):
    BFS = "bfs"
    BIDIRECTIONAL = "bidirectional-bfs"
    ORBIT_REDUCED = "orbit-reduced"


class OutputFormat(Enum):
    TEXT = "text"
    RECORDS = "records"


class DistanceReport(BaseModel):
    """
    Result of a distance, eccentricity or diameter query.

    When partial is set, value is only a certified lower bound.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    d: int
    value: int = Field(ge=0)
    witness: Optional[FlipPath] = None
    endpoints: Optional[Tuple[EdgeList, EdgeList]] = None
    explored: int = 0
    method: SearchMethod = SearchMethod.BIDIRECTIONAL
    orbits: Optional[int] = None
    partial: bool = False

    @field_serializer("witness")
    def _dump_witness(self, witness: Optional[FlipPath]):
        return witness.to_dict() if witness is not None else None

    @field_validator("witness", mode="before")
    @classmethod
    def _load_witness(cls, value):
        if isinstance(value, dict):
            return FlipPath.from_dict(value)
        return value


class AbcdParams(BaseModel):
    """Parameters of an (a,b,c,d)-pair; l is the start of the central zigzag of A+."""
    a: int
    b: int
    c: int
    d: int
    k: int
    l: int
    staircase: List[int]


class PairReport(BaseModel):
    params: AbcdParams
    tau_minus: int
    tau_plus: int
    l_operational: int
    l_body: int
    l_caption: int
    gates: Dict[str, bool]
    shared_edges: EdgeList = Field(default_factory=list)
    theorem2_bound: str
    a_minus: EdgeList
    a_plus: EdgeList


class VerifyRow(BaseModel):
    d: int
    value: Optional[int] = None
    partial: bool = False
    upper: int
    lower: float
    jump: bool = False
    states: int = 0
    orbits: Optional[int] = None
    within_bounds: Optional[bool] = None


class VerifyReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    rows: List[VerifyRow] = Field(default_factory=list)

    @property
    def all_within_bounds(self) -> bool:
        return all(row.within_bounds is not False for row in self.rows)


class LemmaOneReport(BaseModel):
    d: int
    p: int
    distance: int
    deleted_distance: int
    incident_flips: int
    holds: bool


class LemmaTwoReport(BaseModel):
    d: int
    p0: int
    p1: int
    p2: int
    hypotheses_hold: bool
    witness: Optional[int] = None
    distance: Optional[int] = None
    deleted_distance: Optional[int] = None


class LemmaThreeReport(BaseModel):
    d: int
    p0: int
    count: int
    hypotheses_hold: bool
    deleted: List[int] = Field(default_factory=list)
    distance: Optional[int] = None
    final_distance: Optional[int] = None
    required: int = 0

    @property
    def slack(self) -> Optional[int]:
        if self.distance is None or self.final_distance is None:
            return None
        return self.distance - self.final_distance

    @property
    def holds(self) -> bool:
        return not self.hypotheses_hold or (self.slack is not None and self.slack >= self.required)


class BoundCheck(BaseModel):
    """One line of verify-bounds output."""
    name: str
    d: int
    detail: str = ""
    value: Optional[int] = None
    bound: Optional[str] = None
    passed: bool


class CacheRecord(BaseModel):
    schema_version: int = SCHEMA_VERSION
    command: str
    params: Dict[str, Any]
    report: Dict[str, Any]
