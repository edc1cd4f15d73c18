"""
Utility functions to turn reports into terminal text and line records.

Records are single-line JSON objects carrying schema_version and a kind tag;
text views are derived from the same models.
"""

import json
from typing import Any, Dict, Iterable, List, Optional, Union

from pydantic import BaseModel
from rich.table import Table

from ..config import SCHEMA_VERSION
from ..flips import FlipPath
from ..models import BoundCheck, DistanceReport, PairReport, VerifyReport
from ..triangulation import CsTriangulation
from .triangulation_format import serialize


def format_value(value: Optional[int], partial: bool = False) -> str:
    """Value as text; partial lower bounds carry a trailing star."""
    if value is None:
        return "-"
    return f"{value}*" if partial else str(value)


def record_line(kind: str, payload: Union[BaseModel, Dict[str, Any]]) -> str:
    """
    One line-delimited JSON record.

    Args:
        kind: record type, e.g. "distance" or "table-row"
        payload: pydantic model or plain dict

    Returns:
        Compact JSON with schema_version and kind first
    """
    body = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else dict(payload)
    body.pop("schema_version", None)
    return json.dumps({"schema_version": SCHEMA_VERSION, "kind": kind, **body}, separators=(",", ":"))


def table_records(report: VerifyReport) -> List[str]:
    return [record_line("table-row", row) for row in report.rows]


def table_view(report: VerifyReport) -> Table:
    table = Table(title="Flip-graph diameters of small cyclohedra")
    for column in ("d", "states", "orbits", "diameter", "lower", "upper", "+3", "bounds"):
        table.add_column(column, justify="right")
    for row in report.rows:
        diameter = format_value(row.value, row.partial)
        if row.jump:
            diameter = f"[bold]{diameter}[/bold]"
        bounds = {True: "ok", False: "[red]VIOLATED[/red]", None: "-"}[row.within_bounds]
        table.add_row(
            str(row.d), str(row.states), format_value(row.orbits), diameter,
            f"{row.lower:.2f}", str(row.upper), "yes" if row.jump else "", bounds,
        )
    return table


def checks_view(checks: Iterable[BoundCheck]) -> Table:
    table = Table(title="Bound checks")
    for column in ("check", "d", "value", "bound", "result", "detail"):
        table.add_column(column)
    for check in checks:
        table.add_row(
            check.name, str(check.d), format_value(check.value), check.bound or "-",
            "pass" if check.passed else "[red]FAIL[/red]", check.detail,
        )
    return table


def path_text(path: FlipPath) -> str:
    """Every state of a path as triangulation blocks separated by blank lines."""
    blocks = []
    for i, state in enumerate(path.states):
        header = f"# step {i}"
        if i:
            move = path.moves[i - 1]
            header += f": flip {move.removed} -> {move.introduced} ({move.kind.value})"
        blocks.append(header + "\n" + serialize(state))
    return "\n".join(blocks)


def distance_text(report: DistanceReport, label: str = "distance") -> str:
    lines = [f"{label} (d={report.d}): {format_value(report.value, report.partial)}"]
    lines.append(f"method: {report.method.value}, states explored: {report.explored}")
    if report.orbits is not None:
        lines.append(f"orbits searched: {report.orbits}")
    if report.partial:
        lines.append("partial: value is a lower bound only")
    if report.endpoints is not None and label != "distance":
        for name, edges in zip(("from", "to"), report.endpoints):
            t = CsTriangulation.build(report.d, edges)
            lines.append(f"# {name}\n" + serialize(t).rstrip("\n"))
    if report.witness is not None:
        lines.append(path_text(report.witness).rstrip("\n"))
    return "\n".join(lines) + "\n"


def pair_text(report: PairReport) -> str:
    p = report.params
    gates = ", ".join(f"{name}: {'ok' if ok else 'fails'}" for name, ok in report.gates.items())
    lines = [
        f"pair a={p.a} b={p.b} c={p.c} d={p.d} staircase={','.join(map(str, p.staircase))}",
        f"k={p.k} l={report.l_operational} (body formula {report.l_body}, caption formula {report.l_caption})",
        f"tau-={report.tau_minus} tau+={report.tau_plus}",
        f"gates: {gates}",
        f"pair lower bound: {report.theorem2_bound}",
        f"shared edges: {' '.join(f'{u}-{v}' for u, v in report.shared_edges) or 'none'}",
        "# A-",
        serialize(CsTriangulation.build(p.d, report.a_minus)).rstrip("\n"),
        "",
        "# A+",
        serialize(CsTriangulation.build(p.d, report.a_plus)).rstrip("\n"),
    ]
    return "\n".join(lines) + "\n"
