"""
Command-line surface of the cyclohedra workbench.

Handles:
- Diameter tables, distances, diameters and enumeration
- Distant pairs, upper-bound paths and vertex deletion
- Bound verification reports and SVG rendering
- Text or line-record output, result caching and resource caps
"""

import functools
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import typer
from rich.console import Console

from .cache_service import ResultCache
from .config import Settings, load_settings
from .constructions import build_abcd_pair, pair_report, upper_bound_path
from .deletion import LemmaVerifier, delete_vertex
from .errors import CyclohedraError, InvalidStaircaseError, OutOfRangeError
from .geodesic_service import GeodesicService, upper_bound, validate_path
from .models import OutputFormat, SearchMethod
from .render_service import RenderService
from .triangulation import PolygonDim, cs_count, enumerate_cs, orbit_representatives
from .utils.report_formatter import (
    checks_view,
    distance_text,
    format_value,
    pair_text,
    path_text,
    record_line,
    table_records,
    table_view,
)
from .utils.triangulation_format import read_file, serialize_many
from .verification_service import VerificationService

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

app = typer.Typer(
    help="Centrally symmetric triangulations, flip distances and cyclohedron diameters.",
    no_args_is_help=True,
    add_completion=False,
)
console = Console()
err_console = Console(stderr=True)


class CliContext:
    """Per-invocation settings shared by every subcommand."""

    def __init__(self, settings: Settings, use_cache: bool, output: OutputFormat):
        self.settings = settings
        self.use_cache = use_cache
        self.output = output

    @property
    def records(self) -> bool:
        return self.output == OutputFormat.RECORDS

    def geodesics(self) -> GeodesicService:
        return GeodesicService(self.settings)

    def cache(self) -> ResultCache:
        return ResultCache(self.settings.cache_dir, enabled=self.use_cache)


def _guarded(command: Callable) -> Callable:
    """Library errors become a one-line message and exit code 2."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except CyclohedraError as e:
            logger.error(f"{command.__name__}: {e}")
            err_console.print(f"error: {e}", markup=False, highlight=False, soft_wrap=True)
            raise typer.Exit(code=2)

    return wrapper


def _progress() -> bool:
    return sys.stderr.isatty()


def _parse_edges(text: Optional[str]) -> List[tuple]:
    """'u-v,u-v' to a list of vertex pairs."""
    if not text:
        return []
    edges = []
    for item in text.split(","):
        parts = item.strip().split("-")
        if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
            raise OutOfRangeError(f"edge must look like 'u-v', got {item!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return edges


def _parse_staircase(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InvalidStaircaseError(f"staircase must be comma-separated integers, got {text!r}")


_PAIR_FIELDS = ("b", "c", "d")


def _parse_pair_fields(tokens: List[str]) -> Dict[str, Any]:
    """'b=4 c=5 d=6 staircase=2,2', or positional '4 5 6'; b, c and d become ints."""
    values: Dict[str, Any] = {}
    positional = iter(_PAIR_FIELDS)
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep:
            key, value = next(positional, None), token
            if key is None:
                raise OutOfRangeError(f"unexpected pair argument {token!r}")
        key = key.strip().lower()
        if key not in _PAIR_FIELDS + ("staircase",):
            raise OutOfRangeError(f"unknown pair field {key!r}")
        if key in values:
            raise OutOfRangeError(f"pair field {key} given twice")
        values[key] = value.strip()
    missing = [key for key in _PAIR_FIELDS if key not in values]
    if missing:
        raise OutOfRangeError(f"missing pair field(s): {', '.join(missing)}")
    for key in _PAIR_FIELDS:
        try:
            values[key] = int(values[key])
        except ValueError:
            raise OutOfRangeError(f"{key} must be an integer, got {values[key]!r}")
    return values


def _canonical(t) -> list:
    return [list(e) for e in t.interior]


@app.callback()
def main(
    ctx: typer.Context,
    cap: Optional[int] = typer.Option(None, "--cap", min=1, help="State cap for enumeration and search."),
    no_cache: bool = typer.Option(False, "--no-cache", help="Neither read nor write the result cache."),
    output: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", help="Text or line-delimited JSON records."),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Overrides CYCLOHEDRA_LOG_LEVEL."),
):
    settings = load_settings().with_cap(cap)
    level = (log_level or settings.log_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format=LOG_FORMAT, stream=sys.stderr)
    ctx.obj = CliContext(settings, use_cache=not no_cache, output=output)


@app.command()
@_guarded
def table(
    ctx: typer.Context,
    d_max: int = typer.Argument(8, min=1),
    d_min: int = typer.Option(1, "--from", min=1),
    deep: bool = typer.Option(False, "--deep", help="Lift the per-row table cap (d = 9 and 10)."),
    jobs: int = typer.Option(1, "--jobs", min=1, help="Worker processes, one row each."),
):
    """Diameter of the flip graph for each dimension up to D_MAX."""
    cli: CliContext = ctx.obj
    service = VerificationService(cli.geodesics())
    report = service.table(d_max, d_min=d_min, deep=deep, use_cache=cli.use_cache, jobs=jobs,
                           progress=_progress())
    if cli.records:
        typer.echo("\n".join(table_records(report)))
    else:
        console.print(table_view(report))
        if any(row.partial for row in report.rows):
            console.print("* lower bound only (state cap reached); rerun with --deep")
    if not report.all_within_bounds:
        raise typer.Exit(code=1)


@app.command()
@_guarded
def distance(
    ctx: typer.Context,
    first: Path = typer.Argument(..., exists=True, dir_okay=False),
    second: Path = typer.Argument(..., exists=True, dir_okay=False),
    witness: bool = typer.Option(False, "--witness", help="Print a geodesic."),
    method: SearchMethod = typer.Option(SearchMethod.BIDIRECTIONAL, "--method"),
):
    """Flip distance between the triangulations in two files."""
    cli: CliContext = ctx.obj
    t1, t2 = read_file(first), read_file(second)
    cache = cli.cache()
    params = {"from": _canonical(t1), "to": _canonical(t2), "witness": witness, "method": method.value}
    report = cache.get("distance", params)
    if report is None:
        geodesics = cli.geodesics()
        if method == SearchMethod.BFS:
            report = geodesics.single_source_distance(t1, t2, want_witness=witness)
        else:
            report = geodesics.distance(t1, t2, want_witness=witness)
        cache.put("distance", params, report)
    if cli.records:
        typer.echo(record_line("distance", report))
    else:
        typer.echo(distance_text(report), nl=False)


@app.command()
@_guarded
def diameter(
    ctx: typer.Context,
    d: int = typer.Argument(..., min=1),
    witness: bool = typer.Option(False, "--witness", help="Print both farthest triangulations and a geodesic."),
    partial: bool = typer.Option(False, "--partial", help="Report a lower bound when the state cap is hit."),
):
    """Diameter of the d-dimensional cyclohedron."""
    cli: CliContext = ctx.obj
    cache = cli.cache()
    params = {"d": d, "witness": True} if witness else {"d": d}
    report = cache.get("diameter", params)
    if report is None:
        report = cli.geodesics().diameter(PolygonDim.of(d), want_witness=witness, allow_partial=partial,
                                          progress=_progress())
        cache.put("diameter", params, report)
    if cli.records:
        typer.echo(record_line("diameter", report))
    else:
        typer.echo(distance_text(report, label="diameter"), nl=False)


@app.command()
@_guarded
def pair(
    ctx: typer.Context,
    fields: List[str] = typer.Argument(..., metavar="b=B c=C d=D [staircase=T1,T2,...]",
                                       help="Pair description; bare integers are read as B C D."),
    staircase: Optional[str] = typer.Option(None, "--staircase", help="Teeth per comb, e.g. 3,2,2."),
    with_distance: bool = typer.Option(False, "--distance", help="Also compute the exact flip distance."),
):
    """Build the distant pair for (b, c, d) and print its parameters and both triangulations."""
    cli: CliContext = ctx.obj
    values = _parse_pair_fields(fields)
    if staircase is not None:
        if "staircase" in values:
            raise OutOfRangeError("staircase given both as a field and as --staircase")
        values["staircase"] = staircase
    teeth = _parse_staircase(values["staircase"]) if values.get("staircase") else None
    built = build_abcd_pair(values["b"], values["c"], values["d"], teeth)
    report = pair_report(built)
    exact = cli.geodesics().distance(built.a_minus, built.a_plus) if with_distance else None
    if cli.records:
        typer.echo(record_line("pair", report))
        if exact is not None:
            typer.echo(record_line("distance", exact))
        return
    typer.echo(pair_text(report), nl=False)
    if exact is not None:
        typer.echo(f"distance: {exact.value}")


@app.command("upper-path")
@_guarded
def upper_path(
    ctx: typer.Context,
    first: Path = typer.Argument(..., exists=True, dir_okay=False),
    second: Path = typer.Argument(..., exists=True, dir_okay=False),
    witness: bool = typer.Option(False, "--witness", help="Print every state of the path."),
):
    """Flip path between two triangulations no longer than ceil(5d/2) - 2."""
    cli: CliContext = ctx.obj
    t1, t2 = read_file(first), read_file(second)
    path = upper_bound_path(t1, t2)
    problems = validate_path(path)
    bound = upper_bound(t1.d)
    within = path.length <= bound and not problems
    if cli.records:
        record = {"d": t1.d, "length": path.length, "bound": bound, "valid": not problems,
                  "path": path.to_dict() if witness else None}
        typer.echo(record_line("upper-path", record))
    else:
        typer.echo(f"upper-bound path (d={t1.d}): length {path.length}, bound {bound}")
        for problem in problems:
            typer.echo(f"invalid: {problem.invariant}: {problem.detail}")
        if witness:
            typer.echo(path_text(path), nl=False)
    if not within:
        raise typer.Exit(code=1)


@app.command()
@_guarded
def delete(
    ctx: typer.Context,
    first: Path = typer.Argument(..., exists=True, dir_okay=False),
    p: int = typer.Argument(..., min=0),
    second: Optional[Path] = typer.Option(None, "--with", exists=True, dir_okay=False,
                                          help="Second triangulation of a pair."),
    check_lemma1: bool = typer.Option(False, "--check-lemma1",
                                      help="Check the deletion inequality on the pair."),
):
    """Delete vertex P (and its opposite) from one triangulation or a pair."""
    cli: CliContext = ctx.obj
    states = [read_file(first)] + ([read_file(second)] if second else [])
    reduced = [delete_vertex(t, p) for t in states]
    report = None
    if check_lemma1:
        if len(states) != 2:
            raise OutOfRangeError("--check-lemma1 needs a pair: pass the second file with --with")
        report = LemmaVerifier(cli.geodesics()).lemma1_check((states[0], states[1]), p)
    if cli.records:
        for t in reduced:
            typer.echo(record_line("triangulation", t.to_dict()))
        if report is not None:
            typer.echo(record_line("deletion-check", report))
    else:
        typer.echo(serialize_many(reduced), nl=False)
        if report is not None:
            typer.echo(
                f"deletion at p={report.p}: distance {report.distance} >= {report.deleted_distance}"
                f" + {report.incident_flips} incident flips: {'holds' if report.holds else 'VIOLATED'}"
            )
    if report is not None and not report.holds:
        raise typer.Exit(code=1)


@app.command("verify-bounds")
@_guarded
def verify_bounds(
    ctx: typer.Context,
    d_min: int = typer.Argument(4, min=1),
    d_max: int = typer.Argument(7, min=1),
    samples: int = typer.Option(50, "--samples", min=0, help="Random pairs per dimension for the path check."),
    seed: int = typer.Option(0, "--seed"),
    jobs: int = typer.Option(1, "--jobs", min=1),
):
    """Check the upper bound, the pair lower bounds and the deletion inequality for D_MIN..D_MAX."""
    cli: CliContext = ctx.obj
    checks = VerificationService(cli.geodesics()).verify_bounds(d_min, d_max, samples=samples, seed=seed,
                                                               jobs=jobs)
    if cli.records:
        typer.echo("\n".join(record_line("bound-check", check) for check in checks))
    else:
        console.print(checks_view(checks))
    failed = [check for check in checks if not check.passed]
    if failed:
        logger.error(f"{len(failed)} bound check(s) failed")
        raise typer.Exit(code=1)


@app.command()
@_guarded
def render(
    ctx: typer.Context,
    source: Path = typer.Argument(..., exists=True, dir_okay=False),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="SVG file; stdout when omitted."),
    introduced: Optional[str] = typer.Option(None, "--introduced", help="Edges drawn dotted, e.g. 1-5,0-3."),
    size: int = typer.Option(400, "--size", min=100),
):
    """Draw a triangulation as an SVG polygon."""
    t = read_file(source)
    renderer = RenderService(size=size)
    dotted = _parse_edges(introduced)
    if out is None:
        typer.echo(renderer.render(t, dotted), nl=False)
    else:
        renderer.write(t, out, dotted)
        if not ctx.obj.records:
            typer.echo(f"wrote {out}")


@app.command("enumerate")
@_guarded
def enumerate_command(
    ctx: typer.Context,
    d: int = typer.Argument(..., min=1),
    list_states: bool = typer.Option(False, "--list", help="Print every triangulation."),
    orbits: bool = typer.Option(False, "--orbits", help="Only one triangulation per dihedral orbit."),
):
    """Count (and list) the centrally symmetric triangulations of the (2d+2)-gon."""
    cli: CliContext = ctx.obj
    dim = PolygonDim.of(d)
    count = cs_count(d)
    states = None
    if list_states or orbits:
        states = list(enumerate_cs(dim, cap=cli.settings.enumeration_cap))
        if orbits:
            states = [t for t, _ in orbit_representatives(states)]
            count = len(states)
    if cli.records:
        typer.echo(record_line("enumerate", {"d": d, "count": count, "orbits": orbits}))
        if list_states:
            for t in states:
                typer.echo(record_line("triangulation", t.to_dict()))
        return
    typer.echo(f"{'orbits' if orbits else 'triangulations'} (d={d}): {format_value(count)}")
    if list_states:
        typer.echo(serialize_many(states), nl=False)


def run() -> None:
    app(prog_name="cyclohedra")
