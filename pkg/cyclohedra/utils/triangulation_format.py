"""
Text format for triangulations.

A block is a header line `n <vertex-count>` followed by one interior edge per
line as `<u> <v>` with u < v, sorted. `#` starts a comment. Several blocks in
one stream are separated by blank lines.
"""

from pathlib import Path
from typing import Iterable, List, Tuple

from ..errors import TriangulationParseError
from ..triangulation import CsTriangulation


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_block(lines: List[Tuple[int, str]]) -> CsTriangulation:
    header_number, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "n":
        raise TriangulationParseError(header_number, f"expected 'n <vertex-count>', got {header!r}")
    try:
        n = int(parts[1])
    except ValueError:
        raise TriangulationParseError(header_number, f"vertex count is not an integer: {parts[1]!r}")
    if n < 4 or n % 2:
        raise TriangulationParseError(header_number, f"vertex count must be even and at least 4, got {n}")

    edges = []
    seen = set()
    for number, text in lines[1:]:
        fields = text.split()
        if len(fields) != 2:
            raise TriangulationParseError(number, f"expected '<u> <v>', got {text!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise TriangulationParseError(number, f"edge endpoints must be integers: {text!r}")
        if not (0 <= u < n and 0 <= v < n):
            raise TriangulationParseError(number, f"vertex out of range [0, {n}): {text!r}")
        if u == v:
            raise TriangulationParseError(number, f"degenerate edge {text!r}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise TriangulationParseError(number, f"duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    return CsTriangulation.build((n - 2) // 2, edges)


def _blocks(text: str) -> List[List[Tuple[int, str]]]:
    blocks: List[List[Tuple[int, str]]] = []
    current: List[Tuple[int, str]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            if current:
                blocks.append(current)
                current = []
            continue
        content = _strip(raw)
        if content:
            current.append((number, content))
    if current:
        blocks.append(current)
    return blocks


def parse_many(text: str) -> List[CsTriangulation]:
    """
    Parse every block of a stream.

    Raises:
        TriangulationParseError: naming the 1-based line of the first problem
        InvalidTriangulationError: if a well-formed block is not a CS triangulation
    """
    return [_parse_block(block) for block in _blocks(text)]


def parse(text: str) -> CsTriangulation:
    blocks = _blocks(text)
    if len(blocks) != 1:
        line = blocks[1][0][0] if blocks else 1
        raise TriangulationParseError(line, f"expected one triangulation, found {len(blocks)}")
    return _parse_block(blocks[0])


def read_file(path: Path) -> CsTriangulation:
    return parse(Path(path).read_text())


def serialize(t: CsTriangulation) -> str:
    lines = [f"n {t.n}"] + [f"{u} {v}" for u, v in t.interior]
    return "\n".join(lines) + "\n"


def serialize_many(states: Iterable[CsTriangulation]) -> str:
    return "\n".join(serialize(t) for t in states)
