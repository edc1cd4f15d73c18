"""
Render Service

Handles:
- Drawing a triangulation as a labeled polygon on a circle (SVG)
- Edge classes: boundary, diagonal, comb teeth, other interior edges
- Optional dotted overlay for edges introduced by a flip

Output is deterministic: coordinates are rounded and edges emitted in sorted order.
"""

import logging
from pathlib import Path
from typing import Iterable, List, Optional, Set, Tuple

import numpy as np
from jinja2 import Environment, StrictUndefined

from .triangulation import CsTriangulation, Edge, EdgeKind

logger = logging.getLogger(__name__)

SVG_TEMPLATE = """<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{{ size }}" height="{{ size }}" viewBox="0 0 {{ size }} {{ size }}">
<title>{{ title }}</title>
<style>
.boundary { stroke: #222; stroke-width: 2; }
.diagonal { stroke: #b22; stroke-width: 3; }
.comb { stroke: #225; stroke-width: 3; }
.tooth { stroke: #225; stroke-width: 1; }
.interior { stroke: #225; stroke-width: 2; }
.introduced { stroke: #282; stroke-width: 2; stroke-dasharray: 4 4; }
.vertex { fill: #fff; stroke: #222; stroke-width: 1.5; }
.label { font-family: sans-serif; font-size: {{ font_size }}px; text-anchor: middle; dominant-baseline: central; }
</style>
{% for line in lines %}<line class="{{ line.css }}" x1="{{ line.x1 }}" y1="{{ line.y1 }}" x2="{{ line.x2 }}" y2="{{ line.y2 }}"/>
{% endfor %}{% for v in vertices %}<circle class="vertex" cx="{{ v.x }}" cy="{{ v.y }}" r="{{ radius }}"/>
<text class="label" x="{{ v.lx }}" y="{{ v.ly }}">{{ v.label }}</text>
{% endfor %}</svg>
"""


def _comb_edges(t: CsTriangulation) -> Tuple[Set[Edge], Set[Edge]]:
    """(extreme teeth, inner teeth) of combs with at least three teeth."""
    n = t.n
    adj = t.neighbour_sets()
    extremes: Set[Edge] = set()
    inner: Set[Edge] = set()
    for v in range(n):
        offsets = sorted((w - v) % n for w in adj[v] if (w - v) % n not in (1, n - 1))
        runs: List[List[int]] = []
        for off in offsets:
            if runs and off == runs[-1][-1] + 1:
                runs[-1].append(off)
            else:
                runs.append([off])
        for run in runs:
            if len(run) < 3:
                continue
            edges = [t.dim.edge(v, v + off) for off in run]
            extremes.update((edges[0], edges[-1]))
            inner.update(edges[1:-1])
    return extremes, inner


class RenderService:
    """
    SVG rendering of CS triangulations.
    """

    def __init__(self, size: int = 400):
        """
        Initialize Render Service.

        Args:
            size: width and height of the drawing in pixels
        """
        self.size = size
        self.template = Environment(undefined=StrictUndefined, autoescape=False).from_string(SVG_TEMPLATE)
        logger.info("Render Service initialized")

    def coordinates(self, n: int) -> np.ndarray:
        """Vertex positions, label 0 at the top and labels growing clockwise."""
        centre = self.size / 2
        radius = self.size * 0.4
        angles = 2 * np.pi * np.arange(n) / n
        xy = np.stack([centre + radius * np.sin(angles), centre - radius * np.cos(angles)], axis=1)
        return np.round(xy, 2)

    def render(self, t: CsTriangulation, introduced: Optional[Iterable[Edge]] = None, title: str = "") -> str:
        n = t.n
        xy = self.coordinates(n)
        label_xy = np.round(self.size / 2 + (xy - self.size / 2) * 1.12, 2)
        dotted = {t.dim.edge(u, v) for u, v in (introduced or [])}
        extremes, inner = _comb_edges(t)

        def line(e: Edge, css: str) -> dict:
            (x1, y1), (x2, y2) = xy[e.u], xy[e.v]
            return {"css": css, "x1": float(x1), "y1": float(y1), "x2": float(x2), "y2": float(y2)}

        lines = [line(t.dim.edge(v, v + 1), "boundary") for v in range(n)]
        for e in t.interior:
            if e in dotted:
                css = "introduced"
            elif t.dim.kind(e) == EdgeKind.DIAGONAL:
                css = "diagonal"
            elif e in inner:
                css = "tooth"
            elif e in extremes:
                css = "comb"
            else:
                css = "interior"
            lines.append(line(e, css))

        vertices = [
            {"label": v, "x": float(xy[v, 0]), "y": float(xy[v, 1]),
             "lx": float(label_xy[v, 0]), "ly": float(label_xy[v, 1])}
            for v in range(n)
        ]
        return self.template.render(
            size=self.size, title=title or f"CS triangulation, d={t.d}", lines=lines, vertices=vertices,
            radius=max(3, self.size // 80), font_size=max(8, self.size // 30),
        )

    def write(self, t: CsTriangulation, out: Path, introduced: Optional[Iterable[Edge]] = None) -> Path:
        out = Path(out)
        out.write_text(self.render(t, introduced))
        logger.info(f"Rendered d={t.d} triangulation to {out}")
        return out
