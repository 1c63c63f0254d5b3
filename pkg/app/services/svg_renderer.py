"""
SVG rendering of drawings. Presentational only: coordinates are converted
to floats here and nothing computed here flows back into counting.
"""

from fractions import Fraction
from typing import Dict, Optional, Tuple

import svgwrite  # type: ignore[reportMissingTypeStubs]

from app.models.graph import Drawing, Edge
from app.services.crossings import count_crossings

PALETTE = ("#1f4e79", "#c0392b", "#27ae60", "#8e44ad", "#d68910", "#117a65", "#7b241c", "#2e4053")


def _intersection(d: Drawing, e: Edge, f: Edge) -> Tuple[Fraction, Fraction]:
    (ax, ay), (bx, by) = d.placement[e[0]].as_tuple(), d.placement[e[1]].as_tuple()
    (cx, cy), (ex, ey) = d.placement[f[0]].as_tuple(), d.placement[f[1]].as_tuple()
    rx, ry = bx - ax, by - ay
    sx, sy = ex - cx, ey - cy
    t = ((cx - ax) * sy - (cy - ay) * sx) / (rx * sy - ry * sx)
    return ax + t * rx, ay + t * ry


def render_svg(
    d: Drawing,
    coloring: Optional[Dict[Edge, int]] = None,
    size: int = 640,
    margin: float = 24.0,
    mark_crossings: bool = True,
) -> str:
    """Vertices as circles, edges as lines, crossing points as small squares"""
    coords = [(float(x), float(y)) for x, y in d.placement.coords()]
    if coords:
        min_x = min(x for x, _ in coords)
        min_y = min(y for _, y in coords)
        span = max(max(x for x, _ in coords) - min_x, max(y for _, y in coords) - min_y) or 1.0
    else:
        min_x = min_y = 0.0
        span = 1.0
    scale = (size - 2 * margin) / span

    def project(x: float, y: float) -> Tuple[float, float]:
        # SVG y grows downwards
        return margin + (x - min_x) * scale, size - margin - (y - min_y) * scale

    dwg = svgwrite.Drawing(profile="tiny", size=(f"{size}px", f"{size}px"))
    dwg.attribs["viewBox"] = f"0 0 {size} {size}"

    edges_group = dwg.g(id="edges", fill="none", stroke_width=1.2, opacity=0.85)
    for (u, v), w in d.graph.weighted_edges():
        color = PALETTE[(coloring or {}).get((u, v), 0) % len(PALETTE)]
        edges_group.add(dwg.line(
            start=project(*coords[u]),
            end=project(*coords[v]),
            stroke=color,
            stroke_opacity=float(w) if d.graph.is_weighted else 1.0,
        ))
    dwg.add(edges_group)

    if mark_crossings:
        report = count_crossings(d, with_pairs=True, coloring=coloring)
        marks = dwg.g(id="crossings", fill="#e67e22")
        for e, f in report.pairs:
            x, y = _intersection(d, e, f)
            cx, cy = project(float(x), float(y))
            marks.add(dwg.rect(insert=(cx - 2.5, cy - 2.5), size=(5, 5)))
        dwg.add(marks)

    vertices = dwg.g(id="vertices", fill="#111", stroke="#fff", stroke_width=0.8)
    for x, y in coords:
        vertices.add(dwg.circle(center=project(x, y), r=4))
    dwg.add(vertices)
    return dwg.tostring()
