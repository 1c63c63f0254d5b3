"""
Graph and drawing I/O

Graph text: header `n m`, then m lines `u v` or `u v w` with 0-based
vertices and w a rational in [0,1] (`p/q`, integer or decimal). Any
weighted line makes the whole graph weighted; blank lines and `#`
comments are skipped.

Drawing JSON: DrawingDocument (points as [x_num, x_den, y_num, y_den]).
"""

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from app.models.geometry import Configuration, ExactPoint
from app.models.graph import AnyGraph, Drawing, Edge, Graph, WeightedGraph, normalize_edge
from app.models.results import DrawingDocument
from app.utils.errors import GraphParseError, ParameterError


def _int_token(token: str, what: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphParseError(f"{what} {token!r} is not an integer", line)


def _weight_token(token: str, line: int) -> Fraction:
    try:
        w = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise GraphParseError(f"weight {token!r} is not a rational number", line)
    if w < 0 or w > 1:
        raise GraphParseError(f"weight {w} outside [0, 1]", line)
    return w


def parse_graph(text: str) -> AnyGraph:
    rows: List[Tuple[int, List[str]]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].split()
        if content:
            rows.append((number, content))
    if not rows:
        raise GraphParseError("missing `n m` header", 1)

    header_line, header = rows[0]
    if len(header) != 2:
        raise GraphParseError("header must be `n m`", header_line)
    n = _int_token(header[0], "vertex count", header_line)
    m = _int_token(header[1], "edge count", header_line)
    if n < 0 or m < 0:
        raise GraphParseError("negative vertex or edge count", header_line)
    if len(rows) - 1 != m:
        raise GraphParseError(f"header announces {m} edges, found {len(rows) - 1}", header_line)

    weights: Dict[Edge, Fraction] = {}
    weighted = False
    for number, fields in rows[1:]:
        if len(fields) not in (2, 3):
            raise GraphParseError("edge line must be `u v` or `u v w`", number)
        u = _int_token(fields[0], "vertex", number)
        v = _int_token(fields[1], "vertex", number)
        if u == v:
            raise GraphParseError(f"loop at vertex {u}", number)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"edge ({u}, {v}) outside vertex range [0, {n})", number)
        edge = normalize_edge(u, v)
        if edge in weights:
            raise GraphParseError(f"duplicate edge {edge}", number)
        if len(fields) == 3:
            weighted = True
            weights[edge] = _weight_token(fields[2], number)
        else:
            weights[edge] = Fraction(1)

    if weighted:
        return WeightedGraph(n, weights)
    return Graph(n, frozenset(weights))


def serialize_graph(g: AnyGraph) -> str:
    if g.is_weighted:
        edges = g.weighted_edges()
        lines = [f"{g.n} {len(edges)}"] + [f"{u} {v} {w}" for (u, v), w in edges]
    else:
        lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edge_list()]
    return "\n".join(lines) + "\n"


def drawing_to_document(d: Drawing, coloring: Optional[Dict[Edge, int]] = None) -> DrawingDocument:
    edges = d.graph.edge_list()
    return DrawingDocument(
        n=d.graph.n,
        points=[p.to_row() for p in d.placement],
        edges=[list(e) for e in edges],
        weights=[str(d.graph.weight(*e)) for e in edges] if d.graph.is_weighted else None,
        edge_colors=[coloring.get(e, 0) for e in edges] if coloring else None,
    )


def drawing_from_document(doc: DrawingDocument) -> Tuple[Drawing, Optional[Dict[Edge, int]]]:
    if len(doc.points) != doc.n:
        raise ParameterError(f"drawing lists {len(doc.points)} points for n={doc.n}")
    points = []
    for row in doc.points:
        if len(row) != 4 or row[1] == 0 or row[3] == 0:
            raise ParameterError(f"point row {row} must be [x_num, x_den, y_num, y_den]")
        points.append(ExactPoint(Fraction(row[0], row[1]), Fraction(row[2], row[3])))
    edges = [tuple(e) for e in doc.edges]
    if any(len(e) != 2 for e in edges):
        raise ParameterError("every edge must be a vertex pair")
    if doc.weights is not None:
        if len(doc.weights) != len(edges):
            raise ParameterError("weights and edges differ in length")
        graph: AnyGraph = WeightedGraph(doc.n, {e: Fraction(w) for e, w in zip(edges, doc.weights)})
    else:
        graph = Graph(doc.n, frozenset(edges))
    coloring = None
    if doc.edge_colors is not None:
        if len(doc.edge_colors) != len(edges):
            raise ParameterError("edge colors and edges differ in length")
        coloring = {normalize_edge(*e): c for e, c in zip(edges, doc.edge_colors)}
    return Drawing(graph, Configuration(tuple(points))), coloring


def dump_drawing(d: Drawing, coloring: Optional[Dict[Edge, int]] = None) -> str:
    return drawing_to_document(d, coloring).model_dump_json(indent=2, exclude_none=True)


def load_drawing(text: str) -> Tuple[Drawing, Optional[Dict[Edge, int]]]:
    """Parse drawing JSON; pipeline reports are accepted too"""
    try:
        doc = DrawingDocument.model_validate_json(text)
    except ValidationError as e:
        raise ParameterError(f"invalid drawing JSON: {e}")
    return drawing_from_document(doc)
