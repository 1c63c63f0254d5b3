"""
Exact Planar Geometry

Orientation predicates, order types and their canonical forms, convex
position, same-type transversals and the point-line separation used to
size cluster disks. Every decision is made on exact rationals (or plain
integers for grid witnesses); no floating point is involved.
"""

from fractions import Fraction
from itertools import combinations, product
from typing import List, Optional, Sequence, Tuple

from app.models.geometry import Configuration, ExactPoint, OrderTypeSignature
from app.utils.errors import DegeneracyError, ParameterError

Coord = Tuple[Fraction, Fraction]


def orient_det(ax, ay, bx, by, cx, cy):
    """Determinant with columns (1, x, y) of a, b, c (twice the signed area)"""
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def orient(a: ExactPoint, b: ExactPoint, c: ExactPoint) -> int:
    """Sign of the orientation determinant: +1 ccw, -1 cw, 0 collinear"""
    d = orient_det(a.x, a.y, b.x, b.y, c.x, c.y)
    return (d > 0) - (d < 0)


def orient_coords(a: Sequence, b: Sequence, c: Sequence) -> int:
    d = orient_det(a[0], a[1], b[0], b[1], c[0], c[1])
    return (d > 0) - (d < 0)


def find_collinear_triple(coords: Sequence[Sequence]) -> Optional[Tuple[int, int, int]]:
    """First collinear (or coincident) index triple in lexicographic order"""
    n = len(coords)
    for i in range(n):
        ax, ay = coords[i]
        for j in range(i + 1, n):
            bx, by = coords[j]
            for k in range(j + 1, n):
                cx, cy = coords[k]
                if orient_det(ax, ay, bx, by, cx, cy) == 0:
                    return (i, j, k)
    return None


def check_general_position(config: Configuration):
    """Raise DegeneracyError naming the first collinear triple"""
    triple = find_collinear_triple(config.coords())
    if triple is not None:
        raise DegeneracyError(f"points {triple} are collinear", indices=triple)


def signs_of_coords(coords: Sequence[Sequence]) -> Optional[Tuple[int, ...]]:
    """Raw sign vector in lexicographic triple order, None if degenerate"""
    signs = []
    append = signs.append
    n = len(coords)
    for i in range(n):
        ax, ay = coords[i]
        for j in range(i + 1, n):
            bx, by = coords[j]
            dx, dy = bx - ax, by - ay
            for k in range(j + 1, n):
                cx, cy = coords[k]
                d = dx * (cy - ay) - dy * (cx - ax)
                if d == 0:
                    return None
                append(1 if d > 0 else -1)
    return tuple(signs)


def order_type(config: Configuration) -> OrderTypeSignature:
    signs = signs_of_coords(config.coords())
    if signs is None:
        check_general_position(config)
    return OrderTypeSignature(config.n, signs)


def _first_difference(candidate: List[int], best: List[int]) -> int:
    """-1 if candidate < best, 0 if equal, +1 if greater (prefix-wise)"""
    for a, b in zip(candidate, best):
        if a != b:
            return -1 if a < b else 1
    return 0


def _canonical_search(sig: OrderTypeSignature, flip: int, best: Optional[List[int]]) -> Optional[List[int]]:
    n = sig.n
    sign = sig.sign

    def full_vector(labels: List[int], bound: Optional[List[int]]) -> Optional[List[int]]:
        vec = []
        tight = bound is not None
        pos = 0
        for i in range(n):
            li = labels[i]
            for j in range(i + 1, n):
                lj = labels[j]
                for k in range(j + 1, n):
                    s = flip * sign(li, lj, labels[k])
                    if tight:
                        b = bound[pos]
                        if s > b:
                            return None
                        if s < b:
                            tight = False
                    vec.append(s)
                    pos += 1
        if tight:
            # equal to the incumbent, nothing gained
            return None
        return vec

    def descend(labels: List[int], cells: List[List[int]], prefix: List[int]):
        nonlocal best
        if not cells:
            vec = full_vector(labels, best)
            if vec is not None:
                best = vec
            return
        first, rest = cells[0], cells[1:]
        for chosen in first:
            remaining = [x for x in first if x != chosen]
            new_cells = ([remaining] if remaining else []) + rest
            new_prefix = prefix
            if labels:
                anchor = labels[0]
                refined: List[List[int]] = []
                block: List[int] = []
                for cell in new_cells:
                    neg = [x for x in cell if flip * sign(anchor, chosen, x) < 0]
                    pos = [x for x in cell if flip * sign(anchor, chosen, x) > 0]
                    if neg:
                        refined.append(neg)
                        block.extend([-1] * len(neg))
                    if pos:
                        refined.append(pos)
                        block.extend([1] * len(pos))
                new_cells = refined
                new_prefix = prefix + block
                if best is not None and _first_difference(new_prefix, best) > 0:
                    continue
            descend(labels + [chosen], new_cells, new_prefix)

    descend([], [list(range(n))], [])
    return best


def canonicalize(sig: OrderTypeSignature) -> OrderTypeSignature:
    """
    Lexicographically smallest sign vector over all relabelings and the
    global reflection.

    Labels are individualized in order; after label j is fixed, every
    block of entries (0, j, *) is made as small as possible by splitting the
    still-unlabeled points into ordered cells, which fixes that block
    exactly. Branching only happens on which member of the first cell gets
    the next label, and partial prefixes worse than the incumbent are cut.
    """
    if sig.n < 3:
        return sig
    best: Optional[List[int]] = None
    for flip in (1, -1):
        best = _canonical_search(sig, flip, best)
    return OrderTypeSignature(sig.n, tuple(best))


def relabeled(sig: OrderTypeSignature, order: Sequence[int]) -> OrderTypeSignature:
    """Signature of the configuration whose point i is old point order[i]"""
    n = sig.n
    return OrderTypeSignature(n, tuple(
        sig.sign(order[i], order[j], order[k])
        for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)
    ))


def _hull_size(coords: List[Coord]) -> int:
    pts = sorted(coords)
    if len(pts) < 3:
        return len(pts)

    def half(seq):
        chain: List[Coord] = []
        for p in seq:
            while len(chain) > 1 and orient_coords(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    return len(lower) + len(upper) - 2


def is_convex_position(config: Configuration) -> bool:
    """True iff every point is a vertex of the convex hull"""
    check_general_position(config)
    return _hull_size(config.coords()) == config.n


def same_type_transversals(parts: Sequence[Sequence[ExactPoint]]) -> bool:
    """
    True iff every transversal (one point per part, in part order) has the
    same order type. Parts must be disjoint and jointly in general position.
    """
    if len(parts) < 1 or any(len(p) == 0 for p in parts):
        raise ParameterError("every part needs at least one point")
    union = [p for part in parts for p in part]
    if len(set(union)) != len(union):
        raise ParameterError("parts are not disjoint")
    check_general_position(Configuration(tuple(union)))
    reference: Optional[Tuple[int, ...]] = None
    for transversal in product(*parts):
        signs = signs_of_coords([p.as_tuple() for p in transversal])
        if reference is None:
            reference = signs
        elif signs != reference:
            return False
    return True


def min_point_line_distance(config: Configuration) -> Fraction:
    """
    Minimum squared distance between a point and a line through two other
    points of the configuration.
    """
    if config.n < 3:
        raise ParameterError("need at least three points for point-line distances")
    coords = config.coords()
    best: Optional[Fraction] = None
    for i, j in combinations(range(config.n), 2):
        (ax, ay), (bx, by) = coords[i], coords[j]
        length_sq = (bx - ax) ** 2 + (by - ay) ** 2
        if length_sq == 0:
            raise DegeneracyError(f"points {i} and {j} coincide", indices=(i, j))
        for k in range(config.n):
            if k == i or k == j:
                continue
            cx, cy = coords[k]
            det = orient_det(ax, ay, bx, by, cx, cy)
            if det == 0:
                raise DegeneracyError(
                    f"point {k} lies on the line through {i} and {j}",
                    indices=tuple(sorted((i, j, k))),
                )
            dist_sq = Fraction(det * det) / length_sq
            if best is None or dist_sq < best:
                best = dist_sq
    return best
