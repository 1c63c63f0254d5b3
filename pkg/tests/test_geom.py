from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from app.models.geometry import Configuration, ExactPoint, OrderTypeSignature
from app.services.geom import (
    canonicalize,
    find_collinear_triple,
    is_convex_position,
    min_point_line_distance,
    order_type,
    orient,
    orient_coords,
    relabeled,
    same_type_transversals,
)
from app.utils.errors import DegeneracyError, ParameterError, SizeError

coord = st.integers(min_value=-60, max_value=60)
point = st.tuples(coord, coord)


def general_position(coords) -> bool:
    return len(set(coords)) == len(coords) and find_collinear_triple(coords) is None


def P(x, y) -> ExactPoint:
    return ExactPoint(x, y)


class TestOrient:
    def test_examples(self):
        assert orient(P(0, 0), P(1, 0), P(0, 1)) == 1
        assert orient(P(0, 0), P(1, 0), P(2, 0)) == 0
        assert orient(P(0, 0), P(0, 1), P(1, 0)) == -1

    def test_rationals_are_exact(self):
        # nearly collinear points that float rounding would misjudge
        a = P(Fraction(1, 3), Fraction(1, 3))
        b = P(Fraction(2, 3), Fraction(2, 3))
        assert orient(P(0, 0), a, b) == 0
        assert orient(P(0, 0), a, P(Fraction(2, 3), Fraction(2, 3) + Fraction(1, 10 ** 30))) == 1

    @settings(max_examples=300)
    @given(point, point, point)
    def test_transposition_flips_sign(self, a, b, c):
        s = orient_coords(a, b, c)
        assert orient_coords(b, a, c) == -s
        assert orient_coords(a, c, b) == -s
        assert orient_coords(c, b, a) == -s

    def test_float_coordinates_rejected(self):
        with pytest.raises(ParameterError):
            ExactPoint(0.5, 1)


class TestOrderType:
    def test_triangle(self):
        sig = order_type(Configuration.from_coords([(0, 0), (2, 0), (1, 2)]))
        assert sig.signs == (1,)

    def test_convex_quadrilateral_ccw(self):
        sig = order_type(Configuration.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)]))
        assert sig.signs == (1, 1, 1, 1)

    def test_collinear_rejected(self):
        with pytest.raises(DegeneracyError) as exc:
            order_type(Configuration.from_coords([(0, 0), (1, 1), (5, 0), (2, 2)]))
        assert exc.value.indices == (0, 1, 3)

    @settings(max_examples=100)
    @given(
        st.lists(point, min_size=3, max_size=6, unique=True),
        st.tuples(coord, coord, coord, coord),
        st.tuples(coord, coord),
    )
    def test_positive_affine_invariance(self, coords, matrix, shift):
        assume(general_position(coords))
        a, b, c, d = matrix
        assume(a * d - b * c > 0)
        image = [(a * x + b * y + shift[0], c * x + d * y + shift[1]) for x, y in coords]
        assert order_type(Configuration.from_coords(image)) == order_type(Configuration.from_coords(coords))

    def test_signature_length_checked(self):
        with pytest.raises(SizeError):
            OrderTypeSignature(4, (1, 1, 1))

    def test_packed_bytes(self):
        sig = OrderTypeSignature(4, (1, -1, -1, 1))
        assert sig.to_bytes() == bytes([0b1001])
        assert OrderTypeSignature.from_bytes(4, sig.to_bytes()) == sig


class TestCanonicalize:
    def test_triangle_canonical_form(self):
        sig = order_type(Configuration.from_coords([(0, 0), (1, 0), (0, 1)]))
        assert canonicalize(sig).signs == (-1,)

    def test_convex_pentagon_all_labelings(self):
        pentagon = [(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)]
        keys = {
            canonicalize(order_type(Configuration.from_coords([pentagon[i] for i in perm])))
            for perm in permutations(range(5))
        }
        assert len(keys) == 1

    def test_matches_brute_force_minimum(self):
        config = Configuration.from_coords([(0, 0), (7, 1), (3, 6), (2, 2), (5, 3)])
        sig = order_type(config)
        brute = min(
            min(relabeled(sig, perm).signs, relabeled(sig.flipped(), perm).signs)
            for perm in permutations(range(5))
        )
        assert canonicalize(sig).signs == brute

    @settings(max_examples=60, deadline=None)
    @given(st.lists(point, min_size=4, max_size=7, unique=True), st.randoms(use_true_random=False))
    def test_idempotent_and_relabeling_invariant(self, coords, rnd):
        assume(general_position(coords))
        sig = order_type(Configuration.from_coords(coords))
        key = canonicalize(sig)
        assert canonicalize(key) == key
        order = list(range(len(coords)))
        rnd.shuffle(order)
        assert canonicalize(relabeled(sig, order)) == key
        assert canonicalize(sig.flipped()) == key


class TestConvexPosition:
    def test_square(self):
        assert is_convex_position(Configuration.from_coords([(0, 0), (2, 0), (2, 2), (0, 2)]))

    def test_triangle_with_centroid(self):
        assert not is_convex_position(Configuration.from_coords([(0, 0), (6, 0), (0, 6), (2, 2)]))

    @settings(max_examples=300)
    @given(st.lists(point, min_size=4, max_size=4, unique=True))
    def test_four_points_convex_iff_one_pairing_crosses(self, coords):
        assume(general_position(coords))

        def crosses(a, b, c, d):
            return (orient_coords(a, b, c) != orient_coords(a, b, d)
                    and orient_coords(c, d, a) != orient_coords(c, d, b))

        p = coords
        pairings = [(p[0], p[1], p[2], p[3]), (p[0], p[2], p[1], p[3]), (p[0], p[3], p[1], p[2])]
        crossing = sum(1 for pairing in pairings if crosses(*pairing))
        assert crossing in (0, 1)
        assert is_convex_position(Configuration.from_coords(coords)) == (crossing == 1)


class TestSameTypeTransversals:
    def test_singletons(self):
        parts = [[P(0, 0)], [P(5, 0)], [P(0, 5)], [P(4, 4)]]
        assert same_type_transversals(parts)

    def test_tiny_disks(self):
        centers = [(0, 0), (20, 0), (0, 20), (20, 21)]
        parts = [
            [P(Fraction(cx * 1000 + k, 1000), Fraction(cy * 1000 + k * k, 1000)) for k in (1, 2)]
            for cx, cy in centers
        ]
        assert same_type_transversals(parts)

    def test_straddling_part(self):
        # the first part sits on both sides of the line through the next two
        parts = [[P(5, 1), P(6, -1)], [P(0, 0)], [P(10, 0)], [P(3, 10)]]
        assert not same_type_transversals(parts)

    def test_overlapping_parts_rejected(self):
        with pytest.raises(ParameterError):
            same_type_transversals([[P(0, 0)], [P(0, 0)], [P(1, 0)], [P(0, 1)]])

    def test_collinear_union_rejected(self):
        with pytest.raises(DegeneracyError):
            same_type_transversals([[P(0, 0)], [P(1, 1)], [P(2, 2)], [P(0, 1)]])


class TestPointLineDistance:
    def test_right_isoceles(self):
        assert min_point_line_distance(Configuration.from_coords([(0, 0), (4, 0), (0, 4)])) == 8

    def test_unit_right_triangle(self):
        assert min_point_line_distance(Configuration.from_coords([(0, 0), (1, 0), (0, 1)])) == Fraction(1, 2)

    @settings(max_examples=80)
    @given(st.lists(point, min_size=3, max_size=6, unique=True), st.integers(min_value=2, max_value=9))
    def test_positive_and_quadratic_under_scaling(self, coords, t):
        assume(general_position(coords))
        config = Configuration.from_coords(coords)
        base = min_point_line_distance(config)
        assert base > 0
        assert min_point_line_distance(config.scaled(t)) == t * t * base

    def test_collinear_rejected(self):
        with pytest.raises(DegeneracyError):
            min_point_line_distance(Configuration.from_coords([(0, 0), (1, 0), (2, 0)]))

    def test_too_few_points(self):
        with pytest.raises(ParameterError):
            min_point_line_distance(Configuration.from_coords([(0, 0), (1, 0)]))
