import random

import pytest

from fdtc.errors import CurveError, MatchingError
from fdtc import curves, engine
from fdtc.curves import (
    ArcClass,
    NormalCoordinates,
    Ordering,
    boundary_drag,
    boundary_parallel_curve,
    compare_at_base,
    enumerate_arcs,
    geometric_intersection,
    is_essential,
    is_matching,
    is_puncture_parallel,
    tighten,
    trace_components,
)
from conftest import TORUS_A, TORUS_B


class TestMatching:
    def test_reference_curves_match(self, torus_tri):
        for w in (TORUS_A, TORUS_B):
            assert is_matching(NormalCoordinates(torus_tri, w))

    def test_triangle_inequality_violation(self, torus_tri):
        assert not is_matching(NormalCoordinates(torus_tri, (5, 1, 0, 1, 1)))

    def test_zero_is_matching(self, torus_tri):
        assert is_matching(NormalCoordinates(torus_tri, (0,) * 5))

    def test_tighten_fixes_matching(self, torus_tri):
        c = NormalCoordinates(torus_tri, TORUS_A)
        assert tighten(c).weights == c.weights


class TestTraceComponents:
    def test_single_curve(self, torus_tri):
        comps = trace_components(NormalCoordinates(torus_tri, TORUS_A))
        assert len(comps) == 1

    def test_multiple_of_curve(self, torus_tri):
        doubled = tuple(2 * w for w in TORUS_A)
        comps = trace_components(NormalCoordinates(torus_tri, doubled))
        assert len(comps) == 2


class TestBoundaryParallel:
    def test_torus(self, torus_tri):
        bp = boundary_parallel_curve(torus_tri, "S")
        assert is_matching(bp)
        assert len(trace_components(bp)) == 1

    def test_two_components(self, two_holed_torus_tri):
        b1 = boundary_parallel_curve(two_holed_torus_tri, "C1")
        b2 = boundary_parallel_curve(two_holed_torus_tri, "C2")
        assert b1.weights != b2.weights

    def test_puncture_parallel_detection(self, disc2_tri):
        from fdtc.curves import puncture_link_curve
        for vid in disc2_tri.puncture_vertices:
            assert is_puncture_parallel(puncture_link_curve(disc2_tri, vid))
        assert not is_puncture_parallel(
            boundary_parallel_curve(disc2_tri, "C"))


class TestEnumerateArcs:
    def test_all_essential_and_based(self, torus_tri):
        arcs = enumerate_arcs(torus_tri, "S", 6)
        assert arcs
        for g in arcs:
            assert is_essential(g)
            assert g.start[0] == "S"

    def test_monotone_in_bound(self, torus_tri):
        small = {g.coords.weights for g in enumerate_arcs(torus_tri, "S", 4)}
        large = {g.coords.weights for g in enumerate_arcs(torus_tri, "S", 6)}
        assert small <= large

    def test_respects_component(self, two_holed_torus_tri):
        for g in enumerate_arcs(two_holed_torus_tri, "C2", 6):
            assert g.start[0] == "C2"


class TestGeometricIntersection:
    def test_reference_pair(self, torus_tri):
        a = NormalCoordinates(torus_tri, TORUS_A)
        b = NormalCoordinates(torus_tri, TORUS_B)
        assert geometric_intersection(a, b) == 1
        assert geometric_intersection(b, a) == 1

    def test_self_intersection_zero(self, torus_tri):
        a = NormalCoordinates(torus_tri, TORUS_A)
        assert geometric_intersection(a, a) == 0

    def test_boundary_parallel_disjoint(self, torus_tri):
        a = NormalCoordinates(torus_tri, TORUS_A)
        bp = boundary_parallel_curve(torus_tri, "S")
        assert geometric_intersection(a, bp) == 0

    def test_twist_images(self, torus_tri):
        # i(T_b^k a, a) grows linearly: |k| * i(a,b)^2
        a = NormalCoordinates(torus_tri, TORUS_A)
        enc = engine.twist_encoding(torus_tri, TORUS_B)
        img = a.weights
        for k in (1, 2, 3):
            img = enc.forward(img)
            got = geometric_intersection(NormalCoordinates(torus_tri, img), a)
            assert got == k


class TestCompareAtBase:
    def test_equal_on_same_arc(self, torus_tri):
        g = enumerate_arcs(torus_tri, "S", 5)[0]
        assert compare_at_base(g, g, "S") is Ordering.EQUAL

    def test_antisymmetric(self, torus_tri):
        arcs = enumerate_arcs(torus_tri, "S", 5)
        flips = {Ordering.RIGHT_OF: Ordering.LEFT_OF,
                 Ordering.LEFT_OF: Ordering.RIGHT_OF,
                 Ordering.EQUAL: Ordering.EQUAL}
        seen_strict = False
        for g1 in arcs[:6]:
            for g2 in arcs[:6]:
                o = compare_at_base(g1, g2, "S")
                assert compare_at_base(g2, g1, "S") is flips[o]
                seen_strict = seen_strict or o is not Ordering.EQUAL
        assert seen_strict


class TestBoundaryDrag:
    def test_drag_round_trip(self, torus_tri):
        for g in enumerate_arcs(torus_tri, "S", 5)[:6]:
            once = boundary_drag(g, "S", 1)
            back = boundary_drag(once, "S", -1)
            assert back.coords.weights == g.coords.weights

    def test_drag_matches_boundary_twist(self, torus_tri):
        # dragging both endpoints around the boundary is the boundary twist
        bp = boundary_parallel_curve(torus_tri, "S").weights
        enc = engine.twist_encoding(torus_tri, bp)
        for g in enumerate_arcs(torus_tri, "S", 5)[:6]:
            dragged = boundary_drag(g, "S", 1)
            assert enc.forward(g.coords.weights) == dragged.coords.weights

    def test_drag_on_annulus_components(self, annulus_tri):
        for lab in ("C1", "C2"):
            for g in enumerate_arcs(annulus_tri, lab, 6)[:4]:
                once = boundary_drag(g, lab, 1)
                assert boundary_drag(once, lab, -1).coords.weights == \
                    g.coords.weights

    def test_dragged_arc_moves_right(self, torus_tri):
        # a positive boundary twist never moves an arc strictly left
        for g in enumerate_arcs(torus_tri, "S", 5)[:6]:
            dragged = boundary_drag(g, "S", 1)
            assert compare_at_base(g, dragged, "S") is not Ordering.LEFT_OF
