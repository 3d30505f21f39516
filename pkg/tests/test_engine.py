import random

import pytest

from fdtc.errors import ComputationError, CurveError
from fdtc import curves, engine
from fdtc.curves import (
    NormalCoordinates,
    boundary_drag,
    boundary_parallel_curve,
    enumerate_arcs,
    is_matching,
)
from conftest import TORUS_A, TORUS_B


def _probe_weights(tri, bound=6):
    out = []
    for lab in sorted(tri.base_edge_of):
        out.extend(g.coords.weights for g in enumerate_arcs(tri, lab, bound))
    return out


def _equal_on_probes(tri, enc1, enc2, bound=6):
    return all(enc1.forward(w) == enc2.forward(w)
               for w in _probe_weights(tri, bound))


class TestFlips:
    def test_flip_self_inverse(self, torus_tri):
        interior = [e for e in range(torus_tri.edge_count)
                    if not torus_tri.is_boundary_edge(e)]
        random.seed(7)
        probes = [TORUS_A, TORUS_B] + _probe_weights(torus_tri, 6)
        for e in interior:
            _, step = engine.flip(torus_tri, e)
            for w in probes:
                assert step.apply(step.apply(w)) == tuple(w)

    def test_flip_preserves_matching(self, torus_tri):
        interior = [e for e in range(torus_tri.edge_count)
                    if not torus_tri.is_boundary_edge(e)]
        for e in interior:
            tri2, step = engine.flip(torus_tri, e)
            img = step.apply(TORUS_A)
            assert is_matching(NormalCoordinates(tri2, img))

    def test_flip_boundary_edge_rejected(self, torus_tri):
        e = torus_tri.base_edge_of["S"]
        with pytest.raises(Exception):
            engine.flip(torus_tri, e)


class TestTwistEncoding:
    def test_twist_fixes_its_curve(self, torus_tri):
        enc = engine.twist_encoding(torus_tri, TORUS_A)
        assert enc.forward(TORUS_A) == TORUS_A

    def test_inverse_twist(self, torus_tri):
        enc = engine.twist_encoding(torus_tri, TORUS_A)
        inv = engine.twist_encoding(torus_tri, TORUS_A, -1)
        for w in _probe_weights(torus_tri):
            assert inv.forward(enc.forward(w)) == w

    def test_braid_relation(self, torus_tri):
        # T_a T_b T_a = T_b T_a T_b when i(a, b) = 1
        ta = engine.twist_encoding(torus_tri, TORUS_A)
        tb = engine.twist_encoding(torus_tri, TORUS_B)
        lhs = ta + tb + ta
        rhs = tb + ta + tb
        assert _equal_on_probes(torus_tri, lhs, rhs)

    def test_chain_relation(self, torus_tri):
        # (T_a T_b)^6 = boundary twist on the one-holed torus
        ta = engine.twist_encoding(torus_tri, TORUS_A)
        tb = engine.twist_encoding(torus_tri, TORUS_B)
        word = engine.Encoding(())
        for _ in range(6):
            word = word + tb + ta  # rightmost acts first
        bp = boundary_parallel_curve(torus_tri, "S").weights
        tboundary = engine.twist_encoding(torus_tri, bp)
        assert _equal_on_probes(torus_tri, word, tboundary, bound=7)

    def test_empty_curve_rejected(self, torus_tri):
        with pytest.raises(CurveError):
            engine.twist_encoding(torus_tri, (0,) * torus_tri.edge_count)

    def test_puncture_parallel_twist_trivial(self, disc2_tri):
        from fdtc.curves import puncture_link_curve
        vid = disc2_tri.puncture_vertices[0]
        link = puncture_link_curve(disc2_tri, vid)
        enc = engine.twist_encoding(disc2_tri, link.weights)
        for w in _probe_weights(disc2_tri, 8):
            assert enc.forward(w) == w


class TestBoundaryTwistDualRoute:
    """The boundary twist can be computed two ways: shortening the
    boundary-parallel curve into annular position, or reconstructing the
    mapping class from endpoint drags.  They must agree."""

    @pytest.mark.parametrize("fixture", ["torus_tri", "disc2_tri"])
    def test_routes_agree(self, fixture, request):
        tri = request.getfixturevalue(fixture)
        for lab in sorted(tri.base_edge_of):
            bp = boundary_parallel_curve(tri, lab).weights
            enc = engine.twist_encoding(tri, bp)
            for g in enumerate_arcs(tri, lab, 7):
                dragged = boundary_drag(g, lab, 1)
                assert enc.forward(g.coords.weights) == dragged.coords.weights

    def test_two_boundary_components_commute(self, two_holed_torus_tri):
        tri = two_holed_torus_tri
        e1 = engine.twist_encoding(
            tri, boundary_parallel_curve(tri, "C1").weights)
        e2 = engine.twist_encoding(
            tri, boundary_parallel_curve(tri, "C2").weights)
        assert _equal_on_probes(tri, e1 + e2, e2 + e1, bound=7)


class TestHalfTwists:
    def test_square_is_pair_twist(self, disc2_tri):
        sigma = engine.half_twist_encoding(disc2_tri, 1)
        pair = engine.twist_encoding(
            disc2_tri, engine.pair_curve_weights(disc2_tri, 1))
        assert _equal_on_probes(disc2_tri, sigma + sigma, pair, bound=8)

    def test_braid_relation(self, disc3_tri):
        s1 = engine.half_twist_encoding(disc3_tri, 1)
        s2 = engine.half_twist_encoding(disc3_tri, 2)
        assert _equal_on_probes(disc3_tri, s1 + s2 + s1, s2 + s1 + s2,
                                bound=8)

    def test_fundamental_relation(self, disc3_tri):
        # (sigma1 sigma2)^3 = boundary twist on the 3-punctured disc
        s1 = engine.half_twist_encoding(disc3_tri, 1)
        s2 = engine.half_twist_encoding(disc3_tri, 2)
        word = engine.Encoding(())
        for _ in range(3):
            word = word + s2 + s1
        bp = boundary_parallel_curve(disc3_tri, "C").weights
        tb = engine.twist_encoding(disc3_tri, bp)
        assert _equal_on_probes(disc3_tri, word, tb, bound=8)

    def test_inverse(self, disc2_tri):
        s = engine.half_twist_encoding(disc2_tri, 1)
        si = engine.half_twist_encoding(disc2_tri, 1, -1)
        for w in _probe_weights(disc2_tri, 8):
            assert si.forward(s.forward(w)) == w


class TestShortenCurve:
    def test_shortens_reference(self, torus_tri):
        conj, tri2, w2 = engine.shorten_curve(torus_tri, TORUS_A)
        assert sum(w2) == 2
        # conjugator maps the curve onto its short representative
        assert tuple(conj.forward(TORUS_A)) == tuple(w2)

    def test_roundtrip(self, torus_tri):
        conj, tri2, w2 = engine.shorten_curve(torus_tri, TORUS_B)
        assert conj.backward(w2) == TORUS_B
