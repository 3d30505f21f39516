import random

import pytest

from fdtc.errors import WordError
from fdtc import curves
from fdtc.curves import NormalCoordinates, enumerate_arcs
from fdtc.mcg import (
    Generator,
    MappingClassWord,
    acts_identically,
    identity_word,
    puncture_permutation_order,
)
from conftest import TORUS_A, TORUS_B


def _random_word(tri, rng, length, letters):
    gens = [letters[rng.randrange(len(letters))] for _ in range(length)]
    return MappingClassWord(tri, gens)


def _torus_letters():
    return [Generator.twist(TORUS_A, 1), Generator.twist(TORUS_A, -1),
            Generator.twist(TORUS_B, 1), Generator.twist(TORUS_B, -1)]


class TestWordConstruction:
    def test_adjacent_cancellation(self, torus_tri):
        w = MappingClassWord(torus_tri, [
            Generator.twist(TORUS_A, 1), Generator.twist(TORUS_A, -1)])
        assert w.is_identity_word()

    def test_adjacent_merge(self, torus_tri):
        w = MappingClassWord(torus_tri, [
            Generator.twist(TORUS_A, 2), Generator.twist(TORUS_A, 3)])
        assert len(w.generators) == 1 and w.generators[0].power == 5

    def test_rejects_foreign_curve(self, torus_tri):
        with pytest.raises(WordError):
            MappingClassWord(torus_tri, [Generator.twist((1, 0), 1)])

    def test_rejects_unknown_boundary(self, torus_tri):
        with pytest.raises(WordError):
            MappingClassWord(torus_tri, [Generator.boundary("Z")])

    def test_rejects_braid_without_punctures(self, torus_tri):
        with pytest.raises(WordError):
            MappingClassWord(torus_tri, [Generator.braid(1)])

    def test_len_counts_letters(self, torus_tri):
        w = MappingClassWord(torus_tri, [
            Generator.twist(TORUS_A, 2), Generator.twist(TORUS_B, -3)])
        assert len(w) == 5


class TestGroupAction:
    """The compiled action must be a right action of words on curves:
    (w1 ∘ w2)(x) = w1(w2(x))."""

    @pytest.mark.parametrize("fixture,nletters", [
        ("torus_tri", "twists"), ("disc3_tri", "braids")])
    def test_composition_law(self, fixture, nletters, request):
        tri = request.getfixturevalue(fixture)
        if nletters == "twists":
            letters = _torus_letters()
        else:
            letters = [Generator.braid(1, 1), Generator.braid(1, -1),
                       Generator.braid(2, 1), Generator.braid(2, -1),
                       Generator.boundary("C", 1)]
        rng = random.Random(11)
        probes = [g.coords for lab in sorted(tri.base_edge_of)
                  for g in enumerate_arcs(tri, lab, 6)]
        for _ in range(10):
            w1 = _random_word(tri, rng, rng.randint(1, 4), letters)
            w2 = _random_word(tri, rng, rng.randint(1, 4), letters)
            comp = w1.compose(w2)
            for x in probes[:4]:
                assert comp.apply(x).weights == w1.apply(w2.apply(x)).weights

    def test_inverse(self, torus_tri):
        rng = random.Random(5)
        for _ in range(5):
            w = _random_word(torus_tri, rng, 4, _torus_letters())
            wi = w.invert()
            x = NormalCoordinates(torus_tri, TORUS_A)
            assert wi.apply(w.apply(x)).weights == x.weights

    def test_power(self, torus_tri):
        w = MappingClassWord(torus_tri, [Generator.twist(TORUS_A, 1),
                                         Generator.twist(TORUS_B, 1)])
        x = NormalCoordinates(torus_tri, TORUS_B)
        twice = w.apply(w.apply(x))
        assert w.power(2).apply(x).weights == twice.weights
        assert w.power(0).is_identity_word()

    def test_apply_arc_keeps_start(self, torus_tri):
        w = MappingClassWord(torus_tri, [Generator.twist(TORUS_A, 1)])
        g = enumerate_arcs(torus_tri, "S", 5)[0]
        assert w.apply_arc(g).start == g.start


class TestPuncturePermutation:
    def test_half_twist_swaps(self, disc3_tri):
        w = MappingClassWord(disc3_tri, [Generator.braid(1)])
        assert w.puncture_permutation() == (1, 0, 2)
        assert puncture_permutation_order(w) == 2

    def test_even_powers_fix(self, disc3_tri):
        w = MappingClassWord(disc3_tri, [Generator.braid(1, 2)])
        assert w.puncture_permutation() == (0, 1, 2)
        assert puncture_permutation_order(w) == 1

    def test_three_cycle(self, disc3_tri):
        w = MappingClassWord(disc3_tri, [Generator.braid(2),
                                         Generator.braid(1)])
        assert puncture_permutation_order(w) == 3


class TestActsIdentically:
    def test_identity(self, torus_tri):
        ok, witness = acts_identically(identity_word(torus_tri), 6)
        assert ok and witness is None

    def test_commutator_of_disjoint(self, two_holed_torus_tri):
        tri = two_holed_torus_tri
        w = MappingClassWord(tri, [
            Generator.boundary("C1"), Generator.boundary("C2"),
            Generator.boundary("C1", -1), Generator.boundary("C2", -1)])
        ok, witness = acts_identically(w, 7)
        assert ok

    def test_nontrivial_word_has_witness(self, torus_tri):
        w = MappingClassWord(torus_tri, [Generator.twist(TORUS_A, 1)])
        ok, witness = acts_identically(w, 6)
        assert not ok and witness is not None


class TestJson:
    def test_roundtrip(self, torus_tri):
        w = MappingClassWord(torus_tri, [Generator.twist(TORUS_A, 2),
                                         Generator.boundary("S", -1)])
        back = MappingClassWord.from_json(torus_tri, w.to_json())
        assert back.generators == w.generators

    def test_named_curves(self, torus_tri):
        data = [{"twist": "a", "power": 1}, {"braid": None}]
        w = MappingClassWord.from_json(torus_tri, [{"twist": "a"}],
                                       {"a": TORUS_A})
        assert w.generators[0].curve == TORUS_A
        with pytest.raises(WordError):
            MappingClassWord.from_json(torus_tri, [{"twist": "z"}], {})
