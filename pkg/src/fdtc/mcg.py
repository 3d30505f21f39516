"""Mapping classes as words in twist generators, with their exact action
on normal coordinates and the permutation they induce on punctures.

A word is an ordered list of generators applied right to left, like
function composition.  Words are plain data: no simplification beyond
cancelling adjacent mutually-inverse letters, and no attempt to decide
equality in the mapping class group.  The action is compiled through the
flip engine once per word and cached, so applying a long word to huge
coordinates stays cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .errors import CurveError, WordError
from .surface import Triangulation
from . import curves
from . import engine


@dataclass(frozen=True)
class Generator:
    """One letter: a Dehn twist along a curve, a boundary twist, or a
    braid half twist, raised to an integer power.

    Exactly one of ``curve`` (normal coordinates of an essential simple
    closed curve), ``label`` (boundary component) and ``index`` (1-based
    adjacent puncture pair) is set, according to ``kind``.
    """

    kind: str  # "twist" | "boundary" | "braid"
    power: int
    curve: tuple = None
    label: str = None
    index: int = None

    @staticmethod
    def twist(curve_weights, power: int = 1) -> "Generator":
        return Generator("twist", power, curve=tuple(curve_weights))

    @staticmethod
    def boundary(label: str, power: int = 1) -> "Generator":
        return Generator("boundary", power, label=label)

    @staticmethod
    def braid(index: int, power: int = 1) -> "Generator":
        return Generator("braid", power, index=index)

    def inverted(self) -> "Generator":
        return Generator(self.kind, -self.power, self.curve, self.label, self.index)

    def _same_letter(self, other: "Generator") -> bool:
        return (self.kind, self.curve, self.label, self.index) == (
            other.kind, other.curve, other.label, other.index
        )

    def to_json(self) -> dict:
        if self.kind == "twist":
            return {"curve": list(self.curve), "power": self.power}
        if self.kind == "boundary":
            return {"boundary": self.label, "power": self.power}
        return {"braid": self.index, "power": self.power}


class MappingClassWord:
    """A mapping class on a fixed triangulation, as a generator word.

    The rightmost generator acts first.  ``generators`` is kept in
    application order as written, with adjacent mutually-inverse letters
    cancelled at construction time.
    """

    def __init__(self, tri: Triangulation, generators=()):
        self.tri = tri
        gens = []
        for g in generators:
            self._check(g)
            if g.power == 0:
                continue
            if gens and gens[-1]._same_letter(g):
                merged = gens.pop()
                total = merged.power + g.power
                if total:
                    gens.append(Generator(
                        g.kind, total, g.curve, g.label, g.index
                    ))
                continue
            gens.append(g)
        self.generators = tuple(gens)
        self._encoding = None

    # -- construction checks ----------------------------------------------

    def _check(self, g: Generator):
        tri = self.tri
        if g.kind == "twist":
            if g.curve is None or len(g.curve) != tri.edge_count:
                raise WordError("twist curve does not live on this triangulation")
        elif g.kind == "boundary":
            if g.label not in tri.base_edge_of:
                raise WordError("unknown boundary label %r" % (g.label,))
        elif g.kind == "braid":
            n = tri.surface.puncture_count
            if n < 2:
                raise WordError("braid generators need at least 2 punctures")
            if not 1 <= g.index <= n - 1:
                raise WordError("braid index %r out of range" % (g.index,))
        else:
            raise WordError("unknown generator kind %r" % (g.kind,))

    # -- group operations --------------------------------------------------

    def compose(self, other: "MappingClassWord") -> "MappingClassWord":
        """self after other (other acts first)."""
        if self.tri is not other.tri:
            raise WordError("words live on different triangulations")
        return MappingClassWord(self.tri, self.generators + other.generators)

    def invert(self) -> "MappingClassWord":
        return MappingClassWord(
            self.tri, [g.inverted() for g in reversed(self.generators)]
        )

    def power(self, k: int) -> "MappingClassWord":
        if k == 0:
            return MappingClassWord(self.tri)
        base = self if k > 0 else self.invert()
        gens = base.generators * abs(k)
        return MappingClassWord(self.tri, gens)

    def __len__(self) -> int:
        return sum(abs(g.power) for g in self.generators)

    def is_identity_word(self) -> bool:
        return not self.generators

    # -- the action ---------------------------------------------------------

    def encoding(self) -> engine.Encoding:
        if self._encoding is None:
            steps = []
            for g in reversed(self.generators):
                steps.extend(self._generator_encoding(g).steps)
            self._encoding = engine.Encoding(steps)
        return self._encoding

    def _generator_encoding(self, g: Generator) -> engine.Encoding:
        tri = self.tri
        if g.kind == "twist":
            return engine.twist_encoding(tri, g.curve, g.power)
        if g.kind == "boundary":
            w = curves.boundary_parallel_curve(tri, g.label).weights
            return engine.twist_encoding(tri, w, g.power)
        return engine.half_twist_encoding(tri, g.index, g.power)

    def apply(self, x: curves.NormalCoordinates) -> curves.NormalCoordinates:
        if x.tri is not self.tri:
            raise CurveError("coordinates live on a different triangulation")
        if not curves.is_matching(x):
            raise CurveError("coordinates violate the matching conditions")
        return curves.NormalCoordinates(self.tri, self.encoding().forward(x.weights))

    def apply_arc(self, g: curves.ArcClass) -> curves.ArcClass:
        """Image of a boundary-based arc.  The mapping class fixes the
        boundary pointwise, so the start slot is preserved."""
        img = self.apply(g.coords)
        return curves.ArcClass(img, g.start)

    # -- punctures ----------------------------------------------------------

    def puncture_permutation(self) -> tuple:
        """perm[i] = image of puncture i (0-based creation order)."""
        n = self.tri.surface.puncture_count
        perm = list(range(n))
        for g in reversed(self.generators):
            if g.kind == "braid" and g.power % 2:
                j = g.index - 1
                perm[j], perm[j + 1] = perm[j + 1], perm[j]
        return tuple(perm)

    def to_json(self) -> list:
        return [g.to_json() for g in self.generators]

    @staticmethod
    def from_json(tri: Triangulation, data, named_curves=None) -> "MappingClassWord":
        gens = []
        for item in data:
            power = int(item.get("power", 1))
            if "curve" in item:
                gens.append(Generator.twist(item["curve"], power))
            elif "twist" in item:
                table = named_curves or {}
                name = item["twist"]
                if name not in table:
                    raise WordError("unknown named curve %r" % (name,))
                gens.append(Generator.twist(table[name], power))
            elif "boundary" in item:
                gens.append(Generator.boundary(item["boundary"], power))
            elif "braid" in item:
                gens.append(Generator.braid(int(item["braid"]), power))
            else:
                raise WordError("unrecognised generator record %r" % (item,))
        return MappingClassWord(tri, gens)


def identity_word(tri: Triangulation) -> MappingClassWord:
    return MappingClassWord(tri)


def puncture_permutation_order(w: MappingClassWord) -> int:
    perm = w.puncture_permutation()
    if not perm:
        return 1
    order = 1
    seen = set()
    for start in range(len(perm)):
        if start in seen:
            continue
        length = 0
        j = start
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        order = lcm(order, length)
    return order


def acts_identically(w: MappingClassWord, probe_bound: int):
    """Semi-decision for triviality: apply the word to every essential
    arc up to the weight bound on every boundary component.

    Returns (True, None) when all probes are fixed — yes on probes, not
    a proof — or (False, witness_arc) with the first moved arc."""
    if probe_bound < 1:
        raise WordError("probe bound must be at least 1")
    enc = w.encoding()
    for lab in sorted(w.tri.base_edge_of):
        for g in curves.enumerate_arcs(w.tri, lab, probe_bound):
            if enc.forward(g.coords.weights) != g.coords.weights:
                return (False, g)
    return (True, None)
