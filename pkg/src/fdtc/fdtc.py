"""Fractional Dehn twist coefficients, exactly.

The computation brackets c(phi, C) between consecutive boundary-twist
powers: for the probe arc gamma there is a unique integer M with
T_C^M(gamma) >= phi^N(gamma) > T_C^{M+1}(gamma) in the left-to-right
order of arcs at the base point, giving c in [M/N, (M+1)/N].  With
N > D(D-1), where D bounds the possible denominators on the surface,
that window contains exactly one admissible rational, which is the
coefficient; equality at the bracket end pins the point value M/N
directly.  Everything is integer/rational arithmetic on normal
coordinates, so results are exact.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .errors import ComputationError, CurveError, InconsistentDataError, WordError
from .surface import denominator_bound
from . import curves
from .mcg import Generator, MappingClassWord, puncture_permutation_order

_DEFAULT_PROBE_BOUND = 4


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if self.lo > self.hi:
            raise InconsistentDataError("interval endpoints out of order")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise InconsistentDataError("degenerate interval must be closed")

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = Fraction(x)
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def scaled(self, s) -> "RationalInterval":
        s = Fraction(s)
        if s < 0:
            return RationalInterval(
                self.hi * s, self.lo * s, self.hi_closed, self.lo_closed
            )
        return RationalInterval(
            self.lo * s, self.hi * s, self.lo_closed, self.hi_closed
        )

    def to_json(self) -> dict:
        return {
            "lo": str(self.lo),
            "hi": str(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }


@dataclass(frozen=True)
class FDTCResult:
    """Outcome of an FDTC computation: an exact value and/or a bracketing
    interval, with the route that produced it and the parameters used."""

    value: Fraction | None
    interval: RationalInterval | None
    provenance: str  # KeyLemma | ExactTheorem | PeriodicityCorollary | TranslationEstimate
    N: int | None = None
    M: int | None = None
    D: int | None = None

    def __post_init__(self):
        if self.value is not None and self.interval is not None:
            if not self.interval.contains(self.value):
                raise InconsistentDataError("value lies outside its interval")

    def to_json(self) -> dict:
        return {
            "value": None if self.value is None else str(self.value),
            "interval": None if self.interval is None else self.interval.to_json(),
            "provenance": self.provenance,
            "N": self.N,
            "D": self.D,
        }


# ---------------------------------------------------------------------------
# Key Lemma bracketing


def _boundary_power_arc(tri, C: str, gamma: curves.ArcClass,
                        m: int) -> curves.ArcClass:
    word = MappingClassWord(tri, [Generator.boundary(C, m)])
    return word.apply_arc(gamma)


def _ge(tri, C, gamma, phi_arc, m) -> str:
    """Order relation between T_C^m(gamma) and the image arc: 'gt', 'eq'
    or 'lt' in the arc order at the base point (T_C^m(gamma) decreases
    as m grows)."""
    tm = _boundary_power_arc(tri, C, gamma, m)
    rel = curves.compare_at_base(tm, phi_arc, C)
    if rel is curves.Ordering.EQUAL:
        return "eq"
    if rel is curves.Ordering.RIGHT_OF:
        return "gt"
    return "lt"


def key_lemma_interval(w: MappingClassWord, C: str, gamma: curves.ArcClass,
                       N: int) -> RationalInterval:
    """Bracket c(w, C) in [M/N, (M+1)/N] from the action of w^N on one
    essential probe arc; equality at the lower bracket collapses to the
    exact point M/N."""
    if N < 1:
        raise ComputationError("N must be a positive integer")
    tri = w.tri
    if gamma.tri is not tri:
        raise CurveError("probe arc lives on a different triangulation")
    if gamma.start[0] != C:
        raise CurveError("probe arc must start on %r" % (C,))
    if not curves.is_essential(gamma):
        raise CurveError("Key Lemma requires essential arc")
    phi_arc = w.power(N).apply_arc(gamma)
    half = 2 * N * max(len(w), 1) + 2
    lo, hi = -half, half
    if _ge(tri, C, gamma, phi_arc, lo) == "lt":
        raise ComputationError("Key Lemma search range too small (low end)")
    top = _ge(tri, C, gamma, phi_arc, hi)
    if top in ("gt", "eq"):
        if top == "eq":
            return _point(Fraction(hi, N))
        raise ComputationError("Key Lemma search range too small (high end)")
    # largest m with T_C^m(gamma) >= w^N(gamma); the relation is monotone
    # because the twist power sequence is strictly decreasing in the order
    while hi - lo > 1:
        mid = (lo + hi) // 2
        r = _ge(tri, C, gamma, phi_arc, mid)
        if r == "eq":
            return _point(Fraction(mid, N))
        if r == "gt":
            lo = mid
        else:
            hi = mid
    if _ge(tri, C, gamma, phi_arc, lo) == "eq":
        return _point(Fraction(lo, N))
    return RationalInterval(Fraction(lo, N), Fraction(lo + 1, N), True, True)


def _point(x: Fraction) -> RationalInterval:
    return RationalInterval(x, x, True, True)


# ---------------------------------------------------------------------------
# bounded-denominator recovery


def _sb_collect(lo: Fraction, hi: Fraction, interval: RationalInterval,
                la: tuple, lb: tuple, D: int, out: list):
    """Stern-Brocot descent collecting all reduced p/q with q <= D inside
    the interval, between the current bounds la=(p,q) < lb=(p',q')."""
    stack = [(la, lb)]
    while stack:
        (pa, qa), (pb, qb) = stack.pop()
        pm, qm = pa + pb, qa + qb
        if qm > D:
            continue
        med = Fraction(pm, qm)
        if interval.contains(med):
            out.append(med)
        if med > lo:
            stack.append(((pa, qa), (pm, qm)))
        if med < hi:
            stack.append(((pm, qm), (pb, qb)))


def bounded_denominator_candidates(interval: RationalInterval, D: int) -> list:
    """All reduced rationals with denominator <= D in the interval,
    sorted increasingly, found by Stern-Brocot descent after splitting
    off the integer part."""
    if D < 1:
        raise ComputationError("denominator bound must be positive")
    lo, hi = interval.lo, interval.hi
    if lo == hi:
        return [lo] if lo.denominator <= D else []
    found = []
    for n in range(floor(lo), ceil(hi) + 1):
        if interval.contains(n):
            found.append(Fraction(n))
    # search each unit window [n, n+1] via the Stern-Brocot tree of (0,1)
    for n in range(floor(lo), ceil(hi)):
        shifted = RationalInterval(
            max(lo - n, Fraction(0)), min(hi - n, Fraction(1)),
            interval.lo_closed if lo - n > 0 else False,
            interval.hi_closed if hi - n < 1 else False,
        ) if lo - n != hi - n else None
        if shifted is None:
            continue
        local = []
        _sb_collect(shifted.lo, shifted.hi, shifted, (0, 1), (1, 1), D, local)
        found.extend(x + n for x in local)
    return sorted(set(found))


def unique_bounded_denominator(interval: RationalInterval, D: int):
    """The unique rational with denominator <= D in the interval.

    Returns (Fraction, None) on success, (None, report) otherwise, where
    the report lists all candidates ("ambiguous") or none ("empty")."""
    cands = bounded_denominator_candidates(interval, D)
    if len(cands) == 1:
        return cands[0], None
    if not cands:
        return None, {"status": "empty", "candidates": []}
    return None, {"status": "ambiguous", "candidates": cands}


# ---------------------------------------------------------------------------
# the exact computation


def _first_probe_arc(tri, C: str, bound: int = _DEFAULT_PROBE_BOUND):
    for b in (bound, bound + 2, bound + 4, bound + 6):
        arcs = curves.enumerate_arcs(tri, C, b)
        if arcs:
            return arcs[0]
    raise ComputationError("no essential probe arc found on %r" % (C,))


def _annulus_winding(w: MappingClassWord, C: str) -> FDTCResult:
    gamma = _first_probe_arc(w.tri, C)
    interval = key_lemma_interval(w, C, gamma, 1)
    if not interval.is_point:
        raise ComputationError(
            "annulus mapping class did not act as an integer twist power"
        )
    return FDTCResult(interval.lo, interval, "PeriodicityCorollary", N=1,
                      M=int(interval.lo), D=1)


def _max_n(default_n: int) -> int:
    env = os.environ.get("FDTC_MAX_N")
    if env:
        return max(int(env), default_n)
    return 64 * default_n


def fdtc_exact(w: MappingClassWord, C: str) -> FDTCResult:
    """c(w, C) as an exact rational.

    Runs the bracketing at N = D(D-1)+1 so that the window contains a
    single rational of admissible denominator; doubles N (up to the
    FDTC_MAX_N environment override) in the ambiguous cases and returns
    the bare interval when the budget runs out."""
    tri = w.tri
    if C not in tri.base_edge_of:
        raise WordError("unknown boundary label %r" % (C,))
    if tri.surface.puncture_count:
        perm = w.puncture_permutation()
        if perm != tuple(range(len(perm))):
            raise WordError(
                "word permutes punctures; use braid_fdtc, which normalizes "
                "by the permutation order"
            )
    folded = tri.surface.fold_punctures()
    db = denominator_bound(folded)
    if db.degenerate:
        if folded.boundary_count == 1:
            # disc: the mapping class group is trivial, c = 0
            return FDTCResult(Fraction(0), _point(Fraction(0)),
                              "PeriodicityCorollary", N=1, M=0, D=1)
        return _annulus_winding(w, C)
    D = db.value
    N = D * (D - 1) + 1
    n_cap = _max_n(N)
    gamma = _first_probe_arc(tri, C)
    last_interval = None
    n = N
    while n <= n_cap:
        interval = key_lemma_interval(w, C, gamma, n)
        last_interval = interval
        if interval.is_point:
            val = interval.lo
            return FDTCResult(val, interval, "PeriodicityCorollary",
                              N=n, M=int(val * n), D=D)
        val, report = unique_bounded_denominator(interval, D)
        if val is not None:
            return FDTCResult(val, interval, "ExactTheorem",
                              N=n, M=int(interval.lo * n), D=D)
        if report["status"] == "empty":
            raise InconsistentDataError(
                "no admissible rational in the bracketing interval"
            )
        n *= 2
    return FDTCResult(None, last_interval, "KeyLemma", N=n // 2, D=D)


def braid_fdtc(w: MappingClassWord, C: str) -> FDTCResult:
    """FDTC of the closed braid represented by w: the coefficient of the
    smallest pure power, divided by that power."""
    tri = w.tri
    if tri.surface.puncture_count < 1:
        raise WordError("braid_fdtc needs a punctured surface")
    if C not in tri.base_edge_of:
        raise WordError("%r is not a boundary label" % (C,))
    m = puncture_permutation_order(w)
    res = fdtc_exact(w.power(m), C)
    return FDTCResult(
        None if res.value is None else res.value / m,
        None if res.interval is None else res.interval.scaled(Fraction(1, m)),
        res.provenance, N=res.N, M=res.M, D=res.D,
    )


def translation_estimate(w: MappingClassWord, C: str,
                         N_max: int) -> list[RationalInterval]:
    """The bracketing intervals for N = 1..N_max with a fixed probe arc;
    each contains c(w, C) and has width exactly 1/N (or is the exact
    point), converging to the coefficient as a translation number."""
    if N_max < 1:
        raise ComputationError("N_max must be at least 1")
    gamma = _first_probe_arc(w.tri, C)
    return [key_lemma_interval(w, C, gamma, n) for n in range(1, N_max + 1)]


def right_veering_test(w: MappingClassWord, C: str, weight_bound: int,
                       nt_type: str = None) -> dict:
    """Right-veering check combining the coefficient sign with a direct
    probe-arc search.

    c < 0 certifies non-right-veering outright; c > 0 plus a caller
    assertion of pseudo-Anosov type certifies right-veering.  Otherwise
    the essential arcs up to the weight bound are searched for one moved
    strictly to the left, which is a genuine witness; finding none is
    only 'no witness up to the bound'."""
    if weight_bound < 1:
        raise ComputationError("weight bound must be at least 1")
    res = fdtc_exact(w, C)
    if res.value is not None and res.value < 0:
        return {"verdict": "non-right-veering", "reason": "fdtc-negative",
                "fdtc": res, "witness": None}
    if res.value is not None and res.value > 0 and nt_type == "pseudoAnosov":
        return {"verdict": "right-veering", "reason": "fdtc-positive-pA",
                "fdtc": res, "witness": None}
    enc = w.encoding()
    for gamma in curves.enumerate_arcs(w.tri, C, weight_bound):
        img = curves.ArcClass(
            curves.NormalCoordinates(w.tri, enc.forward(gamma.coords.weights)),
            gamma.start,
        )
        if curves.compare_at_base(gamma, img, C) is curves.Ordering.LEFT_OF:
            return {"verdict": "non-right-veering", "reason": "witness-arc",
                    "fdtc": res, "witness": gamma}
    return {"verdict": "no-witness-up-to-bound", "reason": None,
            "fdtc": res, "witness": None}


def quasimorphism_audit(w1: MappingClassWord, w2: MappingClassWord,
                        C: str) -> dict:
    """Defect and conjugation-invariance audit of the coefficient as a
    homogeneous quasimorphism."""
    if w1.tri is not w2.tri:
        raise WordError("words live on different triangulations")
    c1 = fdtc_exact(w1, C)
    c2 = fdtc_exact(w2, C)
    c12 = fdtc_exact(w1.compose(w2), C)
    if c1.value is None or c2.value is None or c12.value is None:
        raise ComputationError("audit needs exact values for all three words")
    defect = abs(c12.value - c1.value - c2.value)
    conj = fdtc_exact(w2.compose(w1).compose(w2.invert()), C)
    return {
        "c1": c1.value,
        "c2": c2.value,
        "c12": c12.value,
        "defect": defect,
        "defect_ok": defect <= 1,
        "conjugation_ok": conj.value == c1.value,
    }
