"""Edge flips, curve shortening, and Dehn twist encodings.

A flip replaces the diagonal of the square formed by the two triangles
adjacent to an interior edge.  On normal coordinates it acts by the
max-plus rule w'(e) = max(w_a + w_c, w_b + w_d) - w(e) where a, b, c, d
are the square's sides in cyclic order; all other weights are untouched.
The rule only mentions edge ids, so a flip recorded once can later be
replayed on any weight vector, and the same formula undoes itself.

A Dehn twist along a simple closed curve is compiled into such a replay
script: flip until the curve crosses just two edges once each (so a
square of two triangles forms its annular neighbourhood), do the twist
there as one flip plus an edge relabelling that restores the
triangulation, then undo the preparatory flips.  Applying the script is
pure big-integer arithmetic, which is what makes high twist powers on
huge coordinates affordable.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import TriangulationError, ComputationError, CurveError
from .surface import Triangulation
from . import curves as _curves

_SEARCH_CAP = 20000  # states explored when shortening a curve


@dataclass(frozen=True)
class FlipStep:
    """Weight transport across one flip of edge e with square sides
    a, b, c, d.  Self-inverse."""

    e: int
    a: int
    b: int
    c: int
    d: int

    def apply(self, w):
        out = list(w)
        out[self.e] = max(w[self.a] + w[self.c], w[self.b] + w[self.d]) - w[self.e]
        if out[self.e] < 0:
            raise ComputationError("flip produced a negative weight")
        return tuple(out)

    def inverted(self) -> "FlipStep":
        return self


@dataclass(frozen=True)
class RelabelStep:
    """Edge renaming; perm[old] = new."""

    perm: tuple

    def apply(self, w):
        out = [0] * len(w)
        for old, new in enumerate(self.perm):
            out[new] = w[old]
        return tuple(out)

    def inverted(self) -> "RelabelStep":
        inv = [0] * len(self.perm)
        for old, new in enumerate(self.perm):
            inv[new] = old
        return RelabelStep(tuple(inv))


class Encoding:
    """A replayable sequence of coordinate transport steps."""

    __slots__ = ("steps",)

    def __init__(self, steps):
        self.steps = tuple(steps)

    def forward(self, w):
        for s in self.steps:
            w = s.apply(w)
        return w

    def backward(self, w):
        for s in reversed(self.steps):
            w = s.inverted().apply(w)
        return w

    def inverted(self) -> "Encoding":
        return Encoding([s.inverted() for s in reversed(self.steps)])

    def __add__(self, other: "Encoding") -> "Encoding":
        return Encoding(self.steps + other.steps)

    def is_trivial(self) -> bool:
        return not self.steps


def flip(tri: Triangulation, e: int):
    """Flip interior edge e.  Returns (new triangulation, FlipStep)."""
    if tri.is_boundary_edge(e):
        raise TriangulationError("cannot flip boundary edge %d" % e)
    incs = tri.incidences[e]
    if len(incs) != 2:
        raise TriangulationError("edge %d is not interior" % e)
    (t1, k1), (t2, k2) = incs
    if t1 == t2:
        raise TriangulationError(
            "edge %d is a self-folded diagonal and cannot be flipped" % e
        )
    if tri.triangles[t1][k1][1] == 1:
        tp, ip, tm, im = t1, k1, t2, k2
    else:
        tp, ip, tm, im = t2, k2, t1, k1
    a = tri.triangles[tp][(ip + 1) % 3]
    b = tri.triangles[tp][(ip + 2) % 3]
    c = tri.triangles[tm][(im + 1) % 3]
    d = tri.triangles[tm][(im + 2) % 3]
    new_triangles = list(tri.triangles)
    new_triangles[tp] = (b, c, (e, 1))
    new_triangles[tm] = (d, a, (e, -1))
    new_tri = Triangulation(
        tri.surface, new_triangles, tri.boundary_label_of_edge, tri.base_edge_of
    )
    return new_tri, FlipStep(e, a[0], b[0], c[0], d[0])


def relabel(tri: Triangulation, perm, reversed_edges=()) -> Triangulation:
    """Rename edges by perm[old] = new; boundary data follows along.
    Edges listed in ``reversed_edges`` (old ids) also have their
    intrinsic direction reversed, which weights never see."""
    rev = set(reversed_edges)
    new_triangles = [
        tuple((perm[e], -s if e in rev else s) for (e, s) in sides)
        for sides in tri.triangles
    ]
    labels = {perm[e]: lab for e, lab in tri.boundary_label_of_edge.items()}
    bases = {lab: perm[e] for lab, e in tri.base_edge_of.items()}
    return Triangulation(tri.surface, new_triangles, labels, bases)


def _canonical_key(tri: Triangulation):
    out = []
    for sides in tri.triangles:
        rots = [tuple(sides[i:]) + tuple(sides[:i]) for i in range(3)]
        out.append(min(rots))
    return tuple(sorted(out))


def shorten_curve(tri: Triangulation, weights):
    """Flip until the curve crosses exactly two edges once each.

    Returns (flip Encoding F, short triangulation, short weights); F
    transports coordinates from ``tri`` to the short triangulation.
    Best-first search on total weight, so mild plateaus are crossed."""
    w0 = tuple(weights)
    start_total = sum(w0)
    if start_total < 2:
        raise CurveError("not an essential closed curve (empty coordinates)")
    counter = 0
    heap = [(start_total, 0, tri, w0, ())]
    seen = {(_canonical_key(tri), w0)}
    explored = 0
    while heap and explored < _SEARCH_CAP:
        total, _c, cur, w, path = heapq.heappop(heap)
        explored += 1
        if total == 2:
            short = Encoding(path)
            return short, cur, w
        for e in range(cur.edge_count):
            if cur.is_boundary_edge(e):
                continue
            try:
                nt, step = flip(cur, e)
            except TriangulationError:
                continue
            try:
                nw = step.apply(w)
            except ComputationError:
                continue
            key = (_canonical_key(nt), nw)
            if key in seen:
                continue
            seen.add(key)
            counter += 1
            heapq.heappush(
                heap, (sum(nw), counter, nt, nw, path + (step,))
            )
    raise ComputationError(
        "could not shorten the curve to an annular position "
        "(is it essential and connected?)"
    )


def _twist_handedness(short_tri: Triangulation, core: Encoding):
    """+1 if the annular square move is the right-handed twist, -1 if
    left-handed.

    A positive twist is right-veering: no boundary-based arc maps
    strictly to the left of itself at its starting end, and arcs
    crossing the core curve do map strictly right somewhere (both arc
    orientations are enumerated, so a move at either end is seen).  A
    negative twist is the mirror statement, so counting strict moves
    over a small arc family decides the sign."""
    for bound in (6, 8, 10, 12):
        rights = lefts = 0
        for lab in sorted(short_tri.base_edge_of):
            for g in _curves.enumerate_arcs(short_tri, lab, bound):
                iw = core.forward(g.coords.weights)
                if iw == g.coords.weights:
                    continue
                img = _curves.ArcClass(
                    _curves.NormalCoordinates(short_tri, iw), g.start
                )
                rel = _curves.compare_at_base(g, img, lab)
                if rel is _curves.Ordering.RIGHT_OF:
                    rights += 1
                elif rel is _curves.Ordering.LEFT_OF:
                    lefts += 1
        if rights and not lefts:
            return 1
        if lefts and not rights:
            return -1
        if rights and lefts:
            raise ComputationError("annular move is not a twist")
    raise ComputationError("could not determine twist handedness")


def _core_twist(short_tri: Triangulation, short_w):
    """One twist in the annular position: flip one of the two crossed
    edges, then relabel (possibly reversing) the two crossed edges so
    the triangulation comes back to itself exactly.

    Which of the closing candidates appears first depends on the
    triangulation, so the handedness of the move is NOT fixed here; the
    caller decides it with ``_twist_handedness``."""
    e1, e2 = sorted(e for e, x in enumerate(short_w) if x == 1)
    n = short_tri.edge_count
    swap = list(range(n))
    swap[e1], swap[e2] = e2, e1
    ident = list(range(n))
    for fe in (e1, e2):
        flipped, step = flip(short_tri, fe)
        for perm in (swap, ident):
            for rev in ((), (e1,), (e2,), (e1, e2)):
                cand = relabel(flipped, perm, rev)
                if cand.same_structure(short_tri):
                    core = Encoding([step, RelabelStep(tuple(perm))])
                    if core.forward(tuple(short_w)) != tuple(short_w):
                        raise ComputationError(
                            "annular twist moved its own core curve"
                        )
                    return core
    raise ComputationError("annular twist did not close up")


# Which collar rotation sense counts as the positive boundary twist.
# Pinned by the same calibration on the annulus, where the boundary
# twist and the core-curve twist are the same mapping class.
POSITIVE_DRAG_DIRECTION = 1


def derive_relabel_to(src: Triangulation, dst: Triangulation):
    """The unique edge renaming perm (perm[src edge] = dst edge) realising
    a combinatorial isomorphism src -> dst that fixes every boundary edge
    id, or None.  Boundary edges seed the matching and triangle
    adjacency propagates it; on a connected surface this leaves no
    choice, so the map is found or ruled out deterministically."""
    if src.edge_count != dst.edge_count or len(src.triangles) != len(dst.triangles):
        return None
    perm = [None] * src.edge_count
    tmap = {}
    queue = []
    for e in src.boundary_label_of_edge:
        if dst.boundary_label_of_edge.get(e) != src.boundary_label_of_edge[e]:
            return None
        perm[e] = e
        (ts, ks) = src.incidences[e][0]
        (td, kd) = dst.incidences[e][0]
        if ts in tmap and tmap[ts] != (td, (kd - ks) % 3):
            return None
        if ts not in tmap:
            tmap[ts] = (td, (kd - ks) % 3)
            queue.append(ts)
    while queue:
        ts = queue.pop()
        td, rot = tmap[ts]
        for i in range(3):
            es = src.triangles[ts][i][0]
            ed = dst.triangles[td][(i + rot) % 3][0]
            if perm[es] is None:
                perm[es] = ed
            elif perm[es] != ed:
                return None
            if src.is_boundary_edge(es):
                continue
            if dst.is_boundary_edge(ed):
                return None
            ns, ks2 = src.other_incidence(es, ts, i)
            nd, kd2 = dst.other_incidence(ed, td, (i + rot) % 3)
            want = (nd, (kd2 - ks2) % 3)
            if ns in tmap:
                if tmap[ns] != want:
                    return None
            else:
                tmap[ns] = want
                queue.append(ns)
    if len(tmap) != len(src.triangles) or None in perm:
        return None
    if len(set(perm)) != len(perm):
        return None
    return tuple(perm)


def encoding_from_probe_images(tri: Triangulation, probes, images,
                               cap: int = 200000) -> Encoding:
    """Replay script for the mapping class sending each probe arc class
    to the given image, both in coordinates on ``tri``.

    Searches for a flip path carrying the stacked image coordinates back
    down to the stacked probe coordinates, then closes up with the edge
    renaming that identifies the flipped triangulation with ``tri``
    again (unique because boundary edge ids never move).  The composite
    transports w(gamma) to w(phi(gamma)) for every curve and arc, not
    just the probes, provided the probe family fills the surface.
    """
    stacked0 = tuple(t for p in probes for t in p)
    stacked = tuple(t for im in images for t in im)
    target = sum(stacked0)
    n = len(probes)
    m = tri.edge_count

    def split(v):
        return [v[i * m:(i + 1) * m] for i in range(n)]

    def goal(cur, v):
        if sum(v) != target:
            return None
        perm = derive_relabel_to(cur, tri)
        if perm is None:
            return None
        step = RelabelStep(perm)
        if all(step.apply(part) == probes[i] for i, part in enumerate(split(v))):
            return step
        return None

    counter = 0
    heap = [(sum(stacked), 0, tri, stacked, ())]
    seen = {(_canonical_key(tri), stacked)}
    explored = 0
    while heap and explored < cap:
        total, _c, cur, v, path = heapq.heappop(heap)
        explored += 1
        step = goal(cur, v)
        if step is not None:
            # path + step maps w(phi(gamma)) back to w(gamma); invert it
            back = Encoding(path + (step,))
            return back.inverted()
        for e in range(cur.edge_count):
            if cur.is_boundary_edge(e):
                continue
            try:
                nt, fs = flip(cur, e)
            except TriangulationError:
                continue
            try:
                nv = []
                for i in range(n):
                    nv.extend(fs.apply(v[i * m:(i + 1) * m]))
            except ComputationError:
                continue
            nv = tuple(nv)
            if sum(nv) > total:
                continue
            key = (_canonical_key(nt), nv)
            if key in seen:
                continue
            seen.add(key)
            counter += 1
            heapq.heappush(heap, (sum(nv), counter, nt, nv, path + (fs,)))
    raise ComputationError(
        "could not reconstruct a mapping class from the probe images "
        "(search budget exhausted)"
    )


def boundary_twist_encoding(tri: Triangulation, label: str,
                            power: int = 1) -> Encoding:
    """Replay script for the ``power``-th power of the positive Dehn
    twist along the curve parallel to boundary component ``label``.

    Such curves have no annular flip position (every vertex sits on the
    collar side), so the script is derived instead from the twist's
    action on a probe family of boundary-based arcs: each arc is dragged
    once around the collar and the unique mapping class with those
    images is reconstructed."""
    if power == 0:
        return Encoding([])
    cache = tri._cache.setdefault("boundary_twist_encodings", {})
    if label not in cache:
        core = None
        # a too-small probe family may fail to fill the surface and admit
        # several mapping classes with the same images; grow it until the
        # reconstruction also predicts the next larger family correctly
        for bound in (8, 10, 12, 14, 16):
            probes = []
            for lab in sorted(tri.base_edge_of):
                probes.extend(_curves.enumerate_arcs(tri, lab, bound))
            if not probes:
                raise CurveError("no probe arcs on %r" % (label,))
            check = []
            for lab in sorted(tri.base_edge_of):
                check.extend(_curves.enumerate_arcs(tri, lab, bound + 2))
            images = {
                g: _curves.boundary_drag(
                    g, label, POSITIVE_DRAG_DIRECTION
                ).coords.weights
                for g in check
            }
            core = encoding_from_probe_images(
                tri,
                [g.coords.weights for g in probes],
                [images[g] for g in probes],
            )
            if all(core.forward(g.coords.weights) == images[g] for g in check):
                break
            core = None
        if core is None:
            raise ComputationError(
                "boundary twist reconstruction kept disagreeing with the "
                "collar drag on held-out arcs"
            )
        cache[label] = core
    core = cache[label]
    if power < 0:
        core = core.inverted()
    steps = []
    for _ in range(abs(power)):
        steps.extend(core.steps)
    return Encoding(steps)


def puncture_order(tri: Triangulation):
    """Puncture vertex ids in the order the punctures were created, which
    is the order the braid generators index them."""
    corners = tri._cache.get("puncture_corner_order")
    if corners is None:
        raise TriangulationError(
            "triangulation carries no puncture ordering (build it with "
            "standard_triangulation)"
        )
    voc = tri.vertex_of_corner
    return [voc[c] for c in corners]


def pair_curve_weights(tri: Triangulation, i: int):
    """Canonical coordinates of the curve enclosing punctures i and i+1
    (1-based): the link of the chain edge joining them, i.e. every other
    edge is weighted by how many of its endpoints lie on the pair."""
    chain = tri._cache.get("puncture_chain_edges")
    if chain is None or not 1 <= i <= len(chain):
        raise TriangulationError("no adjacent puncture pair %d" % i)
    f = chain[i - 1]
    vids = set(puncture_order(tri)[i - 1:i + 1])
    w = [0] * tri.edge_count
    for e in range(tri.edge_count):
        if e == f:
            continue
        tail, head = tri.edge_endpoints(e)
        w[e] = (tail in vids) + (head in vids)
    return tuple(w)


def half_twist_encoding(tri: Triangulation, i: int, power: int = 1) -> Encoding:
    """Replay script for the ``power``-th power of the positive half
    twist swapping punctures i and i+1 (the braid generator sigma_i).

    The script is found by a breadth-first search over flips supported
    near the pair, accepting the mapping class whose square is the
    positive Dehn twist along the curve enclosing the two punctures:
    that equation has a unique solution, because the half twist
    generates the mapping class group of the twice-punctured disc around
    the pair and the complementary piece is torsion-free."""
    if power == 0:
        return Encoding([])
    cache = tri._cache.setdefault("half_twist_encodings", {})
    if i not in cache:
        cache[i] = _derive_half_twist(tri, i)
    core = cache[i]
    if power < 0:
        core = core.inverted()
    steps = []
    for _ in range(abs(power)):
        steps.extend(core.steps)
    return Encoding(steps)


def _derive_half_twist(tri: Triangulation, i: int, cap: int = 50000) -> Encoding:
    from collections import deque

    cw = pair_curve_weights(tri, i)
    twist = twist_encoding(tri, cw)
    chain_edge = tri._cache["puncture_chain_edges"][i - 1]
    probes = []
    for lab in sorted(tri.base_edge_of):
        probes.extend(_curves.enumerate_arcs(tri, lab, 8))
    pw = [g.coords.weights for g in probes]
    timgs = [twist.forward(w) for w in pw]

    def is_half_twist(enc):
        if enc.forward(cw) != cw:
            return False
        return all(
            enc.forward(enc.forward(w)) == tw for w, tw in zip(pw, timgs)
        )

    stack0 = cw + tuple(t for w in pw for t in w)
    queue = deque([(tri, stack0, (), frozenset((chain_edge,)))])
    seen = {(_canonical_key(tri), stack0)}
    explored = 0
    while queue and explored < cap:
        cur, stack, path, support = queue.popleft()
        explored += 1
        if path:
            perm = derive_relabel_to(cur, tri)
            if perm is not None:
                cand = Encoding(path + (RelabelStep(perm),))
                for enc in (cand, cand.inverted()):
                    if is_half_twist(enc):
                        return enc
        n = tri.edge_count
        for e in range(n):
            # the half twist is supported in a disc around the pair, so
            # only flip edges crossing the pair curve, the chain edge,
            # or edges already moved on this path
            if stack[e] == 0 and e not in support:
                continue
            if cur.is_boundary_edge(e):
                continue
            try:
                nt, fs = flip(cur, e)
            except TriangulationError:
                continue
            try:
                ns = []
                for j in range(0, len(stack), n):
                    ns.extend(fs.apply(stack[j:j + n]))
            except ComputationError:
                continue
            ns = tuple(ns)
            key = (_canonical_key(nt), ns)
            if key in seen:
                continue
            seen.add(key)
            queue.append((nt, ns, path + (fs,), support | {e}))
    raise ComputationError(
        "could not find the half twist swapping punctures %d and %d" % (i, i + 1)
    )


def twist_encoding(tri: Triangulation, curve_weights, power: int = 1) -> Encoding:
    """Replay script for the ``power``-th power of the positive Dehn
    twist along the closed curve with the given weights.

    Twists along curves bounding a once-punctured disc are isotopically
    trivial on a surface with marked points and yield an empty script.
    """
    w = tuple(curve_weights)
    coords = _curves.NormalCoordinates(tri, w)
    if not _curves.is_matching(coords):
        raise CurveError("curve weights violate the matching conditions")
    if _curves.is_puncture_parallel(coords):
        return Encoding([])
    if power == 0:
        return Encoding([])
    if len(tri.base_edge_of) == 1:
        # with a single boundary component and no punctures every vertex
        # lies on the collar side of the boundary-parallel curve, which
        # then has no annular flip position; the collar-drag route works
        # in all single-boundary cases, so use it uniformly
        (lab,) = tri.base_edge_of
        if w == _curves.boundary_parallel_curve(tri, lab).weights:
            return boundary_twist_encoding(tri, lab, power)
    cache = tri._cache.setdefault("twist_encodings", {})
    if w in cache:
        core, conj = cache[w]
    else:
        comps = _curves.trace_components(coords)
        if len(comps) != 1 or comps[0]["type"] != "closed":
            raise CurveError("twist curves must be single closed curves")
        conj, short_tri, short_w = shorten_curve(tri, w)
        core = _core_twist(short_tri, short_w)
        full = Encoding(
            list(conj.steps) + list(core.steps) + list(conj.inverted().steps)
        )
        if _twist_handedness(tri, full) < 0:
            core = core.inverted()
        cache[w] = (core, conj)
    if power < 0:
        core = core.inverted()
    steps = list(conj.steps)
    for _ in range(abs(power)):
        steps.extend(core.steps)
    steps.extend(conj.inverted().steps)
    return Encoding(steps)
