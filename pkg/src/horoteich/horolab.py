"""Model-agnostic horoball algebra over a geometry backend.

A backend supplies extremal lengths (exact, float, or Bracket), exact
intersection pairings, and structural queries (proportionality, components)
for one concrete model; the relations between horoballs (tangency, disjoint-
ness, nesting) and the Busemann machinery are implemented here once.

Certification is tri-state throughout: a strict comparison that a bracket
cannot settle yields Undecided instead of a guess.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Protocol, Sequence

from .kernel import Bracket, is_exact
from . import torus as torus_mod
from . import origami as origami_mod
from .kernel import UpperHalfPoint

# HoroRelation tags
DISJOINT_BALLS = "DisjointBalls"
TANGENT = "Tangent"
OVERLAPPING = "Overlapping"
NESTED_FORWARD = "NestedForward"
NESTED_BACKWARD = "NestedBackward"
UNDECIDED = "Undecided"

INCLUDED_CERTIFIED = "IncludedCertified"
EXCLUDED_WITNESS = "ExcludedWitness"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class HoroBall:
    """Sub-level set {Ext(.)(foliation) <= level} in backend terms."""

    foliation: object
    level: object

    def __post_init__(self):
        if not self.level > 0:
            raise ValueError("level must be positive")


@dataclass
class HoroRelation:
    tag: str
    detail: dict = field(default_factory=dict)

    @property
    def decided(self) -> bool:
        return self.tag != UNDECIDED


class GeometryBackend(Protocol):
    def ext(self, point, foliation):
        ...

    def intersect(self, f, g):
        ...

    def scale(self, f, k):
        ...

    def proportionality(self, f, g):
        """k with f projectively equal to k*g, else None."""
        ...

    def subfoliation_coeffs(self, f, g):
        """Coefficients a_i with f = sum a_i * (components of g), else None."""
        ...

    def sup_on_horoball(self, f1, level1, f2):
        """sup of Ext(f2) over HB(f1, level1): a finite bound, inf, or None."""
        ...

    def horosphere_sampler(self, f, level) -> Iterable:
        ...


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("HOROTEICH_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    items = list(items)
    n = _threads()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Torus backend


class TorusBackend:
    """Exact upper half-plane model; points are UpperHalfPoint."""

    def ext(self, point, f):
        return torus_mod.extremal_length(point, f)

    def intersect(self, f, g):
        return torus_mod.foliation_intersection(f, g)

    def scale(self, f, k):
        return torus_mod.WeightedTorusFoliation(f.weight * k, f.curve)

    def proportionality(self, f, g):
        if f.curve == g.curve:
            return Fraction(f.weight) / Fraction(g.weight)
        return None

    def subfoliation_coeffs(self, f, g):
        # indecomposable model: sub-foliation means proportional
        k = self.proportionality(f, g)
        return None if k is None else [k]

    def sup_on_horoball(self, f1, level1, f2):
        k = self.proportionality(f2, f1)
        if k is not None:
            return k * k * level1  # Ext(kF) = k^2 Ext(F), exact on the sphere
        if self.intersect(f1, f2) > 0:
            return math.inf  # horocycle-flow growth is unbounded
        return None

    def horosphere_sampler(self, f, level):
        sigmas = [0.0]
        for k in range(21):
            sigmas.extend([float(2**k), -float(2**k)])
        return [torus_mod.horocycle_point(f, level, s) for s in sigmas]

    def distance(self, x, y):
        return torus_mod.teich_distance(x, y)

    def ray(self, x0, f):
        ray, _, _ = torus_mod.torus_ray(x0, f)
        return ray


# ---------------------------------------------------------------------------
# Origami backend


class OrigamiBackend:
    """Flat-surface model over one origami; points are MarkedFlatSurface,
    foliations are MulticurveFoliation values on that origami."""

    def __init__(self, o: origami_mod.Origami):
        self.origami = o
        self._cores = {}

    def _core(self, cyl) -> origami_mod.CurveTrace:
        if cyl not in self._cores:
            self._cores[cyl] = origami_mod.core_trace(self.origami, cyl)
        return self._cores[cyl]

    def ext(self, point, f) -> Bracket:
        """Bracket for Ext of the weighted multicurve.

        Lower bound: the largest component bound (Ext(F_i) <= Ext(F)).
        Upper bound: sum of weighted reciprocal cylinder moduli (the
        disjoint embedded annuli give a joint competitor)."""
        lo = 0.0
        hi = 0.0
        for w, cyl in f.components:
            b = origami_mod.ext_bracket(self._core(cyl), point).scale(float(w) ** 2)
            lo = max(lo, b.lo)
            hi = hi + b.hi if hi < math.inf and b.hi < math.inf else math.inf
        return Bracket(lo, hi if hi == math.inf else math.nextafter(hi, math.inf))

    def intersect(self, f, g):
        total = Fraction(0)
        for wf, cf in f.components:
            for wg, cg in g.components:
                total += (
                    Fraction(wf)
                    * Fraction(wg)
                    * origami_mod.crossing_number(self._core(cf), self._core(cg))
                )
        return total

    def scale(self, f, k):
        return origami_mod.MulticurveFoliation(
            tuple((w * k, c) for w, c in f.components)
        )

    def proportionality(self, f, g):
        coeffs = self.subfoliation_coeffs(f, g)
        if coeffs is None or any(a == 0 for a in coeffs):
            return None
        k = coeffs[0]
        return k if all(a == k for a in coeffs) else None

    def subfoliation_coeffs(self, f, g):
        by_cyl = {c: Fraction(w) for w, c in g.components}
        if len(by_cyl) != len(g.components):
            return None
        coeffs = {c: Fraction(0) for c in by_cyl}
        for w, c in f.components:
            if c not in by_cyl:
                return None
            coeffs[c] = Fraction(w) / by_cyl[c]
        return [coeffs[c] for _, c in g.components]

    def sup_on_horoball(self, f1, level1, f2):
        coeffs = self.subfoliation_coeffs(f2, f1)
        if coeffs is not None:
            k = len(f1.components)
            return (sum(a * a for a in coeffs)) * k * level1
        if self.intersect(f1, f2) > 0:
            return math.inf
        return None

    def horosphere_sampler(self, f, level):
        """Horocycle-flow orbit points at the ray time where the vertical
        extremal length crosses the level; approximate for generic f."""
        base = origami_mod.MarkedFlatSurface.base_point(self.origami)
        e0 = self.ext(base, f)
        mid = 0.5 * (e0.lo + e0.hi)
        t = 0.5 * math.log(mid / float(level))
        x = origami_mod.geodesic_flow(base, t=t)
        pts = [x]
        for k in range(11):
            pts.append(origami_mod.horocycle_flow(x, float(2**k)))
            pts.append(origami_mod.horocycle_flow(x, -float(2**k)))
        return pts


# ---------------------------------------------------------------------------
# Relations


def _exact_pair(a, b) -> bool:
    return is_exact(a) and is_exact(b)


def classify(h1, h2, backend) -> HoroRelation:
    """Relation between two horoballs.

    With i = i(f1, f2) > 0 the product of levels against i^2 decides
    tangent/disjoint/overlapping.  With i = 0, a Nested tag means the
    second ball's family eventually sits inside the first's (the first
    foliation is a scaled sub-foliation of the second); ties between
    proportional foliations nest by normalized level.
    """
    f1, l1 = h1.foliation, h1.level
    f2, l2 = h2.foliation, h2.level
    i = backend.intersect(f1, f2)
    if i > 0:
        prod = l1 * l2
        isq = i * i
        if _exact_pair(prod, isq):
            prod, isq = Fraction(prod), Fraction(isq)
            if prod == isq:
                return HoroRelation(TANGENT, {"product": prod, "i_squared": isq})
            tag = DISJOINT_BALLS if prod < isq else OVERLAPPING
            return HoroRelation(tag, {"product": prod, "i_squared": isq})
        p, q = float(prod), float(isq)
        if abs(p - q) <= 1e-12 * max(abs(p), abs(q)):
            return HoroRelation(UNDECIDED, {"product": p, "i_squared": q})
        tag = TANGENT if p == q else (DISJOINT_BALLS if p < q else OVERLAPPING)
        return HoroRelation(tag, {"product": p, "i_squared": q})

    k = backend.proportionality(f1, f2)
    if k is not None:
        # same projective class: HB(f2, l2) = {Ext(f1) <= k^2 l2}
        eff2 = k * k * l2
        tag = NESTED_FORWARD if eff2 <= l1 else NESTED_BACKWARD
        return HoroRelation(tag, {"ratio": k, "level1": l1, "level2_in_f1": eff2})
    if backend.subfoliation_coeffs(f1, f2) is not None:
        return HoroRelation(NESTED_FORWARD, {"reason": "f1 is a sub-foliation of f2"})
    if backend.subfoliation_coeffs(f2, f1) is not None:
        return HoroRelation(NESTED_BACKWARD, {"reason": "f2 is a sub-foliation of f1"})
    return HoroRelation(UNDECIDED, {"reason": "disjoint, not comparable"})


def triple_solve(i_ab, i_ag, i_bg):
    """Unique positive levels (r, s, t) with r*s = i_ab^2, r*t = i_ag^2,
    s*t = i_bg^2; exact on rational input."""
    r, s, t = torus_mod.triple_tangency_levels(i_ab, i_ag, i_bg)
    if all(is_exact(v) for v in (i_ab, i_ag, i_bg)):
        assert (r * s, r * t, s * t) == (
            Fraction(i_ab) ** 2,
            Fraction(i_ag) ** 2,
            Fraction(i_bg) ** 2,
        )
    return r, s, t


# ---------------------------------------------------------------------------
# Busemann estimation


@dataclass
class BusemannEstimate:
    value: float
    certified: bool
    trace: list  # (t, D(t)) pairs


def busemann_estimate(x0, f, x, backend, tol: float = 1e-9, slack: float = 1e-9) -> BusemannEstimate:
    """Definition-based Busemann value lim d(x, G(t)) - t.

    Doubles t until two successive values agree within tol; certified
    requires monotone non-increase at every step and the final value to
    respect the -d(x0, x) floor."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    ray = backend.ray(x0, f)
    floor = -backend.distance(x0, x)
    t = 1.0
    prev = backend.distance(x, ray(t)) - t
    trace = [(t, prev)]
    certified = True
    while True:
        t *= 2.0
        cur = backend.distance(x, ray(t)) - t
        trace.append((t, cur))
        if cur > prev + slack or cur < floor - slack:
            certified = False
        if abs(cur - prev) < tol or t > 2.0**34:
            return BusemannEstimate(cur, certified and t <= 2.0**34, trace)
        prev = cur


# ---------------------------------------------------------------------------
# Inclusion probes


@dataclass
class ProbeResult:
    tag: str
    witness: object = None
    bound: object = None
    witness_ext: object = None


def _ext_exceeds(e, level) -> bool:
    """Certified strict exceedance of the level."""
    if isinstance(e, Bracket):
        return e.lo > float(level)
    if _exact_pair(e, level):
        return Fraction(e) > Fraction(level)
    return float(e) > float(level) * (1.0 + 1e-12)


def inclusion_probe(h1, h2, backend, sampler: Optional[Iterable] = None) -> ProbeResult:
    """Is HB(f1, level1) contained in HB(f2, level2)?

    A sample point of HS(f1, level1) with certified Ext(f2) above level2
    excludes; a certified sup bound at or below level2 includes; otherwise
    inconclusive."""
    f1, l1 = h1.foliation, h1.level
    f2, l2 = h2.foliation, h2.level
    bound = backend.sup_on_horoball(f1, l1, f2)
    if bound is not None and bound != math.inf:
        cmp_ok = (
            Fraction(bound) <= Fraction(l2)
            if _exact_pair(bound, l2)
            else float(bound) <= float(l2)
        )
        if cmp_ok:
            return ProbeResult(INCLUDED_CERTIFIED, bound=bound)
    points = list(sampler) if sampler is not None else list(backend.horosphere_sampler(f1, l1))
    exts = _pmap(lambda p: backend.ext(p, f2), points)
    for p, e in zip(points, exts):
        if _ext_exceeds(e, l2):
            return ProbeResult(EXCLUDED_WITNESS, witness=p, witness_ext=e, bound=bound)
    return ProbeResult(INCONCLUSIVE, bound=bound)
