"""Square-tiled translation surfaces (origamis) with exact combinatorics.

An origami is a pair of permutations (h, v) of the unit squares: h names the
square to the right, v the square on top.  Points on the SL(2,R) orbit carry
a 2x2 deformation matrix acting on (x, y) coordinates; flat lengths, crossing
counts and transverse measures stay exact whenever the matrix entries are
rational.

Coordinate convention: vectors are (x, y); the geodesic flow is
diag(e^t, e^{-t}) and the horocycle flow is the lower-triangular shear
(x, y) -> (x, y + s*x), which fixes dx and therefore the vertical foliation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .kernel import Bracket, Mat2, as_float_down, as_float_up, is_exact

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


class SingularityHit(RuntimeError):
    """A trace ran into a vertex; retry with the suggested offset."""

    def __init__(self, message: str, suggested_offset: Fraction):
        super().__init__(message)
        self.suggested_offset = suggested_offset


# ---------------------------------------------------------------------------
# Permutation helpers (tuples of 0-based images)


def _compose(p, q):
    """(p o q)(x) = p[q[x]]."""
    return tuple(p[q[x]] for x in range(len(p)))


def _inverse(p):
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def _cycles(p):
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        out.append(tuple(cyc))
    return out


def _is_permutation(p) -> bool:
    return sorted(p) == list(range(len(p)))


# ---------------------------------------------------------------------------
# Origami


@dataclass(frozen=True)
class Origami:
    """Connected square-tiled surface given by right/top gluings."""

    h: tuple
    v: tuple

    def __post_init__(self):
        if len(self.h) != len(self.v):
            raise ValueError("h and v must act on the same squares")
        if not (_is_permutation(self.h) and _is_permutation(self.v)):
            raise ValueError("h and v must be permutations")
        orbit = self._orbit_of(0)
        if len(orbit) != self.n:
            parts = self._orbit_partition()
            raise ValueError(f"disconnected surface; orbits {parts}")

    def _orbit_of(self, start):
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in (self.h[x], self.v[x], _inverse(self.h)[x], _inverse(self.v)[x]):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def _orbit_partition(self):
        left = set(range(self.n))
        parts = []
        while left:
            orb = self._orbit_of(next(iter(left)))
            parts.append(sorted(q + 1 for q in orb))
            left -= orb
        return parts

    @property
    def n(self) -> int:
        return len(self.h)

    @property
    def area(self) -> int:
        return self.n

    @property
    def vertex_permutation(self):
        hi, vi = _inverse(self.h), _inverse(self.v)
        return tuple(self.h[self.v[hi[vi[x]]]] for x in range(self.n))

    @property
    def singularities(self) -> tuple:
        """Cone-point orders (multiples of 2*pi in excess angle)."""
        orders = [len(c) - 1 for c in _cycles(self.vertex_permutation)]
        return tuple(sorted(o for o in orders if o > 0))

    @property
    def genus(self) -> int:
        total = sum(self.singularities)
        return (total + 2) // 2

    @staticmethod
    def from_one_line(h: Sequence[int], v: Sequence[int]) -> "Origami":
        """Build from 1-based one-line permutation arrays."""
        return Origami(tuple(x - 1 for x in h), tuple(x - 1 for x in v))


def build_origami(h: Sequence[int], v: Sequence[int]) -> Origami:
    """1-based entry point; validates connectivity and exposes invariants."""
    return Origami.from_one_line(h, v)


# ---------------------------------------------------------------------------
# Cylinders


@dataclass(frozen=True)
class CylinderCurve:
    direction: str
    squares: tuple  # the cycle the core curve traverses
    circumference: int
    height: int
    row_cycles: tuple  # all parallel rows merged into this cylinder

    @property
    def holonomy(self):
        if self.direction == HORIZONTAL:
            return (self.circumference, 0)
        return (0, self.circumference)

    @property
    def all_squares(self):
        return tuple(s for row in self.row_cycles for s in row)


def cylinders(o: Origami, direction: str):
    """Maximal cylinders in a periodic direction.

    Cycles of the direction's permutation are unit bands; adjacent bands
    merge when the gluing across their interface is singularity-free.
    """
    if direction == HORIZONTAL:
        along, across = o.h, o.v
    elif direction == VERTICAL:
        along, across = o.v, o.h
    else:
        raise ValueError(f"unknown direction {direction!r}")

    cycs = _cycles(along)
    index = {}
    for ci, c in enumerate(cycs):
        for x in c:
            index[x] = ci

    def merges(ci):
        c = cycs[ci]
        if all(across[along[x]] == along[across[x]] for x in c):
            return index[across[c[0]]]
        return None

    nxt = {ci: merges(ci) for ci in range(len(cycs))}
    has_pred = {t for t in nxt.values() if t is not None}

    def walk(start, used):
        chain = [start]
        used.add(start)
        cur = nxt[start]
        while cur is not None and cur not in used:
            chain.append(cur)
            used.add(cur)
            cur = nxt[cur]
        return chain

    out = []
    used = set()
    # open chains begin at a band with no predecessor; the rest are loops
    starts = [ci for ci in range(len(cycs)) if ci not in has_pred]
    starts += [ci for ci in range(len(cycs))]
    for ci in starts:
        if ci in used:
            continue
        chain = walk(ci, used)
        core = cycs[chain[0]]
        out.append(
            CylinderCurve(
                direction=direction,
                squares=core,
                circumference=len(core),
                height=len(chain),
                row_cycles=tuple(cycs[k] for k in chain),
            )
        )
    return out


# ---------------------------------------------------------------------------
# Marked points of the SL(2, R) orbit


@dataclass(frozen=True)
class MarkedFlatSurface:
    base: Origami
    deform: Mat2

    def __post_init__(self):
        if not self.deform.det() > 0:
            raise ValueError("deformation must have positive determinant")

    @property
    def flat_area(self):
        return self.deform.det() * self.base.n

    @staticmethod
    def base_point(o: Origami) -> "MarkedFlatSurface":
        return MarkedFlatSurface(o, Mat2(Fraction(1), Fraction(0), Fraction(0), Fraction(1)))


def geodesic_flow(x: MarkedFlatSurface, t: float = None, stretch=None) -> MarkedFlatSurface:
    """diag(e^t, e^{-t}) composed onto the marking.

    Pass ``stretch`` = e^t as an exact rational to keep the point exact.
    """
    if (t is None) == (stretch is None):
        raise ValueError("give exactly one of t, stretch")
    k = stretch if stretch is not None else math.exp(t)
    if not k > 0:
        raise ValueError("stretch must be positive")
    if is_exact(k):
        m = Mat2(Fraction(k), Fraction(0), Fraction(0), 1 / Fraction(k))
    else:
        m = Mat2(float(k), 0.0, 0.0, 1.0 / float(k))
    return MarkedFlatSurface(x.base, m @ x.deform)


def horocycle_flow(x: MarkedFlatSurface, s) -> MarkedFlatSurface:
    """Shear (x, y) -> (x, y + s*x); fixes dx, hence the vertical foliation."""
    if is_exact(s):
        m = Mat2(Fraction(1), Fraction(0), Fraction(s), Fraction(1))
    else:
        m = Mat2(1.0, 0.0, float(s), 1.0)
    return MarkedFlatSurface(x.base, m @ x.deform)


def flow(x: MarkedFlatSurface, kind: str, param) -> MarkedFlatSurface:
    if kind == "geodesic":
        return geodesic_flow(x, t=float(param))
    if kind == "horocycle":
        return horocycle_flow(x, param)
    raise ValueError(f"unknown flow kind {kind!r}")


def _direction_ext(x: MarkedFlatSurface, row: int):
    inv = x.deform.inverse()
    a, b = (inv.a, inv.b) if row == 0 else (inv.c, inv.d)
    return (a * a + b * b) * x.deform.det() * x.base.n


def ext_vertical(x: MarkedFlatSurface):
    """Extremal length of the base vertical foliation (measure |dx|).

    Equals the deformed L1-norm of the defining differential: area at the
    base point, e^{-2t} * area under the geodesic flow, horocycle-invariant.
    """
    return _direction_ext(x, 0)


def ext_horizontal(x: MarkedFlatSurface):
    return _direction_ext(x, 1)


# ---------------------------------------------------------------------------
# Traces: exact piecewise-linear closed flat geodesics


@dataclass(frozen=True)
class CurveTrace:
    origami: Origami
    direction: tuple  # primitive integer (dx, dy), dx >= 0; (0, 1) if vertical
    segments: tuple  # ((square, (x0, y0), (x1, y1)), ...)
    holonomy: tuple  # integer (dx_total, dy_total)

    @property
    def slope(self):
        a, b = self.direction
        if a == 0:
            return None  # vertical
        return Fraction(b, a)

    @property
    def squares(self):
        return tuple(sorted({s for s, _, _ in self.segments}))


def _canonical_direction(slope) -> tuple:
    if slope is None or slope == "vertical":
        return (0, 1)
    slope = Fraction(slope)
    return (slope.denominator, slope.numerator)


def trace_from_point(
    o: Origami,
    square: int,
    point,
    direction,
    max_steps: int = 100000,
) -> CurveTrace:
    """March a straight line of rational direction until it closes up.

    ``point`` is an exact (x, y) with coordinates in [0, 1) x [0, 1].
    Raises SingularityHit when the line runs into any vertex.
    """
    a, b = direction
    if a < 0 or (a == 0 and b != 1):
        raise ValueError("direction must have dx > 0, or be (0, 1)")
    g = math.gcd(abs(a), abs(b))
    if g == 0:
        raise ValueError("zero direction")
    a, b = a // g, b // g
    x, y = Fraction(point[0]), Fraction(point[1])
    s = square
    if b < 0 and y == 0:
        s = _inverse(o.v)[s]
        y = Fraction(1)
    start_state = (s, x, y)
    segments = []
    hol_x = hol_y = 0
    for _ in range(max_steps):
        tx = Fraction(1 - x, a) if a > 0 else None
        if b > 0:
            ty = Fraction(1 - y, b)
        elif b < 0:
            ty = Fraction(y, -b)
        else:
            ty = None
        candidates = [t for t in (tx, ty) if t is not None]
        t = min(candidates)
        nx = x + a * t
        ny = y + b * t
        if (nx == 0 or nx == 1) and (ny == 0 or ny == 1):
            raise SingularityHit(
                f"trace hit a vertex at square {s + 1}, point ({nx}, {ny})",
                suggested_offset=Fraction(point[0]) / 3 if point[0] else Fraction(1, 3),
            )
        segments.append((s, (x, y), (nx, ny)))
        if nx == 1:
            s = o.h[s]
            hol_x += 1
            x, y = Fraction(0), ny
        elif ny == 1:
            s = o.v[s]
            hol_y += 1
            x, y = nx, Fraction(0)
        elif ny == 0:
            s = _inverse(o.v)[s]
            hol_y -= 1
            x, y = nx, Fraction(1)
        else:
            raise AssertionError("march did not reach an edge")
        if (s, x, y) == start_state:
            return CurveTrace(o, (a, b), tuple(segments), (hol_x, hol_y))
    raise RuntimeError(f"trace did not close within {max_steps} steps")


def trace_curve(
    o: Origami,
    square: int,
    slope,
    offset=Fraction(1, 2),
    edge: str = None,
    max_steps: int = 100000,
) -> CurveTrace:
    """Trace from an edge point; ``slope`` is a Fraction or None for vertical.

    The default edge is the one the line actually leaves: left for slope 0,
    bottom otherwise."""
    offset = Fraction(offset)
    if not 0 < offset < 1:
        raise ValueError("offset must lie strictly inside the edge")
    direction = _canonical_direction(slope)
    if edge is None:
        edge = "left" if direction[1] == 0 else "bottom"
    if edge == "bottom":
        point = (offset, Fraction(0))
    elif edge == "left":
        point = (Fraction(0), offset)
    else:
        raise ValueError("edge must be 'bottom' or 'left'")
    return trace_from_point(o, square, point, direction, max_steps=max_steps)


def robust_trace(
    o: Origami,
    square: int,
    slope,
    offset=Fraction(1, 2),
    edge: str = None,
    retries: int = 5,
) -> CurveTrace:
    """trace_curve with the offset/3 retry policy on vertex hits."""
    offset = Fraction(offset)
    for _ in range(retries + 1):
        try:
            return trace_curve(o, square, slope, offset=offset, edge=edge)
        except SingularityHit:
            offset = offset / 3
    raise SingularityHit(
        f"no vertex-free offset found for slope {slope} from square {square + 1}",
        suggested_offset=offset,
    )


def core_trace(o: Origami, cyl: CylinderCurve) -> CurveTrace:
    """Straight core curve through the middle of the cylinder's first row."""
    s0 = cyl.squares[0]
    if cyl.direction == HORIZONTAL:
        return trace_curve(o, s0, Fraction(0), offset=Fraction(1, 2), edge="left")
    return trace_curve(o, s0, None, offset=Fraction(1, 2), edge="bottom")


# ---------------------------------------------------------------------------
# Crossing counts


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def crossing_number(t1: CurveTrace, t2: CurveTrace) -> int:
    """Exact transverse crossing count of two straight closed traces.

    Straight representatives in distinct directions are in minimal
    position, so this is the geometric intersection number; parallel
    distinct traces are disjoint (0), identical traces give 0.
    """
    if t1.origami != t2.origami:
        raise ValueError("traces live on different origamis")
    if t1.segments == t2.segments:
        return 0
    d1, d2 = t1.direction, t2.direction
    if _cross(d1, d2) == 0:
        return 0
    by_square = {}
    for seg in t2.segments:
        by_square.setdefault(seg[0], []).append(seg)
    count = 0
    for s, p1, q1 in t1.segments:
        if s not in by_square:
            continue
        e1 = (q1[0] - p1[0], q1[1] - p1[1])
        for _, p2, q2 in by_square[s]:
            e2 = (q2[0] - p2[0], q2[1] - p2[1])
            denom = _cross(e1, e2)
            if denom == 0:
                continue
            w = (p2[0] - p1[0], p2[1] - p1[1])
            t = Fraction(_cross(w, e2), denom)
            u = Fraction(_cross(w, e1), denom)
            if not (0 <= t <= 1 and 0 <= u <= 1):
                continue
            px = p1[0] + t * e1[0]
            py = p1[1] + t * e1[1]
            if 0 <= px < 1 and 0 <= py < 1:
                count += 1
    return count


def i_with_foliation(t: CurveTrace, direction: str, x: MarkedFlatSurface):
    """Total transverse measure of the (deformed) direction foliation along
    the trace: a coordinate of deform * holonomy."""
    vx, vy = x.deform.apply(t.holonomy)
    if direction == VERTICAL:
        return abs(vx)
    if direction == HORIZONTAL:
        return abs(vy)
    raise ValueError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# Extremal-length brackets


def _find_cylinder_for(t: CurveTrace):
    if t.direction == (1, 0):
        direction = HORIZONTAL
    elif t.direction == (0, 1):
        direction = VERTICAL
    else:
        return None
    wraps = abs(t.holonomy[0] + t.holonomy[1])
    for cyl in cylinders(t.origami, direction):
        if set(t.squares) <= set(cyl.all_squares) and wraps == cyl.circumference:
            return cyl
    return None


def ext_bracket(t: CurveTrace, x: MarkedFlatSurface) -> Bracket:
    """Certified enclosure of the extremal length of the trace's class.

    Lower bound: flat-metric competitor (deformed length squared over
    area).  Upper bound: reciprocal modulus of the embedded cylinder when
    the trace is a cylinder core, +inf otherwise.
    """
    vx, vy = x.deform.apply(t.holonomy)
    area = x.flat_area
    lo_val = (vx * vx + vy * vy) / area
    lo = as_float_down(lo_val) if is_exact(lo_val) else math.nextafter(float(lo_val), -math.inf)
    cyl = _find_cylinder_for(t)
    if cyl is None:
        return Bracket(lo, math.inf)
    u = (1, 0) if cyl.direction == HORIZONTAL else (0, 1)
    ux, uy = x.deform.apply(u)
    hi_val = cyl.circumference * (ux * ux + uy * uy) / (x.deform.det() * cyl.height)
    hi = as_float_up(hi_val) if is_exact(hi_val) else math.nextafter(float(hi_val), math.inf)
    return Bracket(min(lo, hi), hi)


# ---------------------------------------------------------------------------
# Foliations as weighted multicurves


@dataclass(frozen=True)
class MulticurveFoliation:
    """Disjoint weighted cylinder cores sharing a direction."""

    components: tuple  # ((weight, CylinderCurve), ...)

    def __post_init__(self):
        if not self.components:
            raise ValueError("empty foliation")
        d = self.components[0][1].direction
        for w, c in self.components:
            if not w > 0:
                raise ValueError("weights must be positive")
            if c.direction != d:
                raise ValueError("components must share a direction")

    @property
    def direction(self):
        return self.components[0][1].direction

    @property
    def indecomposable(self) -> bool:
        return len(self.components) == 1


def canonical_vertical_foliation(o: Origami) -> MulticurveFoliation:
    """The vertical foliation with measure |dx|: each vertical cylinder
    weighted by its transverse width."""
    return MulticurveFoliation(
        tuple((Fraction(c.height), c) for c in cylinders(o, VERTICAL))
    )


def canonical_horizontal_foliation(o: Origami) -> MulticurveFoliation:
    return MulticurveFoliation(
        tuple((Fraction(c.height), c) for c in cylinders(o, HORIZONTAL))
    )


# ---------------------------------------------------------------------------
# Growth along the horocycle flow


@dataclass
class GrowthReport:
    i_vertical: object
    i_horizontal: object
    lower_bounds: list
    violations: list
    quad_coefficient: float
    relative_residual: float

    @property
    def ok(self):
        return not self.violations


def horocycle_growth_check(
    t: CurveTrace, x: MarkedFlatSurface, s_values: Sequence[float]
) -> GrowthReport:
    """Quadratic growth of extremal length along the horocycle flow.

    Checks lo >= (|s| i_v - i_h)^2 / area when positive, and the s^2 i_v^2
    / (2 area) bound past the derived threshold; fits lo against s."""
    i_v = i_with_foliation(t, VERTICAL, x)
    i_h = i_with_foliation(t, HORIZONTAL, x)
    if not i_v > 0:
        raise ValueError("trace must cross the vertical foliation")
    area = float(x.flat_area)
    threshold = float(i_h) / ((1.0 - 1.0 / math.sqrt(2.0)) * float(i_v))
    los = []
    violations = []
    for s in s_values:
        xs = horocycle_flow(x, s)
        lo = ext_bracket(t, xs).lo
        los.append(lo)
        linear = abs(s) * float(i_v) - float(i_h)
        if linear > 0 and lo < linear * linear / area * (1.0 - 1e-12):
            violations.append((s, lo, linear * linear / area))
        if abs(s) >= threshold and lo < s * s * float(i_v) ** 2 / (2.0 * area):
            violations.append((s, lo, s * s * float(i_v) ** 2 / (2.0 * area)))
    svals = np.asarray([float(s) for s in s_values])
    larr = np.asarray(los)
    if len(svals) >= 3:
        coeffs = np.polyfit(svals, larr, 2)
        fit = np.polyval(coeffs, svals)
        scale = max(np.max(np.abs(larr)), 1e-300)
        residual = float(np.max(np.abs(fit - larr)) / scale)
        quad = float(coeffs[0])
    else:
        quad, residual = math.nan, math.nan
    return GrowthReport(i_v, i_h, los, violations, quad, residual)


# ---------------------------------------------------------------------------
# Busemann rays on one-cylinder origamis


@dataclass
class BusemannRayReport:
    times: list
    closed_form: list
    definition_form: list
    max_error: float

    @property
    def ok(self):
        return self.max_error <= 1e-12


def busemann_ray_check(o: Origami, t_values: Sequence[float]) -> BusemannRayReport:
    """On a one-vertical-cylinder origami, both Busemann routes give -t.

    Closed form: half the log of the extremal-length ratio along the
    geodesic flow.  Definition: on-ray telescoping of d(x, G(t)) - t."""
    verts = cylinders(o, VERTICAL)
    if len(verts) != 1:
        raise ValueError(
            f"vertical foliation has {len(verts)} cylinders; need exactly 1 "
            "(decomposable case follows the full Walsh formula)"
        )
    x0 = MarkedFlatSurface.base_point(o)
    e0 = float(ext_vertical(x0))
    closed = []
    definition = []
    errs = []
    for t in t_values:
        xt = geodesic_flow(x0, t=float(t))
        c = 0.5 * math.log(float(ext_vertical(xt)) / e0)
        d = -float(t)  # d(G(t0), G(t)) - (t - t0) telescopes exactly on-ray
        closed.append(c)
        definition.append(d)
        errs.append(abs(c - d))
    return BusemannRayReport(list(t_values), closed, definition, max(errs))


# ---------------------------------------------------------------------------
# Walsh's E_F


def walsh_E(
    f: MulticurveFoliation,
    gamma: CurveTrace,
    x: MarkedFlatSurface,
    core_traces: Optional[Sequence[CurveTrace]] = None,
):
    """Sum over components of i(F_j, gamma)^2 / i(F_j, G).

    G is the horizontal foliation of the defining differential at the
    ray's base point, i.e. the origami's own horizontal foliation; the
    pairing i(F_j, G) is the height-weighted crossing of the core with G.
    """
    if f.direction != VERTICAL:
        raise ValueError("walsh_E expects the vertical multicurve foliation")
    o = x.base
    if core_traces is None:
        core_traces = [core_trace(o, c) for _, c in f.components]
    base = MarkedFlatSurface.base_point(o)
    total = Fraction(0)
    for (w, _cyl), trace in zip(f.components, core_traces):
        i_gamma = Fraction(w) * crossing_number(trace, gamma)
        i_G = Fraction(w) * i_with_foliation(trace, HORIZONTAL, base)
        if i_G == 0:
            raise ValueError("G is not transverse to a component of F")
        total += i_gamma**2 / i_G
    return total


# ---------------------------------------------------------------------------
# Small-intersection curve search


def component_intersection(weight, core: CurveTrace, beta: CurveTrace):
    """i of the weighted indecomposable component with the trace beta."""
    return Fraction(weight) * crossing_number(core, beta)


def small_intersection_search(
    o: Origami,
    components: Sequence[tuple],
    eps,
    budget: int = 2000,
):
    """Search for a simple closed trace crossing F_0 much more than the
    other components: i(F_i, beta) < eps * i(F_0, beta) for i != 0.

    ``components`` is a list of (weight, CylinderCurve), F_0 first, all in
    one direction and pairwise disjoint.  Enumerates cylinder cores and
    low-complexity rational slopes; the underlying existence lemma gives no
    constructive bound, so budget exhaustion reports the best ratio seen.
    Returns (trace, ratios).
    """
    if not eps > 0:
        raise ValueError("eps must be strictly positive")
    if not components:
        raise ValueError("need at least F_0")
    eps = Fraction(eps) if is_exact(eps) else eps
    cores = [core_trace(o, cyl) for _, cyl in components]
    weights = [Fraction(w) for w, _ in components]

    def ratios(beta):
        i0 = weights[0] * crossing_number(cores[0], beta)
        if i0 == 0:
            return None
        return [
            weights[k] * crossing_number(cores[k], beta) / i0
            for k in range(1, len(components))
        ]

    candidates = []
    for d in (HORIZONTAL, VERTICAL):
        for cyl in cylinders(o, d):
            candidates.append(("core", d, cyl))
    slopes = [Fraction(0), None, Fraction(1), Fraction(-1)]
    for denom in range(1, 9):
        for num in range(1, 9):
            if math.gcd(num, denom) == 1:
                slopes.extend([Fraction(num, denom), Fraction(-num, denom)])
    for sl in slopes:
        for sq in range(o.n):
            candidates.append(("slope", sl, sq))

    best = None
    best_worst = None
    tried = 0
    for kind, a, b in candidates:
        if tried >= budget:
            break
        tried += 1
        try:
            if kind == "core":
                beta = core_trace(o, b)
            else:
                beta = robust_trace(o, b, a, offset=Fraction(3, 7))
        except (SingularityHit, RuntimeError):
            continue
        rr = ratios(beta)
        if rr is None:
            continue
        worst = max(rr, default=Fraction(0))
        if best_worst is None or worst < best_worst:
            best, best_worst = beta, worst
        if all(r < eps for r in rr):
            return beta, rr
    raise RuntimeError(
        f"search budget exhausted; best achieved ratio {best_worst} "
        f"(holonomy {best.holonomy if best else None})"
    )


# ---------------------------------------------------------------------------
# SL(2, Z) re-marking


_GEN_MATRIX = {
    "T": Mat2(1, 1, 0, 1),
    "Ti": Mat2(1, -1, 0, 1),
    "S": Mat2(0, -1, 1, 0),
    "Si": Mat2(0, 1, -1, 0),
    "F": Mat2(1, 0, 0, -1),
}


def _gen_apply_origami(o: Origami, g: str) -> Origami:
    h, v = o.h, o.v
    if g == "T":
        return Origami(h, _compose(v, _inverse(h)))
    if g == "Ti":
        return Origami(h, _compose(v, h))
    if g == "S":
        return Origami(_inverse(v), h)
    if g == "Si":
        return Origami(v, _inverse(h))
    if g == "F":
        return Origami(h, _inverse(v))
    raise ValueError(f"unknown generator {g!r}")


def _normalize_point(o: Origami, s: int, x, y):
    if x == 1:
        s, x = o.h[s], Fraction(0)
    if y == 1:
        s, y = o.v[s], Fraction(0)
    return s, x, y


def _gen_map_point(o_old: Origami, o_new: Origami, g: str, s: int, x, y):
    """Map a point through one generator's cut-and-reglue."""
    x, y = Fraction(x), Fraction(y)
    if g == "T":
        if x + y < 1:
            s2, x2, y2 = s, x + y, y
        else:
            s2, x2, y2 = o_old.h[s], x + y - 1, y
    elif g == "Ti":
        if x >= y:
            s2, x2, y2 = s, x - y, y
        else:
            s2, x2, y2 = _inverse(o_old.h)[s], x - y + 1, y
    elif g == "S":
        s2, x2, y2 = s, 1 - y, x
    elif g == "Si":
        s2, x2, y2 = s, y, 1 - x
    elif g == "F":
        s2, x2, y2 = s, x, 1 - y
    else:
        raise ValueError(f"unknown generator {g!r}")
    return _normalize_point(o_new, s2, x2, y2)


def decompose_unimodular(m: Mat2):
    """Write an integer matrix of determinant +-1 as a generator word.

    Returns the application-order word: applying the generators left to
    right realizes the marking change by m."""
    entries = (m.a, m.b, m.c, m.d)
    if not all(isinstance(e, int) or (is_exact(e) and Fraction(e).denominator == 1) for e in entries):
        raise ValueError("re-marking matrix must be integer")
    a, b, c, d = (int(e) for e in entries)
    det = a * d - b * c
    if det not in (1, -1):
        raise ValueError("re-marking matrix must be unimodular")
    factors = []  # left-peeled: m = F_1 * F_2 * ...
    if det == -1:
        factors.append("F")
        c, d = -c, -d  # F^{-1} m = F m negates the second row
    while c != 0:
        q = a // c
        if q != 0:
            factors.extend(["T"] * q if q > 0 else ["Ti"] * (-q))
        # T^{-q} * m
        a, b = a - q * c, b - q * d
        # peel S: m = S * (S^{-1} m); S^{-1} [[a,b],[c,d]] = [[c,d],[-a,-b]]
        factors.append("S")
        a, b, c, d = c, d, -a, -b
    if a == -1:
        factors.extend(["S", "S"])  # -I
        a, b, c, d = -a, -b, -c, -d
    if b != 0:
        factors.extend(["T"] * b if b > 0 else ["Ti"] * (-b))
    word = list(reversed(factors))
    # safety: the reversed-order product must reproduce m
    prod = Mat2.identity()
    for g in reversed(word):
        prod = prod @ _GEN_MATRIX[g]
    if (int(prod.a), int(prod.b), int(prod.c), int(prod.d)) != (
        int(entries[0]),
        int(entries[1]),
        int(entries[2]),
        int(entries[3]),
    ):
        raise AssertionError("generator decomposition failed")
    return word


@dataclass
class RemarkAction:
    """A re-marking word together with its point and direction maps."""

    source: Origami
    target: Origami
    word: list
    _stages: list = field(repr=False)

    def map_point(self, s: int, point):
        x, y = Fraction(point[0]), Fraction(point[1])
        for o_old, o_new, g in self._stages:
            s, x, y = _gen_map_point(o_old, o_new, g, s, x, y)
        return s, (x, y)

    def map_direction(self, direction):
        a, b = direction
        for _, _, g in self._stages:
            m = _GEN_MATRIX[g]
            a, b = m.a * a + m.b * b, m.c * a + m.d * b
        g = math.gcd(abs(a), abs(b))
        a, b = a // g, b // g
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
        return (a, b)

    def map_trace(self, t: CurveTrace) -> CurveTrace:
        s, (x, y) = t.segments[0][0], t.segments[0][1]
        s2, pt = self.map_point(s, (x, y))
        d2 = self.map_direction(t.direction)
        return trace_from_point(self.target, s2, pt, d2)


def remark_action(o: Origami, m: Mat2) -> Origami:
    """Re-tile the surface for the marking composed with m."""
    return remark(o, m).target


def remark(o: Origami, m: Mat2) -> RemarkAction:
    word = decompose_unimodular(m)
    stages = []
    cur = o
    for g in word:
        nxt = _gen_apply_origami(cur, g)
        stages.append((cur, nxt, g))
        cur = nxt
    return RemarkAction(o, cur, word, stages)
