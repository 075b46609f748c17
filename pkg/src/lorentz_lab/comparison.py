"""Flat two-dimensional comparison geometry.

Triangles with timelike-related vertices are planted in the flat model by
their three side separations; curvature bounds are then statements comparing
time separations of on-triangle point pairs against their planted images.
The hyperbolic angle at a vertex solves

    a13^2 = a12^2 + a23^2 + 2*sigma*a12*a23*cosh(omega)

with sigma = +1 when the vertex sits between the other two in the causal
order and sigma = -1 when it is a time endpoint.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .core import EPS, FiniteLorentzSpace, PreconditionError
from .models import tau_minkowski
from . import chains as _chains


class UnrealizableError(ValueError):
    """Side lengths admit no triangle in the flat model."""


# ---------------------------------------------------------------------------
# law of cosines


def _acosh1p(u: float) -> float:
    # arccosh(1 + u) without cancellation for small u
    if u < 0.0:
        if u < -1e-12:
            raise UnrealizableError(f"cosh(omega) - 1 = {u} < 0")
        u = 0.0
    return math.log1p(u + math.sqrt(u * (u + 2.0)))


@dataclass(frozen=True)
class SideTriple:
    """Three positive side separations with the causal configuration of the
    vertices.  ``config`` lists the vertex labels in causal order, e.g.
    "123" for x1 << x2 << x3; the sign at x2 is +1 exactly when x2 is not a
    time endpoint of the triangle."""

    a12: float
    a23: float
    a13: float
    config: str = "123"

    def __post_init__(self):
        if min(self.a12, self.a23, self.a13) <= 0.0:
            raise UnrealizableError("side separations must be positive")
        if self.config == "chain":
            object.__setattr__(self, "config", "123")
        elif self.config == "endpoint":
            # x2 a time endpoint; the long side is the one away from x2
            object.__setattr__(self, "config",
                               "213" if self.a23 >= self.a12 else "132")
        if sorted(self.config) != ["1", "2", "3"]:
            raise PreconditionError(f"bad configuration {self.config!r}")

    @property
    def sigma(self) -> int:
        return 1 if self.config[1] == "2" else -1

    def side(self, i: int, j: int) -> float:
        key = {(1, 2): self.a12, (2, 3): self.a23, (1, 3): self.a13}
        return key[(min(i, j), max(i, j))]

    def ordered(self):
        """Vertex labels bottom-to-top in the causal order, canonicalizing
        time reversal."""
        order = [int(c) for c in self.config]
        if order[0] > order[2]:
            order.reverse()
        return tuple(order)

    def check_size_bounds(self, tol=EPS):
        b, m, t = self.ordered()
        lng, s1, s2 = self.side(b, t), self.side(b, m), self.side(m, t)
        if lng + tol < s1 + s2:
            raise UnrealizableError(
                f"reverse triangle inequality fails: {lng} < {s1} + {s2}")


@dataclass(frozen=True)
class SignedAngle:
    omega: float
    sigma: int

    @property
    def signed(self) -> float:
        return self.sigma * self.omega


def law_of_cosines_side(a12, a23, omega, sigma) -> float:
    """Third side from two sides and the angle between them."""
    if a12 <= 0 or a23 <= 0:
        raise UnrealizableError("side separations must be positive")
    if omega < 0 or sigma not in (-1, 1):
        raise PreconditionError("need omega >= 0 and sigma in {-1, +1}")
    rad = a12 * a12 + a23 * a23 + 2.0 * sigma * a12 * a23 * math.cosh(omega)
    if rad < 0.0:
        if rad < -EPS:
            raise UnrealizableError(f"negative radicand {rad}")
        rad = 0.0
    return math.sqrt(rad)


def solve_angle(sides: SideTriple) -> SignedAngle:
    """Angle at x2.  Unique nonnegative solution of the law of cosines;
    raises when the sides violate the flat-model size bounds."""
    sides.check_size_bounds()
    a, b, c = sides.a12, sides.a23, sides.a13
    if sides.sigma == 1:
        # x2 in the middle: cosh - 1 = (c - (a+b))(c + a + b) / (2ab)
        u = (c - (a + b)) * (c + a + b) / (2.0 * a * b)
    else:
        gap = abs(a - b)
        u = (gap - c) * (gap + c) / (2.0 * a * b)
    return SignedAngle(_acosh1p(u), sides.sigma)


# ---------------------------------------------------------------------------
# planted triangles


@dataclass(frozen=True)
class ComparisonTriangle:
    """Side data realized as coordinates in the flat model.

    Planting convention: the causally lowest vertex at the origin, the long
    side along the positive time axis, the remaining vertex at x >= 0.
    """

    sides: SideTriple
    coords: tuple  # coords[i] is the planted image of vertex i+1

    def vertex(self, label: int):
        return self.coords[label - 1]

    def _side_endpoints(self, i, j):
        order = self.sides.ordered()
        if order.index(i) > order.index(j):
            i, j = j, i
        return self.vertex(i), self.vertex(j)

    def point_on_side(self, i, j, s):
        """Affine point at cumulative separation s from the causally earlier
        endpoint of side ij."""
        a, b = self._side_endpoints(i, j)
        total = self.sides.side(i, j)
        if s < -EPS or s > total + EPS:
            raise PreconditionError(f"parameter {s} outside side of length {total}")
        lam = min(max(s / total, 0.0), 1.0)
        return (a[0] + lam * (b[0] - a[0]), a[1] + lam * (b[1] - a[1]))


def realize_triangle(sides: SideTriple) -> ComparisonTriangle:
    sides.check_size_bounds()
    b, m, t = sides.ordered()
    lng = sides.side(b, t)
    s1 = sides.side(b, m)
    s2 = sides.side(m, t)
    tm = (lng * lng + s1 * s1 - s2 * s2) / (2.0 * lng)
    rad = tm * tm - s1 * s1
    xm = math.sqrt(rad) if rad > 0.0 else 0.0
    coords = [None, None, None]
    coords[b - 1] = (0.0, 0.0)
    coords[t - 1] = (lng, 0.0)
    coords[m - 1] = (tm, xm)
    tri = ComparisonTriangle(sides, tuple(coords))
    for (i, j) in ((1, 2), (2, 3), (1, 3)):
        want = sides.side(i, j)
        a, c = tri._side_endpoints(i, j)
        got = tau_minkowski(a, c)
        if abs(got - want) > 1e-9 * max(1.0, want):
            raise UnrealizableError(
                f"sides do not close up: side {i}{j} reproduces {got}, want {want}")
    return tri


def comparison_point(tri: ComparisonTriangle, side: str, s: float):
    """Comparison point on a planted side, ``side`` given as "12"/"23"/"13"."""
    i, j = int(side[0]), int(side[1])
    return tri.point_on_side(i, j, s)


def triangle_angle(sides: SideTriple, vertex: int) -> SignedAngle:
    """Angle of the planted triangle at the given vertex label."""
    labels = [1, 2, 3]
    labels.remove(vertex)
    u, w = labels
    order = "".join(str(l) for l in
                    sorted([u, vertex, w],
                           key=lambda l: sides.config.index(str(l))))
    triple = SideTriple(sides.side(vertex, u), sides.side(vertex, w),
                        sides.side(u, w),
                        order.translate(str.maketrans(
                            {str(u): "1", str(vertex): "2", str(w): "3"})))
    return solve_angle(triple)


# ---------------------------------------------------------------------------
# triangles inside a space


class TriangleSide:
    """Maximizing chain between two triangle vertices, parametrized by
    cumulative time separation from the causally earlier vertex."""

    def __init__(self, space, start, end, n_knots=9):
        self.space = space
        self.start = start
        self.end = end
        self.length = space.tau(start, end)
        if self.length <= 0.0:
            raise PreconditionError("triangle sides must be timelike")
        if isinstance(space, FiniteLorentzSpace):
            chain = _chains.maximize_tau(space, start, end).chain
            if abs(_chains.chain_lengths(space, chain).tau_length - self.length) > EPS:
                raise PreconditionError("side chain is not maximizing")
            self.knots = list(chain.points)
            self.params = _chains.reparametrize_tau_arclength(space, chain)
            self._analytic = False
        else:
            self.knots = space.realizer(start, end, n_knots)
            self.params = [self.length * k / (n_knots - 1) for k in range(n_knots)]
            self._analytic = True

    def point_at(self, s):
        if self._analytic:
            return self.space.realizer_point(self.start, self.end, s)
        for p, knot in zip(self.params, self.knots):
            if abs(p - s) <= EPS:
                return knot
        raise PreconditionError(f"parameter {s} is not a knot of this side")

    def sample_params(self, rng: random.Random):
        if self._analytic:
            return rng.uniform(0.0, self.length)
        return rng.choice(self.params)


class SpaceTriangle:
    """Three timelike related vertices x << y << z with maximizing sides."""

    SIDES = ((1, 2), (2, 3), (1, 3))

    def __init__(self, space, x, y, z, n_knots=9):
        if not (space.ll(x, y) and space.ll(y, z) and space.ll(x, z)):
            raise PreconditionError("vertices must be causally ordered and timelike related")
        self.space = space
        self.vertices = (x, y, z)
        self.sides = {
            (1, 2): TriangleSide(space, x, y, n_knots),
            (2, 3): TriangleSide(space, y, z, n_knots),
            (1, 3): TriangleSide(space, x, z, n_knots),
        }

    def side_triple(self) -> SideTriple:
        return SideTriple(self.sides[(1, 2)].length,
                          self.sides[(2, 3)].length,
                          self.sides[(1, 3)].length, "123")

    def point_at(self, side, s):
        return self.sides[side].point_at(s)


def build_triangle(space, x, y, z, n_knots=9) -> SpaceTriangle:
    return SpaceTriangle(space, x, y, z, n_knots)


# ---------------------------------------------------------------------------
# curvature testers


@dataclass(frozen=True)
class CurvatureReport:
    mode: str
    passed: bool
    worst_defect: float
    witness: tuple | None
    n_triangles: int
    n_pairs: int
    min_defect: float
    max_defect: float


def test_curvature_lower0(space, triangles, pairs_per_triangle=8, mode="lower",
                          tol=EPS, seed=0, pair_sampler=None) -> CurvatureReport:
    """Triangle comparison against the flat model.

    For every sampled on-triangle pair (p, q) the lower-bound mode demands
    tau(p, q) <= taubar(pbar, qbar) + tol; the upper-bound mode reverses the
    inequality.  The worst signed defect tau - taubar and its witness are
    reported.
    """
    if mode not in ("lower", "upper"):
        raise PreconditionError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    lo, hi = math.inf, -math.inf
    witness_lo = witness_hi = None
    n_pairs = 0
    n_tris = 0
    for tidx, tri in enumerate(triangles):
        n_tris += 1
        planted = realize_triangle(tri.side_triple())
        if pair_sampler is not None:
            pair_list = pair_sampler(rng, tri)
        else:
            pair_list = []
            for _ in range(pairs_per_triangle):
                sa = rng.choice(SpaceTriangle.SIDES)
                sb = rng.choice(SpaceTriangle.SIDES)
                pair_list.append(((sa, tri.sides[sa].sample_params(rng)),
                                  (sb, tri.sides[sb].sample_params(rng))))
        for (sa, pa), (sb, pb) in pair_list:
            p = tri.point_at(sa, pa)
            q = tri.point_at(sb, pb)
            pbar = planted.point_on_side(*sa, pa)
            qbar = planted.point_on_side(*sb, pb)
            for u, v, ub, vb in ((p, q, pbar, qbar), (q, p, qbar, pbar)):
                defect = tri.space.tau(u, v) - tau_minkowski(ub, vb)
                n_pairs += 1
                if defect > hi:
                    hi, witness_hi = defect, (tidx, (sa, pa), (sb, pb))
                if defect < lo:
                    lo, witness_lo = defect, (tidx, (sa, pa), (sb, pb))
    if n_pairs == 0:
        raise PreconditionError("no on-triangle pairs sampled")
    if mode == "lower":
        return CurvatureReport("lower", hi <= tol, hi, witness_hi,
                               n_tris, n_pairs, lo, hi)
    return CurvatureReport("upper", -lo <= tol, lo, witness_lo,
                           n_tris, n_pairs, lo, hi)


# ---------------------------------------------------------------------------
# hinges and monotonicity


class Leg:
    """Timelike maximizer emanating from a hinge base point, parametrized by
    the time separation to the base."""

    def __init__(self, space, base, tip, n_knots=9):
        self.space = space
        self.base = base
        self.tip = tip
        if space.ll(base, tip):
            self.direction = "future"
            self.total = space.tau(base, tip)
        elif space.ll(tip, base):
            self.direction = "past"
            self.total = space.tau(tip, base)
        else:
            raise PreconditionError("hinge tip must be timelike related to the base")
        self._side = None
        if isinstance(space, FiniteLorentzSpace):
            a, b = (base, tip) if self.direction == "future" else (tip, base)
            self._side = TriangleSide(space, a, b, n_knots)

    def point_at(self, s):
        if s <= 0 or s > self.total + EPS:
            raise PreconditionError(f"leg parameter {s} outside (0, {self.total}]")
        if self._side is not None:
            param = s if self.direction == "future" else self.total - s
            return self._side.point_at(param)
        if self.direction == "future":
            return self.space.realizer_point(self.base, self.tip, s)
        return self.space.realizer_point(self.tip, self.base, self.total - s)

    def param_grid(self, n):
        if self._side is not None:
            ps = self._side.params
            out = [p for p in ps if p > EPS] if self.direction == "future" \
                else [self.total - p for p in ps if self.total - p > EPS]
            return sorted(out)
        return [self.total * k / n for k in range(1, n + 1)]


class KnotLeg:
    """Leg given by explicit knots and parameters (finite-table hinges)."""

    def __init__(self, points, params, direction):
        self.points = list(points)
        self.params = list(params)
        self.direction = direction
        self.total = max(params)

    def point_at(self, s):
        for p, pt in zip(self.params, self.points):
            if abs(p - s) <= EPS:
                return pt
        raise PreconditionError(f"parameter {s} is not a knot")

    def param_grid(self, n=None):
        return [p for p in self.params if p > EPS]


def _hinge_config(dir_a, dir_b, a_first):
    """Causal-order tag for the triangle (leg-a point, base, leg-b point)."""
    if dir_a != dir_b:
        return "123" if dir_a == "past" else "321"
    if dir_a == "future":
        return "213" if a_first else "231"
    return "132" if a_first else "312"


def hinge_angle(space, leg_a, leg_b, s, t) -> SignedAngle | None:
    """Signed comparison angle of the hinge at parameters (s, t), or None
    when the two leg points are not timelike related."""
    p = leg_a.point_at(s)
    q = leg_b.point_at(t)
    tpq, tqp = space.tau(p, q), space.tau(q, p)
    cross = max(tpq, tqp)
    if cross <= 0.0:
        return None
    config = _hinge_config(leg_a.direction, leg_b.direction, tpq > 0.0)
    return solve_angle(SideTriple(s, t, cross, config))


@dataclass(frozen=True)
class MonotonicityReport:
    passed: bool
    max_violation: float
    witness: tuple | None
    n_defined: int
    sense: str
    warnings: int = 0


def test_monotonicity_comparison(space, leg_a, leg_b, sense="lower",
                                 n_grid=8, tol=EPS) -> MonotonicityReport:
    """Monotonicity form of the curvature bound: the signed comparison angle
    theta(s, t) of a hinge must be non-decreasing in each argument for a
    lower bound and non-increasing for an upper bound, over the grid of
    timelike related parameter pairs.

    In the upper sense, parameter pairs that lose timelike relatedness while
    their comparison images keep it are counted as warnings, not failures.
    """
    if sense not in ("lower", "upper"):
        raise PreconditionError(f"unknown sense {sense!r}")
    svals = leg_a.param_grid(n_grid)
    tvals = leg_b.param_grid(n_grid)
    theta = {}
    skipped = 0
    for s in svals:
        for t in tvals:
            try:
                ang = hinge_angle(space, leg_a, leg_b, s, t)
            except UnrealizableError:
                skipped += 1
                continue
            if ang is not None:
                theta[(s, t)] = ang.signed
    if not theta:
        raise PreconditionError("no timelike related parameter pairs on the grid")

    direction = 1.0 if sense == "lower" else -1.0
    worst = 0.0
    witness = None

    def scan(pairs):
        nonlocal worst, witness
        prev_key, prev_val = None, None
        for key in pairs:
            if key not in theta:
                continue
            val = theta[key]
            if prev_val is not None:
                viol = direction * (prev_val - val)
                if viol > worst:
                    worst, witness = viol, (prev_key, key)
            prev_key, prev_val = key, val

    for t in tvals:
        scan([(s, t) for s in svals])
    for s in svals:
        scan([(s, t) for t in tvals])

    warnings = 0
    if sense == "upper":
        for s2 in svals:
            for t2 in tvals:
                if (s2, t2) in theta:
                    continue
                # undefined pair dominated by a defined one
                dominating = sorted((s, t) for (s, t) in theta
                                    if s >= s2 and t >= t2)
                if not dominating:
                    continue
                s, t = dominating[0]
                p, q = leg_a.point_at(s), leg_b.point_at(t)
                tpq = space.tau(p, q)
                cross = max(tpq, space.tau(q, p))
                tri = realize_triangle(SideTriple(
                    s, t, cross,
                    _hinge_config(leg_a.direction, leg_b.direction, tpq > 0.0)))
                if _planted_pair_related(tri, leg_a.direction,
                                         leg_b.direction, s2, t2):
                    warnings += 1
    return MonotonicityReport(worst <= tol, worst, witness, len(theta),
                              sense, warnings)


def _planted_pair_related(tri: ComparisonTriangle, dir_a, dir_b, s2, t2) -> bool:
    """Whether the comparison points at leg parameters (s2, t2) of a planted
    hinge triangle are timelike related.  Side parameters run from the
    causally earlier endpoint, so a past-directed leg measures backwards."""
    pa = tri.point_on_side(1, 2, s2 if dir_a == "future" else tri.sides.a12 - s2)
    pb = tri.point_on_side(2, 3, t2 if dir_b == "future" else tri.sides.a23 - t2)
    return tau_minkowski(pa, pb) > 0 or tau_minkowski(pb, pa) > 0


def upper_angle(space, leg_a, leg_b, s0=None, t0=None, rungs=8):
    """Upper angle of a hinge approximated on a geometric parameter ladder
    s, t in {s0 * 2^-k}; the maximum over the last three defined rungs."""
    s0 = s0 if s0 is not None else leg_a.total
    t0 = t0 if t0 is not None else leg_b.total
    values = []
    for k in range(rungs):
        ang = hinge_angle(space, leg_a, leg_b, s0 * 2.0 ** -k, t0 * 2.0 ** -k)
        if ang is not None:
            values.append(ang.omega)
    if not values:
        raise PreconditionError("angle undefined along the entire ladder")
    return max(values[-3:])


# ---------------------------------------------------------------------------
# Alexandrov lemmas


@dataclass(frozen=True)
class AlexandrovReport:
    case: str  # "convex", "concave" or "flat"
    biconditional_ok: bool
    delta1_angles_ok: bool
    delta2_angles_ok: bool
    split_angle_ok: bool
    min_margin: float
    split_margin: float
    flat_cross: float


def _angles(sides: SideTriple):
    return {v: triangle_angle(sides, v).omega for v in (1, 2, 3)}


def _compare_angles(big: SideTriple, small: SideTriple, direction: int, tol):
    """Check every angle of ``big`` is >= (direction=+1) or <= (-1) the
    corresponding angle of ``small``; returns (ok, min margin)."""
    ba, sa = _angles(big), _angles(small)
    margin = math.inf
    ok = True
    for v in (1, 2, 3):
        diff = direction * (ba[v] - sa[v])
        margin = min(margin, diff)
        if diff < -tol:
            ok = False
    return ok, margin


def verify_alexandrov_across(txy, tyz, txz, txp, cross, p_before_y=True,
                             tol=EPS) -> AlexandrovReport:
    """Split a triangle x << y << z by a point p on the side xz and verify
    the across-version comparison statements numerically.

    ``txp`` locates p on the long side; ``cross`` is the measured separation
    between p and y (direction fixed by ``p_before_y``).  Checks: convexity
    at p is equivalent to cross <= its flat value; in the convex (concave)
    case every angle of the two glued comparison triangles dominates (is
    dominated by) the corresponding angle of the subdivided big comparison
    triangle; and the glued angle at y dominates the comparison angle of the
    big triangle in any case.
    """
    if not (0.0 < txp < txz):
        raise PreconditionError("p must lie strictly inside the side xz")
    if cross <= 0.0:
        raise PreconditionError("p and y must be timelike related")
    tpz = txz - txp
    big = SideTriple(txy, tyz, txz, "123")
    planted = realize_triangle(big)
    ptilde = planted.point_on_side(1, 3, txp)
    ytilde = planted.vertex(2)
    flat = tau_minkowski(ptilde, ytilde) if p_before_y else tau_minkowski(ytilde, ptilde)

    # labels within subtriangles: 1=x, 2=p, 3=y for d1; 1=p, 2=y, 3=z for d2
    if p_before_y:
        d1 = SideTriple(txp, cross, txy, "123")          # x << p << y
        d2 = SideTriple(cross, tyz, tpz, "123")          # p << y << z
        ang1 = triangle_angle(d1, 2).omega               # at p, between x and y
        ang2 = triangle_angle(d2, 1).omega               # at p, between y and z
        d1f = SideTriple(txp, flat, txy, "123")
        d2f = SideTriple(flat, tyz, tpz, "123")
    else:
        d1 = SideTriple(txy, cross, txp, "123")          # x << y << p: 1=x,2=y,3=p
        d2 = SideTriple(cross, tpz, tyz, "123")          # y << p << z: 1=y,2=p,3=z
        ang1 = triangle_angle(d1, 3).omega               # at p, between x and y
        ang2 = triangle_angle(d2, 2).omega               # at p, between y and z
        d1f = SideTriple(txy, flat, txp, "123")
        d2f = SideTriple(flat, tpz, tyz, "123")

    if abs(cross - flat) <= tol:
        case = "flat"
    elif cross < flat:
        case = "convex"
    else:
        case = "concave"
    # with y << p the whole figure is the time reversal of the p << y one,
    # which swaps the roles of the two glued triangles in the convexity test
    if p_before_y:
        angle_says_convex = ang1 >= ang2 - tol
    else:
        angle_says_convex = ang2 >= ang1 - tol
    tau_says_convex = cross <= flat + tol
    bic_ok = (angle_says_convex == tau_says_convex) or case == "flat"

    direction = 1 if case != "concave" else -1
    ok1, m1 = _compare_angles(d1, d1f, direction, tol)
    ok2, m2 = _compare_angles(d2, d2f, direction, tol)

    # glued angle at y against the big comparison angle at y
    if p_before_y:
        glued = triangle_angle(d1, 3).omega + triangle_angle(d2, 2).omega
    else:
        glued = triangle_angle(d1, 2).omega + triangle_angle(d2, 1).omega
    tilde_y = triangle_angle(big, 2).omega
    split_margin = glued - tilde_y
    return AlexandrovReport(case, bic_ok, ok1, ok2, split_margin >= -tol,
                            min(m1, m2), split_margin, flat)


def verify_alexandrov_future(txy, tyz, txz, txp, cross, tol=EPS) -> AlexandrovReport:
    """Future version: the triangle x << y << z is split by p on the side xy,
    with ``cross`` the measured separation from p to z.  Same statements as
    the across version except the angle comparison for the second glued
    triangle flips, and the glued angle at z is dominated by the comparison
    angle of the big triangle."""
    if not (0.0 < txp < txy):
        raise PreconditionError("p must lie strictly inside the side xy")
    if cross <= 0.0:
        raise PreconditionError("p and z must be timelike related")
    tpy = txy - txp
    big = SideTriple(txy, tyz, txz, "123")
    planted = realize_triangle(big)
    ptilde = planted.point_on_side(1, 2, txp)
    flat = tau_minkowski(ptilde, planted.vertex(3))

    d1 = SideTriple(txp, cross, txz, "123")   # x << p << z: 1=x, 2=p, 3=z
    d2 = SideTriple(tpy, tyz, cross, "123")   # p << y << z: 1=p, 2=y, 3=z
    d1f = SideTriple(txp, flat, txz, "123")
    d2f = SideTriple(tpy, tyz, flat, "123")

    ang_xz_at_p = triangle_angle(d1, 2).omega     # between x and z
    ang_yz_at_p = triangle_angle(d2, 1).omega     # between y and z

    if abs(cross - flat) <= tol:
        case = "flat"
    elif cross < flat:
        case = "convex"
    else:
        case = "concave"
    # shrinking the splitting side grows every angle of the first glued
    # triangle and shrinks those of the second, so convexity shows up as the
    # x-side angle dominating at p
    angle_says_convex = ang_xz_at_p >= ang_yz_at_p - tol
    tau_says_convex = cross <= flat + tol
    bic_ok = (angle_says_convex == tau_says_convex) or case == "flat"

    direction = 1 if case != "concave" else -1
    ok1, m1 = _compare_angles(d1, d1f, direction, tol)
    ok2, m2 = _compare_angles(d2, d2f, -direction, tol)

    glued = triangle_angle(d1, 3).omega + triangle_angle(d2, 3).omega
    tilde_z = triangle_angle(big, 3).omega
    split_margin = tilde_z - glued
    return AlexandrovReport(case, bic_ok, ok1, ok2, split_margin >= -tol,
                            min(m1, m2), split_margin, flat)


# ---------------------------------------------------------------------------
# line-adjacent comparisons


def _point_angle(space, x, a, b):
    """Comparison angle at x between points a and b (each timelike related
    to x), or None when a, b are not timelike related to each other."""
    sa = max(space.tau(x, a), space.tau(a, x))
    sb = max(space.tau(x, b), space.tau(b, x))
    tab = space.tau(a, b)
    cross = max(tab, space.tau(b, a))
    if min(sa, sb) <= 0.0 or cross <= 0.0:
        return None
    dir_a = "future" if space.ll(x, a) else "past"
    dir_b = "future" if space.ll(x, b) else "past"
    config = _hinge_config(dir_a, dir_b, tab > 0.0)
    return solve_angle(SideTriple(sa, sb, cross, config))


@dataclass(frozen=True)
class StackingReport:
    collinear_defect: float
    coords: tuple  # planted (y1bar, y2bar, y3bar)


def verify_stacking(space, gamma_point, p, t1, t2, t3,
                    line_tol=EPS) -> StackingReport:
    """Plant the comparison triangles of (p, y1, y2) and (p, y2, y3) about a
    shared side and measure how far ybar2 sits from the segment ybar1 ybar3;
    with the line maximizing and curvature bounded below the three planted
    points are collinear."""
    if not (t1 < t2 < t3):
        raise PreconditionError("need t1 < t2 < t3")
    y1, y2, y3 = gamma_point(t1), gamma_point(t2), gamma_point(t3)
    segs = (space.tau(y1, y2), space.tau(y2, y3), space.tau(y1, y3))
    if abs(segs[2] - segs[0] - segs[1]) > line_tol * max(1.0, segs[2]):
        raise PreconditionError("the three line points are not on a maximizer")
    eps_sign = []
    taus = []
    for y in (y1, y2, y3):
        if space.ll(p, y):
            eps_sign.append(1.0)
            taus.append(space.tau(p, y))
        elif space.ll(y, p):
            eps_sign.append(-1.0)
            taus.append(space.tau(y, p))
        else:
            raise PreconditionError("every line point must be timelike related to p")

    ang12 = _point_angle(space, p, y1, y2)
    ang23 = _point_angle(space, p, y2, y3)
    if ang12 is None or ang23 is None:
        raise PreconditionError("line points must be timelike related to each other")

    def plant(eps, a, phi):
        return (eps * a * math.cosh(phi), eps * a * math.sinh(phi))

    y1b = plant(eps_sign[0], taus[0], -eps_sign[0] * ang12.omega)
    y2b = plant(eps_sign[1], taus[1], 0.0)
    y3b = plant(eps_sign[2], taus[2], eps_sign[2] * ang23.omega)

    # Euclidean distance of y2bar from the segment y1bar-y3bar
    vx, vt = y3b[1] - y1b[1], y3b[0] - y1b[0]
    wx, wt = y2b[1] - y1b[1], y2b[0] - y1b[0]
    vv = vx * vx + vt * vt
    lam = min(max((wx * vx + wt * vt) / vv, 0.0), 1.0) if vv > 0 else 0.0
    defect = math.hypot(wx - lam * vx, wt - lam * vt)
    return StackingReport(defect, (y1b, y2b, y3b))


@dataclass(frozen=True)
class AngleSpreadReport:
    max_spread: float
    n_probes: int
    values: tuple


def angle_equals_comparison_angle(space, gamma_point, x_param, p,
                                  alpha_fracs, gamma_params) -> AngleSpreadReport:
    """Spread of the comparison angle at a line point x between a maximizer
    toward p and the line, over probe parameters in both line directions.
    Constancy is the expected behaviour adjacent to a maximizing line under
    a lower curvature bound."""
    x = gamma_point(x_param)
    if space.ll(x, p):
        total = space.tau(x, p)
        alpha_point = lambda s: space.realizer_point(x, p, s)
    elif space.ll(p, x):
        total = space.tau(p, x)
        alpha_point = lambda s: space.realizer_point(p, x, total - s)
    else:
        raise PreconditionError("p must be timelike related to x")
    for t in gamma_params:
        if space.d(p, gamma_point(t)) <= EPS:
            raise PreconditionError("p lies on the line: hinge is degenerate")
    values = []
    for frac in alpha_fracs:
        a = alpha_point(frac * total)
        for t in gamma_params:
            if abs(t - x_param) <= EPS:
                continue
            ang = _point_angle(space, x, a, gamma_point(t))
            if ang is not None:
                values.append(ang.omega)
    if not values:
        raise PreconditionError("no valid probe pairs")
    return AngleSpreadReport(max(values) - min(values), len(values), tuple(values))


@dataclass(frozen=True)
class SidesEqualReport:
    passed: bool
    worst_defect: float
    relation_mismatches: int
    witness: tuple | None


def sides_equal_check(space, gamma_point, t1, t2, p, q1_params, q2_specs,
                      tol=EPS, null_band=0.0) -> SidesEqualReport:
    """For a triangle with one side on a maximizing line, separations between
    a point on the line side and a point on another side must match their
    comparison values, and causal relatedness must transfer both ways.

    ``q1_params`` are line parameters in (t1, t2); ``q2_specs`` are
    (side, fraction) pairs with side "xp" naming the maximizer between x1 and
    p and "px" the one between p and x2.  Pairs within ``null_band`` of the
    comparison null boundary are skipped for the relation check.
    """
    x1, x2 = gamma_point(t1), gamma_point(t2)
    if not space.ll(x1, x2):
        raise PreconditionError("line points must be timelike related")
    for v in (x1, x2):
        if not (space.ll(v, p) or space.ll(p, v)):
            raise PreconditionError("p must be timelike related to both line points")

    verts = {"x1": x1, "x2": x2, "p": p}
    if space.ll(p, x1):
        names = ("p", "x1", "x2")
    elif space.ll(x2, p):
        names = ("x1", "x2", "p")
    else:
        names = ("x1", "p", "x2")
    label = {nm: i + 1 for i, nm in enumerate(names)}
    vs = [verts[nm] for nm in names]
    sides = SideTriple(space.tau(vs[0], vs[1]), space.tau(vs[1], vs[2]),
                       space.tau(vs[0], vs[2]), "123")
    planted = realize_triangle(sides)

    def pair_on(nm_a, nm_b, tau_from_earlier):
        if label[nm_a] > label[nm_b]:
            nm_a, nm_b = nm_b, nm_a
        first, second = verts[nm_a], verts[nm_b]
        pt = space.realizer_point(first, second, tau_from_earlier)
        bar = planted.point_on_side(label[nm_a], label[nm_b], tau_from_earlier)
        return pt, bar

    worst = 0.0
    mismatches = 0
    witness = None
    for tq1 in q1_params:
        if not (t1 < tq1 < t2):
            raise PreconditionError("q1 parameters must lie inside (t1, t2)")
        q1 = gamma_point(tq1)
        bar1 = planted.point_on_side(label["x1"], label["x2"], space.tau(x1, q1))
        for side_name, frac in q2_specs:
            nm_a, nm_b = ("x1", "p") if side_name == "xp" else ("p", "x2")
            lo, hi = (nm_a, nm_b) if label[nm_a] < label[nm_b] else (nm_b, nm_a)
            length = sides.side(label[lo], label[hi])
            q2, bar2 = pair_on(lo, hi, frac * length)
            for u, v, ub, vb in ((q1, q2, bar1, bar2), (q2, q1, bar2, bar1)):
                defect = abs(space.tau(u, v) - tau_minkowski(ub, vb))
                if defect > worst:
                    worst, witness = defect, (tq1, side_name, frac)
                dt = vb[0] - ub[0]
                dx = abs(vb[1] - ub[1])
                if abs(dt - dx) <= null_band:
                    continue
                if space.leq(u, v) != (dt >= dx):
                    mismatches += 1
    return SidesEqualReport(worst <= tol and mismatches == 0, worst,
                            mismatches, witness)
