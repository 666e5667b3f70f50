"""Bounded and separated antipodal certificates.

A point set S is certified pair by pair: for an ordered pair (y, x) the
separation margin is the optimum of

    max f(y) - f(x)   over  dual_norm(f) <= 1,  f(x) <= f(z) <= f(y) for z in S,

computed through the normalization trick: minimize dual_norm(f) subject to
f.(y - x) = 1 and the order constraints, then invert.  A whole-set
certificate stores the better orientation of every unordered pair together
with the global constants (c1, c2, d), and can be re-verified from scratch
or transported along a norm-bounded isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import engine, spaces
from .engine import Constraint, EQ, INFEASIBLE, LE, OPTIMAL, Polyhedron
from .errors import BsaError, DimensionMismatch, NormBoundViolated, NotInvertible
from .spaces import as_vector, dual_norm_eval, norm_eval

DISTINCT_TOL = 1e-12
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class PointSet:
    """Ordered, pairwise-distinct points in a common space."""

    space: object
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2:
            raise DimensionMismatch("points must form a 2-d array")
        if pts.shape[1] != self.space.dim:
            raise DimensionMismatch(
                f"points of dim {pts.shape[1]} in a space of dim {self.space.dim}"
            )
        object.__setattr__(self, "points", pts)
        self.points.setflags(write=False)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if norm_eval(self.space, pts[i] - pts[j]) <= DISTINCT_TOL:
                    raise BsaError(f"points {i} and {j} coincide")

    def __len__(self):
        return self.points.shape[0]

    def pairs(self):
        n = len(self)
        return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass(frozen=True)
class Functional:
    """A dual vector together with its cached dual norm."""

    coeffs: np.ndarray
    dual_norm: float

    def __post_init__(self):
        object.__setattr__(self, "coeffs", as_vector(self.coeffs))

    @classmethod
    def on(cls, space, coeffs):
        coeffs = as_vector(coeffs)
        return cls(coeffs, dual_norm_eval(space, coeffs))

    def __call__(self, x):
        return float(self.coeffs @ x)


@dataclass(frozen=True)
class PairCertificate:
    upper_index: int
    lower_index: int
    functional: Functional
    margin: float


@dataclass(frozen=True)
class BsaCertificate:
    set: PointSet
    pairs: dict
    c1: float
    c2: float
    d: float


@dataclass(frozen=True)
class MarginReport:
    margins: dict
    d: float
    separation: float
    c1: float
    ka_lower: float
    k_lower: float


@dataclass(frozen=True)
class Verdict:
    valid: bool
    violations: tuple


@dataclass(frozen=True)
class PairMargin:
    margin: float
    functional: Functional
    approximate: bool = False


def _pair_key(i, j):
    return (i, j) if i < j else (j, i)


def margin_polyhedron(point_set: PointSet, y_index: int, x_index: int) -> Polyhedron:
    """Constraint set of the normalized margin program for ordered (y, x)."""
    pts = point_set.points
    y, x = pts[y_index], pts[x_index]
    rows = [Constraint(y - x, 1.0, EQ)]
    for k in range(len(pts)):
        if k in (y_index, x_index):
            continue
        z = pts[k]
        rows.append(Constraint(x - z, 0.0, LE))   # f.(z - x) >= 0
        rows.append(Constraint(z - y, 0.0, LE))   # f.(y - z) >= 0
    return Polyhedron(tuple(rows))


def pair_margin(point_set: PointSet, y_index: int, x_index: int) -> PairMargin:
    """Optimal separation margin d*(x, y; S) with its achieving functional.

    Returns margin 0 with the zero functional when no functional orders the
    set with y on top and x at the bottom.
    """
    n = len(point_set)
    if y_index == x_index or not (0 <= y_index < n and 0 <= x_index < n):
        raise IndexError(f"bad pair ({y_index}, {x_index}) for {n} points")
    poly = margin_polyhedron(point_set, y_index, x_index)
    res = engine.min_norm_over_polyhedron(point_set.space, poly)
    if res.status != OPTIMAL or res.value <= 0.0:
        zero = Functional(np.zeros(point_set.space.dim), 0.0)
        return PairMargin(0.0, zero, approximate=False)
    margin = 1.0 / res.value
    coeffs = res.argmin * margin
    return PairMargin(
        margin, Functional.on(point_set.space, coeffs), res.approximate
    )


def separation(point_set: PointSet) -> float:
    """Minimum pairwise distance in the space's norm."""
    pts = point_set.points
    return min(
        norm_eval(point_set.space, pts[i] - pts[j])
        for i, j in point_set.pairs()
    )


def is_equilateral(point_set: PointSet, tol: float = 1e-8):
    """All pairwise distances equal (within tol); returns the mean distance
    as the equilateral constant."""
    dists = [
        norm_eval(point_set.space, point_set.points[i] - point_set.points[j])
        for i, j in point_set.pairs()
    ]
    lam = float(np.mean(dists))
    flag = all(abs(dv - lam) <= tol for dv in dists)
    return flag, lam


def is_antipodal(point_set: PointSet, tol: float = DEFAULT_TOL) -> bool:
    """True iff every unordered pair separates with a positive margin in its
    better orientation."""
    for i, j in point_set.pairs():
        m = max(
            pair_margin(point_set, i, j).margin,
            pair_margin(point_set, j, i).margin,
        )
        if m <= tol:
            return False
    return True


def certify_set(point_set: PointSet):
    """Best-orientation margins for every pair, assembled into a certificate
    with functionals normalized to unit dual norm (c2 = 1)."""
    if len(point_set) < 2:
        raise BsaError("need at least two points to certify")
    pairs = {}
    margins = {}
    for i, j in point_set.pairs():
        fwd = pair_margin(point_set, j, i)   # y = j on top
        bwd = pair_margin(point_set, i, j)
        if fwd.margin >= bwd.margin:
            best, upper, lower = fwd, j, i
        else:
            best, upper, lower = bwd, i, j
        pairs[(i, j)] = PairCertificate(upper, lower, best.functional, best.margin)
        margins[(i, j)] = best.margin
    c1 = max(norm_eval(point_set.space, p) for p in point_set.points)
    d = min(margins.values())
    sep = separation(point_set)
    cert = BsaCertificate(point_set, pairs, c1, 1.0, d)
    scale = max(c1, 1.0)
    report = MarginReport(
        margins=margins,
        d=d,
        separation=sep,
        c1=c1,
        ka_lower=d / scale,
        k_lower=sep / scale,
    )
    return report, cert


def check_certificate(cert: BsaCertificate, tol: float = DEFAULT_TOL) -> Verdict:
    """Re-derive every certificate inequality from scratch against the
    stated constants; collect each violation with its slack."""
    ps = cert.set
    pts = ps.points
    violations = []

    def flag(pair, inequality, slack):
        violations.append({"pair": pair, "inequality": inequality, "slack": float(slack)})

    for idx, p in enumerate(pts):
        nv = norm_eval(ps.space, p)
        if nv > cert.c1 + tol:
            flag((idx, idx), "norm(x) <= c1", nv - cert.c1)

    expected = set(ps.pairs())
    for key in expected - set(cert.pairs):
        flag(key, "pair certificate present", 1.0)

    for key, pc in cert.pairs.items():
        if _pair_key(*key) not in expected:
            flag(key, "pair indices in range", 1.0)
            continue
        f = pc.functional.coeffs
        if f.shape[0] != ps.space.dim:
            flag(key, "functional dimension", 1.0)
            continue
        dn = dual_norm_eval(ps.space, f)
        if dn > cert.c2 + tol:
            flag(key, "dual_norm(f) <= c2", dn - cert.c2)
        fy = float(f @ pts[pc.upper_index])
        fx = float(f @ pts[pc.lower_index])
        if abs((fy - fx) - pc.margin) > tol:
            flag(key, "margin = f(y) - f(x)", abs((fy - fx) - pc.margin))
        if pc.margin < cert.d - tol:
            flag(key, "margin >= d", cert.d - pc.margin)
        for k in range(len(pts)):
            fz = float(f @ pts[k])
            if fz < fx - tol:
                flag(key, "f(x) <= f(z)", fx - fz)
            if fz > fy + tol:
                flag(key, "f(z) <= f(y)", fz - fy)
    return Verdict(valid=not violations, violations=tuple(violations))


def transport_certificate(cert: BsaCertificate, T, target_space) -> BsaCertificate:
    """Move a certificate along an isomorphism T with norm(T^-1) <= 1.

    Points become T(y) / delta with delta = norm(T); functionals compose with
    T^-1, so margins shrink by at most the factor delta.
    """
    T = np.asarray(T, dtype=float)
    ps = cert.set
    n = ps.space.dim
    if T.shape != (n, n):
        raise DimensionMismatch(f"operator shape {T.shape} on dim {n}")
    if abs(np.linalg.det(T)) < 1e-12:
        raise NotInvertible("operator determinant is numerically zero")
    Tinv = np.linalg.inv(T)

    inv_norm = engine.operator_norm(Tinv, target_space, ps.space)
    if inv_norm > 1.0 + DEFAULT_TOL:
        raise NormBoundViolated(f"norm(T^-1) = {inv_norm} > 1")
    delta = engine.operator_norm(T, ps.space, target_space)

    new_pts = (ps.points @ T.T) / delta
    new_set = PointSet(target_space, new_pts)
    new_pairs = {}
    margins = []
    for key, pc in cert.pairs.items():
        g = Tinv.T @ pc.functional.coeffs
        func = Functional.on(target_space, g)
        margin = float(g @ (new_pts[pc.upper_index] - new_pts[pc.lower_index]))
        new_pairs[key] = PairCertificate(pc.upper_index, pc.lower_index, func, margin)
        margins.append(margin)
    c1 = max(norm_eval(target_space, p) for p in new_pts)
    c2 = max(pc.functional.dual_norm for pc in new_pairs.values())
    return BsaCertificate(new_set, new_pairs, c1, c2, min(margins))
