"""Generators for the explicit certified families.

Each generator returns a NamedFamily: a point set with hand-built separating
functionals and the constants they certify.  The families are the canonical
lp basis with its difference functionals, the summing family in the sup-norm
space, Auerbach systems obtained by determinant ascent, the half-difference
and plus/minus families over an Auerbach system, the renorming that makes
{+-2 x_i} a normalized 2-equilateral set, and normalized biorthogonal
systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import engine, spaces
from .certify import (
    BsaCertificate,
    Functional,
    PairCertificate,
    PointSet,
    certify_set,
)
from .errors import (
    DegenerateStart,
    NotBiorthogonal,
    NotStrictlyConvexEvidence,
    TooSmall,
    UseSummingFamily,
)
from .spaces import (
    INF,
    LpSpace,
    PolytopeSpace,
    as_vector,
    dual_norm_eval,
    is_inf,
    norm_eval,
    renorm_union,
    support_point,
)


@dataclass(frozen=True)
class NamedFamily:
    certificate: BsaCertificate
    provenance: str
    extras: dict = field(default_factory=dict)

    @property
    def set(self):
        return self.certificate.set

    @property
    def claimed(self):
        return (self.certificate.c1, self.certificate.c2, self.certificate.d)


@dataclass(frozen=True)
class AuerbachSystem:
    """Normalized vectors with normalized biorthogonal functionals; rows of
    `vectors` and `functionals` pair up."""

    vectors: np.ndarray
    functionals: np.ndarray
    space: object
    det_history: tuple = ()


def _assemble(space, points, pair_data, c1, c2, d, provenance, extras=None):
    ps = PointSet(space, np.asarray(points, dtype=float))
    pairs = {}
    for (i, j), (upper, lower, coeffs) in pair_data.items():
        func = Functional.on(space, coeffs)
        margin = float(func.coeffs @ (ps.points[upper] - ps.points[lower]))
        pairs[(i, j)] = PairCertificate(upper, lower, func, margin)
    cert = BsaCertificate(ps, pairs, c1, c2, d)
    return NamedFamily(cert, provenance, extras or {})


def lp_basis_family(p, n: int) -> NamedFamily:
    """Canonical basis of the lp space with the scaled difference functionals
    2^(1/p - 1) (e_k - e_l); certifies (1, 1, 2^(1/p))."""
    if is_inf(p):
        raise UseSummingFamily("use summing_family for the sup norm")
    space = LpSpace(p, n)
    if n < 2:
        raise TooSmall("need n >= 2")
    scale = 2.0 ** (1.0 / space.p - 1.0)
    pair_data = {}
    for k in range(n):
        for l in range(k + 1, n):
            coeffs = np.zeros(n)
            coeffs[k] = scale
            coeffs[l] = -scale
            pair_data[(k, l)] = (k, l, coeffs)
    d = 2.0 ** (1.0 / space.p)
    return _assemble(space, np.eye(n), pair_data, 1.0, 1.0, d, "lp-basis")


def summing_family(n: int) -> NamedFamily:
    """Partial-sum points sum_{k<=m} e_k - e_{m+1} in the sup-norm space;
    coordinate functionals certify (1, 1, 2)."""
    if n < 3:
        raise TooSmall("need n >= 3")
    space = LpSpace(INF, n)
    points = np.zeros((n - 1, n))
    for m in range(n - 1):
        points[m, : m + 1] = 1.0
        points[m, m + 1] = -1.0
    pair_data = {}
    for i in range(n - 1):
        for j in range(i + 1, n - 1):
            coeffs = np.zeros(n)
            coeffs[i + 1] = 1.0
            pair_data[(i, j)] = (j, i, coeffs)
    return _assemble(space, points, pair_data, 1.0, 1.0, 2.0, "summing")


def auerbach_ascent(space, seed: int = 0, max_sweeps: int = 500) -> AuerbachSystem:
    """Auerbach system by cyclic determinant ascent.

    Each column is replaced by the unit vector maximizing the cofactor
    functional of its slot, which never decreases |det|; at a full-sweep
    fixed point the inverse rows are the normalized biorthogonal
    functionals.
    """
    n = space.dim
    X = _ascent_start(space, seed)
    det = np.linalg.det(X)
    history = [abs(det)]
    for _ in range(max_sweeps):
        prev = abs(det)
        for i in range(n):
            cof = np.linalg.det(X) * np.linalg.inv(X)[i, :]
            if np.max(np.abs(cof)) == 0.0:
                continue
            X[:, i] = support_point(space, cof)
        det = np.linalg.det(X)
        history.append(abs(det))
        if abs(det) - prev <= 1e-12 * max(prev, 1.0):
            break
    functionals = np.linalg.inv(X)
    return AuerbachSystem(X.T.copy(), functionals, space, tuple(history))


def _ascent_start(space, seed):
    n = space.dim
    basis = np.eye(n)
    X = np.column_stack(
        [basis[:, i] / norm_eval(space, basis[:, i]) for i in range(n)]
    )
    if abs(np.linalg.det(X)) > 1e-9:
        return X
    for attempt in range(10):
        rng = np.random.default_rng(seed + attempt)
        cols = []
        for _ in range(n):
            v = rng.standard_normal(n)
            cols.append(v / norm_eval(space, v))
        X = np.column_stack(cols)
        if abs(np.linalg.det(X)) > 1e-9:
            return X
    raise DegenerateStart("no nondegenerate starting basis found")


def strict_convex_family(system: AuerbachSystem) -> NamedFamily:
    """Scaled half-difference functionals over an Auerbach system; works
    exactly when the dual norm is strictly convex enough for every scaling
    factor to exceed 1."""
    space = system.space
    n = system.vectors.shape[0]
    if n < 2:
        raise TooSmall("need at least two basis vectors")
    lambdas = {}
    pair_data = {}
    for i in range(n):
        for j in range(i + 1, n):
            h = 0.5 * (system.functionals[i] - system.functionals[j])
            lam = 1.0 / dual_norm_eval(space, h)
            if lam <= 1.0 + 1e-9:
                raise NotStrictlyConvexEvidence(
                    f"pair ({i},{j}) scales only to {lam}"
                )
            lambdas[(i, j)] = lam
            pair_data[(i, j)] = (i, j, lam * h)
    d = min(lambdas.values())
    return _assemble(
        space, system.vectors, pair_data, 1.0, 1.0, d,
        "strict-convex", {"lambdas": lambdas},
    )


def plus_minus_family(system: AuerbachSystem) -> NamedFamily:
    """The 2n points {+-x_i} of an Auerbach system, separated by the
    coordinate functionals and the scaled sums/differences of pairs."""
    space = system.space
    n = system.vectors.shape[0]
    points = np.vstack([system.vectors, -system.vectors])
    s_vals, t_vals = {}, {}
    pair_data = {}
    for i in range(n):
        # x_i against -x_i: the coordinate functional alone
        pair_data[(i, i + n)] = (i, i + n, system.functionals[i].copy())
    for i in range(n):
        for j in range(i + 1, n):
            diff = system.functionals[i] - system.functionals[j]
            summ = system.functionals[i] + system.functionals[j]
            t = 1.0 / dual_norm_eval(space, diff)
            s = 1.0 / dual_norm_eval(space, summ)
            if t <= 0.5 + 1e-9 or s <= 0.5 + 1e-9:
                raise NotStrictlyConvexEvidence(
                    f"pair ({i},{j}): s = {s}, t = {t} not above 1/2"
                )
            t_vals[(i, j)] = t
            s_vals[(i, j)] = s
            phi1 = t * diff
            phi2 = s * summ
            pair_data[(i, j)] = (i, j, phi1)
            pair_data[(i + n, j + n)] = (j + n, i + n, phi1)
            pair_data[(i, j + n)] = (i, j + n, phi2)
            pair_data[(j, i + n)] = (j, i + n, phi2)
    d = min(2.0, 2.0 * min(t_vals.values()), 2.0 * min(s_vals.values()))
    return _assemble(
        space, points, pair_data, 1.0, 1.0, d,
        "plus-minus", {"s": s_vals, "t": t_vals},
    )


def renorm_equilateral_family(base: PolytopeSpace, system: AuerbachSystem):
    """Renorm by conv(ball union {+-2 x_i}) and certify {+-2 x_i} as a
    normalized 2-equilateral family in the new gauge."""
    doubled = [2.0 * v for v in system.vectors]
    space = renorm_union(base, doubled)
    points = np.vstack([doubled, [-v for v in doubled]])
    ps = PointSet(space, points)
    report, cert = certify_set(ps)
    cert = BsaCertificate(ps, cert.pairs, 1.0, 1.0, 2.0)
    family = NamedFamily(cert, "renorm-equilateral", {"report": report})
    return space, family


def normalize_biorthogonal(vectors, functionals, space) -> NamedFamily:
    """Normalize a bounded biorthogonal system and certify it at constants
    (1, M, 1) with M the max product of the paired norms."""
    V = np.array([as_vector(v) for v in vectors])
    F = np.array([as_vector(f) for f in functionals])
    if V.shape != F.shape or V.shape[0] < 2:
        raise NotBiorthogonal("need matching lists of at least two pairs")
    gram = F @ V.T
    if np.max(np.abs(gram - np.eye(V.shape[0]))) > 1e-8:
        raise NotBiorthogonal("x_i*(x_j) != delta_ij")
    norms = np.array([norm_eval(space, v) for v in V])
    Y = V / norms[:, None]
    Ystar = F * norms[:, None]
    M = max(dual_norm_eval(space, f) for f in Ystar)
    pair_data = {}
    for i in range(len(Y)):
        for j in range(i + 1, len(Y)):
            pair_data[(i, j)] = (i, j, Ystar[i].copy())
    return _assemble(
        space, Y, pair_data, 1.0, float(M), 1.0,
        "biorthogonal", {"M": float(M)},
    )
