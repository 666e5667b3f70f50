"""Finite-dimensional normed spaces: lp norms and symmetric polytope norms.

A space is either ``LpSpace(p, dim)`` with 1 <= p <= infinity (the value
``INF`` encodes infinity exactly) or ``PolytopeSpace(vertices)`` whose unit
ball is the convex hull of a centrally symmetric vertex list.  Polytope norms
are Minkowski functionals computed by linear programming; their duals evaluate
as support functions over the vertex list.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadExponent,
    DegenerateBall,
    DimensionMismatch,
    NotSymmetric,
    UnsupportedDimension,
    ZeroFunctional,
)

SYM_TOL = 1e-12
EVAL_TOL = 1e-9


class _Inf:
    """Distinguished exponent value for p = infinity (kept out of float land
    so JSON round-trips are exact)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = _Inf()


def is_inf(p) -> bool:
    return isinstance(p, _Inf)


def conjugate_exponent(p):
    """Holder conjugate: 1/p + 1/q = 1, with the INF sentinel on both ends."""
    if is_inf(p):
        return 1.0
    if p == 1:
        return INF
    return p / (p - 1.0)


def as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DimensionMismatch("vector has non-finite coordinates")
    return v


def _check_dim(space, x: np.ndarray):
    if x.shape[0] != space.dim:
        raise DimensionMismatch(
            f"vector of dim {x.shape[0]} in space of dim {space.dim}"
        )


@dataclass(frozen=True)
class LpSpace:
    """The space R^dim under the lp norm, 1 <= p <= INF."""

    p: object
    dim: int

    def __post_init__(self):
        if not is_inf(self.p):
            p = float(self.p)
            if p < 1:
                raise BadExponent(f"p = {p} < 1")
            object.__setattr__(self, "p", p)
        if self.dim < 1:
            raise DegenerateBall("dimension must be positive")

    @property
    def kind(self):
        return "lp"


@dataclass(frozen=True)
class PolytopeSpace:
    """Norm whose unit ball is conv(vertices); vertices must be centrally
    symmetric and span the space.  Construct through validate_space to prune
    non-extreme vertices."""

    vertices: np.ndarray
    validated: bool = field(default=False, compare=False)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] == 0:
            raise DegenerateBall("vertex list must be a nonempty 2-d array")
        object.__setattr__(self, "vertices", v)
        self.vertices.setflags(write=False)

    @property
    def dim(self):
        return self.vertices.shape[1]

    @property
    def kind(self):
        return "polytope"

    def __eq__(self, other):
        return isinstance(other, PolytopeSpace) and np.array_equal(
            self.vertices, other.vertices
        )

    def __hash__(self):
        return hash(self.vertices.tobytes())


def validate_space(spec):
    """Canonicalize a space: lp specs pass through, polytope specs get their
    symmetry and span checked and every non-extreme vertex removed."""
    if isinstance(spec, LpSpace):
        return spec
    if not isinstance(spec, PolytopeSpace):
        raise TypeError(f"not a norm spec: {spec!r}")

    verts = np.asarray(spec.vertices, dtype=float)
    # drop exact duplicates (within SYM_TOL), keeping first occurrences
    keep = []
    for i, v in enumerate(verts):
        if not any(np.max(np.abs(v - verts[j])) <= SYM_TOL for j in keep):
            keep.append(i)
    verts = verts[keep]

    for v in verts:
        if not any(np.max(np.abs(v + w)) <= SYM_TOL for w in verts):
            raise NotSymmetric(f"vertex {v.tolist()} has no antipode")
    if np.linalg.matrix_rank(verts, tol=1e-10) < verts.shape[1]:
        raise DegenerateBall("vertices do not span the space")

    from .engine import conv_hull_member

    extreme = [
        i
        for i, v in enumerate(verts)
        if not conv_hull_member(v, np.delete(verts, i, axis=0))
    ]
    verts = verts[extreme]
    if verts.size == 0 or np.linalg.matrix_rank(verts, tol=1e-10) < verts.shape[1]:
        raise DegenerateBall("no extreme vertices span the space")
    return PolytopeSpace(verts, validated=True)


def norm_eval(spec, x) -> float:
    """The norm of x: closed form for lp, a Minkowski-functional LP for
    polytopes (min sum(alpha), alpha >= 0, sum(alpha_i v_i) = x)."""
    x = as_vector(x)
    _check_dim(spec, x)
    if isinstance(spec, LpSpace):
        return _lp_norm(spec.p, x)
    from .engine import minkowski_gauge

    return minkowski_gauge(spec.vertices, x)


def _lp_norm(p, x: np.ndarray) -> float:
    if is_inf(p):
        return float(np.max(np.abs(x))) if x.size else 0.0
    if p == 1:
        return float(np.sum(np.abs(x)))
    if p == 2:
        return float(np.linalg.norm(x))
    a = np.abs(x)
    m = a.max()
    if m == 0.0:
        return 0.0
    return float(m * np.sum((a / m) ** p) ** (1.0 / p))


def dual_norm_eval(spec, f) -> float:
    """max{f.x : norm(x) <= 1}: the conjugate lp norm, or the support
    function over polytope vertices."""
    f = as_vector(f)
    _check_dim(spec, f)
    if isinstance(spec, LpSpace):
        return _lp_norm(conjugate_exponent(spec.p), f)
    return float(np.max(spec.vertices @ f))


def support_point(spec, f) -> np.ndarray:
    """A unit vector x with f.x = dual_norm(f).  Ties break to the lowest
    index so that repeated calls are reproducible."""
    f = as_vector(f)
    _check_dim(spec, f)
    if np.max(np.abs(f)) == 0.0:
        raise ZeroFunctional("support point of the zero functional")
    if isinstance(spec, PolytopeSpace):
        values = spec.vertices @ f
        return spec.vertices[int(np.argmax(values))].copy()
    p = spec.p
    if is_inf(p):
        s = np.sign(f)
        s[s == 0] = 1.0
        return s
    if p == 1:
        k = int(np.argmax(np.abs(f)))
        x = np.zeros_like(f)
        x[k] = 1.0 if f[k] >= 0 else -1.0
        return x
    q = conjugate_exponent(p)
    a = np.abs(f) ** (q - 1.0)
    x = np.sign(f) * a
    return x / _lp_norm(p, x)


def renorm_union(base: PolytopeSpace, points) -> PolytopeSpace:
    """Unit ball conv(B union {+-points}); with points = {2 x_i} over an
    Auerbach system this is the renorming whose gauge sits between the base
    norm and half of it."""
    if not isinstance(base, PolytopeSpace):
        raise UnsupportedDimension("renorm_union needs a polytope base")
    pts = [as_vector(pt) for pt in points]
    if not pts:
        return validate_space(base)
    extra = np.array(pts + [-pt for pt in pts])
    return validate_space(PolytopeSpace(np.vstack([base.vertices, extra])))


@dataclass(frozen=True)
class PolyhedralApprox:
    space: PolytopeSpace
    ratio_bound: float


def polyhedral_approx(spec: LpSpace, direction_count: int) -> PolyhedralApprox:
    """Inscribed polytope for an lp ball on a deterministic symmetric grid.

    One-sided by construction: the polytope norm dominates the true norm, and
    ``ratio_bound`` is the exact worst-case ratio (max lq norm over facet
    normals of the inscribed body).  p = 1 and p = INF are returned exactly.
    """
    if not isinstance(spec, LpSpace):
        raise UnsupportedDimension("polyhedral_approx expects an lp space")
    n = spec.dim
    if is_inf(spec.p):
        if n > 16:
            raise UnsupportedDimension("cube has too many vertices")
        corners = np.array(
            [[float(s) for s in signs] for signs in np.ndindex(*(2,) * n)]
        )
        verts = 2.0 * corners - 1.0
        return PolyhedralApprox(validate_space(PolytopeSpace(verts)), 1.0)
    if spec.p == 1:
        verts = np.vstack([np.eye(n), -np.eye(n)])
        return PolyhedralApprox(validate_space(PolytopeSpace(verts)), 1.0)
    if n > 3:
        raise UnsupportedDimension("direction grids are built for dim <= 3")
    if n == 1:
        return PolyhedralApprox(
            validate_space(PolytopeSpace(np.array([[1.0], [-1.0]]))), 1.0
        )
    if direction_count < 2 * n:
        raise UnsupportedDimension("too few directions to span the space")

    if n == 2:
        angles = 2.0 * np.pi * np.arange(direction_count) / direction_count
        dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    else:
        dirs = _fibonacci_sphere(direction_count)
        dirs = np.vstack([dirs, -dirs])
    verts = np.array([d / _lp_norm(spec.p, d) for d in dirs])
    space = validate_space(PolytopeSpace(verts))
    return PolyhedralApprox(space, _inscribed_ratio(space, spec))


def _fibonacci_sphere(count: int) -> np.ndarray:
    golden = (1.0 + np.sqrt(5.0)) / 2.0
    i = np.arange(count) + 0.5
    z = 1.0 - 2.0 * i / count
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    theta = 2.0 * np.pi * i / golden
    return np.column_stack([r * np.cos(theta), r * np.sin(theta), z])


def _inscribed_ratio(space: PolytopeSpace, lp: LpSpace) -> float:
    """Exact worst-case gauge ratio of an inscribed polytope: the max dual-lp
    norm over outward facet normals scaled to f.x = 1 on their facet."""
    from scipy.spatial import ConvexHull

    hull = ConvexHull(space.vertices)
    q = conjugate_exponent(lp.p)
    ratio = 1.0
    for eq in hull.equations:
        normal, offset = eq[:-1], eq[-1]
        # facet is normal.x + offset = 0 with normal.x <= -offset inside
        scale = -offset
        if scale <= 0:
            raise DegenerateBall("origin outside the approximating polytope")
        ratio = max(ratio, _lp_norm(q, normal / scale))
    return float(ratio)
