"""Self-contained optimization primitives.

Everything downstream (Minkowski gauges, separation margins, operator norms)
reduces to three workhorses here: a dense two-phase simplex solver with
Bland's anti-cycling rule, Dykstra's alternating projections onto a
polyhedron, and minimization of a dual norm over a polyhedron.  Instances are
tiny (tens of variables), so clarity and determinism win over speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import spaces
from .errors import NumericalBreakdown, UnsupportedNormPair
from .spaces import LpSpace, PolytopeSpace, as_vector, conjugate_exponent, is_inf

LE = "le"
EQ = "eq"

OPT_TOL = 1e-9
PIVOT_TOL = 1e-12
FEAS_TOL = 1e-7

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
NOT_CONVERGED = "not_converged"


@dataclass(frozen=True)
class Constraint:
    normal: np.ndarray
    offset: float
    kind: str = LE

    def __post_init__(self):
        object.__setattr__(self, "normal", as_vector(self.normal))
        if self.kind not in (LE, EQ):
            raise ValueError(f"bad constraint kind {self.kind!r}")
        if not np.isfinite(self.offset):
            raise ValueError("constraint offset must be finite")


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective . x subject to the rows; variables are free unless
    nonneg is set."""

    objective: np.ndarray
    constraints: tuple
    variable_count: int
    nonneg: bool = False

    def __post_init__(self):
        object.__setattr__(self, "objective", as_vector(self.objective))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for row in self.constraints:
            if row.normal.shape[0] != self.variable_count:
                raise ValueError("constraint dimension mismatch")


@dataclass(frozen=True)
class Polyhedron:
    constraints: tuple

    def __post_init__(self):
        rows = tuple(self.constraints)
        if not rows:
            raise ValueError("polyhedron needs at least one constraint")
        dims = {row.normal.shape[0] for row in rows}
        if len(dims) != 1:
            raise ValueError("inconsistent constraint dimensions")
        object.__setattr__(self, "constraints", rows)

    @property
    def dim(self):
        return self.constraints[0].normal.shape[0]


@dataclass
class LpResult:
    status: str
    value: float = float("nan")
    x: np.ndarray | None = None


@dataclass
class ProjectionResult:
    status: str
    point: np.ndarray
    residual: float
    sweeps: int


@dataclass
class MinNormResult:
    status: str
    value: float = float("nan")
    argmin: np.ndarray | None = None
    approximate: bool = False


# ---------------------------------------------------------------------------
# dense two-phase simplex
# ---------------------------------------------------------------------------


def lp_solve(lp: LinearProgram) -> LpResult:
    """Dense two-phase simplex, Bland's rule throughout.

    Free variables are split into positive and negative parts; LE rows get
    slacks.  Returns an optimal basic solution, or a result whose status is
    INFEASIBLE / UNBOUNDED.
    """
    n = lp.variable_count
    m = len(lp.constraints)
    if m == 0:
        if np.max(np.abs(lp.objective), initial=0.0) > OPT_TOL:
            return LpResult(UNBOUNDED)
        return LpResult(OPTIMAL, 0.0, np.zeros(n))

    n_std = n if lp.nonneg else 2 * n
    slack_rows = [i for i, row in enumerate(lp.constraints) if row.kind == LE]
    cols = n_std + len(slack_rows)

    A = np.zeros((m, cols))
    b = np.zeros(m)
    c = np.zeros(cols)
    c[:n] = lp.objective
    if not lp.nonneg:
        c[n:2 * n] = -lp.objective
    for i, row in enumerate(lp.constraints):
        A[i, :n] = row.normal
        if not lp.nonneg:
            A[i, n:2 * n] = -row.normal
        b[i] = row.offset
    for k, i in enumerate(slack_rows):
        A[i, n_std + k] = 1.0
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    # phase 1: artificial basis
    art = np.arange(cols, cols + m)
    T = np.hstack([A, np.eye(m)])
    c1 = np.zeros(cols + m)
    c1[cols:] = -1.0
    basis = list(art)
    status = _simplex_iterate(T, b, c1, basis)
    if status == UNBOUNDED:  # cannot happen for phase 1, defensive
        raise NumericalBreakdown("phase-1 reported unbounded")
    if -_basis_value(c1, basis, b) > FEAS_TOL:
        return LpResult(INFEASIBLE)

    rows_keep = _drive_out_artificials(T, b, basis, cols)
    T = T[rows_keep, :cols]
    b = b[rows_keep]
    basis = [basis[i] for i in rows_keep]

    c2 = np.zeros(cols)
    c2[:] = c
    status = _simplex_iterate(T, b, c2, basis)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED)

    x_std = np.zeros(cols)
    for i, j in enumerate(basis):
        x_std[j] = b[i]
    if lp.nonneg:
        x = x_std[:n]
    else:
        x = x_std[:n] - x_std[n:2 * n]
    return LpResult(OPTIMAL, float(lp.objective @ x), x)


def _basis_value(c, basis, b) -> float:
    return float(sum(c[j] * b[i] for i, j in enumerate(basis)))


def _simplex_iterate(T, b, c, basis) -> str:
    m, cols = T.shape
    max_iter = 200 * (m + cols) + 1000
    for _ in range(max_iter):
        cb = c[basis]
        reduced = c - cb @ T
        reduced[basis] = 0.0
        entering = -1
        for j in range(cols):
            if reduced[j] > OPT_TOL:
                entering = j
                break
        if entering < 0:
            return OPTIMAL
        col = T[:, entering]
        leaving = -1
        best = np.inf
        for i in range(m):
            if col[i] > PIVOT_TOL:
                ratio = b[i] / col[i]
                if ratio < best - 1e-12 or (
                    abs(ratio - best) <= 1e-12
                    and (leaving < 0 or basis[i] < basis[leaving])
                ):
                    best = ratio
                    leaving = i
        if leaving < 0:
            return UNBOUNDED
        _pivot(T, b, leaving, entering)
        basis[leaving] = entering
    raise NumericalBreakdown("simplex iteration limit exceeded")


def _pivot(T, b, row, col):
    piv = T[row, col]
    if abs(piv) < PIVOT_TOL:
        raise NumericalBreakdown(f"pivot {piv} below tolerance")
    T[row] /= piv
    b[row] /= piv
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            factor = T[i, col]
            T[i] -= factor * T[row]
            b[i] -= factor * b[row]
            if b[i] < 0 and b[i] > -1e-11:
                b[i] = 0.0


def _drive_out_artificials(T, b, basis, cols):
    """Pivot artificial variables out of the basis; rows where that is
    impossible are redundant and dropped."""
    keep = []
    for i in range(len(basis)):
        if basis[i] < cols:
            keep.append(i)
            continue
        pivot_col = -1
        for j in range(cols):
            if abs(T[i, j]) > 1e-9:
                pivot_col = j
                break
        if pivot_col < 0:
            continue  # redundant row
        _pivot(T, b, i, pivot_col)
        basis[i] = pivot_col
        keep.append(i)
    return keep


# ---------------------------------------------------------------------------
# polytope helpers built on the simplex
# ---------------------------------------------------------------------------


def minkowski_gauge(vertices: np.ndarray, x: np.ndarray) -> float:
    """Gauge of conv(vertices) at x: min sum(alpha), alpha >= 0, with
    sum(alpha_i v_i) = x."""
    if np.max(np.abs(x), initial=0.0) == 0.0:
        return 0.0
    k, dim = vertices.shape
    rows = [
        Constraint(vertices[:, d], float(x[d]), EQ) for d in range(dim)
    ]
    lp = LinearProgram(-np.ones(k), rows, k, nonneg=True)
    res = lp_solve(lp)
    if res.status != OPTIMAL:
        raise NumericalBreakdown(f"gauge LP status {res.status}")
    return -res.value


def conv_hull_member(point: np.ndarray, vertices: np.ndarray, tol=FEAS_TOL) -> bool:
    """Is point inside conv(vertices)?  Feasibility of the barycentric LP."""
    k, dim = vertices.shape
    if k == 0:
        return False
    rows = [Constraint(vertices[:, d], float(point[d]), EQ) for d in range(dim)]
    rows.append(Constraint(np.ones(k), 1.0, EQ))
    lp = LinearProgram(np.zeros(k), rows, k, nonneg=True)
    return lp_solve(lp).status == OPTIMAL


# ---------------------------------------------------------------------------
# Dykstra's alternating projections
# ---------------------------------------------------------------------------


def project_polyhedron(point, poly: Polyhedron, max_iter: int = 100000) -> ProjectionResult:
    """Euclidean projection onto the polyhedron via Dykstra's algorithm over
    the individual rows; each row projection is closed form."""
    x = as_vector(point).copy()
    rows = []
    for con in poly.constraints:
        nrm2 = float(con.normal @ con.normal)
        if nrm2 == 0.0:
            if (con.kind == EQ and abs(con.offset) > 1e-12) or (
                con.kind == LE and con.offset < -1e-12
            ):
                return ProjectionResult(INFEASIBLE, x, np.inf, 0)
            continue
        rows.append((con.normal, con.offset, nrm2, con.kind))
    if not rows:
        return ProjectionResult(OPTIMAL, x, 0.0, 0)

    increments = [np.zeros_like(x) for _ in rows]
    for sweep in range(max_iter):
        x_prev = x.copy()
        for i, (a, off, nrm2, kind) in enumerate(rows):
            y = x + increments[i]
            val = float(a @ y)
            if kind == EQ or val > off:
                x = y - ((val - off) / nrm2) * a
            else:
                x = y
            increments[i] = y - x
        move = float(np.linalg.norm(x - x_prev))
        # movement alone can stall early on nearly-parallel rows, so only
        # stop once the iterate is actually feasible
        if move < 1e-10 and max_violation(poly, x) <= 1e-9:
            return ProjectionResult(OPTIMAL, x, move, sweep + 1)
    status = OPTIMAL if max_violation(poly, x) <= 1e-8 else NOT_CONVERGED
    return ProjectionResult(status, x, move, max_iter)


def max_violation(poly: Polyhedron, x: np.ndarray) -> float:
    worst = 0.0
    for con in poly.constraints:
        val = float(con.normal @ x) - con.offset
        worst = max(worst, abs(val) if con.kind == EQ else val)
    return worst


# ---------------------------------------------------------------------------
# dual-norm minimization over a polyhedron
# ---------------------------------------------------------------------------


def min_norm_over_polyhedron(space, poly: Polyhedron) -> MinNormResult:
    """Minimize the dual norm of `space` over the polyhedron.

    Polyhedral duals (p = 1, p = INF, polytope norms) reduce exactly to LPs.
    The Euclidean dual is the exact projection of the origin, solved in
    closed form (one 2-d equality) or by KKT active-set enumeration.  General
    lq duals fall back to an SLSQP solve and are flagged approximate.
    """
    dim = poly.dim
    if isinstance(space, PolytopeSpace):
        return _min_support_lp(space.vertices, poly)
    p = space.p
    if p == 1:  # dual linf: |f_i| <= t
        return _min_support_lp(np.vstack([np.eye(dim), -np.eye(dim)]), poly)
    if is_inf(p):  # dual l1 via split variables
        return _min_l1_lp(poly)
    if p == 2:
        return _min_euclidean(poly)
    return _min_lq_slsqp(conjugate_exponent(p), poly)


def _min_support_lp(directions: np.ndarray, poly: Polyhedron) -> MinNormResult:
    """min t s.t. d.f <= t for every direction d, f in poly.  Exact when the
    dual norm is the support function over `directions`."""
    dim = poly.dim
    # variables (f, t); maximize -t
    rows = [
        Constraint(np.append(d, -1.0), 0.0, LE) for d in directions
    ]
    for con in poly.constraints:
        rows.append(Constraint(np.append(con.normal, 0.0), con.offset, con.kind))
    obj = np.zeros(dim + 1)
    obj[dim] = -1.0
    res = lp_solve(LinearProgram(obj, rows, dim + 1))
    if res.status != OPTIMAL:
        return MinNormResult(res.status)
    return MinNormResult(OPTIMAL, float(res.x[dim]), res.x[:dim])


def _min_l1_lp(poly: Polyhedron) -> MinNormResult:
    """min sum|f_i| via f = u - w, u, w >= 0."""
    dim = poly.dim
    rows = []
    for con in poly.constraints:
        rows.append(
            Constraint(np.concatenate([con.normal, -con.normal]), con.offset, con.kind)
        )
    obj = -np.ones(2 * dim)
    res = lp_solve(LinearProgram(obj, rows, 2 * dim, nonneg=True))
    if res.status != OPTIMAL:
        return MinNormResult(res.status)
    f = res.x[:dim] - res.x[dim:]
    return MinNormResult(OPTIMAL, -res.value, f)


def _min_euclidean(poly: Polyhedron) -> MinNormResult:
    eqs = [c for c in poly.constraints if c.kind == EQ]
    les = [c for c in poly.constraints if c.kind == LE]
    dim = poly.dim
    if dim == 2 and len(eqs) == 1:
        return _min_euclidean_line(eqs[0], les)
    max_active = dim - len(eqs) if eqs else dim
    max_active = max(0, min(max_active, len(les)))
    total = sum(_n_choose_k(len(les), k) for k in range(max_active + 1))
    if total <= 300:
        return _min_euclidean_subsets(eqs, les, dim, max_active)
    return _min_lq_slsqp(2.0, poly)


def _n_choose_k(n, k):
    from math import comb

    return comb(n, k)


def _min_euclidean_line(eq: Constraint, les) -> MinNormResult:
    """Projection of the origin onto a line intersected with halfplanes,
    all in closed form (the hot path of 2-d margin programs)."""
    a0, a1 = float(eq.normal[0]), float(eq.normal[1])
    nrm2 = a0 * a0 + a1 * a1
    if nrm2 == 0.0:
        return MinNormResult(INFEASIBLE if abs(eq.offset) > 1e-12 else OPTIMAL, 0.0, np.zeros(2))
    s = eq.offset / nrm2
    f0 = (a0 * s, a1 * s)
    v = (-a1, a0)  # perpendicular direction along the line
    lo, hi = -np.inf, np.inf
    for con in les:
        c0, c1 = float(con.normal[0]), float(con.normal[1])
        base = c0 * f0[0] + c1 * f0[1]
        slope = c0 * v[0] + c1 * v[1]
        room = con.offset - base
        if abs(slope) <= 1e-14:
            if room < -1e-11:
                return MinNormResult(INFEASIBLE)
            continue
        t = room / slope
        if slope > 0:
            hi = min(hi, t)
        else:
            lo = max(lo, t)
    if lo > hi + 1e-11:
        return MinNormResult(INFEASIBLE)
    t = min(max(0.0, lo), hi)
    f = np.array([f0[0] + t * v[0], f0[1] + t * v[1]])
    return MinNormResult(OPTIMAL, float(np.hypot(f[0], f[1])), f)


def _min_euclidean_subsets(eqs, les, dim, max_active) -> MinNormResult:
    """Exact projection of the origin by enumerating candidate active sets.

    Every primal-feasible candidate lies in the feasible region, and the true
    projection appears as the candidate of its own active set, so the
    feasible candidate of least norm is exact.
    """
    E = np.array([c.normal for c in eqs]).reshape(len(eqs), dim)
    e = np.array([c.offset for c in eqs])
    C = np.array([c.normal for c in les]).reshape(len(les), dim)
    d = np.array([c.offset for c in les])

    best = None
    best_norm = np.inf
    for k in range(max_active + 1):
        for subset in combinations(range(len(les)), k):
            M = np.vstack([E, C[list(subset)]]) if subset else E
            r = np.concatenate([e, d[list(subset)]]) if subset else e
            if M.shape[0] == 0:
                f = np.zeros(dim)
            else:
                f, *_ = np.linalg.lstsq(M, r, rcond=None)
                if np.max(np.abs(M @ f - r), initial=0.0) > 1e-8:
                    continue  # inconsistent system
            if E.size and np.max(np.abs(E @ f - e), initial=0.0) > 1e-9:
                continue
            if C.size and np.max(C @ f - d, initial=0.0) > 1e-9:
                continue
            nrm = float(np.linalg.norm(f))
            if nrm < best_norm - 1e-15:
                best_norm = nrm
                best = f
    if best is None:
        return MinNormResult(INFEASIBLE)
    return MinNormResult(OPTIMAL, best_norm, best)


def _feasible_point(poly: Polyhedron):
    """Phase-1 LP feasibility over the raw rows (free variables)."""
    res = lp_solve(
        LinearProgram(np.zeros(poly.dim), poly.constraints, poly.dim)
    )
    return res.x if res.status == OPTIMAL else None


def _min_lq_slsqp(q: float, poly: Polyhedron) -> MinNormResult:
    """Smooth lq dual (1 < q < inf): minimize ||f||_q^q over the polyhedron
    with SLSQP; exact feasibility is settled first by an LP."""
    eq_only = [c for c in poly.constraints if c.kind == EQ]
    if len(eq_only) == 1:
        # Hoelder gives the minimizer over the hyperplane in closed form;
        # if it also satisfies the LE rows it is the global optimum
        a = np.asarray(eq_only[0].normal, dtype=float)
        qp = q / (q - 1.0)
        denom = float(np.sum(np.abs(a) ** qp))
        if denom > 0.0:
            f_star = eq_only[0].offset * np.sign(a) * np.abs(a) ** (qp - 1.0) / denom
            feasible = all(
                float(c.normal @ f_star) <= c.offset + 1e-12
                for c in poly.constraints
                if c.kind == LE
            )
            if feasible:
                value = float(np.sum(np.abs(f_star) ** q) ** (1.0 / q))
                return MinNormResult(OPTIMAL, value, f_star, approximate=True)

    from scipy.optimize import minimize

    x0 = _feasible_point(poly)
    if x0 is None:
        return MinNormResult(INFEASIBLE)

    def fun(f):
        return float(np.sum(np.abs(f) ** q))

    def grad(f):
        return q * np.sign(f) * np.abs(f) ** (q - 1.0)

    eq_rows = [c for c in poly.constraints if c.kind == EQ]
    le_rows = [c for c in poly.constraints if c.kind == LE]
    cons = []
    if eq_rows:
        E = np.array([c.normal for c in eq_rows])
        e = np.array([c.offset for c in eq_rows])
        cons.append({"type": "eq", "fun": lambda f: E @ f - e, "jac": lambda f: E})
    if le_rows:
        C = np.array([c.normal for c in le_rows])
        d = np.array([c.offset for c in le_rows])
        cons.append({"type": "ineq", "fun": lambda f: d - C @ f, "jac": lambda f: -C})
    res = minimize(
        fun, x0, jac=grad, constraints=cons, method="SLSQP",
        options={"maxiter": 500, "ftol": 1e-14},
    )
    f = res.x
    value = float(np.sum(np.abs(f) ** q) ** (1.0 / q)) if np.any(f) else 0.0
    return MinNormResult(OPTIMAL, value, f, approximate=True)


# ---------------------------------------------------------------------------
# operator norms
# ---------------------------------------------------------------------------


def operator_norm(T, domain, codomain) -> float:
    """Norm of the linear map T between the two spaces.

    Polytope domains are exact (a convex max is attained at a vertex);
    l2 -> l2 uses power iteration on T'T.
    """
    T = np.asarray(T, dtype=float)
    if isinstance(domain, PolytopeSpace):
        return max(
            spaces.norm_eval(codomain, T @ v) for v in domain.vertices
        )
    if (
        isinstance(domain, LpSpace)
        and isinstance(codomain, LpSpace)
        and not is_inf(domain.p)
        and not is_inf(codomain.p)
        and domain.p == 2
        and codomain.p == 2
    ):
        return _largest_singular_value(T)
    raise UnsupportedNormPair(
        "operator_norm supports polytope domains or l2 -> l2"
    )


def _largest_singular_value(T: np.ndarray, rel_tol: float = 1e-10) -> float:
    G = T.T @ T
    n = G.shape[0]
    v = np.ones(n) / np.sqrt(n)
    lam = 0.0
    for _ in range(100000):
        w = G @ v
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return 0.0
        v = w / nw
        new_lam = float(v @ G @ v)
        if abs(new_lam - lam) <= rel_tol * max(1.0, abs(new_lam)):
            lam = new_lam
            break
        lam = new_lam
    return float(np.sqrt(max(lam, 0.0)))
