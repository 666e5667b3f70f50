"""Desk-scale extremal search and independent brute-force oracles.

The annealing searches only ever *report* what their witness certifies: every
returned configuration is re-certified through the exact margin machinery, so
a search cannot claim a constant its certificate does not carry.  The grid
oracle is deliberately independent of that machinery and provides guaranteed
lower bounds for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .certify import PointSet, certify_set, check_certificate
from .errors import BsaError, UnsupportedDimension
from .spaces import (
    LpSpace,
    PolytopeSpace,
    as_vector,
    conjugate_exponent,
    dual_norm_eval,
    is_inf,
    norm_eval,
)


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    restarts: int = 4
    iterations: int = 500
    initial_temperature: float = 0.3
    decay: float = 0.95
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.restarts < 1 or self.iterations < 1:
            raise BsaError("restarts and iterations must be positive")
        if not (0.0 < self.decay < 1.0):
            raise BsaError("decay must lie in (0, 1)")
        if self.initial_temperature <= 0 or self.tolerance <= 0:
            raise BsaError("temperature and tolerance must be positive")


def _dual_sphere_grid(space, grid: int) -> np.ndarray:
    """Deterministic sample of the dual unit sphere, one row per functional."""
    dim = space.dim
    if dim == 1:
        dirs = np.array([[1.0], [-1.0]])
    elif dim == 2:
        angles = 2.0 * np.pi * np.arange(grid) / grid
        dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    elif dim == 3:
        golden = (1.0 + math.sqrt(5.0)) / 2.0
        i = np.arange(grid * grid) + 0.5
        z = 1.0 - 2.0 * i / (grid * grid)
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        theta = 2.0 * np.pi * i / golden
        dirs = np.column_stack([r * np.cos(theta), r * np.sin(theta), z])
        dirs = np.vstack([dirs, -dirs])
    else:
        raise UnsupportedDimension("grid oracle supports dim <= 3")
    norms = _dual_norms(space, dirs)
    return dirs / norms[:, None]


def _dual_norms(space, rows: np.ndarray) -> np.ndarray:
    if isinstance(space, PolytopeSpace):
        return np.max(rows @ space.vertices.T, axis=1)
    q = conjugate_exponent(space.p)
    if is_inf(q):
        return np.max(np.abs(rows), axis=1)
    if q == 1:
        return np.sum(np.abs(rows), axis=1)
    return np.sum(np.abs(rows) ** q, axis=1) ** (1.0 / q)


def _grid_margins(point_set, F, y_index, x_index):
    """Objective of each direction, -inf where the order constraints fail."""
    values = F @ point_set.points.T  # (samples, points)
    fy = values[:, y_index]
    fx = values[:, x_index]
    feasible = (values.min(axis=1) >= fx - 1e-9) & (values.max(axis=1) <= fy + 1e-9)
    out = np.where(feasible, fy - fx, -np.inf)
    return out


def brute_force_margin(point_set: PointSet, y_index: int, x_index: int, grid: int) -> float:
    """Best f(y) - f(x) over unit-dual-norm directions satisfying the order
    constraints within 1e-9: a coarse deterministic sphere grid followed by
    local refinement around the best feasible direction.  Uses only function
    evaluations, so it stays an independent check on the exact margin
    program, and it is always a lower bound on the true optimum."""
    space = point_set.space
    F = _dual_sphere_grid(space, grid)
    vals = _grid_margins(point_set, F, y_index, x_index)
    k = int(np.argmax(vals))
    best = float(vals[k])
    if not np.isfinite(best):
        return 0.0
    if space.dim == 1:
        return best
    direction = F[k].copy()
    # refine: shrinking deterministic stencils in the tangent plane; the
    # optimum usually sits on the feasibility boundary between grid nodes
    if space.dim == 2:
        radius = 2.0 * np.pi / max(grid, 1)
        theta = float(np.arctan2(direction[1], direction[0]))
        for _ in range(10):
            angles = theta + np.linspace(-radius, radius, 31)
            cand = np.column_stack([np.cos(angles), np.sin(angles)])
            cand = cand / _dual_norms(space, cand)[:, None]
            vals = _grid_margins(point_set, cand, y_index, x_index)
            k = int(np.argmax(vals))
            if vals[k] > best:
                best = float(vals[k])
                theta = float(angles[k])
            radius *= 0.3
    else:
        # several coarse starts: feasibility holes can strand the single
        # best grid node away from the true optimum
        order = np.argsort(vals)[::-1][:5]
        starts = [F[t].copy() for t in order if np.isfinite(vals[t])]
        spacing = float(np.sqrt(4.0 * np.pi) / max(grid, 1))
        for direction in starts:
            local = -np.inf
            radius = 2.0 * spacing
            for _ in range(16):
                u = np.cross(direction, [1.0, 0.0, 0.0])
                if np.linalg.norm(u) < 1e-8:
                    u = np.cross(direction, [0.0, 1.0, 0.0])
                u /= np.linalg.norm(u)
                w = np.cross(direction, u)
                w /= np.linalg.norm(w)
                steps = np.linspace(-radius, radius, 13)
                offs = np.array([[a, b] for a in steps for b in steps])
                cand = direction + offs[:, :1] * u + offs[:, 1:] * w
                cand = cand / _dual_norms(space, cand)[:, None]
                cvals = _grid_margins(point_set, cand, y_index, x_index)
                k = int(np.argmax(cvals))
                if cvals[k] > local:
                    local = float(cvals[k])
                    direction = cand[k].copy()
                radius *= 0.5
            best = max(best, local)
    return best


def _unit(space, v: np.ndarray) -> np.ndarray:
    return v / norm_eval(space, v)


def greedy_separated(space, count: int, candidate_pool: int = 200, seed: int = 0) -> PointSet:
    """Farthest-point greedy packing of unit vectors: each new point is the
    pool candidate maximizing its minimum distance to the chosen set."""
    if count < 2:
        raise BsaError("need count >= 2")
    rng = np.random.default_rng(seed)
    chosen = [_unit(space, rng.standard_normal(space.dim))]
    while len(chosen) < count:
        best, best_sep = None, -1.0
        for _ in range(candidate_pool):
            cand = _unit(space, rng.standard_normal(space.dim))
            sep = min(norm_eval(space, cand - c) for c in chosen)
            if sep > best_sep:
                best, best_sep = cand, sep
        chosen.append(best)
    return PointSet(space, np.array(chosen))


def _anneal_once(space, count, config, rng, objective, stop_at=None):
    """One annealing restart over `count` unit vectors; returns the best
    configuration seen and its objective value."""
    # farthest-point start: a well-spread configuration gives the annealer a
    # nonzero margin signal to climb, where most random starts certify d = 0
    pts = np.array([_unit(space, rng.standard_normal(space.dim)) for _ in range(count)])
    if count > 2:
        chosen = [pts[0]]
        for _ in range(count - 1):
            cands = [_unit(space, rng.standard_normal(space.dim)) for _ in range(64)]
            seps = [
                min(norm_eval(space, c - p) for p in chosen) for c in cands
            ]
            chosen.append(cands[int(np.argmax(seps))])
        pts = np.array(chosen)
    while _too_close(space, pts):
        pts = np.array(
            [_unit(space, rng.standard_normal(space.dim)) for _ in range(count)]
        )
    current = objective(pts)
    best_pts, best_val = pts.copy(), current
    temp = config.initial_temperature
    for it in range(config.iterations):
        idx = int(rng.integers(count))
        proposal = pts.copy()
        move = rng.random()
        if move < 0.5 or count < 3:
            # plain Gaussian perturbation of one point
            step = rng.standard_normal(space.dim) * (temp * 0.5)
            cand = proposal[idx] + step
            if np.max(np.abs(cand)) == 0.0:
                continue
            proposal[idx] = _unit(space, cand)
        elif move < 0.75:
            # snap one point to the exact antipode of its nearest partner:
            # positive-margin configurations live on antipodally paired
            # manifolds that Gaussian steps alone hit with probability zero
            partner = _antipode_partner(pts, idx)
            proposal[idx] = -pts[partner]
        else:
            # perturb a point together with its exact antipode, preserving
            # the pairing while the configuration rotates
            step = rng.standard_normal(space.dim) * (temp * 0.5)
            cand = proposal[idx] + step
            if np.max(np.abs(cand)) == 0.0:
                continue
            proposal[idx] = _unit(space, cand)
            partner = _antipode_partner(pts, idx)
            proposal[partner] = -proposal[idx]
        if _too_close(space, proposal):
            continue
        val = objective(proposal)
        if val >= current or rng.random() < math.exp((val - current) / temp):
            pts, current = proposal, val
        if current > best_val:
            best_pts, best_val = pts.copy(), current
            if stop_at is not None and best_val > stop_at:
                break
        if (it + 1) % 100 == 0:
            temp *= config.decay
    return best_pts, best_val


def _antipode_partner(pts, idx) -> int:
    """Index of the point closest to -pts[idx] (Euclidean, ties to lowest)."""
    gaps = np.linalg.norm(pts + pts[idx], axis=1)
    gaps[idx] = np.inf
    return int(np.argmin(gaps))


def _too_close(space, pts) -> bool:
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if norm_eval(space, pts[i] - pts[j]) < 1e-9:
                return True
    return False


def _certified_d(space):
    def objective(pts):
        report, _ = certify_set(PointSet(space, pts))
        return report.d

    return objective


def anneal_bsa(space, count: int, config: SearchConfig):
    """Simulated annealing maximizing the certified margin constant d over
    configurations of `count` unit vectors; deterministic given the config."""
    if count < 2:
        raise BsaError("need count >= 2")
    objective = _certified_d(space)
    best_pts, best_val = None, -np.inf
    for r in range(config.restarts):
        rng = np.random.default_rng(config.seed + r)
        pts, val = _anneal_once(space, count, config, rng, objective)
        if val > best_val or (
            val == best_val and _lex_less(pts, best_pts)
        ):
            best_pts, best_val = pts, val
    point_set = PointSet(space, best_pts)
    report, cert = certify_set(point_set)
    return point_set, report, cert


def _lex_less(a, b) -> bool:
    if b is None:
        return True
    fa, fb = a.ravel(), b.ravel()
    for x, y in zip(fa, fb):
        if x != y:
            return x < y
    return False


def max_antipodal_search(space, cardinality: int, config: SearchConfig):
    """Look for an antipodal witness of the given size: annealing on the
    minimum pair margin, succeeding as soon as it clears the tolerance."""
    if cardinality < 2:
        raise BsaError("need cardinality >= 2")
    objective = _certified_d(space)
    best_pts, best_val = None, -np.inf
    for r in range(config.restarts):
        rng = np.random.default_rng(config.seed + r)
        pts, val = _anneal_once(
            space, cardinality, config, rng, objective, stop_at=config.tolerance
        )
        if val > best_val or (val == best_val and _lex_less(pts, best_pts)):
            best_pts, best_val = pts, val
        if best_val > config.tolerance:
            break
    if best_val > config.tolerance:
        return True, PointSet(space, best_pts)
    return False, None


def ka_lower_bound(space, max_count: int, config: SearchConfig):
    """Best certified d over annealing runs at every count in 2..max_count;
    the winning certificate is re-verified before being returned."""
    if max_count < 2:
        raise BsaError("need max_count >= 2")
    best = None
    for count in range(2, max_count + 1):
        point_set, report, cert = anneal_bsa(space, count, config)
        if best is None or report.d > best[0]:
            best = (report.d, point_set, report, cert)
    best_d, point_set, report, cert = best
    verdict = check_certificate(cert, 1e-7)
    if not verdict.valid:
        raise BsaError("search produced an uncertifiable witness")
    return best_d, cert, report
