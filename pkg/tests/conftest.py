import numpy as np
import pytest

from bsa.certify import PointSet
from bsa.spaces import PolytopeSpace, norm_eval, validate_space


def random_polytope_space(rng, dim, vertex_pairs=5):
    """Symmetric polytope ball from random directions; retries until the
    vertex set spans the space."""
    while True:
        raw = rng.standard_normal((vertex_pairs, dim))
        raw = raw[np.linalg.norm(raw, axis=1) > 1e-6]
        verts = np.vstack([raw, -raw])
        if np.linalg.matrix_rank(verts) == dim:
            return validate_space(PolytopeSpace(verts))


def random_point_set(space, rng, count, scale=1.0):
    """Distinct points with norm at most `scale` in the given space."""
    pts = []
    while len(pts) < count:
        v = rng.standard_normal(space.dim)
        nrm = norm_eval(space, v)
        if nrm < 1e-9:
            continue
        v = v / nrm * scale * rng.uniform(0.3, 1.0)
        if any(norm_eval(space, v - q) < 1e-6 for q in pts):
            continue
        pts.append(v)
    return PointSet(space, np.array(pts))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
