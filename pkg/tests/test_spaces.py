import numpy as np
import pytest

from bsa.errors import BadExponent, DegenerateBall, NotSymmetric
from bsa.spaces import (
    INF,
    LpSpace,
    PolytopeSpace,
    conjugate_exponent,
    dual_norm_eval,
    norm_eval,
    polyhedral_approx,
    renorm_union,
    support_point,
    validate_space,
)

from conftest import random_polytope_space

CROSS2 = validate_space(PolytopeSpace([[1, 0], [-1, 0], [0, 1], [0, -1]]))
SQUARE2 = validate_space(PolytopeSpace([[1, 1], [1, -1], [-1, 1], [-1, -1]]))
HEXAGON = validate_space(
    PolytopeSpace(
        [
            [np.cos(k * np.pi / 3), np.sin(k * np.pi / 3)]
            for k in range(6)
        ]
    )
)


def test_lp_norm_closed_forms():
    x = np.array([3.0, -4.0])
    assert norm_eval(LpSpace(1.0, 2), x) == pytest.approx(7.0)
    assert norm_eval(LpSpace(2.0, 2), x) == pytest.approx(5.0)
    assert norm_eval(LpSpace(INF, 2), x) == pytest.approx(4.0)
    assert norm_eval(LpSpace(3.0, 2), x) == pytest.approx((27 + 64) ** (1 / 3))


def test_bad_exponent_rejected():
    with pytest.raises(BadExponent):
        LpSpace(0.5, 2)


def test_conjugate_exponent():
    assert conjugate_exponent(1.0) is INF
    assert conjugate_exponent(INF) == 1.0
    assert conjugate_exponent(2.0) == pytest.approx(2.0)
    assert conjugate_exponent(1.5) == pytest.approx(3.0)


def test_asymmetric_polytope_rejected():
    with pytest.raises(NotSymmetric):
        validate_space(PolytopeSpace([[1, 0], [0, 1], [-1, 0]]))


def test_flat_polytope_rejected():
    with pytest.raises(DegenerateBall):
        validate_space(PolytopeSpace([[1, 0], [-1, 0]]))


def test_validation_prunes_non_extreme_vertices():
    space = validate_space(
        PolytopeSpace([[1, 0], [-1, 0], [0, 1], [0, -1], [0.5, 0.5], [-0.5, -0.5]])
    )
    assert len(space.vertices) == 4


def test_polytope_vertices_have_norm_one():
    rng = np.random.default_rng(3)
    for _ in range(10):
        space = random_polytope_space(rng, 2)
        for v in space.vertices:
            assert norm_eval(space, np.array(v)) == pytest.approx(1.0, abs=1e-9)


def test_hexagon_gauge_value():
    # circumradius-1 hexagon: gauge from the edge normal at -30 degrees,
    # dual norm from the vertex at 60 degrees
    assert norm_eval(HEXAGON, np.array([1.0, -1.0])) == pytest.approx(
        1 + 1 / np.sqrt(3), rel=1e-9
    )
    assert dual_norm_eval(HEXAGON, np.array([1.0, 1.0])) == pytest.approx(
        0.5 + np.sqrt(3) / 2, rel=1e-9
    )


def test_lp_polytope_agreement_p1_pinf():
    rng = np.random.default_rng(0)
    cube3 = validate_space(
        PolytopeSpace([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)])
    )
    cross3 = validate_space(
        PolytopeSpace(np.vstack([np.eye(3), -np.eye(3)]))
    )
    for _ in range(50):
        x = rng.standard_normal(3)
        assert norm_eval(LpSpace(INF, 3), x) == pytest.approx(
            norm_eval(cube3, x), abs=1e-9
        )
        assert norm_eval(LpSpace(1.0, 3), x) == pytest.approx(
            norm_eval(cross3, x), abs=1e-9
        )


@pytest.mark.parametrize("space", [LpSpace(1.0, 3), LpSpace(2.0, 3),
                                   LpSpace(3.0, 3), LpSpace(INF, 3)])
def test_norm_axioms_random(space):
    rng = np.random.default_rng(7)
    for _ in range(50):
        x = rng.standard_normal(3)
        y = rng.standard_normal(3)
        a = rng.uniform(-3, 3)
        assert norm_eval(space, a * x) == pytest.approx(
            abs(a) * norm_eval(space, x), abs=1e-9
        )
        assert norm_eval(space, x + y) <= norm_eval(space, x) + norm_eval(space, y) + 1e-9


@pytest.mark.parametrize("space", [LpSpace(1.0, 3), LpSpace(1.5, 3), LpSpace(2.0, 3),
                                   LpSpace(4.0, 3), LpSpace(INF, 3),
                                   CROSS2, SQUARE2, HEXAGON])
def test_support_point_duality_consistency(space):
    rng = np.random.default_rng(11)
    for _ in range(25):
        f = rng.standard_normal(space.dim)
        sp = support_point(space, f)
        assert norm_eval(space, sp) == pytest.approx(1.0, abs=1e-9)
        assert float(f @ sp) == pytest.approx(dual_norm_eval(space, f), abs=1e-9)


def test_support_point_lowest_index_ties():
    sp = support_point(LpSpace(1.0, 3), np.array([2.0, 2.0, 1.0]))
    assert np.allclose(sp, [1.0, 0.0, 0.0])


def test_dual_norm_lp_pairs():
    rng = np.random.default_rng(5)
    for p, q in [(1.0, INF), (2.0, 2.0), (1.5, 3.0)]:
        for _ in range(20):
            f = rng.standard_normal(4)
            got = dual_norm_eval(LpSpace(p, 4), f)
            want = norm_eval(LpSpace(q, 4), f)
            assert got == pytest.approx(want, abs=1e-9)


def test_renorm_union_two_sided_bound():
    rng = np.random.default_rng(9)
    doubled = 2.0 * np.array(SQUARE2.vertices)
    union = renorm_union(SQUARE2, doubled)
    for _ in range(200):
        x = rng.standard_normal(2)
        base = norm_eval(SQUARE2, x)
        new = norm_eval(union, x)
        assert base / 2 - 1e-9 <= new <= base + 1e-9


def test_polyhedral_approx_exact_cases():
    approx = polyhedral_approx(LpSpace(1.0, 3), 10)
    assert approx.ratio_bound == pytest.approx(1.0, abs=1e-9)
    approx = polyhedral_approx(LpSpace(INF, 2), 10)
    assert approx.ratio_bound == pytest.approx(1.0, abs=1e-9)


def test_polyhedral_approx_euclidean_ratio():
    approx = polyhedral_approx(LpSpace(2.0, 2), 64)
    assert approx.ratio_bound >= 1.0 - 1e-12
    assert approx.ratio_bound < 1.01
    rng = np.random.default_rng(21)
    for _ in range(30):
        x = rng.standard_normal(2)
        inner = norm_eval(approx.space, x)
        exact = norm_eval(LpSpace(2.0, 2), x)
        assert exact - 1e-9 <= inner <= approx.ratio_bound * exact + 1e-9
