import numpy as np
import pytest

from bsa.certify import check_certificate, pair_margin, separation
from bsa.errors import BsaError
from bsa.search import (
    SearchConfig,
    anneal_bsa,
    brute_force_margin,
    greedy_separated,
    ka_lower_bound,
    max_antipodal_search,
)
from bsa.spaces import LpSpace, PolytopeSpace, validate_space

from conftest import random_point_set, random_polytope_space

SMALL = SearchConfig(seed=0, restarts=2, iterations=300)


def test_config_validation():
    with pytest.raises(BsaError):
        SearchConfig(restarts=0)
    with pytest.raises(BsaError):
        SearchConfig(decay=1.5)


def test_brute_force_never_beats_exact_margin():
    rng = np.random.default_rng(1)
    for _ in range(10):
        space = random_polytope_space(rng, 2)
        ps = random_point_set(space, rng, 4)
        for i, j in ps.pairs():
            exact = max(
                pair_margin(ps, j, i).margin, pair_margin(ps, i, j).margin
            )
            grid = max(
                brute_force_margin(ps, j, i, 360),
                brute_force_margin(ps, i, j, 360),
            )
            assert grid <= exact + 1e-7


def test_brute_force_gap_shrinks_with_grid():
    rng = np.random.default_rng(2)
    gaps = {90: 0.0, 180: 0.0, 360: 0.0}
    for _ in range(10):
        ps = random_point_set(LpSpace(2.0, 2), rng, 3)
        for i, j in ps.pairs():
            exact = max(
                pair_margin(ps, j, i).margin, pair_margin(ps, i, j).margin
            )
            for g in gaps:
                approx = max(
                    brute_force_margin(ps, j, i, g),
                    brute_force_margin(ps, i, j, g),
                )
                gaps[g] += exact - approx
    assert gaps[360] <= gaps[180] + 1e-12
    assert gaps[180] <= gaps[90] + 1e-12


def test_greedy_separated():
    ps = greedy_separated(LpSpace(2.0, 2), 4, seed=5)
    assert ps.points.shape == (4, 2)
    assert separation(ps) > 0.5


def test_anneal_determinism():
    a = anneal_bsa(LpSpace(2.0, 2), 3, SMALL)
    b = anneal_bsa(LpSpace(2.0, 2), 3, SMALL)
    assert np.array_equal(a[0].points, b[0].points)
    assert a[1].d == b[1].d


def test_anneal_best_nondecreasing_in_iterations():
    short = anneal_bsa(
        LpSpace(2.0, 2), 3, SearchConfig(seed=4, restarts=1, iterations=100)
    )
    longer = anneal_bsa(
        LpSpace(2.0, 2), 3, SearchConfig(seed=4, restarts=1, iterations=400)
    )
    assert longer[1].d >= short[1].d - 1e-12


def test_anneal_witness_recertifies():
    point_set, report, cert = anneal_bsa(LpSpace(2.0, 2), 3, SMALL)
    assert check_certificate(cert, 1e-7).valid
    assert report.d > 0


def test_antipodal_search_finds_diamond():
    found, witness = max_antipodal_search(
        LpSpace(2.0, 2), 4, SearchConfig(seed=0, restarts=2, iterations=400)
    )
    assert found
    assert witness.points.shape == (4, 2)


def test_ka_lower_bound_l2_square():
    best_d, cert, report = ka_lower_bound(
        LpSpace(2.0, 2), 2, SearchConfig(seed=0, restarts=2, iterations=300)
    )
    # a pair of antipodes reaches margin 2
    assert best_d == pytest.approx(2.0, abs=1e-2)
    assert check_certificate(cert, 1e-7).valid


def test_brute_force_dim3():
    cross = validate_space(
        PolytopeSpace(np.vstack([np.eye(3), -np.eye(3)]))
    )
    rng = np.random.default_rng(9)
    ps = random_point_set(cross, rng, 3)
    for i, j in ps.pairs():
        exact = max(pair_margin(ps, j, i).margin, pair_margin(ps, i, j).margin)
        grid = max(
            brute_force_margin(ps, j, i, 300),
            brute_force_margin(ps, i, j, 300),
        )
        assert grid <= exact + 1e-7
        assert abs(exact - grid) <= 1e-2
