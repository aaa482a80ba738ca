"""Power iteration tests against the dense SVD oracle (numpy's LAPACK svd).

Singular triples are only defined up to a joint sign flip of (u, v), so
directions are compared through the rank-1 product u sigma v^T.
"""

import numpy as np
import pytest

from jacobifw.errors import NoConvergence, ZeroMatrix
from jacobifw.linalg import power_iteration, top_singular_values


def rank1(t):
    return t.sigma * np.outer(t.u, t.v)


class TestPowerIteration:
    def test_diagonal(self):
        t = power_iteration(np.diag([3.0, 1.0]))
        assert t.sigma == pytest.approx(3.0, rel=1e-10)
        np.testing.assert_allclose(rank1(t), np.diag([3.0, 0.0]), atol=1e-8)

    def test_rank_one(self):
        u0 = np.array([1.0, 2.0, -2.0])
        v0 = np.array([3.0, 4.0])
        M = np.outer(u0, v0)
        t = power_iteration(M)
        assert t.sigma == pytest.approx(np.linalg.norm(u0) * np.linalg.norm(v0),
                                        rel=1e-12)
        np.testing.assert_allclose(rank1(t), M, atol=1e-10)

    def test_unit_vectors(self):
        t = power_iteration(np.random.default_rng(0).standard_normal((6, 4)))
        assert np.linalg.norm(t.u) == pytest.approx(1.0, abs=1e-9)
        assert np.linalg.norm(t.v) == pytest.approx(1.0, abs=1e-9)
        assert t.sigma >= 0

    def test_against_svd_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            rows = int(rng.integers(2, 21))
            cols = int(rng.integers(2, 21))
            M = rng.standard_normal((rows, cols))
            sigma_true = np.linalg.svd(M, compute_uv=False)[0]
            t = power_iteration(M, tol=1e-12, seed=int(rng.integers(1000)))
            assert t.sigma == pytest.approx(sigma_true, rel=1e-6)

    def test_residual_contract(self):
        M = np.random.default_rng(2).standard_normal((15, 9))
        tol = 1e-11
        t = power_iteration(M, tol=tol)
        assert np.linalg.norm(M @ t.v - t.sigma * t.u) <= tol * t.sigma

    def test_deterministic(self):
        M = np.random.default_rng(3).standard_normal((8, 8))
        t1 = power_iteration(M, seed=7)
        t2 = power_iteration(M, seed=7)
        assert t1.sigma == t2.sigma
        np.testing.assert_array_equal(t1.u, t2.u)
        np.testing.assert_array_equal(t1.v, t2.v)

    def test_zero_matrix(self):
        with pytest.raises(ZeroMatrix):
            power_iteration(np.zeros((4, 3)))

    def test_no_convergence(self):
        M = np.random.default_rng(4).standard_normal((10, 10))
        with pytest.raises(NoConvergence):
            power_iteration(M, tol=1e-14, max_iters=1)

    def test_tall_and_wide(self):
        rng = np.random.default_rng(5)
        for shape in [(40, 3), (3, 40)]:
            M = rng.standard_normal(shape)
            sigma_true = np.linalg.svd(M, compute_uv=False)[0]
            assert power_iteration(M).sigma == pytest.approx(sigma_true, rel=1e-8)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            power_iteration(np.ones(3))
        with pytest.raises(ValueError):
            power_iteration(np.ones((2, 2)), tol=0.0)


class TestTopSingularValues:
    def test_full_deflation_recovers_spectrum(self):
        rng = np.random.default_rng(6)
        M = rng.standard_normal((9, 6))
        svals = np.linalg.svd(M, compute_uv=False)
        got = top_singular_values(M, count=6, tol=1e-11)
        np.testing.assert_allclose(got, svals, rtol=1e-6)

    def test_partial_sum_is_lower_bound(self):
        rng = np.random.default_rng(7)
        M = rng.standard_normal((30, 20))
        nuclear = np.sum(np.linalg.svd(M, compute_uv=False))
        partial = np.sum(top_singular_values(M, count=5))
        assert partial <= nuclear * (1 + 1e-9)

    def test_decreasing(self):
        M = np.random.default_rng(8).standard_normal((12, 12))
        vals = top_singular_values(M, count=6)
        assert np.all(np.diff(vals) <= 1e-9)
