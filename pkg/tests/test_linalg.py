import numpy as np
import pytest

from passivemor.errors import RankDeficiencyError, SingularOperatorError
from passivemor.linalg import (
    eig,
    pivoted_cholesky,
    pivoted_cholesky_partial,
    singular_values,
    solve_lyapunov,
    symmetric_eig,
)

SQRT2 = np.sqrt(2.0)


class TestEig:
    def test_diagonal(self):
        pairs = eig([[2.0, 0.0], [0.0, 3.0]])
        assert [p.value for p in pairs] == [2.0, 3.0]
        np.testing.assert_allclose(np.abs(pairs[0].vector), [1.0, 0.0], atol=1e-14)
        np.testing.assert_allclose(np.abs(pairs[1].vector), [0.0, 1.0], atol=1e-14)

    def test_rotation_matrix_conjugate_pair(self):
        pairs = eig([[0.0, -1.0], [1.0, 0.0]])
        values = sorted((p.value for p in pairs), key=lambda z: z.imag)
        np.testing.assert_allclose(values, [-1j, 1j], atol=1e-14)

    def test_hand_derived_pm_sqrt2(self):
        # characteristic polynomial of [[-1.5, -0.5], [0.5, 1.5]] is l^2 - 2
        pairs = eig([[-1.5, -0.5], [0.5, 1.5]])
        np.testing.assert_allclose([p.value for p in pairs], [-SQRT2, SQRT2], atol=1e-14)

    def test_unit_norm_vectors(self):
        rng = np.random.default_rng(1)
        m = rng.standard_normal((7, 7))
        for p in eig(m):
            assert abs(np.linalg.norm(p.vector) - 1.0) <= 1e-12

    def test_residual_bound(self):
        rng = np.random.default_rng(2)
        m = rng.standard_normal((12, 12))
        scale = np.linalg.norm(m, 2)
        for p in eig(m):
            assert np.linalg.norm(m @ p.vector - p.value * p.vector) <= 1e-10 * scale

    @pytest.mark.parametrize("seed", range(10))
    def test_conjugation_closure(self, seed):
        rng = np.random.default_rng(seed)
        m = rng.standard_normal((9, 9))
        values = np.array([p.value for p in eig(m)])
        conj = np.sort_complex(values.conj())
        np.testing.assert_allclose(np.sort_complex(values), conj, atol=1e-9)

    def test_deterministic_ordering(self):
        rng = np.random.default_rng(3)
        m = rng.standard_normal((8, 8))
        values = [p.value for p in eig(m)]
        assert values == sorted(values, key=lambda z: (z.real, z.imag))

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            eig(np.ones((2, 3)))


class TestSymmetricEig:
    def test_identity(self):
        w, q = symmetric_eig(np.eye(4))
        np.testing.assert_allclose(w, np.ones(4))
        np.testing.assert_allclose(q.T @ q, np.eye(4), atol=1e-12)

    def test_scaled_identity_min(self):
        w, _ = symmetric_eig([[2.0, 0.0], [0.0, 2.0]])
        assert w[0] == pytest.approx(2.0)

    def test_hand_derived_min(self):
        # eigenvalues of [[4, 2], [2, 3]] solve l^2 - 7l + 8 = 0
        w, _ = symmetric_eig([[4.0, 2.0], [2.0, 3.0]])
        assert w[0] == pytest.approx((7.0 - np.sqrt(17.0)) / 2.0, abs=1e-12)

    def test_ascending_and_reconstruction(self):
        rng = np.random.default_rng(4)
        a = rng.standard_normal((10, 10))
        s = (a + a.T) / 2.0
        w, q = symmetric_eig(s)
        assert np.all(np.diff(w) >= 0)
        np.testing.assert_allclose(q @ np.diag(w) @ q.T, s, atol=1e-12 * np.linalg.norm(s, 2))

    def test_matches_general_eig(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((8, 8))
        s = (a + a.T) / 2.0
        w, _ = symmetric_eig(s)
        general = np.array(sorted(p.value.real for p in eig(s)))
        np.testing.assert_allclose(w, general, atol=1e-10 * max(1.0, np.linalg.norm(s, 2)))

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError, match="asymmetry"):
            symmetric_eig([[1.0, 2.0], [0.0, 1.0]])


class TestSolveLyapunov:
    def test_scalar(self):
        np.testing.assert_allclose(solve_lyapunov([[-1.0]], [[2.0]]), [[1.0]])
        np.testing.assert_allclose(solve_lyapunov([[-1.0]], [[1.0]]), [[0.5]])

    def test_random_stable_residual(self):
        rng = np.random.default_rng(6)
        a = rng.standard_normal((5, 5)) - 5.0 * np.eye(5)
        qsym = rng.standard_normal((5, 5))
        q = qsym + qsym.T
        x = solve_lyapunov(a, q)
        res = np.linalg.norm(a @ x + x @ a.T + q, 2)
        bound = 1e-9 * (np.linalg.norm(a, 2) * np.linalg.norm(x, 2) + np.linalg.norm(q, 2))
        assert res <= bound
        np.testing.assert_allclose(x, x.T)

    def test_bulk_random_instances(self):
        # contract holds across many sizes and conditionings
        rng = np.random.default_rng(7)
        for _ in range(1000):
            n = int(rng.integers(1, 51))
            a = rng.standard_normal((n, n)) - (1.0 + n) * np.eye(n)
            qs = rng.standard_normal((n, n))
            q = qs + qs.T
            x = solve_lyapunov(a, q)
            res = np.linalg.norm(a @ x + x @ a.T + q, 2)
            bound = 1e-9 * (np.linalg.norm(a, 2) * np.linalg.norm(x, 2) + np.linalg.norm(q, 2))
            assert res <= max(bound, 1e-300)

    def test_singular_operator(self):
        with pytest.raises(SingularOperatorError):
            solve_lyapunov(np.diag([1.0, -1.0]), np.eye(2))


class TestPivotedCholesky:
    def test_diagonal_pivot_order(self):
        perm, lower = pivoted_cholesky(np.diag([1.0, 4.0, 9.0]))
        assert list(perm) == [2, 1, 0]
        np.testing.assert_allclose(lower, np.diag([3.0, 2.0, 1.0]))

    def test_identity(self):
        perm, lower = pivoted_cholesky(np.eye(3))
        assert list(perm) == [0, 1, 2]
        np.testing.assert_allclose(lower, np.eye(3))

    def test_hand_elimination(self):
        perm, lower = pivoted_cholesky([[4.0, 2.0], [2.0, 3.0]])
        assert list(perm) == [0, 1]
        np.testing.assert_allclose(lower, [[2.0, 0.0], [1.0, np.sqrt(2.0)]])

    def test_diag_nonincreasing(self):
        rng = np.random.default_rng(8)
        f = rng.standard_normal((30, 30))
        perm, lower = pivoted_cholesky(f @ f.T + 0.1 * np.eye(30))
        d = np.diag(lower)
        assert np.all(np.diff(d) <= 1e-14)

    @pytest.mark.parametrize("n", [5, 50, 200, 400])
    def test_reconstruction(self, n):
        rng = np.random.default_rng(n)
        f = rng.standard_normal((n, n))
        m = f @ f.T + 1e-3 * np.eye(n)
        perm, lower = pivoted_cholesky(m)
        err = np.linalg.norm(m[np.ix_(perm, perm)] - lower @ lower.T, 2)
        assert err <= 1e-10 * np.linalg.norm(m, 2)

    def test_rank_deficiency_reported(self):
        f = np.array([[1.0], [2.0], [3.0]])
        with pytest.raises(RankDeficiencyError) as info:
            pivoted_cholesky(f @ f.T)
        assert info.value.rank == 1

    def test_partial_rank(self):
        f = np.random.default_rng(9).standard_normal((6, 3))
        perm, lower, rank = pivoted_cholesky_partial(f @ f.T)
        assert rank == 3
        m = (f @ f.T)[np.ix_(perm, perm)]
        np.testing.assert_allclose(
            m[:rank, :rank], lower[:rank, :rank] @ lower[:rank, :rank].T, atol=1e-10
        )

    def test_indefinite_rejected(self):
        with pytest.raises(RankDeficiencyError):
            pivoted_cholesky(np.diag([1.0, -1.0]))


class TestSingularValues:
    def test_identity(self):
        np.testing.assert_allclose(singular_values(np.eye(2)), [1.0, 1.0])

    def test_rank_one(self):
        np.testing.assert_allclose(singular_values([[3.0, 0.0], [0.0, 0.0]]), [3.0, 0.0])

    def test_antidiagonal(self):
        np.testing.assert_allclose(singular_values([[0.0, 2.0], [1.0, 0.0]]), [2.0, 1.0])

    def test_descending_and_matches_gram_eigenvalues(self):
        rng = np.random.default_rng(10)
        m = rng.standard_normal((6, 4))
        sv = singular_values(m)
        assert np.all(np.diff(sv) <= 0)
        gram_eigs = np.sort(np.linalg.eigvalsh(m.T @ m))[::-1]
        np.testing.assert_allclose(sv**2, gram_eigs, atol=1e-10)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            singular_values([[np.nan, 0.0]])
