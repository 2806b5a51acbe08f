import numpy as np
import pytest

from risrank.linalg import SvdConvergenceError, as_matrix, frobenius_norm, matmul, svd
import risrank.linalg as linalg


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def householder(rng, n):
    v = crandn(rng, n, 1)
    return np.eye(n) - 2 * (v @ v.conj().T) / np.vdot(v, v).real


def naive_matmul(a, b):
    out = [[0j] * len(b[0]) for _ in a]
    for i in range(len(a)):
        for j in range(len(b[0])):
            for k in range(len(b)):
                out[i][j] += a[i][k] * b[k][j]
    return np.array(out)


def faddeev_leverrier(a):
    """Characteristic polynomial coefficients of a square matrix, highest
    power first, without any eigen-solver."""
    n = a.shape[0]
    coeffs = [1.0 + 0j]
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ m) / k)
    return np.array(coeffs)


def oracle_singular_values(h):
    gram = h.conj().T @ h if h.shape[0] >= h.shape[1] else h @ h.conj().T
    poly = faddeev_leverrier(gram).real
    roots = np.roots(poly).real
    # Newton polish on the polynomial itself
    dpoly = np.polyder(poly)
    for _ in range(5):
        d = np.polyval(dpoly, roots)
        step = np.where(d != 0, np.polyval(poly, roots) / np.where(d != 0, d, 1), 0)
        roots = roots - step
    return np.sort(np.sqrt(np.clip(roots, 0, None)))[::-1]


class TestMatmul:
    def test_identity(self):
        b = np.array([[1 + 2j, 3], [4j, -1]])
        np.testing.assert_array_equal(matmul(np.eye(2), b), b)

    def test_j_squared(self):
        assert matmul([[1j]], [[1j]])[0, 0] == -1

    def test_against_triple_loop(self):
        rng = np.random.default_rng(1)
        a, b = crandn(rng, 3, 3), crandn(rng, 3, 3)
        np.testing.assert_allclose(matmul(a, b), naive_matmul(a.tolist(), b.tolist()), atol=1e-12)

    def test_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_as_matrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        as_matrix([[1.0, np.nan]])
    with pytest.raises(ValueError):
        as_matrix(np.zeros((0, 3)))


@pytest.mark.parametrize(
    "h, expected",
    [(np.eye(3), np.sqrt(3)), (np.zeros((3, 3)), 0.0), ([[3.0, 4.0]], 5.0)],
)
def test_frobenius(h, expected):
    assert frobenius_norm(h) == pytest.approx(expected, abs=1e-15)


class TestSvd:
    def test_diagonal(self):
        r = svd(np.diag([3.0, 2.0, 1.0]))
        np.testing.assert_allclose(r.singular_values, [3, 2, 1], atol=1e-15)

    def test_unsorted_diagonal_is_sorted(self):
        r = svd(np.diag([1.0, 3.0, 2.0]))
        np.testing.assert_allclose(r.singular_values, [3, 2, 1], atol=1e-15)
        np.testing.assert_allclose(r.reconstruct(), np.diag([1.0, 3.0, 2.0]), atol=1e-14)

    def test_zero_matrix(self):
        r = svd(np.zeros((3, 3)))
        np.testing.assert_array_equal(r.singular_values, [0, 0, 0])
        np.testing.assert_array_equal(r.left_vectors, np.eye(3))
        np.testing.assert_array_equal(r.right_vectors, np.eye(3))

    def test_ties_keep_column_order(self):
        r = svd(np.eye(3) * 2)
        np.testing.assert_array_equal(r.right_vectors, np.eye(3))

    @pytest.mark.parametrize("seed", range(20))
    def test_eigenvalue_oracle(self, seed):
        rng = np.random.default_rng(seed)
        h = crandn(rng, 3, 3)
        np.testing.assert_allclose(svd(h).singular_values, oracle_singular_values(h), atol=1e-8)

    def test_wide_and_tall(self):
        rng = np.random.default_rng(5)
        for shape in [(2, 3), (3, 2), (1, 3), (3, 1), (1, 1)]:
            h = crandn(rng, *shape)
            r = svd(h)
            k = min(shape)
            assert r.left_vectors.shape == (shape[0], k)
            assert r.right_vectors.shape == (shape[1], k)
            np.testing.assert_allclose(r.reconstruct(), h, atol=1e-12)
            np.testing.assert_allclose(r.singular_values, oracle_singular_values(h), atol=1e-8)

    def test_rank_deficient_bases_stay_orthonormal(self):
        rng = np.random.default_rng(3)
        u, v = crandn(rng, 3, 1), crandn(rng, 3, 1)
        h = u @ v.T
        r = svd(h)
        assert r.singular_values[1] == pytest.approx(0, abs=1e-12)
        for q in (r.left_vectors, r.right_vectors):
            np.testing.assert_allclose(q.conj().T @ q, np.eye(3), atol=1e-10)
        np.testing.assert_allclose(r.reconstruct(), h, atol=1e-12)

    def test_unitary_invariance(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            h = crandn(rng, 3, 3)
            q = householder(rng, 3)
            np.testing.assert_allclose(
                svd(q.conj().T @ h).singular_values, svd(h).singular_values, atol=1e-9
            )

    def test_scalar_homogeneity(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            h = crandn(rng, 3, 2)
            c = complex(*rng.standard_normal(2))
            q = svd(h).singular_values
            np.testing.assert_allclose(svd(c * h).singular_values, abs(c) * q, rtol=1e-10)

    def test_energy_identity(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            h = crandn(rng, 3, 3)
            q = svd(h).singular_values
            assert np.sum(q**2) == pytest.approx(frobenius_norm(h) ** 2, rel=1e-10)

    def test_nonconvergence_reports_residual(self, monkeypatch):
        monkeypatch.setattr(linalg, "MAX_SWEEPS", 1)
        rng = np.random.default_rng(0)
        with pytest.raises(SvdConvergenceError) as err:
            svd(crandn(rng, 3, 3))
        assert err.value.residual > 0
