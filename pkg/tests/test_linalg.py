import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfisher.linalg import (
    LinalgError,
    dagger,
    hermitian_eig,
    infinity_norm_psd,
    kron,
    max_entangled_vector,
    partial_trace,
    support_pinv,
)

SQ2 = np.sqrt(0.5)


def random_hermitian(rng, d):
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (x + x.conj().T) / 2


def gadc_choi_05_02():
    g, n = 0.5, 0.2
    c = np.sqrt(1 - g)
    return np.array(
        [
            [1 - g * n, 0, 0, c],
            [0, g * n, 0, 0],
            [0, 0, g * (1 - n), 0],
            [c, 0, 0, 1 - g * (1 - n)],
        ],
        dtype=complex,
    )


class TestHermitianEig:
    def test_diagonal(self):
        spec = hermitian_eig(np.diag([0.25, 0.75]).astype(complex))
        np.testing.assert_allclose(spec.eigenvalues, [0.25, 0.75])
        np.testing.assert_allclose(np.abs(spec.eigenvectors), np.eye(2), atol=1e-14)

    def test_pauli_x(self):
        spec = hermitian_eig(np.array([[0, 1], [1, 0]], dtype=complex))
        np.testing.assert_allclose(spec.eigenvalues, [-1.0, 1.0])

    def test_reconstruction(self):
        rng = np.random.default_rng(3)
        h = random_hermitian(rng, 4)
        spec = hermitian_eig(h)
        assert np.linalg.norm(spec.reconstruct() - h) <= 1e-10 * np.linalg.norm(h)
        v = spec.eigenvectors
        np.testing.assert_allclose(dagger(v) @ v, np.eye(4), atol=1e-10)

    def test_rejects_non_square(self):
        with pytest.raises(LinalgError, match="square"):
            hermitian_eig(np.zeros((2, 3)))

    def test_rejects_non_hermitian_with_residual(self):
        m = np.array([[0, 1], [0, 0]], dtype=complex)
        with pytest.raises(LinalgError, match="residual"):
            hermitian_eig(m)


class TestSupportPinv:
    def test_rank_one_diagonal(self):
        pinv, proj, kern = support_pinv(np.diag([0.5, 0.0]).astype(complex))
        np.testing.assert_allclose(pinv, np.diag([2.0, 0.0]), atol=1e-14)
        np.testing.assert_allclose(kern, np.diag([0.0, 1.0]), atol=1e-14)
        np.testing.assert_allclose(proj + kern, np.eye(2), atol=1e-14)

    def test_full_rank_matches_inverse(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        rho = x @ dagger(x) + 0.1 * np.eye(3)
        pinv, _, kern = support_pinv(rho)
        np.testing.assert_allclose(pinv, np.linalg.inv(rho), atol=1e-10)
        np.testing.assert_allclose(kern, np.zeros((3, 3)), atol=1e-12)

    def test_gadc_choi_corner_block(self):
        # corner block of the inverse: det [[0.9, s],[s, 0.6]] = 0.04 with s = sqrt(0.5)
        pinv, _, _ = support_pinv(gadc_choi_05_02())
        np.testing.assert_allclose(pinv[0, 0], 15.0, atol=1e-10)
        np.testing.assert_allclose(pinv[3, 3], 22.5, atol=1e-10)
        np.testing.assert_allclose(pinv[0, 3], -np.sqrt(0.5) / 0.04, atol=1e-10)
        np.testing.assert_allclose(pinv[1, 1], 10.0, atol=1e-10)
        np.testing.assert_allclose(pinv[2, 2], 2.5, atol=1e-10)

    def test_pinv_consistency(self):
        pinv, _, _ = support_pinv(gadc_choi_05_02())
        g = gadc_choi_05_02()
        np.testing.assert_allclose(pinv @ g @ pinv, pinv, atol=1e-9)

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(LinalgError, match="not PSD"):
            support_pinv(np.diag([1.0, -0.5]).astype(complex))

    def test_double_pinv_reconstructs_on_support(self):
        rng = np.random.default_rng(11)
        rho = np.diag([0.6, 0.4, 0.0]).astype(complex)
        u, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
        rho = u @ rho @ dagger(u)
        pinv, proj, _ = support_pinv(rho)
        pinv2, _, _ = support_pinv(pinv)
        np.testing.assert_allclose(pinv2, proj @ rho @ proj, atol=1e-9)


class TestPartialTrace:
    def test_max_entangled_marginal(self):
        v = max_entangled_vector(2)
        rho = np.outer(v, v.conj())
        np.testing.assert_allclose(partial_trace(rho, (2, 2), "second"), np.eye(2), atol=1e-14)

    def test_gadc_choi_marginal(self):
        got = partial_trace(gadc_choi_05_02(), (2, 2), "second")
        np.testing.assert_allclose(got, np.eye(2), atol=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000), da=st.integers(2, 4), db=st.integers(2, 4))
    def test_tensor_factor_oracle(self, seed, da, db):
        rng = np.random.default_rng(seed)
        a = random_hermitian(rng, da)
        b = random_hermitian(rng, db)
        np.testing.assert_allclose(
            partial_trace(kron(a, b), (da, db), "second"), a * np.trace(b), atol=1e-12
        )
        np.testing.assert_allclose(
            partial_trace(kron(a, b), (da, db), "first"), b * np.trace(a), atol=1e-12
        )

    def test_dimension_mismatch(self):
        with pytest.raises(LinalgError, match="mismatch"):
            partial_trace(np.eye(6), (2, 2), "second")


class TestMaxEntangled:
    def test_d2(self):
        np.testing.assert_allclose(max_entangled_vector(2), [1, 0, 0, 1])

    def test_norm_squared(self):
        for d in (1, 2, 5):
            assert abs(np.vdot(max_entangled_vector(d), max_entangled_vector(d)) - d) < 1e-14

    def test_trace_identity(self):
        rng = np.random.default_rng(7)
        k = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        v = max_entangled_vector(3)
        got = np.vdot(v, kron(k, np.eye(3)) @ v)
        np.testing.assert_allclose(got, np.trace(k), atol=1e-12)

    def test_transpose_trick_sigma_x(self):
        v = max_entangled_vector(2)
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        np.testing.assert_allclose(kron(np.eye(2), sx) @ v, kron(sx.T, np.eye(2)) @ v)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000), d=st.integers(2, 5))
    def test_transpose_trick_random(self, seed, d):
        rng = np.random.default_rng(seed)
        m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        v = max_entangled_vector(d)
        np.testing.assert_allclose(
            kron(np.eye(d), m) @ v, kron(m.T, np.eye(d)) @ v, atol=1e-12
        )

    def test_rejects_zero_dimension(self):
        with pytest.raises(LinalgError):
            max_entangled_vector(0)


def test_infinity_norm_cross_check():
    rng = np.random.default_rng(13)
    for _ in range(20):
        x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = x @ dagger(x)
        assert abs(infinity_norm_psd(rho) - np.linalg.norm(rho, 2)) <= 1e-12 * np.linalg.norm(rho, 2)
