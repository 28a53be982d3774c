import math

import numpy as np
import pytest

from qfisher.ensembles import random_density, random_state_family
from qfisher.fisher_state import (
    FisherValue,
    check_weight_matrix,
    classical_fisher,
    cq_fisher_decomposition,
    cq_state_family,
    rld_fisher,
    rld_matrix,
    rld_value,
    root_sld_witness,
    sld_fisher,
    sld_matrix,
    sld_operator,
    smoothed_fisher,
)
from qfisher.families import StateFamily
from qfisher.linalg import dagger, kron


def diag_family():
    return StateFamily.from_scalar(
        2,
        lambda t: np.diag([t, 1 - t]).astype(complex),
        deriv=lambda t: np.diag([1.0, -1.0]).astype(complex),
    )


def rotation_family():
    def eval_(t):
        v = np.array([math.cos(t), math.sin(t)], dtype=complex)
        return np.outer(v, v.conj())

    return StateFamily.from_scalar(2, eval_)


def spectral_sum_oracle(rho, drho, cutoff=1e-12):
    """Independent brute-force evaluation of the SLD spectral sum."""
    lam, vecs = np.linalg.eigh(rho)
    total = 0.0
    for j in range(len(lam)):
        for k in range(len(lam)):
            s = lam[j] + lam[k]
            if s > cutoff:
                amp = vecs[:, j].conj() @ drho @ vecs[:, k]
                total += 2 * abs(amp) ** 2 / s
    return total


class TestClassicalFisher:
    def test_bernoulli_half(self):
        fv = classical_fisher(lambda t: np.array([t, 1 - t]), 0.5, deriv=lambda t: np.array([1.0, -1.0]))
        assert fv.finite
        np.testing.assert_allclose(fv.value, 4.0, atol=1e-12)

    def test_constant_distribution(self):
        fv = classical_fisher(lambda t: np.array([0.3, 0.7]), 0.2)
        assert fv.value == 0.0

    def test_support_leaving_is_infinite(self):
        fv = classical_fisher(
            lambda t: np.array([1.0, 0.0]), 0.0, deriv=lambda t: np.array([-1.0, 1.0])
        )
        assert not fv.finite
        assert math.isinf(fv.value)
        assert fv.support_residual > 0.1

    def test_negative_probability_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            classical_fisher(lambda t: np.array([1.2, -0.2]), 0.0)

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError, match="sum"):
            classical_fisher(lambda t: np.array([0.5, 0.4]), 0.0)


class TestSldFisher:
    def test_diag_quarter(self):
        fv = sld_fisher(diag_family(), 0.25)
        np.testing.assert_allclose(fv.value, 16.0 / 3, atol=1e-10)

    @pytest.mark.parametrize("theta", [0.1, 0.4, 1.0])
    def test_pure_rotation_is_four(self, theta):
        fv = sld_fisher(rotation_family(), theta)
        np.testing.assert_allclose(fv.value, 4.0, atol=1e-8)
        # brute-force spectral sum agrees
        fam = rotation_family()
        oracle = spectral_sum_oracle(fam.state(theta), fam.derivative(theta))
        np.testing.assert_allclose(fv.value, oracle, atol=1e-8)

    def test_constant_family_zero(self):
        fam = StateFamily.constant(random_density(np.random.default_rng(0), 3))
        assert sld_fisher(fam, 0.7).value == 0.0


class TestRldFisher:
    def test_diag_quarter(self):
        np.testing.assert_allclose(rld_fisher(diag_family(), 0.25).value, 16.0 / 3, atol=1e-10)

    def test_pure_family_infinite(self):
        fv = rld_fisher(rotation_family(), 0.3)
        assert not fv.finite
        assert math.isinf(fv.value)
        assert fv.support_residual > 1e-3

    def test_sld_below_rld_on_random_families(self):
        for i in range(25):
            rng = np.random.default_rng(100 + i)
            fam = random_state_family(rng, 3)
            t = float(rng.uniform(-0.5, 0.5))
            assert sld_fisher(fam, t).value <= rld_fisher(fam, t).value + 1e-9


class TestSmoothing:
    def test_sequence_approaches_base(self):
        base = 16.0 / 3
        devs = [abs(smoothed_fisher(diag_family(), 0.25, e, "sld").value - base) for e in (1e-2, 1e-4, 1e-6)]
        assert devs[0] > devs[1] > devs[2]

    def test_constant_family_any_eps(self):
        fam = StateFamily.constant(np.diag([0.4, 0.6]).astype(complex))
        assert smoothed_fisher(fam, 0.0, 1e-3, "rld").value == 0.0

    def test_pure_rld_divergence(self):
        value = smoothed_fisher(rotation_family(), 0.2, 1e-7, "rld").value
        assert value > 1e6

    def test_eps_out_of_range(self):
        with pytest.raises(ValueError):
            smoothed_fisher(diag_family(), 0.25, 0.0, "sld")


class TestRootSldWitness:
    def test_zero_witness(self):
        assert root_sld_witness(diag_family(), 0.25, np.zeros((2, 2))) == 0.0

    def test_achieving_witness(self):
        fam = diag_family()
        theta = 0.25
        fisher = sld_fisher(fam, theta).value
        ell = sld_operator(fam, theta)
        witness = ell / math.sqrt(2 * fisher)
        got = root_sld_witness(fam, theta, witness)
        np.testing.assert_allclose(got, math.sqrt(fisher), atol=1e-8)

    def test_random_feasible_dominated(self):
        fam = diag_family()
        theta = 0.25
        bound = math.sqrt(sld_fisher(fam, theta).value)
        rho = fam.state(theta)
        rng = np.random.default_rng(17)
        for _ in range(1000):
            x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            scale = np.trace((x @ dagger(x) + dagger(x) @ x) @ rho).real
            x /= math.sqrt(scale) * (1 + 1e-9)
            assert root_sld_witness(fam, theta, x) <= bound + 1e-8

    def test_infeasible_rejected(self):
        with pytest.raises(ValueError, match="constraint"):
            root_sld_witness(diag_family(), 0.25, 10 * np.eye(2))


class TestCqDecomposition:
    def test_constant_distribution_single_conditional(self):
        fam = diag_family()
        dec = cq_fisher_decomposition(lambda t: np.array([1.0]), [fam], 0.25, "sld")
        np.testing.assert_allclose(dec.total, 16.0 / 3, atol=1e-10)
        assert dec.classical_part == 0.0

    def test_bernoulli_with_constant_conditionals(self):
        conds = [
            StateFamily.constant(np.diag([0.5, 0.5]).astype(complex)),
            StateFamily.constant(np.diag([0.9, 0.1]).astype(complex)),
        ]
        theta = 0.3
        dec = cq_fisher_decomposition(
            lambda t: np.array([t, 1 - t]), conds, theta, "sld",
            p_deriv=lambda t: np.array([1.0, -1.0]),
        )
        np.testing.assert_allclose(dec.total, 1 / (theta * (1 - theta)), atol=1e-10)

    @pytest.mark.parametrize("kind", ["sld", "rld"])
    def test_two_path_equality(self, kind):
        rng = np.random.default_rng(23)
        conds = [random_state_family(rng, 2) for _ in range(2)]

        def p_family(t):
            q = 0.6 + 0.2 * math.tanh(t)
            return np.array([q, 1 - q])

        theta = 0.15
        dec = cq_fisher_decomposition(p_family, conds, theta, kind)
        assembled = cq_state_family(p_family, conds)
        fisher = sld_fisher if kind == "sld" else rld_fisher
        np.testing.assert_allclose(dec.total, fisher(assembled, theta).value, atol=1e-8)

    def test_alphabet_mismatch(self):
        with pytest.raises(ValueError, match="alphabet"):
            cq_fisher_decomposition(lambda t: np.array([0.5, 0.5]), [diag_family()], 0.2)


def qutrit_classical_family():
    def eval_(theta):
        a, b = float(theta[0]), float(theta[1])
        return np.diag([a, b, 1 - a - b]).astype(complex)

    def deriv(theta, index):
        return np.diag([1.0, 0.0, -1.0]).astype(complex) if index == 0 else np.diag(
            [0.0, 1.0, -1.0]
        ).astype(complex)

    return StateFamily(dim=3, eval=eval_, deriv=deriv)


def product_two_parameter_family(seed=29):
    rng = np.random.default_rng(seed)
    fam_a = random_state_family(rng, 2)
    fam_b = random_state_family(rng, 2)

    def eval_(theta):
        return kron(fam_a.eval(theta[:1]), fam_b.eval(theta[1:]))

    return fam_a, fam_b, StateFamily(dim=4, eval=eval_)


class TestRldMatrix:
    def test_single_parameter_consistency(self):
        fam = diag_family()
        mat = rld_matrix(fam, [0.25])
        np.testing.assert_allclose(mat.matrix[0, 0].real, rld_fisher(fam, 0.25).value, atol=1e-10)

    def test_product_family_block_diagonal(self):
        _, _, joint = product_two_parameter_family()
        mat = rld_matrix(joint, [0.1, -0.2])
        assert abs(mat.matrix[0, 1]) < 1e-10

    def test_qutrit_matches_multinomial(self):
        theta = np.array([0.3, 0.25])
        mat = rld_matrix(qutrit_classical_family(), theta)
        p = np.array([0.3, 0.25, 0.45])
        grads = [np.array([1.0, 0, -1.0]), np.array([0, 1.0, -1.0])]
        expect = np.array([[np.sum(g1 * g2 / p) for g2 in grads] for g1 in grads])
        np.testing.assert_allclose(mat.matrix.real, expect, atol=1e-10)

    def test_infinite_sentinel(self):
        mat = rld_matrix(rotation_family(), [0.3])
        assert not mat.finite
        assert mat.matrix is None
        assert mat.support_residual > 1e-3


class TestRldValue:
    def test_pinning_weight(self):
        fam = qutrit_classical_family()
        w = np.zeros((2, 2))
        w[0, 0] = 1.0
        theta = (0.3, 0.25)
        got = rld_value(fam, theta, w)
        single = rld_matrix(fam, theta).matrix[0, 0].real
        np.testing.assert_allclose(got.value, single, atol=1e-10)

    def test_uniform_weight_product_family(self):
        fam_a, fam_b, joint = product_two_parameter_family()
        theta = (0.1, -0.2)
        got = rld_value(joint, theta, np.eye(2) / 2)
        expect = 0.5 * (rld_fisher(fam_a, 0.1).value + rld_fisher(fam_b, -0.2).value)
        np.testing.assert_allclose(got.value, expect, atol=1e-8)

    def test_matches_matrix_contraction(self):
        fam = qutrit_classical_family()
        w = np.array([[1, 1], [1, 3]], dtype=float) / 4
        theta = (0.3, 0.25)
        value = rld_value(fam, theta, w).value
        mat = rld_matrix(fam, theta).matrix
        np.testing.assert_allclose(value, np.trace(w @ mat).real, atol=1e-10)

    def test_invalid_weight_rejected(self):
        with pytest.raises(ValueError, match="PSD|trace"):
            rld_value(qutrit_classical_family(), (0.3, 0.25), np.diag([1.0, 1.0]))


class TestSldMatrix:
    def test_single_parameter_consistency(self):
        fam = diag_family()
        mat = sld_matrix(fam, [0.25])
        np.testing.assert_allclose(mat.matrix[0, 0].real, 16.0 / 3, atol=1e-10)

    def test_commuting_family_matches_classical(self):
        theta = np.array([0.3, 0.25])
        mat = sld_matrix(qutrit_classical_family(), theta)
        rld = rld_matrix(qutrit_classical_family(), theta)
        np.testing.assert_allclose(mat.matrix, rld.matrix, atol=1e-10)

    def test_raw_off_diagonals_available(self):
        _, _, joint = product_two_parameter_family()
        mat = sld_matrix(joint, [0.1, -0.2])
        assert mat.raw is not None
        np.testing.assert_allclose((mat.raw + mat.raw.conj().T) / 2, mat.matrix, atol=1e-12)


def test_fisher_value_invariant():
    assert FisherValue.of(3.0, 1e-12).finite
    sentinel = FisherValue.of(123.0, 1.0)
    assert not sentinel.finite and math.isinf(sentinel.value)


def test_weight_matrix_validation():
    check_weight_matrix(np.eye(2) / 2)
    with pytest.raises(ValueError):
        check_weight_matrix(np.eye(2))
    check_weight_matrix(np.eye(2), require_unit_trace=False)
