import math

import numpy as np
import pytest

from qfisher.ensembles import (
    random_channel_family,
    random_density,
    random_state_family,
)
from qfisher.families import ChannelFamily, StateFamily
from qfisher.fisher_channel import (
    OptimizerConfig,
    cq_channel_fisher,
    inequality_gap,
    output_state_family,
    rld_fisher_channel,
    rld_value_channel,
    sld_fisher_channel,
)
from qfisher.fisher_state import rld_fisher, sld_fisher
from qfisher.gadc import GadcParams, gadc_channel, gadc_choi
from qfisher.linalg import dagger, kron, max_entangled_vector


def oracle_reduced_value(gamma, dgamma, dims, conv):
    """Independent dense oracle: plain inverse, loop partial trace, eigvalsh."""
    m = dgamma @ np.linalg.inv(gamma) @ dgamma
    da, db = dims
    t = m.reshape(da, db, da, db)
    if conv == "output":
        red = np.zeros((da, da), dtype=complex)
        for a in range(da):
            for c in range(da):
                red[a, c] = sum(t[a, b, c, b] for b in range(db))
    else:
        red = np.zeros((db, db), dtype=complex)
        for b in range(db):
            for d in range(db):
                red[b, d] = sum(t[a, b, a, d] for a in range(da))
    return float(np.max(np.linalg.eigvalsh((red + red.conj().T) / 2)))


class TestRldChannel:
    def test_constant_channel_zero(self):
        chan = ChannelFamily.constant(gadc_choi(0.5, 0.2), (2, 2))
        assert rld_fisher_channel(chan, 0.0).value == 0.0

    @pytest.mark.parametrize(
        "conv,expected", [("reference", 8.45), ("output", 7.25)]
    )
    def test_gadc_loss_spot(self, conv, expected):
        chan = gadc_channel(GadcParams(0.5, 0.2), ("loss",))
        got = rld_fisher_channel(chan, 0.5, conv=conv).value
        np.testing.assert_allclose(got, expected, rtol=1e-10)
        oracle = oracle_reduced_value(
            chan.choi_at(0.5), chan.derivative(0.5), (2, 2), conv
        )
        np.testing.assert_allclose(got, oracle, rtol=1e-10)

    def test_infinite_for_unitary_family(self):
        def phase_choi(t):
            u = np.diag([np.exp(-1j * t), np.exp(1j * t)])
            v = kron(np.eye(2), u) @ max_entangled_vector(2)
            return np.outer(v, v.conj())

        chan = ChannelFamily.from_scalar((2, 2), phase_choi)
        fv = rld_fisher_channel(chan, 0.3)
        assert not fv.finite


class TestRldValueChannel:
    def test_pinning_matches_single_parameter(self):
        params = GadcParams(0.5, 0.2)
        two = gadc_channel(params, ("loss", "noise"))
        one = gadc_channel(params, ("noise",))
        w = np.zeros((2, 2))
        w[1, 1] = 1.0
        for conv in ("output", "reference"):
            got = rld_value_channel(two, (0.5, 0.2), w, conv=conv).value
            single = rld_fisher_channel(one, 0.2, conv=conv).value
            np.testing.assert_allclose(got, single, rtol=1e-12)

    def test_block_diagonal_weight_additive_on_tensor_factors(self):
        # independent parameters acting on separate tensor factors
        params_a = GadcParams(0.4, 0.3)
        params_b = GadcParams(0.6, 0.2)

        def kraus(theta):
            from qfisher.gadc import gadc_kraus

            ka = gadc_kraus(float(theta[0]), params_a.noise)
            kb = gadc_kraus(params_b.gamma, float(theta[1]))
            return [kron(x, y) for x in ka for y in kb]

        joint = ChannelFamily.from_kraus_family((4, 4), kraus)
        w1, w2 = 0.3, 0.7
        w = np.diag([w1, w2])
        got = rld_value_channel(joint, (params_a.gamma, params_b.noise), w).value
        va = rld_fisher_channel(gadc_channel(params_a, ("loss",)), params_a.gamma).value
        vb = rld_fisher_channel(gadc_channel(params_b, ("noise",)), params_b.noise).value
        np.testing.assert_allclose(got, w1 * va + w2 * vb, rtol=1e-8)

    def test_positive_homogeneity(self):
        chan = gadc_channel(GadcParams(0.5, 0.2), ("loss", "noise"))
        w = np.array([[1, 1], [1, 3]], dtype=float) / 4
        base = rld_value_channel(chan, (0.5, 0.2), w, require_unit_trace=False).value
        scaled = rld_value_channel(chan, (0.5, 0.2), 2.5 * w, require_unit_trace=False).value
        np.testing.assert_allclose(scaled, 2.5 * base, rtol=1e-12)


class TestSldChannel:
    def test_replacer_reduces_to_state_fisher(self):
        fam = StateFamily.from_scalar(
            2,
            lambda t: np.diag([0.5 + 0.3 * math.sin(t), 0.5 - 0.3 * math.sin(t)]).astype(complex),
        )

        def choi(t):
            return kron(np.eye(2), np.asarray(fam.eval(np.atleast_1d(t)), dtype=complex))

        chan = ChannelFamily.from_scalar((2, 2), choi)
        theta = 0.4
        result = sld_fisher_channel(chan, theta, OptimizerConfig(restarts=2, iterations=30))
        np.testing.assert_allclose(result.value, sld_fisher(fam, theta).value, atol=1e-8)

    @pytest.mark.parametrize("gamma", [0.2, 0.5, 0.8])
    def test_coincides_with_rld_at_half_noise(self, gamma):
        chan = gadc_channel(GadcParams(gamma, 0.5), ("loss",))
        sld_val = sld_fisher_channel(chan, gamma).value
        rld_val = rld_fisher_channel(chan, gamma, conv="output").value
        assert abs(sld_val - rld_val) / rld_val < 1e-4

    def test_unitary_phase_family_with_entangled_probe(self):
        def phase_choi(t):
            u = np.diag([np.exp(-1j * t), np.exp(1j * t)])
            v = kron(np.eye(2), u) @ max_entangled_vector(2)
            return np.outer(v, v.conj())

        chan = ChannelFamily.from_scalar((2, 2), phase_choi)
        result = sld_fisher_channel(chan, 0.3, OptimizerConfig(restarts=2, iterations=40))
        np.testing.assert_allclose(result.value, 4.0, atol=1e-6)

    def test_probe_result_invariant(self):
        chan = random_channel_family(np.random.default_rng(5), 2, 2)
        result = sld_fisher_channel(chan, 0.2, OptimizerConfig(restarts=2, iterations=30))
        out = StateFamily(
            dim=4, eval=lambda t, c=chan, p=result.probe: c.apply(t, p)
        )
        np.testing.assert_allclose(sld_fisher(out, 0.2).value, result.value, atol=1e-8)
        assert result.trace["seed"] == 0

    def test_deterministic_given_seed(self):
        chan = random_channel_family(np.random.default_rng(9), 2, 2)
        cfg = OptimizerConfig(restarts=3, iterations=30, seed=42)
        a = sld_fisher_channel(chan, 0.1, cfg)
        b = sld_fisher_channel(chan, 0.1, cfg)
        assert a.value == b.value
        np.testing.assert_array_equal(a.probe, b.probe)


class TestCqChannelFisher:
    def test_single_letter(self):
        fam = random_state_family(np.random.default_rng(1), 2)
        got = cq_channel_fisher([fam], 0.1)
        np.testing.assert_allclose(got.value, sld_fisher(fam, 0.1).value, atol=1e-12)

    def test_max_over_letters(self):
        rng = np.random.default_rng(2)
        fams = [random_state_family(rng, 2), random_state_family(rng, 2)]
        got = cq_channel_fisher(fams, 0.2)
        vals = [sld_fisher(f, 0.2).value for f in fams]
        np.testing.assert_allclose(got.value, max(vals), atol=1e-12)

    def test_two_letters_four_and_sixteen_thirds(self):
        # letters with Fisher values 4.0 and 16/3 =~ 5.33: the larger one wins
        def rotation(t):
            v = np.array([math.cos(t), math.sin(t)], dtype=complex)
            return np.outer(v, v.conj())

        letters = [
            StateFamily.from_scalar(2, rotation),
            StateFamily.from_scalar(
                2,
                lambda t: np.diag([0.25 + (t - 0.25), 0.75 - (t - 0.25)]).astype(complex),
                deriv=lambda t: np.diag([1.0, -1.0]).astype(complex),
            ),
        ]
        got = cq_channel_fisher(letters, 0.25)
        np.testing.assert_allclose(got.value, 16.0 / 3, atol=1e-10)

    def test_all_constant_is_zero(self):
        rng = np.random.default_rng(3)
        fams = [StateFamily.constant(random_density(rng, 2)) for _ in range(3)]
        assert cq_channel_fisher(fams, 0.0).value == 0.0

    def test_empty_alphabet(self):
        with pytest.raises(ValueError, match="empty"):
            cq_channel_fisher([], 0.0)


class TestInequalityGap:
    def test_rld_chain_with_constant_input(self):
        rng = np.random.default_rng(4)
        chan = random_channel_family(rng, 2, 2)
        fam = StateFamily.constant(random_density(rng, 2))
        gap = inequality_gap("rld_chain", 0.1, channel=chan, state_family=fam)
        # reduces to the definition-supremum slack of the channel value
        out = output_state_family(chan, fam)
        direct = (
            rld_fisher_channel(chan, 0.1).value - rld_fisher(out, 0.1).value
        )
        np.testing.assert_allclose(gap, direct, atol=1e-12)
        assert gap >= -1e-8

    def test_rld_chain_randomized(self):
        for i in range(20):
            rng = np.random.default_rng(500 + i)
            chan = random_channel_family(rng, 2, 2)
            fam = random_state_family(rng, 2)
            gap = inequality_gap("rld_chain", 0.05, channel=chan, state_family=fam)
            assert gap >= -1e-8

    def test_serial_composition_of_dampers(self):
        first = gadc_channel(GadcParams(0.4, 0.3), ("loss",))
        second = gadc_channel(GadcParams(0.6, 0.2), ("loss",))
        for t in (0.3, 0.5, 0.7):
            assert inequality_gap("rld_serial", t, channel=first, channel2=second) >= -1e-8

    def test_dimension_bound(self):
        for i in range(10):
            rng = np.random.default_rng(700 + i)
            chan = random_channel_family(rng, 2, 2)
            assert inequality_gap("dimension_bound", 0.2, channel=chan) >= -1e-8

    def test_vacuous_reports_error(self):
        chan = random_channel_family(np.random.default_rng(8), 2, 2)

        def pure_eval(t):
            v = np.array([math.cos(t), math.sin(t)], dtype=complex)
            return np.outer(v, v.conj())

        pure = StateFamily.from_scalar(2, pure_eval)
        with pytest.raises(ValueError, match="vacuous"):
            inequality_gap("rld_chain", 0.2, channel=chan, state_family=pure)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="kind"):
            inequality_gap("bogus", 0.0)


def test_probe_dominance_under_output_convention():
    rng = np.random.default_rng(11)
    chan = random_channel_family(rng, 2, 2)
    t = 0.15
    channel_value = rld_fisher_channel(chan, t, conv="output").value
    for _ in range(50):
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        z /= math.sqrt(float((z.conj() * z).sum().real))
        zi = kron(z, np.eye(2))
        out = StateFamily(dim=4, eval=lambda th, zi=zi: zi @ chan.choi(th) @ dagger(zi))
        assert rld_fisher(out, t).value <= channel_value + 1e-8
