import math

import numpy as np
import pytest

from qfisher.ensembles import random_channel_family, random_hermitian, random_state_family
from qfisher.families import StateFamily
from qfisher.fisher_channel import OptimizerConfig, rld_fisher_channel, rld_value_channel, sld_fisher_channel
from qfisher.fisher_state import rld_value, sld_fisher
from qfisher.gadc import GadcParams, gadc_channel
from qfisher.linalg import kron
from qfisher.sdp import (
    Block,
    SdpProblem,
    build,
    export_sdpa,
    problem_filename,
    read_sdpa,
    realify,
    sandwich_gap,
    seesaw_sld_channel,
    verify_candidate,
)

W_EXAMPLE = np.array([[1, 1], [1, 3]], dtype=float) / 4


def diag_family():
    return StateFamily.from_scalar(
        2,
        lambda t: np.diag([t, 1 - t]).astype(complex),
        deriv=lambda t: np.diag([1.0, -1.0]).astype(complex),
    )


def product_family(seed=29):
    rng = np.random.default_rng(seed)
    fam_a = random_state_family(rng, 2)
    fam_b = random_state_family(rng, 2)
    return StateFamily(
        dim=4, eval=lambda theta: kron(fam_a.eval(theta[:1]), fam_b.eval(theta[1:]))
    )


def certify(prob, expected, rel=1e-8):
    primal = verify_candidate(prob, prob.primal_candidate, "primal")
    assert primal.feasible, f"primal infeasible: min eig {primal.min_eigenvalue}"
    assert abs(primal.objective - expected) <= rel * max(abs(expected), 1.0)
    if prob.dual_candidate is not None:
        dual = verify_candidate(prob, prob.dual_candidate, "dual")
        assert dual.feasible, (
            f"dual infeasible: min eig {dual.min_eigenvalue}, residual {dual.equality_residual}"
        )
        assert abs(sandwich_gap(primal, dual)) <= rel * max(abs(expected), 1.0)
    return primal


def test_realification_doubles_spectrum():
    rng = np.random.default_rng(2)
    h = random_hermitian(rng, 5)
    vals = np.sort(np.linalg.eigvalsh(h))
    rvals = np.sort(np.linalg.eigvalsh(realify(h)))
    np.testing.assert_allclose(rvals, np.repeat(vals, 2), atol=1e-10)


def test_rld_state_program():
    prob = build("rld_state", family=diag_family(), theta=0.25)
    certify(prob, 16.0 / 3)


def test_sld_state_program():
    # SLD equals RLD for this commuting family
    prob = build("sld_state", family=diag_family(), theta=0.25)
    certify(prob, 16.0 / 3)


def test_sld_state_dual_program():
    prob = build("sld_state_dual", family=diag_family(), theta=0.25)
    assert prob.blocks[0].kind == "diagonal"
    primal = verify_candidate(prob, prob.primal_candidate, "primal")
    assert primal.feasible
    np.testing.assert_allclose(primal.objective, -16.0 / 3, atol=1e-8)


@pytest.mark.parametrize("conv", ["output", "reference"])
def test_rld_channel_program(conv):
    chan = gadc_channel(GadcParams(0.5, 0.2), ("loss",))
    prob = build("rld_channel", chan=chan, theta=0.5, conv=conv)
    expected = rld_fisher_channel(chan, 0.5, conv=conv).value
    certify(prob, expected)
    if conv == "reference":
        np.testing.assert_allclose(expected, 8.45, rtol=1e-10)


def test_rld_value_state_program():
    fam = product_family()
    w = np.eye(2) / 2
    theta = (0.1, -0.2)
    prob = build("rld_value_state", family=fam, thetas=theta, w=w)
    certify(prob, rld_value(fam, theta, w).value)


def test_rld_value_channel_program():
    chan = gadc_channel(GadcParams(0.5, 0.2), ("loss", "noise"))
    prob = build("rld_value_channel", chan=chan, thetas=(0.5, 0.2), w=W_EXAMPLE, conv="output")
    expected = rld_value_channel(chan, (0.5, 0.2), W_EXAMPLE, conv="output").value
    certify(prob, expected)
    np.testing.assert_allclose(expected, 4.625, rtol=1e-10)


def test_build_refuses_unsupported_derivative():
    def pure_eval(t):
        v = np.array([math.cos(t), math.sin(t)], dtype=complex)
        return np.outer(v, v.conj())

    fam = StateFamily.from_scalar(2, pure_eval)
    with pytest.raises(ValueError, match="support condition"):
        build("rld_state", family=fam, theta=0.3)


def test_infeasible_candidate_reports_negative_eigenvalue():
    prob = build("rld_state", family=diag_family(), theta=0.25)
    zero = np.zeros_like(prob.primal_candidate)
    cert = verify_candidate(prob, zero, "primal")
    assert not cert.feasible
    assert cert.min_eigenvalue < -1e-3


class TestExport:
    def test_tiny_program(self):
        # min x subject to x >= 1
        prob = SdpProblem(
            name="tiny",
            blocks=[Block(1, "diagonal")],
            objective=np.array([1.0]),
            f0=[np.array([[1.0]])],
            constraints=[[np.array([[1.0]])]],
        )
        text = export_sdpa(prob)
        lines = text.strip().split("\n")
        assert lines[0] == "1"       # one variable
        assert lines[1] == "1"       # one block
        assert lines[2] == "-1"      # diagonal block of size 1
        assert lines[3] == "1"       # objective
        assert lines[4:] == ["0 1 1 1 1", "1 1 1 1 1"]

    def test_round_trip_exact(self):
        prob = build("rld_state", family=diag_family(), theta=0.25)
        parsed = read_sdpa(export_sdpa(prob))
        assert parsed.num_constraints == prob.num_constraints
        assert [b.size for b in parsed.blocks] == [b.size for b in prob.blocks]
        np.testing.assert_array_equal(parsed.objective, prob.objective)
        for b in range(len(prob.blocks)):
            np.testing.assert_array_equal(parsed.f0[b], prob.f0[b])
            for i in range(prob.num_constraints):
                np.testing.assert_array_equal(
                    parsed.constraints[i][b], prob.constraints[i][b]
                )

    def test_deterministic_bytes_and_name(self):
        chan = gadc_channel(GadcParams(0.5, 0.2), ("loss",))
        prob_a = build("rld_channel", chan=chan, theta=0.5, conv="output")
        prob_b = build("rld_channel", chan=chan, theta=0.5, conv="output")
        assert export_sdpa(prob_a) == export_sdpa(prob_b)
        name = problem_filename(prob_a)
        assert name == problem_filename(prob_b)
        assert name.startswith("rld_channel_output_") and name.endswith(".dat-s")

    def test_comments_use_sdpa_comment_prefix(self):
        prob = build("sld_state", family=diag_family(), theta=0.25)
        first = export_sdpa(prob).splitlines()[0]
        assert first.startswith('"')


class TestSeesaw:
    def test_replacer_converges_in_one_iteration(self):
        fam = diag_family()

        def choi(t):
            return kron(np.eye(2), np.asarray(fam.eval(np.atleast_1d(t)), dtype=complex))

        from qfisher.families import ChannelFamily

        chan = ChannelFamily.from_scalar((2, 2), choi)
        result = seesaw_sld_channel(chan, 0.25, iters=5, seed=0)
        expected = sld_fisher(fam, 0.25).value
        np.testing.assert_allclose(result.iterates[0], expected, atol=1e-8)
        np.testing.assert_allclose(result.value, expected, atol=1e-8)

    def test_gadc_half_noise_matches_rld(self):
        chan = gadc_channel(GadcParams(0.5, 0.5), ("loss",))
        result = seesaw_sld_channel(chan, 0.5, iters=25, seed=0)
        assert abs(result.value - 2.0) / 2.0 < 1e-3

    def test_monotone_iterates(self):
        chan = random_channel_family(np.random.default_rng(3), 2, 2)
        result = seesaw_sld_channel(chan, 0.2, iters=20, seed=1)
        assert all(b >= a for a, b in zip(result.iterates, result.iterates[1:]))

    @pytest.mark.parametrize("seed", [0, 1])
    def test_agrees_with_probe_search(self, seed):
        chan = random_channel_family(np.random.default_rng(100 + seed), 2, 2)
        see = seesaw_sld_channel(chan, 0.15, iters=60, seed=seed)
        probe = sld_fisher_channel(
            chan, 0.15, OptimizerConfig(restarts=3, iterations=60, seed=seed)
        )
        assert abs(see.value - probe.value) / probe.value < 1e-4


def test_cvxpy_confirms_rld_state_optimum():
    cvxpy = pytest.importorskip("cvxpy")
    prob = build("rld_state", family=diag_family(), theta=0.25)
    x = cvxpy.Variable(prob.num_constraints)
    constraints = []
    for b, block in enumerate(prob.blocks):
        expr = -prob.f0[b]
        for i in range(prob.num_constraints):
            expr = expr + x[i] * prob.constraints[i][b]
        constraints.append(expr >> 0 if block.size > 1 else expr >= 0)
    objective = cvxpy.Minimize(prob.objective @ x)
    task = cvxpy.Problem(objective, constraints)
    task.solve(solver="SCS", eps=1e-10)
    np.testing.assert_allclose(task.value, 16.0 / 3, rtol=1e-6)
