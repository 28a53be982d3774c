"""Randomized property-verification suites.

Each suite checks one family of invariants with a fixed seed and returns a
``SuiteResult``; the CLI ``verify`` subcommand and the acceptance tests both
run these.  Tolerances are pinned here, next to the checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ensembles, gadc
from .bounds import crb, heisenberg_verdict
from .families import ChannelFamily, StateFamily, apply_channel, choi_from_kraus, validate
from .fisher_channel import (
    OptimizerConfig,
    cq_channel_fisher,
    inequality_gap,
    rld_fisher_channel,
    rld_value_channel,
)
from .fisher_state import (
    classical_fisher,
    cq_fisher_decomposition,
    cq_state_family,
    rld_fisher,
    rld_matrix,
    rld_value,
    sld_fisher,
    sld_matrix,
    smoothed_fisher,
)
from .linalg import (
    dagger,
    frobenius,
    hermitian_part,
    infinity_norm_psd,
    kron,
    partial_trace,
    support_pinv,
)
from .parallel import parallel_map
from .sdp import build, export_sdpa, read_sdpa, realify, sandwich_gap, seesaw_sld_channel, verify_candidate


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, passed: bool, detail: str) -> SuiteResult:
    return SuiteResult(name=name, passed=bool(passed), detail=detail)


def suite_linalg_pinv(seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(30):
        d = int(rng.integers(2, 6))
        rho = ensembles.random_density(rng, d)
        pinv, proj, kern = support_pinv(rho)
        worst = max(worst, frobenius(pinv @ rho @ pinv - pinv))
        worst = max(worst, frobenius(proj + kern - np.eye(d)))
        pinv2, _, _ = support_pinv(pinv)
        worst = max(worst, frobenius(pinv2 - proj @ rho @ proj))
    return _result("linalg_pinv", worst <= 1e-9, f"max residual {worst:.3e}")


def suite_linalg_partial_trace(seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(30):
        da = int(rng.integers(2, 5))
        db = int(rng.integers(2, 5))
        a = ensembles.random_hermitian(rng, da)
        b = ensembles.random_hermitian(rng, db)
        worst = max(
            worst,
            frobenius(partial_trace(kron(a, b), (da, db), "second") - a * np.trace(b)),
        )
        worst = max(
            worst,
            frobenius(partial_trace(kron(a, b), (da, db), "first") - b * np.trace(a)),
        )
    return _result("linalg_partial_trace", worst <= 1e-12, f"max residual {worst:.3e}")


def suite_linalg_infnorm(seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(30):
        d = int(rng.integers(2, 7))
        rho = ensembles.random_density(rng, d)
        worst = max(worst, abs(infinity_norm_psd(rho) - float(np.linalg.norm(rho, 2))))
    return _result("linalg_infnorm", worst <= 1e-12, f"max two-path deviation {worst:.3e}")


def suite_families_choi_apply(seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(50):
        d_in, d_out = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        ks = ensembles.random_kraus(rng, d_in, d_out, n_kraus=2)
        chan = ChannelFamily.constant(choi_from_kraus(ks), (d_in, d_out))
        d_r = int(rng.integers(1, 3))
        rho = ensembles.random_density(rng, d_r * d_in)
        via_choi = apply_channel(chan, 0.0, rho)
        direct = np.zeros_like(via_choi)
        eye_r = np.eye(d_r)
        for k in ks:
            lifted = kron(eye_r, k)
            direct += lifted @ rho @ dagger(lifted)
        worst = max(worst, frobenius(via_choi - direct))
    return _result("families_choi_apply", worst <= 1e-10, f"max deviation {worst:.3e}")


def suite_families_derivatives(seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        fam = ensembles.random_channel_family(rng, 2, 2)
        report = validate(fam, [0.1, 0.4, 0.9])
        worst = max(worst, report.psd_violation, report.cptp_deviation)
        # finite difference of the Choi vs Choi of the differenced action
        t0, h = 0.3, 1e-5
        fd_choi = (fam.choi_at(t0 + h) - fam.choi_at(t0 - h)) / (2 * h)
        rho = ensembles.random_density(rng, 4)
        lhs = apply_channel(fam, t0 + h, rho) - apply_channel(fam, t0 - h, rho)
        chan_fd = ChannelFamily.constant(fd_choi, (2, 2))
        rhs = apply_channel(chan_fd, 0.0, rho) * (2 * h)
        worst = max(worst, frobenius(lhs - rhs) / (2 * h))
    st = ensembles.random_state_family(rng, 3)
    report = validate(st, [0.0, 0.2, 0.7])
    worst = max(worst, report.derivative_deviation)
    return _result("families_derivatives", worst <= 1e-6, f"max deviation {worst:.3e}")


def suite_state_faithfulness(seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        fam = StateFamily.constant(ensembles.random_density(rng, int(rng.integers(2, 5))))
        worst = max(worst, sld_fisher(fam, 0.3).value, rld_fisher(fam, 0.3).value)
    return _result("state_faithfulness", worst == 0.0, f"max Fisher on constant families {worst:.3e}")


def suite_state_sld_le_rld(seed: int) -> SuiteResult:
    def trial(i: int) -> float:
        local = np.random.default_rng(seed + 1000 + i)
        d = 2 if i % 2 == 0 else 3
        fam = ensembles.random_state_family(local, d)
        t = float(local.uniform(-0.5, 0.5))
        return rld_fisher(fam, t).value - sld_fisher(fam, t).value

    margins = parallel_map(trial, range(100))
    worst = min(margins)
    return _result("state_sld_le_rld", worst >= -1e-9, f"min(RLD - SLD) = {worst:.3e}")


def suite_state_data_processing(seed: int) -> SuiteResult:
    worst = 0.0
    for i in range(100):
        local = np.random.default_rng(seed + 2000 + i)
        d = 2 if i % 2 == 0 else 3
        fam = ensembles.random_state_family(local, d)
        ks = ensembles.random_kraus(local, d, d, n_kraus=2)

        def mapped_eval(t, fam=fam, ks=ks):
            rho = fam.eval(t)
            return sum(k @ rho @ dagger(k) for k in ks)

        mapped = StateFamily(dim=d, eval=mapped_eval)
        t = float(local.uniform(-0.5, 0.5))
        worst = max(worst, sld_fisher(mapped, t).value - sld_fisher(fam, t).value)
        worst = max(worst, rld_fisher(mapped, t).value - rld_fisher(fam, t).value)
    return _result("state_data_processing", worst <= 1e-9, f"max monotonicity violation {worst:.3e}")


def suite_state_additivity(seed: int) -> SuiteResult:
    worst = 0.0
    for i in range(100):
        local = np.random.default_rng(seed + 3000 + i)
        fam_a = ensembles.random_state_family(local, 2)
        fam_b = ensembles.random_state_family(local, 2)
        joint = StateFamily(dim=4, eval=lambda t, a=fam_a, b=fam_b: kron(a.eval(t), b.eval(t)))
        t = float(local.uniform(-0.4, 0.4))
        for fisher in (sld_fisher, rld_fisher):
            lhs = fisher(joint, t).value
            rhs = fisher(fam_a, t).value + fisher(fam_b, t).value
            worst = max(worst, abs(lhs - rhs))
    return _result("state_additivity", worst <= 1e-8, f"max additivity deviation {worst:.3e}")


def suite_state_convexity(seed: int) -> SuiteResult:
    worst = 0.0
    for i in range(100):
        local = np.random.default_rng(seed + 4000 + i)
        fams = [ensembles.random_state_family(local, 2) for _ in range(3)]
        p = local.dirichlet(np.ones(3))
        mixture = StateFamily(
            dim=2,
            eval=lambda t, fams=fams, p=p: sum(pi * f.eval(t) for pi, f in zip(p, fams)),
        )
        t = float(local.uniform(-0.4, 0.4))
        for fisher in (sld_fisher, rld_fisher):
            avg = sum(pi * fisher(f, t).value for pi, f in zip(p, fams))
            worst = max(worst, fisher(mixture, t).value - avg)
    return _result("state_convexity", worst <= 1e-9, f"max convexity violation {worst:.3e}")


def suite_state_cq_decomposition(seed: int) -> SuiteResult:
    worst = 0.0
    for i in range(100):
        local = np.random.default_rng(seed + 5000 + i)
        conds = [ensembles.random_state_family(local, 2) for _ in range(2)]
        a, b = local.uniform(0.2, 0.8), local.uniform(0.1, 0.4)

        def p_family(t, a=a, b=b):
            q = a + b * math.tanh(t)
            return np.array([q, 1 - q])

        t = float(local.uniform(-0.3, 0.3))
        for kind in ("sld", "rld"):
            dec = cq_fisher_decomposition(p_family, conds, t, kind=kind)
            assembled = cq_state_family(p_family, conds)
            fisher = sld_fisher if kind == "sld" else rld_fisher
            direct = fisher(assembled, t).value
            worst = max(worst, abs(dec.total - direct))
    return _result("state_cq_decomposition", worst <= 1e-8, f"max two-path deviation {worst:.3e}")


def _two_parameter_family(rng: np.random.Generator) -> StateFamily:
    fam_a = ensembles.random_state_family(rng, 2)
    fam_b = ensembles.random_state_family(rng, 2)

    def eval_(theta: np.ndarray) -> np.ndarray:
        return kron(fam_a.eval(theta[:1]), fam_b.eval(theta[1:]))

    return StateFamily(dim=4, eval=eval_)


def suite_state_multiparameter(seed: int) -> SuiteResult:
    worst_psd = 0.0
    worst_contract = 0.0
    worst_crb = -math.inf
    worst_eq = 0.0
    for i in range(25):
        local = np.random.default_rng(seed + 6000 + i)
        fam = _two_parameter_family(local)
        theta = local.uniform(-0.3, 0.3, size=2)
        mat = rld_matrix(fam, theta)
        vals = np.linalg.eigvalsh(hermitian_part(mat.matrix))
        worst_psd = max(worst_psd, float(max(0.0, -vals[0])))
        w_raw = local.uniform(0.2, 1.0, size=2)
        w = np.diag(w_raw / w_raw.sum())
        value = rld_value(fam, theta, w)
        worst_contract = max(
            worst_contract, abs(value.value - float(np.trace(w @ mat.matrix).real))
        )
        inv, _, _ = support_pinv(mat.matrix)
        slack = float(np.trace(w @ inv).real) - 1.0 / value.value
        worst_crb = max(worst_crb, -slack)
        # pinning weight on the product family: equality case
        pin = np.zeros((2, 2))
        pin[0, 0] = 1.0
        pin_value = rld_value(fam, theta, pin)
        worst_eq = max(worst_eq, abs(1.0 / pin_value.value - float(np.trace(pin @ inv).real)))
    passed = worst_psd <= 1e-10 and worst_contract <= 1e-10 and worst_crb <= 1e-9 and worst_eq <= 1e-9
    return _result(
        "state_multiparameter",
        passed,
        f"psd floor {worst_psd:.2e}, contraction {worst_contract:.2e}, "
        f"scalar-CRB violation {worst_crb:.2e}, pinning equality {worst_eq:.2e}",
    )


def suite_channel_probe_dominance(seed: int) -> SuiteResult:
    worst = -math.inf
    worst_gap = 0.0
    for i in range(10):
        local = np.random.default_rng(seed + 7000 + i)
        chan = ensembles.random_channel_family(local, 2, 2)
        t = float(local.uniform(-0.4, 0.4))
        channel_value = rld_fisher_channel(chan, t, conv="output").value

        def probe_value(z):
            z = z / np.sqrt(float((z.conj() * z).sum().real))
            zi = kron(z, np.eye(2))
            out = StateFamily(
                dim=4, eval=lambda th, c=chan, zi=zi: zi @ c.choi(th) @ dagger(zi)
            )
            return rld_fisher(out, t).value

        best_random = -math.inf
        for _ in range(20):
            z = local.normal(size=(2, 2)) + 1j * local.normal(size=(2, 2))
            value = probe_value(z)
            best_random = max(best_random, value)
            worst = max(worst, value - channel_value)
        # optimizing the probe toward the top eigenvector closes the gap
        gamma = chan.choi_at(t)
        dgamma = chan.derivative(t)
        pinv, _, _ = support_pinv(gamma)
        reduced = hermitian_part(partial_trace(dgamma @ pinv @ dgamma, (2, 2), "second"))
        vals, vecs = np.linalg.eigh(reduced)
        top = np.outer(vecs[:, -1], vecs[:, -1].conj())
        values = [probe_value((1 - eps) * top + eps * np.eye(2)) for eps in (0.3, 0.1, 0.03, 0.003)]
        if not all(b > a for a, b in zip(values, values[1:])):
            worst = math.inf
        if values[-1] < best_random:
            worst = math.inf
        worst_gap = max(worst_gap, (channel_value - values[-1]) / max(channel_value, 1.0))
    passed = worst <= 1e-8 and worst_gap <= 1e-2
    return _result(
        "channel_probe_dominance",
        passed,
        f"max probe excess {worst:.3e}, residual optimization gap {worst_gap:.3e}",
    )


def suite_channel_cq_collapse(seed: int) -> SuiteResult:
    worst = 0.0
    for i in range(10):
        local = np.random.default_rng(seed + 8000 + i)
        conds = [ensembles.random_state_family(local, 2) for _ in range(2)]
        t = float(local.uniform(-0.3, 0.3))
        collapsed = cq_channel_fisher(conds, t).value
        brute = 0.0
        for p in np.linspace(0.0, 1.0, 21):
            mix = StateFamily(
                dim=2,
                eval=lambda th, p=p, c=conds: p * c[0].eval(th) + (1 - p) * c[1].eval(th),
            )
            brute = max(brute, sld_fisher(mix, t).value)
        worst = max(worst, abs(collapsed - brute))
        if brute > collapsed + 1e-9:
            worst = math.inf
    return _result("channel_cq_collapse", worst <= 1e-9, f"max |collapse - brute force| {worst:.3e}")


def suite_channel_value_homogeneity(seed: int) -> SuiteResult:
    worst = 0.0
    for i in range(20):
        local = np.random.default_rng(seed + 9000 + i)
        params = gadc.GadcParams(float(local.uniform(0.2, 0.8)), float(local.uniform(0.2, 0.8)))
        chan = gadc.gadc_channel(params, ("loss", "noise"))
        theta = (params.gamma, params.noise)
        w_raw = local.uniform(0.1, 1.0, size=(2, 2))
        w = hermitian_part(w_raw @ w_raw.T)
        w = w / np.trace(w).real
        c = float(local.uniform(0.5, 3.0))
        base = rld_value_channel(chan, theta, w, require_unit_trace=False).value
        scaled = rld_value_channel(chan, theta, c * w, require_unit_trace=False).value
        worst = max(worst, abs(scaled - c * base) / max(abs(scaled), 1.0))
    return _result("channel_value_homogeneity", worst <= 1e-12, f"max relative deviation {worst:.3e}")


def suite_channel_chain_rules(seed: int) -> SuiteResult:
    def trial(i: int) -> tuple[float, float]:
        local = np.random.default_rng(seed + 10000 + i)
        chan = ensembles.random_channel_family(local, 2, 2)
        fam = ensembles.random_state_family(local, 2)
        t = float(local.uniform(-0.3, 0.3))
        g_rld = inequality_gap("rld_chain", t, channel=chan, state_family=fam)
        cfg = OptimizerConfig(restarts=2, iterations=25, seed=seed + i)
        g_root = inequality_gap(
            "root_sld_chain", t, channel=chan, state_family=fam, sld_cfg=cfg
        )
        return g_rld, g_root

    gaps = parallel_map(trial, range(100))
    worst_rld = min(g for g, _ in gaps)
    worst_root = min(g for _, g in gaps)
    passed = worst_rld >= -1e-8 and worst_root >= -1e-8
    return _result(
        "channel_chain_rules",
        passed,
        f"min rld_chain gap {worst_rld:.3e}, min root_sld_chain gap {worst_root:.3e}",
    )


def suite_channel_serial(seed: int) -> SuiteResult:
    def trial(i: int) -> float:
        local = np.random.default_rng(seed + 11000 + i)
        first = ensembles.random_channel_family(local, 2, 2)
        second = ensembles.random_channel_family(local, 2, 2)
        t = float(local.uniform(-0.3, 0.3))
        return inequality_gap("rld_serial", t, channel=first, channel2=second)

    gaps = parallel_map(trial, range(100))
    worst = min(gaps)

    def root_trial(i: int) -> float:
        local = np.random.default_rng(seed + 11500 + i)
        g1, g2 = float(local.uniform(0.2, 0.8)), float(local.uniform(0.2, 0.8))
        n1, n2 = float(local.uniform(0.2, 0.8)), float(local.uniform(0.2, 0.8))
        first = gadc.gadc_channel(gadc.GadcParams(g1, n1), ("loss",))
        second = gadc.gadc_channel(gadc.GadcParams(g2, n2), ("loss",))
        t = float(local.uniform(0.3, 0.7))
        cfg = OptimizerConfig(grid_points=21, refine_xatol=1e-9, seed=seed + i)
        return inequality_gap("root_sld_serial", t, channel=first, channel2=second, sld_cfg=cfg)

    worst_root = min(parallel_map(root_trial, range(12)))
    passed = worst >= -1e-8 and worst_root >= -1e-8
    return _result(
        "channel_serial",
        passed,
        f"min rld gap {worst:.3e} (100 pairs), min root-SLD gap {worst_root:.3e} (12 covariant pairs)",
    )


def suite_channel_dimension_bound(seed: int) -> SuiteResult:
    def trial(i: int) -> float:
        local = np.random.default_rng(seed + 12000 + i)
        chan = ensembles.random_channel_family(local, 2, 2)
        t = float(local.uniform(-0.3, 0.3))
        return inequality_gap("dimension_bound", t, channel=chan)

    gaps = parallel_map(trial, range(50))
    worst = min(gaps)
    return _result("channel_dimension_bound", worst >= -1e-8, f"min slack {worst:.3e}")


def suite_bounds(seed: int) -> SuiteResult:
    problems = []
    report_small = crb(4.0, 100, "state_sld")
    problems.append(abs(report_small.bound - 0.0025))
    hei = crb(4.0, 10, "channel_sld_heisenberg")
    problems.append(abs(hei.bound - 1.0 / 400))
    ratio = crb(4.0, 5, "channel_sld_heisenberg").bound / crb(4.0, 10, "channel_sld_heisenberg").bound
    problems.append(abs(ratio - 4.0))
    rng = np.random.default_rng(seed)
    for _ in range(20):
        fam = ensembles.random_state_family(rng, 2)
        t = float(rng.uniform(-0.3, 0.3))
        s = sld_fisher(fam, t)
        r = rld_fisher(fam, t)
        b_s = crb(s, 3, "state_sld").bound
        b_r = crb(r, 3, "state_rld").bound
        problems.append(max(0.0, b_r - b_s))
    params = gadc.GadcParams(0.5, 0.2)
    chan2 = gadc.gadc_channel(params, ("loss", "noise"))
    pin = np.zeros((2, 2))
    pin[0, 0] = 1.0
    multi = rld_value_channel(chan2, (0.5, 0.2), pin, conv="output")
    single = rld_fisher_channel(gadc.gadc_channel(params, ("loss",)), 0.5, conv="output")
    problems.append(
        abs(crb(multi, 4, "multi_scalar").bound - crb(single, 4, "channel_rld").bound)
    )
    worst = max(problems)
    return _result("bounds_consistency", worst <= 1e-9, f"max inconsistency {worst:.3e}")


def suite_heisenberg_verdicts(seed: int) -> SuiteResult:
    ok = True
    notes = []
    params = gadc.GadcParams(0.5, 0.2)
    verdict = heisenberg_verdict(gadc.gadc_channel(params, ("loss",)), 0.5)
    ok &= not verdict.attainable
    notes.append(f"gadc attainable={verdict.attainable}")

    def phase_choi(t: float) -> np.ndarray:
        u = np.diag([np.exp(-1j * t), np.exp(1j * t)])
        v = kron(np.eye(2), u) @ np.array([1, 0, 0, 1], dtype=complex)
        return np.outer(v, v.conj())

    unitary = ChannelFamily.from_scalar((2, 2), phase_choi)
    verdict_u = heisenberg_verdict(unitary, 0.3)
    ok &= verdict_u.attainable
    notes.append(f"unitary attainable={verdict_u.attainable}")
    constant = ChannelFamily.constant(gadc.gadc_choi(0.5, 0.2), (2, 2))
    verdict_c = heisenberg_verdict(constant, 0.0)
    ok &= (not verdict_c.attainable) and verdict_c.vacuous
    notes.append(f"constant vacuous={verdict_c.vacuous}")
    rng = np.random.default_rng(seed)
    for _ in range(10):
        chan = ensembles.random_channel_family(rng, 2, 2)
        t = float(rng.uniform(-0.3, 0.3))
        fisher = rld_fisher_channel(chan, t)
        v = heisenberg_verdict(chan, t)
        ok &= v.attainable == (not fisher.finite)
    return _result("heisenberg_verdicts", ok, "; ".join(notes))


def suite_gadc_closed_forms(seed: int) -> SuiteResult:
    gammas = np.linspace(0.05, 0.95, 19)
    noises = np.linspace(0.1, 0.9, 9)

    def check(gamma: float) -> float:
        worst = 0.0
        for noise in noises:
            params = gadc.GadcParams(float(gamma), float(noise))
            for target, theta0 in (("loss", gamma), ("noise", noise)):
                chan = gadc.gadc_channel(params, (target,))
                dense = rld_fisher_channel(chan, theta0, conv="reference").value
                closed = gadc.gadc_closed_form(params, target)
                worst = max(worst, abs(dense - closed) / abs(closed))
            chan_p = gadc.gadc_channel(params, ("phase",))
            dense_p = rld_fisher_channel(chan_p, 0.0, conv="reference").value
            closed_p = gadc.gadc_closed_form(params, "phase")
            worst = max(worst, abs(dense_p - closed_p) / abs(closed_p))
            f1, f2 = gadc.loss_f1(params.gamma, params.noise), gadc.loss_f2(params.gamma, params.noise)
            if noise <= 0.5 and f1 < f2 - 1e-12:
                worst = math.inf
            if noise > 0.5 and f1 >= f2:
                worst = math.inf
        return worst

    worst = max(parallel_map(check, [float(g) for g in gammas]))
    return _result("gadc_closed_forms", worst <= 1e-10, f"max relative deviation {worst:.3e}")


def suite_gadc_two_path(seed: int) -> SuiteResult:
    w = np.array([[1, 1], [1, 3]], dtype=float) / 4
    worst = 0.0
    rng = np.random.default_rng(seed)
    points = [(0.5, 0.2)] + [
        (float(rng.uniform(0.15, 0.85)), float(rng.uniform(0.15, 0.85))) for _ in range(8)
    ]
    for g, n in points:
        params = gadc.GadcParams(g, n)
        chan = gadc.gadc_channel(params, ("loss", "noise"))
        direct = rld_value_channel(chan, (g, n), w, conv="output").value
        assembled = gadc.two_parameter_value_from_blocks(params, w)
        worst = max(worst, abs(direct - assembled) / abs(direct))
    return _result("gadc_two_path", worst <= 1e-10, f"max relative deviation {worst:.3e}")


def suite_classical_reduction(seed: int) -> SuiteResult:
    worst = 0.0
    for theta in (0.25, 0.5, 0.7):
        fam = StateFamily.from_scalar(
            2,
            lambda t: np.diag([t, 1 - t]).astype(complex),
            deriv=lambda t: np.diag([1.0, -1.0]).astype(complex),
        )
        expect = 1.0 / (theta * (1 - theta))
        worst = max(worst, abs(sld_fisher(fam, theta).value - expect))
        worst = max(worst, abs(rld_fisher(fam, theta).value - expect))
        cf = classical_fisher(lambda t: np.array([t, 1 - t]), theta, deriv=lambda t: np.array([1.0, -1.0]))
        worst = max(worst, abs(cf.value - expect))

    def tri_eval(theta: np.ndarray) -> np.ndarray:
        a, b = float(theta[0]), float(theta[1])
        return np.diag([a, b, 1 - a - b]).astype(complex)

    def tri_deriv(theta: np.ndarray, index: int) -> np.ndarray:
        if index == 0:
            return np.diag([1.0, 0.0, -1.0]).astype(complex)
        return np.diag([0.0, 1.0, -1.0]).astype(complex)

    tri = StateFamily(dim=3, eval=tri_eval, deriv=tri_deriv)
    theta = np.array([0.3, 0.25])
    p = np.array([0.3, 0.25, 0.45])
    grads = [np.array([1.0, 0.0, -1.0]), np.array([0.0, 1.0, -1.0])]
    expect_mat = np.array(
        [[float(np.sum(gj * gk / p)) for gk in grads] for gj in grads]
    )
    for matrix_fn in (rld_matrix, sld_matrix):
        mat = matrix_fn(tri, theta)
        worst = max(worst, float(np.max(np.abs(mat.matrix.real - expect_mat))))
    return _result("classical_reduction", worst <= 1e-10, f"max deviation {worst:.3e}")


def suite_smoothing(seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    families = [
        StateFamily.from_scalar(
            2,
            lambda t: np.diag([0.5 + 0.5 * math.sin(t), 0.5 - 0.5 * math.sin(t)]).astype(complex),
        )
    ]
    families.extend(ensembles.random_state_family(rng, 2) for _ in range(5))
    eps_ladder = [10.0**-k for k in range(2, 7)]
    worst_final = 0.0
    monotone = True
    for fam in families:
        for kind in ("sld", "rld"):
            base = (sld_fisher if kind == "sld" else rld_fisher)(fam, 0.0).value
            devs = [abs(smoothed_fisher(fam, 0.0, eps, kind).value - base) for eps in eps_ladder]
            monotone &= all(devs[i + 1] < devs[i] for i in range(len(devs) - 1))
            worst_final = max(worst_final, devs[-1])
    pure = ensembles.random_pure_state_family(rng, 2)
    divergent = smoothed_fisher(pure, 0.2, 1e-7, "rld").value
    ok = monotone and worst_final <= 1e-5 and divergent > 1e6
    return _result(
        "smoothing",
        ok,
        f"monotone={monotone}, final deviation {worst_final:.3e}, pure-RLD at 1e-7 = {divergent:.2e}",
    )


def suite_sdp_certificates(seed: int) -> SuiteResult:
    worst_rel = 0.0
    worst_floor = 0.0
    notes = []

    diag_fam = StateFamily.from_scalar(
        2,
        lambda t: np.diag([t, 1 - t]).astype(complex),
        deriv=lambda t: np.diag([1.0, -1.0]).astype(complex),
    )
    params = gadc.GadcParams(0.5, 0.2)
    w = np.array([[1, 1], [1, 3]], dtype=float) / 4
    chan1 = gadc.gadc_channel(params, ("loss",))
    chan2 = gadc.gadc_channel(params, ("loss", "noise"))
    cases = [
        ("rld_state", dict(family=diag_fam, theta=0.25), 16.0 / 3),
        ("sld_state", dict(family=diag_fam, theta=0.25), 16.0 / 3),
        ("sld_state_dual", dict(family=diag_fam, theta=0.25), -16.0 / 3),
        (
            "rld_channel",
            dict(chan=chan1, theta=0.5, conv="output"),
            rld_fisher_channel(chan1, 0.5, conv="output").value,
        ),
        (
            "rld_value_state",
            dict(family=_two_parameter_family(np.random.default_rng(seed)), thetas=(0.1, 0.2), w=np.eye(2) / 2),
            None,
        ),
        (
            "rld_value_channel",
            dict(chan=chan2, thetas=(0.5, 0.2), w=w, conv="output"),
            rld_value_channel(chan2, (0.5, 0.2), w, conv="output").value,
        ),
    ]
    for kind, inputs, expected in cases:
        prob = build(kind, **inputs)
        cert = verify_candidate(prob, prob.primal_candidate, "primal")
        worst_floor = max(worst_floor, -cert.min_eigenvalue)
        if expected is None:
            fam = inputs["family"]
            expected = rld_value(fam, inputs["thetas"], inputs["w"]).value
        worst_rel = max(worst_rel, abs(cert.objective - expected) / max(abs(expected), 1e-12))
        if prob.dual_candidate is not None:
            dual_cert = verify_candidate(prob, prob.dual_candidate, "dual")
            worst_floor = max(worst_floor, -dual_cert.min_eigenvalue)
            worst_rel = max(
                worst_rel, abs(sandwich_gap(cert, dual_cert)) / max(abs(expected), 1e-12)
            )
            worst_rel = max(worst_rel, dual_cert.equality_residual)
        text = export_sdpa(prob)
        parsed = read_sdpa(text)
        round_trip = 0.0
        for b in range(len(prob.blocks)):
            round_trip = max(round_trip, float(np.max(np.abs(parsed.f0[b] - prob.f0[b]))))
            for i in range(prob.num_constraints):
                round_trip = max(
                    round_trip,
                    float(np.max(np.abs(parsed.constraints[i][b] - prob.constraints[i][b]))),
                )
        if round_trip != 0.0:
            notes.append(f"{kind}: round-trip loss {round_trip}")
            worst_rel = math.inf

    rng = np.random.default_rng(seed)
    h = ensembles.random_hermitian(rng, 4)
    vals = np.sort(np.linalg.eigvalsh(h))
    rvals = np.sort(np.linalg.eigvalsh(realify(h)))
    doubling = float(np.max(np.abs(rvals - np.repeat(vals, 2))))
    worst_rel = max(worst_rel, doubling)

    see = seesaw_sld_channel(chan1, 0.5, iters=15, seed=seed)
    monotone = all(b >= a - 1e-15 for a, b in zip(see.iterates, see.iterates[1:]))
    if not monotone:
        notes.append("seesaw trace not monotone")
    ok = worst_rel <= 1e-8 and worst_floor <= 1e-9 and monotone
    detail = f"max relative objective error {worst_rel:.3e}, worst eigenvalue floor {worst_floor:.3e}"
    if notes:
        detail += "; " + "; ".join(notes)
    return _result("sdp_certificates", ok, detail)


ALL_SUITES = [
    suite_linalg_pinv,
    suite_linalg_partial_trace,
    suite_linalg_infnorm,
    suite_families_choi_apply,
    suite_families_derivatives,
    suite_state_faithfulness,
    suite_state_sld_le_rld,
    suite_state_data_processing,
    suite_state_additivity,
    suite_state_convexity,
    suite_state_cq_decomposition,
    suite_state_multiparameter,
    suite_channel_probe_dominance,
    suite_channel_cq_collapse,
    suite_channel_value_homogeneity,
    suite_channel_chain_rules,
    suite_channel_serial,
    suite_channel_dimension_bound,
    suite_bounds,
    suite_heisenberg_verdicts,
    suite_gadc_closed_forms,
    suite_gadc_two_path,
    suite_classical_reduction,
    suite_smoothing,
    suite_sdp_certificates,
]


def run_all(seed: int = 7, suites=None) -> list[SuiteResult]:
    chosen = ALL_SUITES if suites is None else [s for s in ALL_SUITES if s.__name__ in suites]
    return [suite(seed) for suite in chosen]
