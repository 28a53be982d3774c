"""Generalized amplitude damping channel: constructors, closed-form RLD
expressions, the Schmidt-diagonal SLD probe family, and bound curves.

The channel has loss gamma and noise N, optionally preceded by a phase
rotation exp(-i phi sigma_Z).  Closed forms below are evaluated verbatim.
The loss and noise closed forms reproduce the reference-trace convention of
``rld_fisher_channel``; the printed two-parameter block formulas reproduce
the output-trace convention (see ``two_parameter_blocks``).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .families import ChannelFamily
from .fisher_channel import rld_fisher_channel, rld_value_channel
from .fisher_state import FisherMatrix, StateFamily, check_weight_matrix, sld_matrix
from .linalg import hermitian_eig, hermitian_part, kron, support_pinv
from .parallel import parallel_map

DOMAIN_MARGIN = 1e-6

TARGETS = ("loss", "noise", "phase")

CSV_HEADER = "param,log10_rld_bound,log10_sld_bound"

# default figure-reproduction grid for the varied parameter
DEFAULT_GRID = np.linspace(0.1, 0.9, 17)

_SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)


@dataclass(frozen=True)
class GadcParams:
    """Channel parameters; gamma and noise live in the open unit interval."""

    gamma: float
    noise: float
    phi: float | None = None

    def __post_init__(self):
        for name, value in (("gamma", self.gamma), ("noise", self.noise)):
            if not DOMAIN_MARGIN <= value <= 1.0 - DOMAIN_MARGIN:
                raise ValueError(
                    f"{name}={value} outside the open interval "
                    f"({DOMAIN_MARGIN}, {1 - DOMAIN_MARGIN})"
                )
        if self.phi is not None and not math.isfinite(self.phi):
            raise ValueError(f"phi must be finite, got {self.phi}")


def gadc_kraus(gamma: float, noise: float, phi: float | None = None) -> list[np.ndarray]:
    """The four Kraus operators, optionally pre-composed with exp(-i phi sigma_Z)."""
    s = math.sqrt
    k1 = s(1 - noise) * np.array([[1, 0], [0, s(1 - gamma)]], dtype=complex)
    k2 = s(gamma * (1 - noise)) * np.array([[0, 1], [0, 0]], dtype=complex)
    k3 = s(noise) * np.array([[s(1 - gamma), 0], [0, 1]], dtype=complex)
    k4 = s(gamma * noise) * np.array([[0, 0], [1, 0]], dtype=complex)
    ops = [k1, k2, k3, k4]
    if phi is not None:
        u = np.diag([np.exp(-1j * phi), np.exp(1j * phi)])
        ops = [k @ u for k in ops]
    return ops


def gadc_choi(gamma: float, noise: float, phi: float | None = None) -> np.ndarray:
    corner = math.sqrt(1 - gamma)
    g = np.array(
        [
            [1 - gamma * noise, 0, 0, corner],
            [0, gamma * noise, 0, 0],
            [0, 0, gamma * (1 - noise), 0],
            [corner, 0, 0, 1 - gamma * (1 - noise)],
        ],
        dtype=complex,
    )
    if phi is not None:
        g[0, 3] *= np.exp(-2j * phi)
        g[3, 0] *= np.exp(2j * phi)
    return g


def gadc_choi_deriv(
    gamma: float, noise: float, target: str, phi: float | None = None
) -> np.ndarray:
    """Analytic derivative of the Choi matrix with respect to one parameter."""
    corner = math.sqrt(1 - gamma)
    if target == "loss":
        d = np.array(
            [
                [-noise, 0, 0, -1 / (2 * corner)],
                [0, noise, 0, 0],
                [0, 0, 1 - noise, 0],
                [-1 / (2 * corner), 0, 0, -(1 - noise)],
            ],
            dtype=complex,
        )
        if phi is not None:
            d[0, 3] *= np.exp(-2j * phi)
            d[3, 0] *= np.exp(2j * phi)
        return d
    if target == "noise":
        return -gamma * kron(np.eye(2), _SIGMA_Z)
    if target == "phase":
        p = 0.0 if phi is None else phi
        d = np.zeros((4, 4), dtype=complex)
        d[0, 3] = -2j * np.exp(-2j * p) * corner
        d[3, 0] = 2j * np.exp(2j * p) * corner
        return d
    raise ValueError(f"target must be one of {TARGETS}, got {target!r}")


def gadc_channel(params: GadcParams, targets: Sequence[str] = ("loss",)) -> ChannelFamily:
    """Channel family whose parameter vector runs over ``targets``.

    The remaining parameters stay fixed at their values in ``params``.  The
    family carries analytic Choi and derivative rules and is marked
    diagonal-covariant.
    """
    targets = tuple(targets)
    for t in targets:
        if t not in TARGETS:
            raise ValueError(f"unknown target {t!r}")
    if "phase" in targets and params.phi is None:
        params = GadcParams(params.gamma, params.noise, 0.0)

    def resolve(theta: np.ndarray) -> GadcParams:
        values = {"loss": params.gamma, "noise": params.noise, "phase": params.phi}
        for name, value in zip(targets, theta):
            values[name] = float(value)
        return GadcParams(values["loss"], values["noise"], values["phase"])

    def choi(theta: np.ndarray) -> np.ndarray:
        p = resolve(theta)
        return gadc_choi(p.gamma, p.noise, p.phi)

    def kraus(theta: np.ndarray) -> list[np.ndarray]:
        p = resolve(theta)
        return gadc_kraus(p.gamma, p.noise, p.phi)

    def deriv(theta: np.ndarray, index: int) -> np.ndarray:
        p = resolve(theta)
        return gadc_choi_deriv(p.gamma, p.noise, targets[index], p.phi)

    lo = np.array([DOMAIN_MARGIN if t != "phase" else -np.inf for t in targets])
    hi = np.array([1 - DOMAIN_MARGIN if t != "phase" else np.inf for t in targets])
    return ChannelFamily(
        dims=(2, 2),
        choi=choi,
        kraus=kraus,
        deriv=deriv,
        bounds=(lo, hi),
        diagonal_covariant=True,
    )


def loss_f1(gamma: float, noise: float) -> float:
    return ((4 * noise - 3) * noise + (1 - noise) / (1 - gamma)
            + 4 * (1 - noise) * noise * (1 - 2 * noise) * gamma) / (
        4 * noise * (1 - noise) * gamma**2
    )


def loss_f2(gamma: float, noise: float) -> float:
    return (8 * gamma * noise + 1 / noise + 1 / ((1 - noise) * (1 - gamma))
            - 4 * (1 + gamma)) / (4 * gamma**2)


def _step(x: float) -> float:
    return 1.0 if x > 0 else 0.0


def gadc_closed_form(params: GadcParams, target: str) -> float:
    """Closed-form RLD channel Fisher information for one parameter.

    Loss uses the piecewise f1/f2 split at N = 1/2; noise and phase are the
    single printed expressions.
    """
    g, n = params.gamma, params.noise
    if target == "loss":
        return loss_f1(g, n) if n <= 0.5 else loss_f2(g, n)
    if target == "noise":
        return (1 + abs(1 - 2 * n) * g) / ((1 - n) * n)
    if target == "phase":
        return 4 * (1 - g) * (1 - g * (n + (1 - 2 * n) * _step(2 * n - 1))) / ((1 - n) * n * g**2)
    raise ValueError(f"target must be one of {TARGETS}, got {target!r}")


def two_parameter_blocks(params: GadcParams) -> dict[str, np.ndarray]:
    """Printed output-convention reduced blocks of the (loss, noise) example.

    Keys "loss_loss", "loss_noise", "noise_loss", "noise_noise" hold the
    diagonal 2x2 operators Tr_out[(d_j Gamma) Gamma^-1 (d_k Gamma)].
    """
    g, n = params.gamma, params.noise
    gg = np.diag(
        [
            (1 / (n - g * n) + 1 / (1 - n) - 4) / (4 * g**2),
            (1 / ((g - 1) * (n - 1)) + 1 / n - 4) / (4 * g**2),
        ]
    )
    mixed = np.diag([-(1 - 2 * n) / (2 * g * n * (1 - n))] * 2)
    nn = np.diag([1 / (n * (1 - n))] * 2)
    return {
        "loss_loss": gg.astype(complex),
        "loss_noise": mixed.astype(complex),
        "noise_loss": mixed.astype(complex),
        "noise_noise": nn.astype(complex),
    }


def two_parameter_value_from_blocks(params: GadcParams, w: np.ndarray) -> float:
    """Assemble the weighted two-parameter value from the printed blocks.

    Matches ``rld_value_channel`` under the output convention.
    """
    w = check_weight_matrix(w)
    blocks = two_parameter_blocks(params)
    names = ("loss", "noise")
    total = np.zeros((2, 2), dtype=complex)
    for j, nj in enumerate(names):
        for k, nk in enumerate(names):
            total += w[k, j] * blocks[f"{nj}_{nk}"]
    return float(hermitian_eig(hermitian_part(total)).eigenvalues[-1])


@dataclass(frozen=True)
class ProbeOutputReport:
    """SLD data for the Schmidt-diagonal probe sqrt(p)|00> + sqrt(1-p)|11>."""

    output_state: np.ndarray
    fisher_matrix: FisherMatrix
    singular: bool
    objective: float | None = None


def probe_output_family(params: GadcParams, p: float) -> StateFamily:
    """Two-parameter (loss, noise) output family on the fixed probe."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probe weight must lie in [0, 1], got {p}")
    z = np.diag([math.sqrt(p), math.sqrt(1 - p)]).astype(complex)
    zi = kron(z, np.eye(2))

    def eval_(theta: np.ndarray) -> np.ndarray:
        g, n = float(theta[0]), float(theta[1])
        return zi @ gadc_choi(g, n, params.phi) @ zi.conj().T

    def deriv(theta: np.ndarray, index: int) -> np.ndarray:
        g, n = float(theta[0]), float(theta[1])
        target = ("loss", "noise")[index]
        return zi @ gadc_choi_deriv(g, n, target, params.phi) @ zi.conj().T

    lo = np.array([DOMAIN_MARGIN, DOMAIN_MARGIN])
    hi = np.array([1 - DOMAIN_MARGIN, 1 - DOMAIN_MARGIN])
    return StateFamily(dim=4, eval=eval_, deriv=deriv, bounds=(lo, hi))


def gadc_sld_probe(params: GadcParams, p: float, w: np.ndarray | None = None) -> ProbeOutputReport:
    """Output state, 2x2 SLD matrix, and optional scalar objective Tr[W M^-1]."""
    family = probe_output_family(params, p)
    theta = (params.gamma, params.noise)
    rho = family.state(theta)
    matrix = sld_matrix(family, theta)
    singular = True
    objective = None
    if matrix.finite and matrix.matrix is not None:
        vals = np.linalg.eigvalsh(hermitian_part(matrix.matrix))
        singular = bool(vals[0] <= 1e-12 * max(vals[-1], 1.0))
        if w is not None and not singular:
            w = check_weight_matrix(w)
            inv, _, _ = support_pinv(matrix.matrix)
            objective = float(np.trace(w @ inv).real)
    return ProbeOutputReport(
        output_state=rho, fisher_matrix=matrix, singular=singular, objective=objective
    )


def optimized_sld_objective(params: GadcParams, w: np.ndarray, grid_points: int = 41) -> tuple[float, float]:
    """Minimize Tr[W (SLD matrix)^-1] over the probe weight p.

    Returns the best objective and the achieving p.  Deterministic.
    """
    from scipy.optimize import minimize_scalar

    w = check_weight_matrix(w)

    def objective(p: float) -> float:
        report = gadc_sld_probe(params, p, w)
        return math.inf if report.objective is None else report.objective

    grid = np.linspace(1e-6, 1 - 1e-6, grid_points)
    coarse = [(objective(p), p) for p in grid]
    best_val, best_p = min(coarse)
    width = 1.0 / (grid_points - 1)
    res = minimize_scalar(
        objective,
        bounds=(max(best_p - width, 1e-6), min(best_p + width, 1 - 1e-6)),
        method="bounded",
        options={"xatol": 1e-10},
    )
    if res.fun < best_val:
        best_val, best_p = float(res.fun), float(res.x)
    return best_val, best_p


def _single_target_sld(params: GadcParams, target: str, grid_points: int = 41) -> float:
    """Best single-parameter SLD channel value over Schmidt-diagonal probes."""
    from .fisher_channel import OptimizerConfig, sld_fisher_channel

    theta0 = {"loss": params.gamma, "noise": params.noise, "phase": params.phi or 0.0}[target]
    chan = gadc_channel(params, (target,))
    result = sld_fisher_channel(chan, theta0, OptimizerConfig(grid_points=grid_points))
    return result.value


@dataclass(frozen=True)
class CurveConfig:
    """One figure-reproduction sweep.

    ``target`` is the estimated parameter ("loss", "noise", "phase", or
    "two_parameter"); ``sweep`` names the parameter that varies along the
    grid (defaults to the target itself, or to "loss" for two_parameter and
    phase sweeps).  ``n`` is the channel-use count entering the bound.
    """

    target: str
    params: GadcParams
    grid: np.ndarray = None
    sweep: str | None = None
    convention: str = "output"
    n: int = 1
    weight: np.ndarray | None = None

    def resolved_sweep(self) -> str:
        if self.sweep is not None:
            return self.sweep
        return "loss" if self.target in ("two_parameter", "phase") else self.target

    def resolved_grid(self) -> np.ndarray:
        return DEFAULT_GRID if self.grid is None else np.asarray(self.grid, dtype=float)


def _params_with(params: GadcParams, sweep: str, value: float) -> GadcParams:
    values = {"loss": params.gamma, "noise": params.noise, "phase": params.phi}
    values[sweep] = value
    return GadcParams(values["loss"], values["noise"], values["phase"])


def gadc_curve(config: CurveConfig) -> list[tuple[float, float, float]]:
    """Rows (grid value, log10 RLD bound, log10 SLD bound) along the sweep.

    Both bounds are lower bounds on the estimation error; the RLD one is the
    looser (smaller) of the two.  Rows follow grid order regardless of how
    the evaluation is scheduled.
    """
    sweep = config.resolved_sweep()
    grid = config.resolved_grid()
    if config.target == "two_parameter":
        weight = config.weight
        if weight is None:
            raise ValueError("two_parameter curves need a weight matrix")

        def row(value: float) -> tuple[float, float, float]:
            p = _params_with(config.params, sweep, value)
            chan = gadc_channel(p, ("loss", "noise"))
            rld = rld_value_channel(
                chan, (p.gamma, p.noise), weight, conv=config.convention
            )
            sld_obj, _ = optimized_sld_objective(p, weight)
            return (
                float(value),
                math.log10(1.0 / (config.n * rld.value)),
                math.log10(sld_obj / config.n),
            )

    else:
        if config.target not in TARGETS:
            raise ValueError(f"unknown curve target {config.target!r}")

        def row(value: float) -> tuple[float, float, float]:
            p = _params_with(config.params, sweep, value)
            theta0 = {"loss": p.gamma, "noise": p.noise, "phase": p.phi or 0.0}[config.target]
            chan = gadc_channel(p, (config.target,))
            rld = rld_fisher_channel(chan, theta0, conv=config.convention)
            sld = _single_target_sld(p, config.target)
            return (
                float(value),
                math.log10(1.0 / (config.n * rld.value)),
                math.log10(1.0 / (config.n * sld)),
            )

    return parallel_map(row, [float(v) for v in grid])


def curve_to_csv(rows: Sequence[tuple[float, float, float]], digits: int = 12) -> str:
    """Serialize curve rows with LF endings and fixed significant digits."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for param, rld_b, sld_b in rows:
        buf.write(f"{param:.{digits}g},{rld_b:.{digits}g},{sld_b:.{digits}g}\n")
    return buf.getvalue()
