"""Fisher information of state families: classical, SLD, RLD, and the
multiparameter RLD/SLD matrices with their scalarizations.

Every quantity carries an explicit finiteness flag derived from the support
condition of its defining formula; an infinite value is reported as a
``math.inf`` sentinel together with the residual norm of the violated
condition, never as a large float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .families import StateFamily, as_param_point
from .linalg import (
    DEFAULT_SUPPORT_CUTOFF,
    dagger,
    frobenius,
    hermitian_eig,
    hermitian_part,
    kron,
    max_entangled_vector,
    support_pinv,
)

# Residual threshold below which a support condition counts as satisfied.
SUPPORT_TOL = 1e-8

WEIGHT_TRACE_TOL = 1e-12

_TWO_PATH_RTOL = 1e-8


@dataclass(frozen=True)
class FisherValue:
    """A Fisher information result.

    ``value`` is ``math.inf`` exactly when ``finite`` is False;
    ``support_residual`` is the norm of the violated finiteness condition.
    """

    value: float
    finite: bool
    support_residual: float = 0.0

    def __float__(self) -> float:
        return self.value

    @classmethod
    def of(cls, value: float, residual: float, tol: float = SUPPORT_TOL) -> "FisherValue":
        if residual <= tol:
            return cls(value=float(value), finite=True, support_residual=float(residual))
        return cls(value=math.inf, finite=False, support_residual=float(residual))


@dataclass(frozen=True)
class FisherMatrix:
    """D x D Fisher information matrix with a finiteness flag.

    ``matrix`` is None when the per-entry support condition fails; ``raw``
    optionally carries the unsymmetrized off-diagonal products for
    diagnostics.
    """

    matrix: np.ndarray | None
    finite: bool
    support_residual: float = 0.0
    raw: np.ndarray | None = None


def check_weight_matrix(w: np.ndarray, require_unit_trace: bool = True) -> np.ndarray:
    """Validate a PSD weight matrix, by default with unit trace."""
    w = np.asarray(w, dtype=complex)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"weight matrix must be square, got shape {w.shape}")
    vals = np.linalg.eigvalsh(hermitian_part(w))
    if vals[0] < -1e-12:
        raise ValueError(f"weight matrix is not PSD: smallest eigenvalue {vals[0]:.3e}")
    tr = float(np.trace(w).real)
    if require_unit_trace and abs(tr - 1.0) > WEIGHT_TRACE_TOL:
        raise ValueError(f"weight matrix trace {tr} differs from 1 beyond {WEIGHT_TRACE_TOL:.0e}")
    return w


def classical_fisher(
    dist_family: Callable[[float], np.ndarray],
    theta: float,
    deriv: Callable[[float], np.ndarray] | None = None,
    fd_step: float = 1e-6,
    cutoff: float = 1e-12,
    tol: float = SUPPORT_TOL,
) -> FisherValue:
    """Classical Fisher information sum_x (dp(x))^2 / p(x) of a distribution family.

    Infinite when some derivative entry is nonzero where the probability is
    below ``cutoff``.
    """
    p = np.asarray(dist_family(theta), dtype=float)
    if np.any(p < -1e-12):
        raise ValueError(f"negative probabilities: min entry {p.min():.3e}")
    if abs(p.sum() - 1.0) > 1e-10:
        raise ValueError(f"probabilities sum to {p.sum()}, not 1")
    if deriv is not None:
        dp = np.asarray(deriv(theta), dtype=float)
    else:
        dp = (
            np.asarray(dist_family(theta + fd_step), dtype=float)
            - np.asarray(dist_family(theta - fd_step), dtype=float)
        ) / (2 * fd_step)
    in_support = p > cutoff
    residual = float(np.sqrt(np.sum(dp[~in_support] ** 2)))
    value = float(np.sum(dp[in_support] ** 2 / p[in_support]))
    return FisherValue.of(value, residual, tol)


def _spectral_sld_sum(rho: np.ndarray, drho: np.ndarray, cutoff: float) -> float:
    spec = hermitian_eig(rho)
    lam = spec.eigenvalues
    a = dagger(spec.eigenvectors) @ drho @ spec.eigenvectors
    floor = cutoff * max(float(lam[-1]), 0.0)
    sums = lam[:, None] + lam[None, :]
    mask = sums > floor
    terms = np.zeros_like(sums)
    terms[mask] = np.abs(a[mask]) ** 2 / sums[mask]
    return float(2.0 * terms.sum())


def _sld_basis_independent(rho: np.ndarray, drho: np.ndarray, cutoff: float) -> float:
    d = rho.shape[0]
    eye = np.eye(d, dtype=complex)
    s = kron(rho, eye) + kron(eye, rho.T)
    v = kron(drho, eye) @ max_entangled_vector(d)
    s_pinv, _, _ = support_pinv(s, cutoff)
    return float(2.0 * (v.conj() @ (s_pinv @ v)).real)


def _sld_support_residual(rho: np.ndarray, drho: np.ndarray, cutoff: float) -> float:
    _, _, kernel = support_pinv(rho, cutoff)
    return frobenius(kernel @ drho @ kernel)


def _rld_support_residual(rho: np.ndarray, drho: np.ndarray, cutoff: float) -> float:
    _, _, kernel = support_pinv(rho, cutoff)
    return frobenius(drho @ kernel)


def sld_fisher(
    family: StateFamily,
    theta,
    index: int = 0,
    cutoff: float = DEFAULT_SUPPORT_CUTOFF,
    tol: float = SUPPORT_TOL,
) -> FisherValue:
    """SLD Fisher information 2 sum_{jk} |<j|drho|k>|^2 / (lam_j + lam_k).

    Finite iff the kernel-compressed derivative vanishes.  The spectral sum
    and the basis-independent vectorized form are both evaluated and must
    agree; a mismatch signals numerical breakdown and raises.
    """
    rho = family.state(theta)
    drho = family.derivative(theta, index)
    residual = _sld_support_residual(rho, drho, cutoff)
    if residual > tol:
        return FisherValue.of(math.inf, residual, tol)
    value = _spectral_sld_sum(rho, drho, cutoff)
    other = _sld_basis_independent(rho, drho, cutoff)
    if abs(value - other) > _TWO_PATH_RTOL * (1.0 + abs(value)):
        raise ArithmeticError(
            f"SLD cross-check failed: spectral sum {value!r} vs vectorized form {other!r}"
        )
    return FisherValue.of(value, residual, tol)


def rld_fisher(
    family: StateFamily,
    theta,
    index: int = 0,
    cutoff: float = DEFAULT_SUPPORT_CUTOFF,
    tol: float = SUPPORT_TOL,
) -> FisherValue:
    """RLD Fisher information Tr[(drho) rho^-1 (drho)], inverse on the support."""
    rho = family.state(theta)
    drho = family.derivative(theta, index)
    residual = _rld_support_residual(rho, drho, cutoff)
    if residual > tol:
        return FisherValue.of(math.inf, residual, tol)
    pinv, _, _ = support_pinv(rho, cutoff)
    value = float(np.trace(drho @ pinv @ drho).real)
    return FisherValue.of(value, residual, tol)


def smoothed_family(family: StateFamily, eps: float) -> StateFamily:
    """Mix the family with the maximally mixed state: (1-eps) rho + eps I/d."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"smoothing parameter must lie in (0, 1), got {eps}")
    d = family.dim
    pool = np.eye(d, dtype=complex) / d

    def eval_(t: np.ndarray) -> np.ndarray:
        return (1 - eps) * np.asarray(family.eval(t), dtype=complex) + eps * pool

    deriv = None
    if family.deriv is not None:
        deriv = lambda t, i: (1 - eps) * np.asarray(family.deriv(t, i), dtype=complex)
    return StateFamily(
        dim=d, eval=eval_, deriv=deriv, fd_step=family.fd_step, bounds=family.bounds
    )


def smoothed_fisher(family: StateFamily, theta, eps: float, kind: str = "sld", index: int = 0) -> FisherValue:
    """Fisher information of the eps-smoothed family; always finite for eps > 0."""
    fam = smoothed_family(family, eps)
    if kind == "sld":
        return sld_fisher(fam, theta, index)
    if kind == "rld":
        return rld_fisher(fam, theta, index)
    raise ValueError(f"kind must be 'sld' or 'rld', got {kind!r}")


def sld_operator(
    family: StateFamily, theta, index: int = 0, cutoff: float = DEFAULT_SUPPORT_CUTOFF
) -> np.ndarray:
    """SLD operator L = 2 sum_{jk} <j|drho|k> / (lam_j + lam_k) |j><k|."""
    rho = family.state(theta)
    drho = family.derivative(theta, index)
    spec = hermitian_eig(rho)
    lam, vecs = spec.eigenvalues, spec.eigenvectors
    a = dagger(vecs) @ drho @ vecs
    floor = cutoff * max(float(lam[-1]), 0.0)
    sums = lam[:, None] + lam[None, :]
    coeff = np.zeros_like(a)
    mask = sums > floor
    coeff[mask] = 2.0 * a[mask] / sums[mask]
    return vecs @ coeff @ dagger(vecs)


def root_sld_witness(family: StateFamily, theta, x: np.ndarray, index: int = 0) -> float:
    """Value sqrt(2) |Tr[X drho]| of a feasible witness for the root SLD program.

    Feasibility requires Tr[(X X^dag + X^dag X) rho] <= 1 + 1e-10; the result
    never exceeds the root SLD Fisher information.
    """
    rho = family.state(theta)
    x = np.asarray(x, dtype=complex)
    constraint = float(np.trace((x @ dagger(x) + dagger(x) @ x) @ rho).real)
    if constraint > 1.0 + 1e-10:
        raise ValueError(f"infeasible witness: constraint value {constraint} exceeds 1")
    drho = family.derivative(theta, index)
    return float(np.sqrt(2.0) * abs(np.trace(x @ drho)))


@dataclass(frozen=True)
class CqDecomposition:
    total: float
    classical_part: float
    average_part: float


def cq_fisher_decomposition(
    p_family: Callable[[float], np.ndarray],
    conditional_families: Sequence[StateFamily],
    theta,
    kind: str = "sld",
    p_deriv: Callable[[float], np.ndarray] | None = None,
) -> CqDecomposition:
    """Fisher information of a classical-quantum family, decomposed.

    total = I(p_theta) + sum_x p_theta(x) I(rho_theta^x) with I the SLD or
    RLD Fisher information per ``kind``.  Equals the Fisher information of
    the assembled block-diagonal cq state family.
    """
    theta_vec = as_param_point(theta)
    t0 = float(theta_vec[0])
    p = np.asarray(p_family(t0), dtype=float)
    if len(conditional_families) != p.size:
        raise ValueError(
            f"alphabet size mismatch: {p.size} probabilities vs "
            f"{len(conditional_families)} conditional families"
        )
    classical = classical_fisher(p_family, t0, deriv=p_deriv).value
    fisher = sld_fisher if kind == "sld" else rld_fisher
    if kind not in ("sld", "rld"):
        raise ValueError(f"kind must be 'sld' or 'rld', got {kind!r}")
    average = 0.0
    for prob, fam in zip(p, conditional_families):
        if prob <= 0.0:
            continue
        average += prob * fisher(fam, theta_vec).value
    return CqDecomposition(
        total=classical + average, classical_part=classical, average_part=average
    )


def cq_state_family(
    p_family: Callable[[float], np.ndarray],
    conditional_families: Sequence[StateFamily],
) -> StateFamily:
    """Assemble the block-diagonal cq state sum_x p(x) |x><x| (x) rho^x."""
    dims = [f.dim for f in conditional_families]
    if len(set(dims)) != 1:
        raise ValueError("conditional families must share one dimension")
    d = dims[0]
    n = len(conditional_families)

    def eval_(t: np.ndarray) -> np.ndarray:
        p = np.asarray(p_family(float(t[0])), dtype=float)
        out = np.zeros((n * d, n * d), dtype=complex)
        for x, fam in enumerate(conditional_families):
            out[x * d : (x + 1) * d, x * d : (x + 1) * d] = p[x] * fam.state(t)
        return out

    return StateFamily(dim=n * d, eval=eval_)


def rld_matrix(
    family: StateFamily,
    thetas,
    cutoff: float = DEFAULT_SUPPORT_CUTOFF,
    tol: float = SUPPORT_TOL,
) -> FisherMatrix:
    """RLD Fisher information matrix with entries Tr[(d_j rho) rho^-1 (d_k rho)]."""
    theta = as_param_point(thetas)
    d_params = theta.size
    rho = family.state(theta)
    derivs = [family.derivative(theta, i) for i in range(d_params)]
    pinv, _, kernel = support_pinv(rho, cutoff)
    residual = 0.0
    for dj in derivs:
        for dk in derivs:
            residual = max(residual, frobenius(dj @ dk @ kernel))
    if residual > tol:
        return FisherMatrix(matrix=None, finite=False, support_residual=residual)
    m = np.empty((d_params, d_params), dtype=complex)
    for j, dj in enumerate(derivs):
        for k, dk in enumerate(derivs):
            m[j, k] = np.trace(dj @ pinv @ dk)
    return FisherMatrix(matrix=hermitian_part(m), finite=True, support_residual=residual)


def rld_value(
    family: StateFamily,
    thetas,
    w: np.ndarray,
    cutoff: float = DEFAULT_SUPPORT_CUTOFF,
    tol: float = SUPPORT_TOL,
    require_unit_trace: bool = True,
) -> FisherValue:
    """Scalar RLD value sum_jk <k|W|j> Tr[(d_j rho) rho^-1 (d_k rho)]."""
    w = check_weight_matrix(w, require_unit_trace)
    theta = as_param_point(thetas)
    d_params = theta.size
    if w.shape[0] != d_params:
        raise ValueError(f"weight matrix size {w.shape[0]} != parameter count {d_params}")
    rho = family.state(theta)
    derivs = [family.derivative(theta, i) for i in range(d_params)]
    pinv, _, kernel = support_pinv(rho, cutoff)
    cond = np.zeros_like(rho)
    for j in range(d_params):
        for k in range(d_params):
            cond += w[k, j] * derivs[k] @ derivs[j]
    residual = frobenius(cond @ kernel)
    if residual > tol:
        return FisherValue.of(math.inf, residual, tol)
    total = 0.0 + 0.0j
    for j in range(d_params):
        for k in range(d_params):
            total += w[k, j] * np.trace(derivs[j] @ pinv @ derivs[k])
    return FisherValue.of(float(total.real), residual, tol)


def sld_matrix(
    family: StateFamily,
    thetas,
    cutoff: float = DEFAULT_SUPPORT_CUTOFF,
    tol: float = SUPPORT_TOL,
) -> FisherMatrix:
    """SLD Fisher information matrix from the spectral SLD operators.

    Off-diagonal entries are the Hermitian symmetrization
    (Tr[rho L_j L_k] + Tr[rho L_k L_j]) / 2; the unsymmetrized products are
    kept in ``raw`` for diagnostics.
    """
    theta = as_param_point(thetas)
    d_params = theta.size
    rho = family.state(theta)
    residual = 0.0
    for i in range(d_params):
        residual = max(
            residual, _sld_support_residual(rho, family.derivative(theta, i), cutoff)
        )
    if residual > tol:
        return FisherMatrix(matrix=None, finite=False, support_residual=residual)
    ops = [sld_operator(family, theta, i, cutoff) for i in range(d_params)]
    raw = np.empty((d_params, d_params), dtype=complex)
    for j in range(d_params):
        for k in range(d_params):
            raw[j, k] = np.trace(rho @ ops[j] @ ops[k])
    sym = (raw + raw.conj().T) / 2
    return FisherMatrix(matrix=sym, finite=True, support_residual=residual, raw=raw)
