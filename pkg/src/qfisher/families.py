"""Parameterized families of quantum states and channels with derivatives.

A family maps a parameter point (a length-D real vector) to a density matrix
or a Choi matrix.  Derivatives come from a registered analytic rule when
available and otherwise from a Hermitian-symmetrized central difference.
Evaluators must be pure so that concurrent evaluation at distinct points is
safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .linalg import (
    dagger,
    frobenius,
    hermitian_part,
    kron,
    max_entangled_vector,
    partial_trace,
)

DEFAULT_FD_STEP = 1e-5

KRAUS_COMPLETENESS_TOL = 1e-10


class FamilyError(ValueError):
    """Raised when a family or its inputs violate a precondition."""


def as_param_point(theta) -> np.ndarray:
    """Normalize a scalar or sequence to a 1-D float parameter vector."""
    arr = np.atleast_1d(np.asarray(theta, dtype=float))
    if arr.ndim != 1 or arr.size < 1:
        raise FamilyError(f"parameter point must be a scalar or 1-D vector, got {theta!r}")
    if not np.all(np.isfinite(arr)):
        raise FamilyError(f"parameter point has non-finite entries: {arr}")
    return arr


def _clamped_step(theta: np.ndarray, index: int, step: float, bounds) -> float:
    if bounds is None:
        return step
    lo, hi = bounds
    room = min(theta[index] - lo[index], hi[index] - theta[index])
    if room <= 0:
        raise FamilyError(
            f"parameter {index} at {theta[index]} is outside the open domain "
            f"({lo[index]}, {hi[index]})"
        )
    return min(step, room / 2)


def _central_difference(evaluate, theta: np.ndarray, index: int, step: float) -> np.ndarray:
    up = theta.copy()
    dn = theta.copy()
    up[index] += step
    dn[index] -= step
    try:
        plus = np.asarray(evaluate(up), dtype=complex)
        minus = np.asarray(evaluate(dn), dtype=complex)
    except Exception as exc:  # noqa: BLE001 - report the offending point
        raise FamilyError(f"evaluation failed at shifted point {up} or {dn}: {exc}") from exc
    return hermitian_part((plus - minus) / (2 * step))


@dataclass(frozen=True)
class StateFamily:
    """Differentiable family theta -> density matrix of size ``dim``."""

    dim: int
    eval: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray, int], np.ndarray] | None = None
    fd_step: float = DEFAULT_FD_STEP
    bounds: tuple[np.ndarray, np.ndarray] | None = None

    def state(self, theta) -> np.ndarray:
        return np.asarray(self.eval(as_param_point(theta)), dtype=complex)

    def derivative(self, theta, index: int = 0) -> np.ndarray:
        theta = as_param_point(theta)
        if self.deriv is not None:
            return hermitian_part(np.asarray(self.deriv(theta, index), dtype=complex))
        step = _clamped_step(theta, index, self.fd_step, self.bounds)
        return _central_difference(self.eval, theta, index, step)

    @classmethod
    def from_scalar(cls, dim, fn, deriv=None, **kwargs) -> "StateFamily":
        """Wrap functions of a single float parameter."""
        dfn = None if deriv is None else (lambda t, i: deriv(float(t[0])))
        return cls(dim=dim, eval=lambda t: fn(float(t[0])), deriv=dfn, **kwargs)

    @classmethod
    def constant(cls, rho: np.ndarray) -> "StateFamily":
        rho = np.asarray(rho, dtype=complex)
        return cls(dim=rho.shape[0], eval=lambda t: rho, deriv=lambda t, i: np.zeros_like(rho))


@dataclass(frozen=True)
class ChannelFamily:
    """Differentiable family theta -> channel, held as its Choi matrix.

    ``dims = (d_in, d_out)``; the Choi matrix lives on reference (x) output
    with the reference factor first.  ``diagonal_covariant`` marks channels
    for which probe optimization may be restricted to Schmidt-diagonal probes
    sqrt(p)|00> + sqrt(1-p)|11>.
    """

    dims: tuple[int, int]
    choi: Callable[[np.ndarray], np.ndarray]
    kraus: Callable[[np.ndarray], list[np.ndarray]] | None = None
    deriv: Callable[[np.ndarray, int], np.ndarray] | None = None
    fd_step: float = DEFAULT_FD_STEP
    bounds: tuple[np.ndarray, np.ndarray] | None = None
    diagonal_covariant: bool = False

    def choi_at(self, theta) -> np.ndarray:
        return np.asarray(self.choi(as_param_point(theta)), dtype=complex)

    def kraus_at(self, theta) -> list[np.ndarray] | None:
        if self.kraus is None:
            return None
        return [np.asarray(k, dtype=complex) for k in self.kraus(as_param_point(theta))]

    def derivative(self, theta, index: int = 0) -> np.ndarray:
        theta = as_param_point(theta)
        if self.deriv is not None:
            return hermitian_part(np.asarray(self.deriv(theta, index), dtype=complex))
        step = _clamped_step(theta, index, self.fd_step, self.bounds)
        return _central_difference(self.choi, theta, index, step)

    def apply(self, theta, rho: np.ndarray) -> np.ndarray:
        return apply_channel(self, theta, rho)

    @classmethod
    def from_scalar(cls, dims, choi_fn, kraus_fn=None, deriv=None, **kwargs) -> "ChannelFamily":
        dfn = None if deriv is None else (lambda t, i: deriv(float(t[0])))
        kfn = None if kraus_fn is None else (lambda t: kraus_fn(float(t[0])))
        return cls(dims=dims, choi=lambda t: choi_fn(float(t[0])), kraus=kfn, deriv=dfn, **kwargs)

    @classmethod
    def from_kraus_family(cls, dims, kraus_fn, **kwargs) -> "ChannelFamily":
        """Build a family whose Choi matrix is derived from its Kraus rule."""
        return cls(
            dims=dims,
            choi=lambda t: choi_from_kraus(kraus_fn(t)),
            kraus=kraus_fn,
            **kwargs,
        )

    @classmethod
    def constant(cls, choi: np.ndarray, dims) -> "ChannelFamily":
        choi = np.asarray(choi, dtype=complex)
        return cls(
            dims=dims,
            choi=lambda t: choi,
            deriv=lambda t, i: np.zeros_like(choi),
        )


def choi_from_kraus(kraus: Sequence[np.ndarray]) -> np.ndarray:
    """Choi matrix sum_k (I (x) K_k) |Gamma><Gamma| (I (x) K_k)^dag.

    Raises ``FamilyError`` with the completeness residual if the Kraus set is
    not trace preserving.
    """
    ops = [np.asarray(k, dtype=complex) for k in kraus]
    if not ops:
        raise FamilyError("empty Kraus list")
    d_out, d_in = ops[0].shape
    total = sum(dagger(k) @ k for k in ops)
    resid = frobenius(total - np.eye(d_in))
    if resid > KRAUS_COMPLETENESS_TOL:
        raise FamilyError(f"Kraus set is not trace preserving: completeness residual {resid:.3e}")
    gamma = max_entangled_vector(d_in)
    out = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for k in ops:
        v = kron(np.eye(d_in), k) @ gamma
        out += np.outer(v, v.conj())
    return out


def kraus_from_choi(choi: np.ndarray, dims: tuple[int, int], tol: float = 1e-12) -> list[np.ndarray]:
    """Kraus operators from a Choi matrix via its eigendecomposition."""
    d_in, d_out = dims
    vals, vecs = np.linalg.eigh(hermitian_part(choi))
    ops = []
    for lam, v in zip(vals, vecs.T):
        if lam > tol * max(vals[-1], 1.0):
            # v[(a, b)] -> K[b, a] so that (I (x) K)|Gamma> reproduces v
            ops.append(np.sqrt(lam) * v.reshape(d_in, d_out).T)
    return ops


def apply_channel(chan: ChannelFamily, theta, rho: np.ndarray) -> np.ndarray:
    """Apply the channel at ``theta`` to a state on reference (x) input.

    Uses the post-selected teleportation contraction of the input state with
    the Choi matrix; the reference factor of ``rho`` passes through untouched.
    """
    d_in, d_out = chan.dims
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] % d_in != 0:
        raise FamilyError(
            f"input of shape {rho.shape} is not compatible with channel input dimension {d_in}"
        )
    d_r = rho.shape[0] // d_in
    gamma = chan.choi_at(theta)
    r4 = rho.reshape(d_r, d_in, d_r, d_in)
    g4 = gamma.reshape(d_in, d_out, d_in, d_out)
    out = np.einsum("raqc,abcd->rbqd", r4, g4)
    return out.reshape(d_r * d_out, d_r * d_out)


def compose(first: ChannelFamily, then: ChannelFamily) -> ChannelFamily:
    """Serial composition: apply ``first``, then ``then`` (both at the same theta)."""
    if first.dims[1] != then.dims[0]:
        raise FamilyError(
            f"cannot compose: output dimension {first.dims[1]} != input dimension {then.dims[0]}"
        )
    d_in = first.dims[0]

    def choi(theta: np.ndarray) -> np.ndarray:
        return apply_channel(then, theta, first.choi(theta))

    return ChannelFamily(
        dims=(d_in, then.dims[1]),
        choi=choi,
        fd_step=min(first.fd_step, then.fd_step),
        # covariance w.r.t. the same diagonal group survives composition
        diagonal_covariant=first.diagonal_covariant and then.diagonal_covariant,
    )


@dataclass
class ValidationReport:
    """Worst-case residuals of a family over a list of probe points."""

    psd_violation: float = 0.0
    trace_deviation: float = 0.0
    cptp_deviation: float = 0.0
    kraus_choi_deviation: float = 0.0
    derivative_deviation: float = 0.0
    points: int = 0

    def ok(self, tol: float = 1e-8) -> bool:
        return (
            max(
                self.psd_violation,
                self.trace_deviation,
                self.cptp_deviation,
                self.kraus_choi_deviation,
            )
            <= tol
        )


def validate(family, theta_samples: Sequence) -> ValidationReport:
    """Probe a state or channel family and report worst-case residuals."""
    report = ValidationReport()
    for theta in theta_samples:
        theta = as_param_point(theta)
        report.points += 1
        if isinstance(family, StateFamily):
            rho = family.state(theta)
            vals = np.linalg.eigvalsh(hermitian_part(rho))
            report.psd_violation = max(report.psd_violation, float(max(0.0, -vals[0])))
            report.trace_deviation = max(
                report.trace_deviation, abs(float(np.trace(rho).real) - 1.0)
            )
            if family.deriv is not None:
                for i in range(theta.size):
                    analytic = family.derivative(theta, i)
                    step = _clamped_step(theta, i, family.fd_step, family.bounds)
                    fd = _central_difference(family.eval, theta, i, step)
                    scale = 1.0 + frobenius(analytic)
                    report.derivative_deviation = max(
                        report.derivative_deviation, frobenius(analytic - fd) / scale
                    )
        elif isinstance(family, ChannelFamily):
            gamma = family.choi_at(theta)
            d_in, d_out = family.dims
            vals = np.linalg.eigvalsh(hermitian_part(gamma))
            report.psd_violation = max(report.psd_violation, float(max(0.0, -vals[0])))
            marginal = partial_trace(gamma, (d_in, d_out), "second")
            report.cptp_deviation = max(
                report.cptp_deviation, frobenius(marginal - np.eye(d_in))
            )
            ks = family.kraus_at(theta)
            if ks is not None:
                report.kraus_choi_deviation = max(
                    report.kraus_choi_deviation, frobenius(choi_from_kraus(ks) - gamma)
                )
            if family.deriv is not None:
                for i in range(theta.size):
                    analytic = family.derivative(theta, i)
                    step = _clamped_step(theta, i, family.fd_step, family.bounds)
                    fd = _central_difference(family.choi, theta, i, step)
                    scale = 1.0 + frobenius(analytic)
                    report.derivative_deviation = max(
                        report.derivative_deviation, frobenius(analytic - fd) / scale
                    )
        else:
            raise FamilyError(f"cannot validate object of type {type(family)!r}")
    return report
