"""Seeded random ensembles of states, channels, and differentiable families.

Used by the property-verification suites and tests.  Random state families
follow the pattern rho_theta = (1-s) rho_0 + s sigma(theta) with a full-rank
base, which keeps all eigenvalues above ~1e-3 so that RLD quantities stay
finite and the inequalities under test are non-vacuous.
"""

from __future__ import annotations

import numpy as np

from .families import ChannelFamily, StateFamily, choi_from_kraus
from .linalg import dagger, hermitian_part, kron


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return hermitian_part(x)


def random_density(rng: np.random.Generator, d: int, min_eig: float = 2e-3) -> np.ndarray:
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = x @ dagger(x)
    rho /= float(np.trace(rho).real)
    return (1 - d * min_eig) * rho + min_eig * np.eye(d)


def random_pure_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_kraus(rng: np.random.Generator, d_in: int, d_out: int, n_kraus: int = 2) -> list[np.ndarray]:
    """Kraus set of a random channel from a Haar-ish random isometry."""
    x = rng.normal(size=(d_out * n_kraus, d_in)) + 1j * rng.normal(size=(d_out * n_kraus, d_in))
    q, _ = np.linalg.qr(x)
    return [q[i * d_out : (i + 1) * d_out, :] for i in range(n_kraus)]


def random_state_family(rng: np.random.Generator, d: int, mix: float = 0.3) -> StateFamily:
    """Full-rank family rho(t) = (1-mix) rho_0 + mix U(t) sigma U(t)^dag."""
    base = random_density(rng, d)
    sigma = random_density(rng, d)
    generator = random_hermitian(rng, d)
    lam, vecs = np.linalg.eigh(generator)

    def eval_(theta: np.ndarray) -> np.ndarray:
        u = (vecs * np.exp(-1j * float(theta[0]) * lam)) @ dagger(vecs)
        return (1 - mix) * base + mix * (u @ sigma @ dagger(u))

    def deriv(theta: np.ndarray, index: int) -> np.ndarray:
        u = (vecs * np.exp(-1j * float(theta[0]) * lam)) @ dagger(vecs)
        rotated = u @ sigma @ dagger(u)
        h = (vecs * lam) @ dagger(vecs)
        return mix * (-1j) * (h @ rotated - rotated @ h)

    return StateFamily(dim=d, eval=eval_, deriv=deriv)


def random_pure_state_family(rng: np.random.Generator, d: int) -> StateFamily:
    """Pure family |psi(t)> = exp(-i t H)|psi_0>."""
    generator = random_hermitian(rng, d)
    lam, vecs = np.linalg.eigh(generator)
    v0 = rng.normal(size=d) + 1j * rng.normal(size=d)
    v0 /= np.linalg.norm(v0)

    def eval_(theta: np.ndarray) -> np.ndarray:
        u = (vecs * np.exp(-1j * float(theta[0]) * lam)) @ dagger(vecs)
        v = u @ v0
        return np.outer(v, v.conj())

    return StateFamily(dim=d, eval=eval_)


def random_channel_family(
    rng: np.random.Generator, d_in: int, d_out: int, mix: float = 0.4
) -> ChannelFamily:
    """Full-rank-Choi family: a fixed Kraus mixture preceded by a rotating input frame."""
    choi_a = choi_from_kraus(random_kraus(rng, d_in, d_out, n_kraus=2))
    choi_b = choi_from_kraus(random_kraus(rng, d_in, d_out, n_kraus=d_in * d_out))
    generator = random_hermitian(rng, d_in)
    lam, vecs = np.linalg.eigh(generator)

    def choi(theta: np.ndarray) -> np.ndarray:
        u = (vecs * np.exp(-1j * float(theta[0]) * lam)) @ dagger(vecs)
        # Choi of N composed with the unitary pre-rotation U(t)
        lift = kron(u.T, np.eye(d_out))
        blended = (1 - mix) * choi_a + mix * choi_b
        return lift @ blended @ dagger(lift)

    return ChannelFamily(dims=(d_in, d_out), choi=choi)


def random_constant_channel(rng: np.random.Generator, d_in: int, d_out: int, n_kraus: int = 3):
    """A parameter-independent channel as a list of Kraus operators."""
    return random_kraus(rng, d_in, d_out, n_kraus)
