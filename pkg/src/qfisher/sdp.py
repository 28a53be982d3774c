"""Semi-definite programs for the Fisher quantities: builders, SDPA sparse
export, and two-sided certification of candidate solutions.

Programs are encoded in the SDPA standard form

    minimize    c . x
    subject to  X_b(x) = sum_i x_i F_i[b] - F0[b]  >= 0   for every block b,

with complex data realified via  H = A + iB  ->  [[A, -B], [B, A]].  Complex
Hermitian matrix variables become general real symmetric variables (the
symplectic average leaves the optimum unchanged), with trace objectives
halved to compensate the realification doubling.  No solver is bundled:
closed-form primal candidates and dual block candidates certify the optimum
from both sides, and the exported files feed any external SDPA-format solver.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .families import ChannelFamily, StateFamily, as_param_point
from .fisher_state import check_weight_matrix
from .linalg import (
    DEFAULT_SUPPORT_CUTOFF,
    dagger,
    hermitian_eig,
    hermitian_part,
    kron,
    max_entangled_vector,
    partial_trace,
    support_pinv,
)

BUILD_KINDS = (
    "sld_state",
    "sld_state_dual",
    "rld_state",
    "rld_channel",
    "rld_value_state",
    "rld_value_channel",
)

FEASIBILITY_FLOOR = 1e-9


def realify(m: np.ndarray) -> np.ndarray:
    """Standard real embedding [[Re, -Im], [Im, Re]] of a complex matrix."""
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    return np.block([[m.real, -m.imag], [m.imag, m.real]])


def _extract_complex(g: np.ndarray) -> np.ndarray:
    """Symplectic-averaged complexification of a real matrix on a doubled space."""
    n = g.shape[0] // 2
    a = (g[:n, :n] + g[n:, n:]) / 2
    b = (g[n:, :n] - g[:n, n:]) / 2
    return a + 1j * b


@dataclass(frozen=True)
class Block:
    size: int
    kind: str = "psd"  # "psd" or "diagonal"


@dataclass
class SdpProblem:
    """A block SDP in SDPA standard form with optional candidate solutions."""

    name: str
    blocks: list[Block]
    objective: np.ndarray
    f0: list[np.ndarray]
    constraints: list[list[np.ndarray]]
    metadata: dict = field(default_factory=dict)
    primal_candidate: np.ndarray | None = None
    dual_candidate: list[np.ndarray] | None = None

    @property
    def num_constraints(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class Certificate:
    """Feasibility and objective report for one candidate.

    A feasible primal candidate upper-bounds the minimum; a feasible dual
    candidate lower-bounds it.
    """

    side: str
    objective: float
    min_eigenvalue: float
    equality_residual: float
    feasible: bool


def sandwich_gap(primal: Certificate, dual: Certificate) -> float:
    return primal.objective - dual.objective


class _Builder:
    """Accumulates variables, block patterns, and candidates for one program."""

    def __init__(self, name: str):
        self.name = name
        self.blocks: list[Block] = []
        self.patterns: list[dict[int, np.ndarray]] = []
        self.consts: dict[int, np.ndarray] = {}
        self.objective: list[float] = []
        self.metadata: dict = {
            "program": name,
            "realification": "H=A+iB -> [[A,-B],[B,A]]; trace objectives halved",
        }
        self._primal: list[float] = []

    def add_block(self, size: int, kind: str = "psd") -> int:
        self.blocks.append(Block(size=size, kind=kind))
        return len(self.blocks) - 1

    def set_const(self, block: int, matrix: np.ndarray) -> None:
        self.consts[block] = np.asarray(matrix, dtype=float)

    def add_scalar(self, obj_coeff: float, candidate: float) -> int:
        self.patterns.append({})
        self.objective.append(float(obj_coeff))
        self._primal.append(float(candidate))
        return len(self.patterns) - 1

    def set_pattern(self, var: int, block: int, matrix: np.ndarray) -> None:
        self.patterns[var][block] = np.asarray(matrix, dtype=float)

    def add_sym_matrix(
        self,
        n: int,
        candidate: np.ndarray,
        block_maps: list[tuple[int, object]],
        obj_half_trace: np.ndarray | None = None,
        obj_mult: float = 1.0,
    ) -> None:
        """Add a symmetric n x n matrix variable entry by entry.

        ``block_maps`` pairs a block index with either an index map (array of
        positions embedding the variable into the block) or a callable taking
        the basis matrix to the block pattern.  ``obj_half_trace`` K sets the
        objective as obj_mult * (1/2) Tr[K Ms].
        """
        candidate = np.asarray(candidate, dtype=float)
        for a in range(n):
            for b in range(a, n):
                basis = np.zeros((n, n))
                basis[a, b] += 1.0
                basis[b, a] += 1.0 if a != b else 0.0
                if a == b:
                    basis[a, a] = 1.0
                coeff = 0.0
                if obj_half_trace is not None:
                    coeff = obj_mult * 0.5 * float(np.sum(obj_half_trace * basis))
                var = self.add_scalar(coeff, candidate[a, b])
                for block, mapper in block_maps:
                    if callable(mapper):
                        self.set_pattern(var, block, mapper(basis))
                    else:
                        size = self.blocks[block].size
                        pat = np.zeros((size, size))
                        ia, ib = mapper[a], mapper[b]
                        pat[ia, ib] += 1.0
                        pat[ib, ia] += 1.0 if ia != ib else 0.0
                        if ia == ib:
                            pat[ia, ia] = 1.0
                        self.set_pattern(var, block, pat)

    def finish(self, dual_candidate=None) -> SdpProblem:
        m = len(self.objective)
        f0 = []
        constraints: list[list[np.ndarray]] = [[] for _ in range(m)]

        def sym(mat: np.ndarray) -> np.ndarray:
            # exact symmetry so that upper-triangle export round-trips losslessly
            return (mat + mat.T) / 2

        for b, block in enumerate(self.blocks):
            const = self.consts.get(b, np.zeros((block.size, block.size)))
            f0.append(sym(-const))
            for i in range(m):
                constraints[i].append(
                    sym(self.patterns[i].get(b, np.zeros((block.size, block.size))))
                )
        return SdpProblem(
            name=self.name,
            blocks=self.blocks,
            objective=np.asarray(self.objective, dtype=float),
            f0=f0,
            constraints=constraints,
            metadata=self.metadata,
            primal_candidate=np.asarray(self._primal, dtype=float),
            dual_candidate=dual_candidate,
        )


def _sym_candidate(m_complex: np.ndarray) -> np.ndarray:
    return realify(hermitian_part(m_complex))


def _dual_block(p, z, q) -> np.ndarray:
    """(1/2) realify of [[P, -Z^dag], [-Z, Q]], the generic dual block shape."""
    top = np.hstack([p, -dagger(z)])
    bottom = np.hstack([-z, q])
    return 0.5 * realify(np.vstack([top, bottom]))


def _state_data(family: StateFamily, theta, cutoff):
    theta = as_param_point(theta)
    rho = family.state(theta)
    derivs = [family.derivative(theta, i) for i in range(theta.size)]
    pinv, _, kernel = support_pinv(rho, cutoff)
    return rho, derivs, pinv, kernel


def _channel_data(chan: ChannelFamily, theta, cutoff):
    theta = as_param_point(theta)
    gamma = chan.choi_at(theta)
    derivs = [chan.derivative(theta, i) for i in range(theta.size)]
    pinv, _, kernel = support_pinv(gamma, cutoff)
    return gamma, derivs, pinv, kernel


def _refuse_if_unsupported(deriv_like: np.ndarray, kernel: np.ndarray, what: str) -> None:
    resid = float(np.linalg.norm(deriv_like @ kernel))
    if resid > 1e-8:
        raise ValueError(
            f"support condition violated for {what}: residual {resid:.3e}; "
            "the program would be unbounded"
        )


def _embed_map(offset: int, count: int, total_complex: int) -> np.ndarray:
    """Realified positions of complex indices [offset, offset+count)."""
    idx = np.arange(offset, offset + count)
    return np.concatenate([idx, idx + total_complex])


def build(kind: str, **inputs) -> SdpProblem:
    """Build one of the Fisher-information programs.

    Accepted kinds and inputs:
      sld_state, sld_state_dual, rld_state: family, theta
      rld_value_state: family, thetas, w
      rld_channel: chan, theta, conv
      rld_value_channel: chan, thetas, w, conv
    """
    if kind not in BUILD_KINDS:
        raise ValueError(f"kind must be one of {BUILD_KINDS}, got {kind!r}")
    cutoff = inputs.pop("cutoff", DEFAULT_SUPPORT_CUTOFF)
    if kind == "sld_state":
        return _build_sld_state(cutoff=cutoff, **inputs)
    if kind == "sld_state_dual":
        return _build_sld_state_dual(cutoff=cutoff, **inputs)
    if kind == "rld_state":
        return _build_rld_state(cutoff=cutoff, **inputs)
    if kind == "rld_channel":
        return _build_rld_channel(cutoff=cutoff, **inputs)
    if kind == "rld_value_state":
        return _build_rld_value_state(cutoff=cutoff, **inputs)
    return _build_rld_value_channel(cutoff=cutoff, **inputs)


def _sld_block_data(rho, drho):
    d = rho.shape[0]
    eye = np.eye(d, dtype=complex)
    s = kron(rho, eye) + kron(eye, rho.T)
    v = (kron(drho, eye) @ max_entangled_vector(d)).reshape(-1, 1)
    return s, v


def _build_sld_state(family: StateFamily, theta, cutoff) -> SdpProblem:
    rho, derivs, _, kernel = _state_data(family, theta, cutoff)
    drho = derivs[0]
    _refuse_if_unsupported(kernel @ drho @ kernel, np.eye(rho.shape[0]), "the SLD program")
    s, v = _sld_block_data(rho, drho)
    s_pinv, _, _ = support_pinv(s, cutoff)
    mu_star = float((dagger(v) @ s_pinv @ v).real[0, 0])

    q = 1 + s.shape[0]
    builder = _Builder("sld_state")
    builder.metadata["optimum"] = "SLD Fisher information (objective 2*mu)"
    block = builder.add_block(2 * q)
    big = np.zeros((q, q), dtype=complex)
    big[0, 1:] = dagger(v)[0]
    big[1:, 0] = v[:, 0]
    big[1:, 1:] = s
    builder.set_const(block, realify(big))
    mu = builder.add_scalar(2.0, mu_star)
    pat = np.zeros((2 * q, 2 * q))
    pat[0, 0] = 1.0
    pat[q, q] = 1.0
    builder.set_pattern(mu, block, pat)

    phi = s_pinv @ v
    dual_big = np.zeros((q, q), dtype=complex)
    dual_big[0, 0] = 1.0
    dual_big[0, 1:] = -dagger(phi)[0]
    dual_big[1:, 0] = -phi[:, 0]
    dual_big[1:, 1:] = phi @ dagger(phi)
    return builder.finish(dual_candidate=[realify(dual_big)])


def _build_sld_state_dual(family: StateFamily, theta, cutoff) -> SdpProblem:
    rho, derivs, _, _ = _state_data(family, theta, cutoff)
    drho = derivs[0]
    s, v = _sld_block_data(rho, drho)
    s_pinv, _, _ = support_pinv(s, cutoff)
    phi = s_pinv @ v
    z_star = phi @ dagger(phi)

    d2 = s.shape[0]
    q = 1 + d2
    builder = _Builder("sld_state_dual")
    builder.metadata["optimum"] = "negated SLD Fisher information (maximization exported as min)"
    diag_block = builder.add_block(1, kind="diagonal")
    builder.set_const(diag_block, np.array([[1.0]]))
    lmi = builder.add_block(2 * q)

    lam = builder.add_scalar(0.0, 1.0)
    builder.set_pattern(lam, diag_block, np.array([[-1.0]]))
    pat = np.zeros((2 * q, 2 * q))
    pat[0, 0] = 1.0
    pat[q, q] = 1.0
    builder.set_pattern(lam, lmi, pat)

    for i in range(d2):
        for part, coeff in ((1.0, -4.0 * float(v[i, 0].real)), (1j, -4.0 * float(v[i, 0].imag))):
            h = np.zeros((q, q), dtype=complex)
            h[1 + i, 0] = part
            h[0, 1 + i] = np.conj(part)
            cand = float(phi[i, 0].real) if part == 1.0 else float(phi[i, 0].imag)
            var = builder.add_scalar(coeff, cand)
            builder.set_pattern(var, lmi, realify(h))

    zmap = _embed_map(1, d2, q)
    builder.add_sym_matrix(
        2 * d2,
        _sym_candidate(z_star),
        [(lmi, zmap)],
        obj_half_trace=realify(s),
        obj_mult=2.0,
    )
    return builder.finish()


def _build_rld_state(family: StateFamily, theta, cutoff) -> SdpProblem:
    rho, derivs, pinv, kernel = _state_data(family, theta, cutoff)
    drho = derivs[0]
    _refuse_if_unsupported(drho, kernel, "the RLD program")
    d = rho.shape[0]
    m_star = drho @ pinv @ drho

    builder = _Builder("rld_state")
    builder.metadata["optimum"] = "RLD Fisher information (objective Tr[M]/2 on the realified variable)"
    psd = builder.add_block(2 * d)
    lmi = builder.add_block(4 * d)
    big = np.zeros((2 * d, 2 * d), dtype=complex)
    big[:d, d:] = drho
    big[d:, :d] = drho
    big[d:, d:] = rho
    builder.set_const(lmi, realify(big))
    mmap = _embed_map(0, d, 2 * d)
    builder.add_sym_matrix(
        2 * d,
        _sym_candidate(m_star),
        [(psd, np.arange(2 * d)), (lmi, mmap)],
        obj_half_trace=np.eye(2 * d),
        obj_mult=1.0,
    )

    y_op = pinv @ drho
    z_op = pinv @ drho @ drho @ pinv
    dual = [np.zeros((2 * d, 2 * d)), _dual_block(np.eye(d, dtype=complex), y_op, z_op)]
    return builder.finish(dual_candidate=dual)


def _reduce_complex(m: np.ndarray, dims: tuple[int, int], conv: str) -> np.ndarray:
    which = "second" if conv == "output" else "first"
    return partial_trace(m, dims, which)


def _lift(e: np.ndarray, dims: tuple[int, int], conv: str) -> np.ndarray:
    d_r, d_b = dims
    if conv == "output":
        return kron(e, np.eye(d_b))
    return kron(np.eye(d_r), e)


def _build_rld_channel(chan: ChannelFamily, theta, conv: str = "output", cutoff=DEFAULT_SUPPORT_CUTOFF) -> SdpProblem:
    gamma, derivs, pinv, kernel = _channel_data(chan, theta, cutoff)
    dgamma = derivs[0]
    _refuse_if_unsupported(dgamma, kernel, "the channel RLD program")
    dims = chan.dims
    d_keep = dims[0] if conv == "output" else dims[1]
    n = gamma.shape[0]
    m_star = dgamma @ pinv @ dgamma
    reduced = hermitian_part(_reduce_complex(m_star, dims, conv))
    spec = hermitian_eig(reduced)
    lam_star = float(spec.eigenvalues[-1])
    u = spec.eigenvectors[:, -1]
    e = np.outer(u, u.conj())

    builder = _Builder(f"rld_channel_{conv}")
    builder.metadata["optimum"] = "RLD channel Fisher information (objective lambda)"
    builder.metadata["convention"] = conv
    cap = builder.add_block(2 * d_keep)
    lmi = builder.add_block(4 * n)
    big = np.zeros((2 * n, 2 * n), dtype=complex)
    big[:n, n:] = dgamma
    big[n:, :n] = dgamma
    big[n:, n:] = gamma
    builder.set_const(lmi, realify(big))

    lam_var = builder.add_scalar(1.0, lam_star)
    builder.set_pattern(lam_var, cap, np.eye(2 * d_keep))

    def cap_pattern(basis: np.ndarray) -> np.ndarray:
        return -realify(_reduce_complex(_extract_complex(basis), dims, conv))

    mmap = _embed_map(0, n, 2 * n)
    builder.add_sym_matrix(2 * n, _sym_candidate(m_star), [(cap, cap_pattern), (lmi, mmap)])

    lifted = _lift(e, dims, conv)
    z_op = pinv @ dgamma @ lifted
    q_op = pinv @ dgamma @ lifted @ dgamma @ pinv
    dual = [0.5 * realify(e), _dual_block(lifted, z_op, q_op)]
    return builder.finish(dual_candidate=dual)


def _stacked_derivs(derivs: list[np.ndarray]) -> np.ndarray:
    """X = sum_j <j| (x) d_j: a (d) x (D d) map from the flag register."""
    return np.hstack(derivs)


def _build_rld_value_state(family: StateFamily, thetas, w, cutoff=DEFAULT_SUPPORT_CUTOFF) -> SdpProblem:
    w = check_weight_matrix(w)
    rho, derivs, pinv, kernel = _state_data(family, thetas, cutoff)
    d = rho.shape[0]
    n_params = len(derivs)
    x_op = _stacked_derivs(derivs)
    _refuse_if_unsupported(dagger(x_op), kernel, "the RLD value program")
    nm = n_params * d
    m_star = dagger(x_op) @ pinv @ x_op

    builder = _Builder("rld_value_state")
    builder.metadata["optimum"] = "RLD Fisher information value (objective Tr[(W x I) M]/2 realified)"
    psd = builder.add_block(2 * nm)
    lmi = builder.add_block(2 * (nm + d))
    big = np.zeros((nm + d, nm + d), dtype=complex)
    big[:nm, nm:] = dagger(x_op)
    big[nm:, :nm] = x_op
    big[nm:, nm:] = rho
    builder.set_const(lmi, realify(big))
    mmap = _embed_map(0, nm, nm + d)
    builder.add_sym_matrix(
        2 * nm,
        _sym_candidate(m_star),
        [(psd, np.arange(2 * nm)), (lmi, mmap)],
        obj_half_trace=realify(kron(w, np.eye(d))),
        obj_mult=1.0,
    )

    p_op = kron(w, np.eye(d, dtype=complex))
    q_op = pinv @ x_op @ p_op
    r_op = pinv @ x_op @ p_op @ dagger(x_op) @ pinv
    dual = [np.zeros((2 * nm, 2 * nm)), _dual_block(p_op, q_op, r_op)]
    return builder.finish(dual_candidate=dual)


def _weighted_reduce(m: np.ndarray, w: np.ndarray, dims: tuple[int, int], conv: str) -> np.ndarray:
    """Tr over flag and traced factor of (W (x) I) m, leaving the kept factor."""
    n_params = w.shape[0]
    d_r, d_b = dims
    t = m.reshape(n_params, d_r, d_b, n_params, d_r, d_b)
    t = np.einsum("fg,grbhsc->frbhsc", w, t)
    if conv == "output":
        return np.einsum("frbfsb->rs", t)
    return np.einsum("frbfrc->bc", t)


def _build_rld_value_channel(
    chan: ChannelFamily, thetas, w, conv: str = "output", cutoff=DEFAULT_SUPPORT_CUTOFF
) -> SdpProblem:
    w = check_weight_matrix(w)
    gamma, derivs, pinv, kernel = _channel_data(chan, thetas, cutoff)
    dims = chan.dims
    d_keep = dims[0] if conv == "output" else dims[1]
    n = gamma.shape[0]
    n_params = len(derivs)
    nm = n_params * n
    x_op = _stacked_derivs(derivs)
    _refuse_if_unsupported(dagger(x_op), kernel, "the channel RLD value program")
    m_star = dagger(x_op) @ pinv @ x_op
    reduced = hermitian_part(_weighted_reduce(m_star, w, dims, conv))
    spec = hermitian_eig(reduced)
    lam_star = float(spec.eigenvalues[-1])
    u = spec.eigenvectors[:, -1]
    e = np.outer(u, u.conj())

    builder = _Builder(f"rld_value_channel_{conv}")
    builder.metadata["optimum"] = "RLD channel Fisher information value (objective lambda)"
    builder.metadata["convention"] = conv
    cap = builder.add_block(2 * d_keep)
    lmi = builder.add_block(2 * (nm + n))
    big = np.zeros((nm + n, nm + n), dtype=complex)
    big[:nm, nm:] = dagger(x_op)
    big[nm:, :nm] = x_op
    big[nm:, nm:] = gamma
    builder.set_const(lmi, realify(big))

    lam_var = builder.add_scalar(1.0, lam_star)
    builder.set_pattern(lam_var, cap, np.eye(2 * d_keep))

    def cap_pattern(basis: np.ndarray) -> np.ndarray:
        return -realify(_weighted_reduce(_extract_complex(basis), w, dims, conv))

    mmap = _embed_map(0, nm, nm + n)
    builder.add_sym_matrix(2 * nm, _sym_candidate(m_star), [(cap, cap_pattern), (lmi, mmap)])

    lifted = _lift(e, dims, conv)
    p_op = kron(w, lifted)
    z_op = pinv @ x_op @ p_op
    q_op = pinv @ x_op @ p_op @ dagger(x_op) @ pinv
    dual = [0.5 * realify(e), _dual_block(p_op, z_op, q_op)]
    return builder.finish(dual_candidate=dual)


def verify_candidate(prob: SdpProblem, candidate, side: str = "primal", floor: float = FEASIBILITY_FLOOR) -> Certificate:
    """Check a candidate and report its certified objective.

    Primal candidates are variable vectors; dual candidates are per-block
    symmetric matrices satisfying Tr[F_i Y] = c_i with bound Tr[F0 Y].
    """
    if side == "primal":
        x = np.asarray(candidate, dtype=float)
        if x.shape != (prob.num_constraints,):
            raise ValueError(
                f"candidate length {x.shape} does not match {prob.num_constraints} variables"
            )
        min_eig = math.inf
        for b, block in enumerate(prob.blocks):
            xb = -prob.f0[b].copy()
            for i in range(prob.num_constraints):
                if x[i] != 0.0:
                    xb = xb + x[i] * prob.constraints[i][b]
            vals = np.linalg.eigvalsh((xb + xb.T) / 2)
            min_eig = min(min_eig, float(vals[0]))
        objective = float(prob.objective @ x)
        return Certificate(
            side="primal",
            objective=objective,
            min_eigenvalue=min_eig,
            equality_residual=0.0,
            feasible=min_eig >= -floor,
        )
    if side != "dual":
        raise ValueError(f"side must be 'primal' or 'dual', got {side!r}")
    ys = [np.asarray(y, dtype=float) for y in candidate]
    if len(ys) != len(prob.blocks):
        raise ValueError(f"dual candidate has {len(ys)} blocks, expected {len(prob.blocks)}")
    min_eig = math.inf
    for y, block in zip(ys, prob.blocks):
        if y.shape != (block.size, block.size):
            raise ValueError(f"dual block shape {y.shape} does not match size {block.size}")
        vals = np.linalg.eigvalsh((y + y.T) / 2)
        min_eig = min(min_eig, float(vals[0]))
    residual = 0.0
    for i in range(prob.num_constraints):
        total = sum(float(np.sum(prob.constraints[i][b] * ys[b])) for b in range(len(ys)))
        residual = max(residual, abs(total - float(prob.objective[i])))
    objective = sum(float(np.sum(prob.f0[b] * ys[b])) for b in range(len(ys)))
    return Certificate(
        side="dual",
        objective=objective,
        min_eigenvalue=min_eig,
        equality_residual=residual,
        feasible=min_eig >= -floor and residual <= 1e-7,
    )


def export_sdpa(prob: SdpProblem) -> str:
    """SDPA sparse format text, deterministic and lossless for round-trips."""
    lines = []
    for key in sorted(prob.metadata):
        lines.append(f'"{key}: {prob.metadata[key]}')
    lines.append(str(prob.num_constraints))
    lines.append(str(len(prob.blocks)))
    lines.append(" ".join(
        str(-b.size if b.kind == "diagonal" else b.size) for b in prob.blocks
    ))
    lines.append(" ".join(f"{c:.17g}" for c in prob.objective))

    def emit(matno: int, blocks: list[np.ndarray]):
        for b, mat in enumerate(blocks):
            for i in range(mat.shape[0]):
                for j in range(i, mat.shape[1]):
                    v = mat[i, j]
                    if v != 0.0:
                        lines.append(f"{matno} {b + 1} {i + 1} {j + 1} {v:.17g}")

    emit(0, prob.f0)
    for i in range(prob.num_constraints):
        emit(i + 1, prob.constraints[i])
    return "\n".join(lines) + "\n"


def problem_filename(prob: SdpProblem) -> str:
    """Deterministic `<kind>_<hash>.dat-s` name from the exported content."""
    text = export_sdpa(prob)
    body = "\n".join(line for line in text.splitlines() if not line.startswith('"'))
    digest = hashlib.sha256(body.encode()).hexdigest()[:12]
    return f"{prob.name}_{digest}.dat-s"


def read_sdpa(text: str) -> SdpProblem:
    """Parse SDPA sparse format back into an SdpProblem (comments dropped)."""
    lines = [ln for ln in text.splitlines() if ln.strip() and ln[0] not in '"*']
    m = int(lines[0].split()[0])
    nblocks = int(lines[1].split()[0])
    raw_sizes = lines[2].replace(",", " ").replace("(", " ").replace(")", " ").replace("{", " ").replace("}", " ").split()
    sizes = [int(s) for s in raw_sizes[:nblocks]]
    blocks = [Block(size=abs(s), kind="diagonal" if s < 0 else "psd") for s in sizes]
    objective = np.array(
        [float(c) for c in lines[3].replace(",", " ").split()[:m]], dtype=float
    )
    f0 = [np.zeros((b.size, b.size)) for b in blocks]
    constraints = [[np.zeros((b.size, b.size)) for b in blocks] for _ in range(m)]
    for ln in lines[4:]:
        matno_s, blk_s, i_s, j_s, val_s = ln.split()[:5]
        matno, blk, i, j = int(matno_s), int(blk_s) - 1, int(i_s) - 1, int(j_s) - 1
        val = float(val_s)
        target = f0[blk] if matno == 0 else constraints[matno - 1][blk]
        target[i, j] = val
        target[j, i] = val
    return SdpProblem(
        name="parsed",
        blocks=blocks,
        objective=objective,
        f0=f0,
        constraints=constraints,
    )


@dataclass(frozen=True)
class SeesawResult:
    """Monotone lower-bound trace of the alternating SLD channel search."""

    value: float
    iterates: list[float]
    probe: np.ndarray


def seesaw_sld_channel(chan: ChannelFamily, theta, iters: int = 40, seed: int = 0) -> SeesawResult:
    """Alternating optimization for the SLD channel Fisher information.

    For a fixed probe the inner maximization over the witness variables is
    solved exactly by the state-Fisher closed form; the probe then improves
    by a seeded local search step.  Iterates are best-so-far values, hence
    monotone nondecreasing, and the final value is a certified lower bound.
    """
    from .fisher_channel import _probe_objective, _probe_state

    theta = as_param_point(theta)
    d_in = chan.dims[0]
    value = _probe_objective(chan, theta, DEFAULT_SUPPORT_CUTOFF)
    rng = np.random.default_rng(seed)
    z = np.eye(d_in, dtype=complex) / math.sqrt(d_in)
    best = value(z)
    z_best = z.copy()
    iterates = [best]
    step = 0.3
    for _ in range(max(iters - 1, 0)):
        improved = False
        proposals = []
        for r in range(d_in):
            for c in range(d_in):
                for part in (1.0, 1j):
                    for sign in (1.0, -1.0):
                        cand = z.copy()
                        cand[r, c] += sign * step * part
                        proposals.append(cand)
        noise = rng.normal(size=(d_in, d_in)) + 1j * rng.normal(size=(d_in, d_in))
        proposals.append(z + step * noise / np.linalg.norm(noise))
        for cand in proposals:
            v = value(cand)
            if v > best + 1e-15:
                best, z, improved = v, cand, True
                z_best = cand
        if not improved:
            step *= 0.5
        iterates.append(best)
        if step < 1e-9:
            iterates.extend([best] * (iters - len(iterates)))
            break
    return SeesawResult(value=best, iterates=iterates, probe=_probe_state(z_best, d_in))
