"""SLOCC classes of three qubits and the gradient flow of the moment-map norm."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polytope import SloccClass
from .qstate import (
    PAULI,
    PureState,
    apply_ops_tensor,
    batch_lambdas,
    batch_marginals,
    bell_pair_state,
    ghz_state,
    product_state,
    w_state,
)

DET_TOL = 1e-10
RANK_TOL = 1e-9
CONDITIONING_CAP = 20.0
FLOW_STEP = 0.05
MONOTONE_SLACK = 1e-12

__all__ = [
    "SloccClass",
    "ClassificationError",
    "FlowTrace",
    "representative",
    "hyperdeterminant",
    "batch_hyperdeterminant",
    "local_ranks",
    "classify",
    "random_invertible",
    "random_slocc_ops",
    "random_slocc_sample",
    "kirwan_flow",
    "kirwan_flow_batch",
    "is_momentum_critical",
    "momentum_residual",
]


class ClassificationError(ValueError):
    """Rank pattern that no exact pure state can have."""


def representative(label: SloccClass | str) -> PureState:
    label = SloccClass(label)
    if label is SloccClass.GHZ:
        return ghz_state()
    if label is SloccClass.W:
        return w_state(3)
    if label is SloccClass.SEP:
        return product_state(3)
    return bell_pair_state(int(label.value[1]))


def batch_hyperdeterminant(amps: np.ndarray) -> np.ndarray:
    """Cayley hyperdeterminant of each row of a ``(M, 8)`` array."""
    a = np.asarray(amps, dtype=complex).reshape(-1, 8).T
    a000, a001, a010, a011, a100, a101, a110, a111 = a
    return (
        a000**2 * a111**2
        + a001**2 * a110**2
        + a010**2 * a101**2
        + a011**2 * a100**2
        - 2
        * (
            a000 * a001 * a110 * a111
            + a000 * a010 * a101 * a111
            + a000 * a011 * a100 * a111
            + a001 * a010 * a101 * a110
            + a001 * a011 * a100 * a110
            + a010 * a011 * a100 * a101
        )
        + 4 * (a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111)
    )


def hyperdeterminant(state: PureState | np.ndarray) -> complex:
    """Cayley's 2x2x2 hyperdeterminant.

    Accepts a PureState or a raw (possibly unnormalized) length-8 vector, so
    SL-invariance can be checked on unnormalized images.
    """
    amps = state.amplitudes if isinstance(state, PureState) else np.asarray(state)
    if amps.size != 8:
        raise ValueError("the hyperdeterminant is defined for three qubits")
    return complex(batch_hyperdeterminant(amps)[0])


def _marginal_eigenvalues(amps: np.ndarray) -> np.ndarray:
    """Ascending eigenvalue pairs per qubit, shape ``(M, N, 2)``."""
    rho = batch_marginals(amps)
    mid = (rho[..., 0, 0].real + rho[..., 1, 1].real) / 2
    gap = np.hypot((rho[..., 0, 0].real - rho[..., 1, 1].real) / 2, np.abs(rho[..., 0, 1]))
    return np.stack([mid - gap, mid + gap], axis=-1)


def local_ranks(state: PureState, tol: float = RANK_TOL) -> tuple[int, ...]:
    if state.num_qubits != 3:
        raise ValueError("local ranks are used for three-qubit classification")
    ev = _marginal_eigenvalues(state.amplitudes[None, :])[0]
    return tuple(int(r) for r in (ev > tol).sum(axis=-1))


_RANK_CLASSES = {
    (2, 2, 2): SloccClass.W,
    (1, 2, 2): SloccClass.B1,
    (2, 1, 2): SloccClass.B2,
    (2, 2, 1): SloccClass.B3,
    (1, 1, 1): SloccClass.SEP,
}


def classify(
    state: PureState, det_tol: float = DET_TOL, rank_tol: float = RANK_TOL
) -> SloccClass:
    if state.num_qubits != 3:
        raise ValueError("SLOCC classification is implemented for three qubits")
    if abs(hyperdeterminant(state)) > det_tol:
        return SloccClass.GHZ
    ranks = local_ranks(state, rank_tol)
    try:
        return _RANK_CLASSES[ranks]
    except KeyError:
        raise ClassificationError(
            f"local ranks {ranks} are inconsistent for a pure state; "
            f"some marginal eigenvalue sits near rank_tol={rank_tol}"
        ) from None


def random_invertible(rng: np.random.Generator, cap: float = CONDITIONING_CAP) -> np.ndarray:
    """Complex Gaussian 2x2 matrix, redrawn until its condition number is <= cap."""
    while True:
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        if np.linalg.cond(g) <= cap:
            return g


def random_slocc_ops(
    rng: np.random.Generator, num_qubits: int = 3, cap: float = CONDITIONING_CAP
) -> list[np.ndarray]:
    return [random_invertible(rng, cap) for _ in range(num_qubits)]


def random_slocc_sample(
    label: SloccClass | str, seed: int, conditioning_cap: float = CONDITIONING_CAP
) -> PureState:
    rng = np.random.default_rng(seed)
    ops = random_slocc_ops(rng, 3, conditioning_cap)
    return PureState.normalized(apply_ops_tensor(representative(label).amplitudes, ops))


def _hermitian_blocks(amps: np.ndarray) -> np.ndarray:
    """Bloch vectors of every marginal: ``rho_i - I/2 = r_i . sigma / 2``."""
    rho = batch_marginals(amps)
    return np.stack(
        [2 * rho[..., 0, 1].real, -2 * rho[..., 0, 1].imag, (rho[..., 0, 0] - rho[..., 1, 1]).real],
        axis=-1,
    )


def _exp_neg(bloch: np.ndarray, step: float) -> np.ndarray:
    """``exp(-step * r.sigma/2)`` for a stack of Bloch vectors, closed form."""
    half = np.linalg.norm(bloch, axis=-1) / 2
    with np.errstate(invalid="ignore", divide="ignore"):
        unit = np.where(half[..., None] > 0, bloch / (2 * half[..., None]), 0.0)
    c = np.cosh(step * half)[..., None, None]
    s = np.sinh(step * half)[..., None, None]
    return c * np.eye(2) - s * np.einsum("...k,kij->...ij", unit, PAULI)


def _apply_batch(amps: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """Apply ``mats[:, q]`` to qubit ``q`` of every row."""
    m, dim = amps.shape
    n = mats.shape[1]
    out = amps
    for q in range(n):
        a = out.reshape(m, 2**q, 2, 2 ** (n - q - 1))
        out = np.einsum("mij,majb->maib", mats[:, q], a).reshape(m, dim)
    return out


@dataclass
class FlowTrace:
    iterates: list[tuple[int, tuple[float, ...], float]]
    converged: bool
    limit_spectra: tuple[float, ...]
    final_state: PureState | None = None
    diagnostic: str = ""
    norm_squares: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False)

    def is_monotone(self, slack: float = MONOTONE_SLACK) -> bool:
        ns = np.asarray([it[2] for it in self.iterates])
        return bool(np.all(np.diff(ns) <= slack))

    def to_jsonl(self) -> str:
        import json

        lines = [
            json.dumps({"step": k, "lambdas": list(lam), "moment_norm_square": ns})
            for k, lam, ns in self.iterates
        ]
        return "\n".join(lines) + "\n"


def kirwan_flow_batch(
    amps: np.ndarray,
    step: float = FLOW_STEP,
    max_iter: int = 20000,
    tol: float = 1e-10,
    record: bool = True,
) -> list[FlowTrace]:
    """Run the discretized norm-square descent on many states at once.

    Each step acts with ``exp(-step*H_1) ⊗ ... ⊗ exp(-step*H_N)`` where
    ``H_i = rho_i - I/2`` and renormalizes.  A trajectory stops when its
    local spectra move less than ``tol`` in max-norm, or when the norm
    square increases by more than 1e-12 (reported, not raised).
    """
    v = np.array(amps, dtype=complex, copy=True)
    if v.ndim == 1:
        v = v[None, :]
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    m = v.shape[0]
    active = np.ones(m, dtype=bool)
    converged = np.zeros(m, dtype=bool)
    diagnostics = [""] * m
    lam = batch_lambdas(v)
    ns = 2 * (lam**2).sum(axis=1)
    history: list[list] = [[(0, tuple(lam[i]), float(ns[i]))] for i in range(m)]
    for k in range(1, max_iter + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        sub = v[idx]
        step_ops = _exp_neg(_hermitian_blocks(sub), step)
        sub = _apply_batch(sub, step_ops)
        sub /= np.linalg.norm(sub, axis=1, keepdims=True)
        new_lam = batch_lambdas(sub)
        new_ns = 2 * (new_lam**2).sum(axis=1)
        moved = np.abs(new_lam - lam[idx]).max(axis=1)
        rising = new_ns > ns[idx] + MONOTONE_SLACK
        v[idx], lam[idx], ns[idx] = sub, new_lam, new_ns
        if record:
            for j, i in enumerate(idx):
                history[i].append((k, tuple(new_lam[j]), float(new_ns[j])))
        for j in np.flatnonzero(rising):
            i = idx[j]
            diagnostics[i] = f"norm square increased at step {k}; step size too large"
            active[i] = False
        done = (moved < tol) & ~rising
        converged[idx[done]] = True
        active[idx[done]] = False
    traces = []
    for i in range(m):
        if not converged[i] and not diagnostics[i]:
            diagnostics[i] = f"no convergence within {max_iter} iterations"
        traces.append(
            FlowTrace(
                iterates=history[i] if record else [history[i][0], (None, tuple(lam[i]), float(ns[i]))],
                converged=bool(converged[i]),
                limit_spectra=tuple(float(x) for x in lam[i]),
                final_state=PureState(v[i]),
                diagnostic=diagnostics[i],
            )
        )
    return traces


def kirwan_flow(
    state: PureState, step: float = FLOW_STEP, max_iter: int = 20000, tol: float = 1e-10
) -> FlowTrace:
    return kirwan_flow_batch(state.amplitudes, step, max_iter, tol)[0]


def momentum_residual(state: PureState) -> float:
    """Norm of the part of ``(sum_i H_i) v`` orthogonal to ``v``."""
    v = state.amplitudes[None, :]
    r = _hermitian_blocks(v)[0]
    n = state.num_qubits
    hv = np.zeros_like(v)
    for q in range(n):
        ops = np.broadcast_to(np.eye(2, dtype=complex), (1, n, 2, 2)).copy()
        ops[0, q] = np.einsum("k,kij->ij", r[q], PAULI) / 2
        hv += _apply_batch(v, ops)
    hv = hv[0]
    v = v[0]
    return float(np.linalg.norm(hv - np.vdot(v, hv) * v))


def is_momentum_critical(state: PureState, tol: float = 1e-9) -> bool:
    """True when the flow's generator fixes the point (up to phase)."""
    return momentum_residual(state) < tol
