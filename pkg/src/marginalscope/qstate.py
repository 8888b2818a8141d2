"""Pure N-qubit states, one-qubit marginals and the local-spectra map.

Qubit 1 is the most significant bit of the amplitude index, so amplitude
``k`` of a three-qubit state is the coefficient of ``|abc>`` with
``k = 4a + 2b + c``.  Public ``qubit`` arguments are 1-based.

All traceless Hermitian quantities are stored in the Hermitian convention
(``rho_i - I/2``); multiply by ``i`` to get the anti-Hermitian Lie algebra
element.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

NORM_SLACK = 1e-6
HERMITIAN_TOL = 1e-12
COND_WARN = 1e12

I2 = np.eye(2, dtype=complex)
PAULI = np.array(
    [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex
)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector of an N-qubit pure state.

    Inputs whose norm is within 1e-6 of one are renormalized silently;
    anything further off raises ``ValueError``.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        n = amps.size
        if n < 2 or n & (n - 1):
            raise ValueError(f"amplitude count {n} is not a power of two >= 2")
        norm = np.linalg.norm(amps)
        if not np.isfinite(norm) or abs(norm - 1.0) > NORM_SLACK:
            raise ValueError(f"state norm {norm!r} deviates from 1 by more than {NORM_SLACK}")
        object.__setattr__(self, "amplitudes", _readonly(amps / norm))

    @classmethod
    def normalized(cls, amplitudes) -> "PureState":
        """Build a state from an arbitrary nonzero vector."""
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(amps)
        if norm == 0 or not np.isfinite(norm):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(amps / norm)

    @classmethod
    def from_bits(cls, terms: dict[str, complex]) -> "PureState":
        """``{"100": 1, "010": 1}`` -> normalized superposition of basis kets."""
        nq = {len(k) for k in terms}
        if len(nq) != 1:
            raise ValueError("all bitstrings must have equal length")
        (n,) = nq
        amps = np.zeros(2**n, dtype=complex)
        for bits, c in terms.items():
            amps[int(bits, 2)] += c
        return cls.normalized(amps)

    @property
    def num_qubits(self) -> int:
        return int(self.amplitudes.size).bit_length() - 1

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return np.array_equal(self.amplitudes, other.amplitudes)

    def __hash__(self):
        return hash(self.amplitudes.tobytes())

    def to_json(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PureState":
        n = int(data["num_qubits"])
        pairs = data["amplitudes"]
        if len(pairs) != 2**n:
            raise ValueError(f"expected {2**n} amplitude pairs, got {len(pairs)}")
        amps = np.array([complex(re, im) for re, im in pairs])
        return cls(amps)


def load_state(path: str | Path) -> PureState:
    return PureState.from_json(json.loads(Path(path).read_text()))


def save_state(state: PureState, path: str | Path) -> None:
    Path(path).write_text(json.dumps(state.to_json()))


@dataclass(frozen=True, eq=False)
class DensityMatrix2:
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _readonly(self.entries))

    @property
    def eigenvalues(self) -> tuple[float, float]:
        """Ascending eigenvalues from the trace/determinant formula."""
        lo, hi = _eig2(self.entries)
        return lo, hi

    def check(self, tol: float = HERMITIAN_TOL) -> None:
        m = self.entries
        if np.abs(m - m.conj().T).max() > tol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > tol:
            raise ValueError("density matrix trace differs from 1")
        if self.eigenvalues[0] < -tol:
            raise ValueError("density matrix has a negative eigenvalue")


@dataclass(frozen=True)
class MomentumValue:
    """Blocks ``rho_i - I/2``, one per qubit."""

    shifted_blocks: tuple[np.ndarray, ...]

    def norm_square(self) -> float:
        return float(sum(np.real(np.trace(b @ b)) for b in self.shifted_blocks))


@dataclass(frozen=True)
class LocalSpectra:
    """Weyl-chamber coordinates ``lambda_i = 1/2 - p_i``."""

    lambdas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))

    @classmethod
    def from_min_eigenvalues(cls, ps: Sequence[float]) -> "LocalSpectra":
        return cls(tuple(0.5 - p for p in ps))

    @property
    def min_eigenvalues(self) -> tuple[float, ...]:
        return tuple(0.5 - x for x in self.lambdas)

    @property
    def num_qubits(self) -> int:
        return len(self.lambdas)

    def as_array(self) -> np.ndarray:
        return np.array(self.lambdas)

    def __len__(self):
        return len(self.lambdas)

    def __iter__(self):
        return iter(self.lambdas)

    def __getitem__(self, i):
        return self.lambdas[i]


def _eig2(m: np.ndarray) -> tuple[float, float]:
    a, d = m[0, 0].real, m[1, 1].real
    half_gap = np.hypot((a - d) / 2, abs(m[0, 1]))
    mid = (a + d) / 2
    return mid - half_gap, mid + half_gap


def _check_qubit(n: int, qubit: int) -> None:
    if not 1 <= qubit <= n:
        raise IndexError(f"qubit {qubit} out of range 1..{n}")


def reduced_density(state: PureState, qubit: int) -> DensityMatrix2:
    """Partial trace of ``|v><v|`` onto one qubit (1-based index)."""
    n = state.num_qubits
    _check_qubit(n, qubit)
    a = np.moveaxis(state.tensor, qubit - 1, 0).reshape(2, -1)
    return DensityMatrix2(a @ a.conj().T)


def momentum_map(state: PureState) -> MomentumValue:
    blocks = tuple(
        reduced_density(state, q).entries - I2 / 2 for q in range(1, state.num_qubits + 1)
    )
    return MomentumValue(blocks)


def psi(state: PureState) -> LocalSpectra:
    """Local spectra: half the eigenvalue gap of every one-qubit marginal."""
    return LocalSpectra(tuple(batch_lambdas(state.amplitudes[None, :])[0]))


def batch_marginals(amps: np.ndarray) -> np.ndarray:
    """One-qubit marginals of a stack of (not necessarily normalized) vectors.

    ``amps`` has shape ``(M, 2**N)``; the result has shape ``(M, N, 2, 2)``.
    """
    amps = np.asarray(amps, dtype=complex)
    m, dim = amps.shape
    n = dim.bit_length() - 1
    out = np.empty((m, n, 2, 2), dtype=complex)
    for q in range(n):
        a = amps.reshape(m, 2**q, 2, 2 ** (n - q - 1))
        out[:, q] = np.einsum("maib,majb->mij", a, a.conj())
    return out


def batch_lambdas(amps: np.ndarray) -> np.ndarray:
    """Local spectra of a stack of normalized vectors, shape ``(M, N)``."""
    rho = batch_marginals(amps)
    return np.hypot((rho[..., 0, 0].real - rho[..., 1, 1].real) / 2, np.abs(rho[..., 0, 1]))


def haar_states(num_qubits: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar-random unit vectors as rows of a complex array."""
    z = rng.standard_normal((count, 2**num_qubits)) + 1j * rng.standard_normal(
        (count, 2**num_qubits)
    )
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_random_state(num_qubits: int, seed: int) -> PureState:
    if num_qubits < 1:
        raise ValueError("num_qubits must be >= 1")
    rng = np.random.default_rng(seed)
    return PureState(haar_states(num_qubits, 1, rng)[0])


def haar_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_local_unitaries(num_qubits: int, rng: np.random.Generator) -> list[np.ndarray]:
    return [haar_unitary(rng) for _ in range(num_qubits)]


def apply_ops_tensor(amps: np.ndarray, ops: Sequence[np.ndarray]) -> np.ndarray:
    """Apply ``op_i`` to qubit slot ``i`` of a raw amplitude vector (no checks)."""
    n = len(ops)
    t = np.asarray(amps, dtype=complex).reshape((2,) * n)
    for q, op in enumerate(ops):
        t = np.moveaxis(np.tensordot(op, t, axes=([1], [q])), 0, q)
    return t.reshape(-1)


def apply_local(
    state: PureState, ops: Sequence[np.ndarray], renormalize: bool = False
) -> PureState:
    """Act with ``op_1 ⊗ ... ⊗ op_N`` on the state.

    Non-unitary operators require ``renormalize=True``.
    """
    n = state.num_qubits
    if len(ops) != n:
        raise ValueError(f"expected {n} local operators, got {len(ops)}")
    ops = [np.asarray(op, dtype=complex) for op in ops]
    unitary = True
    for op in ops:
        if op.shape != (2, 2):
            raise ValueError("local operators must be 2x2")
        s = np.linalg.svd(op, compute_uv=False)
        if s[-1] <= np.finfo(float).eps * max(s[0], 1.0):
            raise ValueError("local operator is not invertible")
        if s[0] / s[-1] > COND_WARN:
            warnings.warn(f"local operator condition number {s[0] / s[-1]:.3g} exceeds 1e12")
        unitary &= bool(np.allclose(op.conj().T @ op, I2, atol=1e-10))
    if not unitary and not renormalize:
        raise ValueError("non-unitary local operators require renormalize=True")
    out = apply_ops_tensor(state.amplitudes, ops)
    return PureState.normalized(out) if renormalize else PureState(out)


def two_qubit_marginal(state: PureState, keep: tuple[int, int]) -> np.ndarray:
    """4x4 reduced state on two qubits (1-based, in increasing order)."""
    n = state.num_qubits
    i, j = keep
    for q in keep:
        _check_qubit(n, q)
    if not i < j:
        raise ValueError("keep must list two distinct qubits in increasing order")
    a = np.moveaxis(state.tensor, (i - 1, j - 1), (0, 1)).reshape(4, -1)
    return a @ a.conj().T


# SLOCC class representatives.  Bit order: leftmost character is qubit 1.

def ghz_state() -> PureState:
    return PureState.from_bits({"000": 1, "111": 1})


def w_state(num_qubits: int = 3) -> PureState:
    terms = {}
    for q in range(num_qubits):
        bits = ["0"] * num_qubits
        bits[q] = "1"
        terms["".join(bits)] = 1
    return PureState.from_bits(terms)


def bell_pair_state(k: int) -> PureState:
    """Biseparable representative ``x_Bk``: qubit ``k`` factored out as ``|0>``."""
    bits = {1: "011", 2: "101", 3: "110"}[k]
    return PureState.from_bits({"000": 1, bits: 1})


def product_state(num_qubits: int = 3) -> PureState:
    return PureState.from_bits({"0" * num_qubits: 1})
