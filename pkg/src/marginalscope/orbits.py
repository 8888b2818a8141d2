"""Tangent spaces of K-, G- and Borel orbits through a pure state.

Tangent vectors at ``[v]`` are ``A v`` with the component along ``v``
removed; orbit dimensions are ranks of these spans.  Real ranks give K-orbit
dimensions, complex ranks give G- and B-orbit dimensions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .qstate import PAULI, PureState, apply_local, apply_ops_tensor, w_state

RANK_TOL = 1e-7

E11 = np.array([[1, 0], [0, 0]], dtype=complex)
E12 = np.array([[0, 1], [0, 0]], dtype=complex)
E21 = np.array([[0, 0], [1, 0]], dtype=complex)
E22 = np.array([[0, 0], [0, 1]], dtype=complex)
H = E11 - E22
UNIPOTENT_SHIFT = np.array([[1, 1], [0, 1]], dtype=complex)


@dataclass(frozen=True)
class AlgebraBasisElement:
    slot: int
    matrix: np.ndarray
    name: str = ""


def su2_basis(num_qubits: int) -> list[AlgebraBasisElement]:
    return [
        AlgebraBasisElement(q, 1j * PAULI[k], f"i*sigma_{'xyz'[k]}")
        for q in range(1, num_qubits + 1)
        for k in range(3)
    ]


def sl2_basis(num_qubits: int) -> list[AlgebraBasisElement]:
    return [
        AlgebraBasisElement(q, m, name)
        for q in range(1, num_qubits + 1)
        for m, name in ((E12, "E12"), (E21, "E21"), (H, "E11-E22"))
    ]


def borel_basis(num_qubits: int) -> list[AlgebraBasisElement]:
    """Lower-triangular Borel algebra: E21 and the complexified torus per slot."""
    return [
        AlgebraBasisElement(q, m, name)
        for q in range(1, num_qubits + 1)
        for m, name in ((E21, "E21"), (H, "E11-E22"))
    ]


def _embed(num_qubits: int, element: AlgebraBasisElement) -> list[np.ndarray]:
    ops = [np.eye(2, dtype=complex)] * num_qubits
    ops[element.slot - 1] = element.matrix
    return ops


def project_out(vectors: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Remove the complex component along the unit vector ``v`` from each row."""
    return vectors - np.outer(vectors @ v.conj(), v)


def tangent_span(state: PureState, basis: Sequence[AlgebraBasisElement]) -> np.ndarray:
    """Rows are the projected tangent vectors, one per basis element."""
    v = state.amplitudes
    n = state.num_qubits
    raw = np.array([apply_ops_tensor(v, _embed(n, b)) for b in basis])
    return project_out(raw, v)


def _singular_values(vectors, real: bool) -> np.ndarray:
    a = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if real:
        a = np.concatenate([a.real, a.imag], axis=1)
    return np.linalg.svd(a, compute_uv=False)


def _rank(s: np.ndarray, tol: float) -> int:
    if s.size == 0 or s[0] == 0:
        return 0
    return int((s > tol * s[0]).sum())


def rank_real(vectors, tol: float = RANK_TOL) -> int:
    return _rank(_singular_values(vectors, real=True), tol)


def rank_complex(vectors, tol: float = RANK_TOL) -> int:
    return _rank(_singular_values(vectors, real=False), tol)


@dataclass(frozen=True)
class OrbitReport:
    k_dim_real: int
    g_dim_real: int
    b_dim_complex: int
    spherical: bool
    singular_values: dict[str, list[float]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "k_dim_real": self.k_dim_real,
            "g_dim_real": self.g_dim_real,
            "b_dim_complex": self.b_dim_complex,
            "spherical": self.spherical,
            "singular_values": self.singular_values,
        }


def orbit_report(state: PureState, tol: float = RANK_TOL) -> OrbitReport:
    """Orbit dimensions at ``state``.

    ``spherical`` only certifies sphericality when ``state`` lies in an open
    Borel orbit of its G-orbit closure.
    """
    n = state.num_qubits
    sk = _singular_values(tangent_span(state, su2_basis(n)), real=True)
    sg = _singular_values(tangent_span(state, sl2_basis(n)), real=False)
    sb = _singular_values(tangent_span(state, borel_basis(n)), real=False)
    g_dim = 2 * _rank(sg, tol)
    b_dim = _rank(sb, tol)
    return OrbitReport(
        k_dim_real=_rank(sk, tol),
        g_dim_real=g_dim,
        b_dim_complex=b_dim,
        spherical=2 * b_dim == g_dim,
        singular_values={"k": sk.tolist(), "g": sg.tolist(), "b": sb.tolist()},
    )


def shifted_w_state(num_qubits: int) -> PureState:
    """W state with ``[[1,1],[0,1]]`` on qubit 1: the open-Borel-orbit point."""
    ops = [UNIPOTENT_SHIFT] + [np.eye(2, dtype=complex)] * (num_qubits - 1)
    return apply_local(w_state(num_qubits), ops, renormalize=True)


def w_sphericality_certificate(num_qubits: int, tol: float = RANK_TOL) -> OrbitReport:
    if num_qubits < 3:
        raise ValueError("the W certificate needs at least three qubits")
    return orbit_report(shifted_w_state(num_qubits), tol)


# Grassmannian G(2,4) through the Plücker embedding into the 6-dim wedge space.

_PAIRS = list(combinations(range(4), 2))


def wedge(phi: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Plücker coordinates ``phi_i psi_j - phi_j psi_i`` for ``i < j``."""
    return np.array([phi[i] * psi[j] - phi[j] * psi[i] for i, j in _PAIRS])


def grassmannian_tangents(phi, psi) -> np.ndarray:
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    point = wedge(phi, psi)
    point = point / np.linalg.norm(point)
    eye = np.eye(2, dtype=complex)
    rows = []
    for m in (E21, H):
        for a in (np.kron(m, eye), np.kron(eye, m)):
            rows.append(wedge(a @ phi, psi) + wedge(phi, a @ psi))
    return project_out(np.array(rows), point)


def grassmannian_tangent_dim(phi, psi, tol: float = RANK_TOL) -> int:
    """Complex dimension of the Borel-orbit tangent space at span{phi, psi}."""
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if phi.shape != (4,) or psi.shape != (4,):
        raise ValueError("basis vectors must live in C^2 ⊗ C^2")
    gram = np.array([[np.vdot(a, b) for b in (phi, psi)] for a in (phi, psi)])
    if np.abs(gram - np.eye(2)).max() > 1e-10:
        raise ValueError("basis pair is not orthonormal")
    return rank_complex(grassmannian_tangents(phi, psi), tol)
