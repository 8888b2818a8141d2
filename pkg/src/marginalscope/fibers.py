"""Fibers of the local-spectra map and local-unitary equivalence.

The fiber over a target spectrum is sampled by minimizing

    F(v) = sum_i (lambda_i(v) - target_i)^2

over unit vectors.  With Bloch vectors ``r_i = <v|sigma^(i)|v>`` one has
``lambda_i = |r_i| / 2`` and the Euclidean gradient of ``lambda_i`` with
respect to the real coordinates of ``v`` is ``(r_i/|r_i| . sigma)^(i) v``.

On a polygonal face the map has a fold: the face slack is quadratic in the
distance to the fiber, so descent on F alone stalls around F ~ 1e-8.  Those
targets get a polishing stage that alternates projection onto the 1/2
eigenspace of the face operator ``sum_j S_j - 2 S_i`` (``S_j`` the sign
operator of marginal ``j``, eigenvalues +-1/2) with a few descent steps.
Fiber points on the face satisfy that eigen-equation exactly, and it is
well conditioned, unlike the face slack itself.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist

from ._parallel import ordered_map
from .polytope import FACE_TOL, FaceId, face_classify, higuchi_check, margins
from .qstate import (
    PAULI,
    LocalSpectra,
    PureState,
    apply_ops_tensor,
    batch_lambdas,
    batch_marginals,
    haar_states,
    haar_unitary,
)
from .slocc import batch_hyperdeterminant

FIBER_STEP = 0.2
FIBER_MAX_ITER = 5000
FIBER_ACCEPT = 1e-10
DEGENERATE_EPS = 1e-8
CHUNK = 64
DIM_SV_THRESHOLD = 1e-3
DIM_POINT_DIAMETER = 1e-6
DIM_MIN_AREA = 1e-4
REFERENCE_SEED = 20120101
REFERENCE_SIZE = 4096
LU_VERDICT = 1 - 1e-6
DEGENERATE_TOL = 1e-8


# ---------------------------------------------------------------- invariants

@dataclass(frozen=True)
class InvariantTuple:
    I1: float
    I2: float
    I3: float
    I4: float
    I5: float

    def as_array(self) -> np.ndarray:
        return np.array([self.I1, self.I2, self.I3, self.I4, self.I5])


def batch_invariants(amps: np.ndarray) -> np.ndarray:
    """Rows ``(I1, I2, I3, I4, I5)`` for a stack of three-qubit states."""
    amps = np.asarray(amps, dtype=complex).reshape(-1, 8)
    rho = batch_marginals(amps)
    purities = np.einsum("mqij,mqji->mq", rho, rho).real
    a = amps.reshape(-1, 4, 2)
    rho12 = np.einsum("mic,mjc->mij", a, a.conj())
    r1r2 = np.einsum("mab,mcd->macbd", rho[:, 0], rho[:, 1]).reshape(-1, 4, 4)
    kempe = np.einsum("mij,mji->m", r1r2, rho12).real
    det2 = np.abs(batch_hyperdeterminant(amps)) ** 2
    return np.column_stack([purities, kempe, det2])


def lu_invariants(state: PureState) -> InvariantTuple:
    """Purities, the Kempe-type invariant tr[(rho_1 ⊗ rho_2) rho_12], |Det|^2."""
    if state.num_qubits != 3:
        raise ValueError("the invariant tuple is defined for three qubits")
    return InvariantTuple(*(float(x) for x in batch_invariants(state.amplitudes)[0]))


# ------------------------------------------------------------ fiber objective

def _bloch(amps: np.ndarray) -> np.ndarray:
    rho = batch_marginals(amps)
    return np.stack(
        [2 * rho[..., 0, 1].real, -2 * rho[..., 0, 1].imag, (rho[..., 0, 0] - rho[..., 1, 1]).real],
        axis=-1,
    )


def _unit_axes(bloch: np.ndarray) -> np.ndarray:
    """Bloch directions; at a maximally mixed marginal fall back to +z (|0> major)."""
    norm = np.linalg.norm(bloch, axis=-1, keepdims=True)
    fallback = np.zeros_like(bloch)
    fallback[..., 2] = 1.0
    with np.errstate(invalid="ignore", divide="ignore"):
        unit = bloch / norm
    return np.where(norm > 2 * DEGENERATE_EPS, unit, fallback)


def _apply_slot(amps: np.ndarray, q: int, mats: np.ndarray) -> np.ndarray:
    m, dim = amps.shape
    n = dim.bit_length() - 1
    a = amps.reshape(m, 2**q, 2, 2 ** (n - q - 1))
    return np.einsum("mij,majb->maib", mats, a).reshape(m, dim)


def fiber_objective(amps: np.ndarray, target: Sequence[float]) -> np.ndarray:
    """F for each row of ``amps`` (rows need not be normalized)."""
    amps = np.atleast_2d(np.asarray(amps, dtype=complex))
    lam = np.linalg.norm(_bloch(amps), axis=-1) / 2
    return ((lam - np.asarray(target, dtype=float)) ** 2).sum(axis=-1)


def fiber_gradient(amps: np.ndarray, target: Sequence[float]) -> np.ndarray:
    """Euclidean gradient of F in the real coordinates ``(Re v, Im v)``.

    Returned as a complex array ``dF/dRe + i dF/dIm``.
    """
    amps = np.atleast_2d(np.asarray(amps, dtype=complex))
    bloch = _bloch(amps)
    # 2 (lambda - t) r/|r| = r - 2 t r/|r|: smooth wherever t = 0
    coeff = bloch - 2 * np.asarray(target, dtype=float)[:, None] * _unit_axes(bloch)
    grad = np.zeros_like(amps)
    for q in range(amps.shape[1].bit_length() - 1):
        grad += _apply_slot(amps, q, np.einsum("mk,kij->mij", coeff[:, q], PAULI))
    return grad


def _descend(v: np.ndarray, target: np.ndarray, iters: int, stop: float) -> np.ndarray:
    """Projected gradient descent with retraction; rows freeze once F < stop."""
    v = v.copy()
    live = np.arange(v.shape[0])
    for _ in range(iters):
        sub = v[live]
        f = fiber_objective(sub, target)
        keep = f >= stop
        live, sub = live[keep], sub[keep]
        if live.size == 0:
            break
        g = fiber_gradient(sub, target)
        g -= np.real(np.einsum("mi,mi->m", sub.conj(), g))[:, None] * sub
        sub = sub - FIBER_STEP * g
        v[live] = sub / np.linalg.norm(sub, axis=1, keepdims=True)
    return v


def _face_operator(amps: np.ndarray, face: int) -> np.ndarray:
    """``sum_j S_j - 2 S_face`` as a stack of 8x8 matrices."""
    m = amps.shape[0]
    axes = _unit_axes(_bloch(amps))
    eye = np.broadcast_to(np.eye(2, dtype=complex), (m, 2, 2))
    out = np.zeros((m, 8, 8), dtype=complex)
    for q in range(3):
        s = np.einsum("mk,kij->mij", axes[:, q], PAULI) / 2
        factors = [s if p == q else eye for p in range(3)]
        term = np.einsum("mab,mcd,mef->macebdf", *factors).reshape(m, 8, 8)
        out += -term if q == face else term
    return out


def face_residual(amps: np.ndarray, faces: Sequence[int]) -> np.ndarray:
    amps = np.atleast_2d(amps)
    worst = np.zeros(amps.shape[0])
    for face in faces:
        y = _face_operator(amps, face)
        r = np.einsum("mij,mj->mi", y, amps) - amps / 2
        worst = np.maximum(worst, np.linalg.norm(r, axis=1))
    return worst


def _polish(v: np.ndarray, target: np.ndarray, faces: Sequence[int], rounds: int = 60, steps: int = 10):
    v = v.copy()
    for _ in range(rounds):
        for face in faces:
            w, u = np.linalg.eigh(_face_operator(v, face))
            keep = (np.abs(w - 0.5) < 0.25).astype(float)
            proj = np.einsum("mik,mk,mjk->mij", u, keep, u.conj())
            v = np.einsum("mij,mj->mi", proj, v)
            norm = np.linalg.norm(v, axis=1, keepdims=True)
            v = v / np.where(norm > 0, norm, 1.0)
        v = _descend(v, target, steps, 0.0)
    return v


@dataclass(frozen=True, eq=False)
class FiberSample:
    state: PureState
    residual: float
    seed: int
    trial: int
    face_residual: float = 0.0


@dataclass
class FiberRun:
    target: tuple[float, ...]
    samples: list[FiberSample]
    restarts: int
    requested: int
    polished_faces: tuple[int, ...] = ()

    @property
    def acceptance_rate(self) -> float:
        return len(self.samples) / self.restarts if self.restarts else 0.0

    @property
    def partial(self) -> bool:
        return len(self.samples) < self.requested

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    def amplitudes(self) -> np.ndarray:
        return np.array([s.state.amplitudes for s in self.samples])


def _polygonal_polish_faces(target: np.ndarray, faces: frozenset[FaceId]) -> tuple[int, ...]:
    if np.any(target <= DEGENERATE_EPS):
        return ()
    return tuple(f.qubit - 1 for f in sorted(faces) if f.kind == "polygonal")


def _run_chunk(args) -> list[tuple[int, np.ndarray, float, float]]:
    seed, start, size, target, faces, tol = args
    starts = np.array(
        [haar_states(len(target), 1, np.random.default_rng([seed, start + k]))[0] for k in range(size)]
    )
    if faces:
        v = _descend(starts, target, FIBER_MAX_ITER, 1e-24)
        near = fiber_objective(v, target) < 1e-6
        v[near] = _polish(v[near], target, faces)
        fres = face_residual(v, faces)
        moved_ok = near.copy()
    else:
        v = _descend(starts, target, FIBER_MAX_ITER, 1e-28)
        fres = np.zeros(size)
        moved_ok = np.ones(size, dtype=bool)
    f = fiber_objective(v, target)
    out = []
    for k in range(size):
        if moved_ok[k] and f[k] < tol and (not faces or fres[k] < 1e-10):
            out.append((start + k, v[k], float(f[k]), float(fres[k])))
    return out


def sample_fiber(
    target: LocalSpectra | Sequence[float],
    count: int,
    seed: int,
    tol: float = FIBER_ACCEPT,
    max_restarts: int | None = None,
) -> FiberRun:
    """Sample states whose local spectra equal ``target``.

    Each restart starts from a Haar-random state seeded by ``(seed, trial)``
    so samples are reproducible individually.  Stops after ``count``
    acceptances or ``50 * count`` restarts; in the latter case the run is
    flagged ``partial``.
    """
    t = np.asarray(target.lambdas if isinstance(target, LocalSpectra) else target, dtype=float)
    report = higuchi_check(t)
    if not report.inside:
        raise ValueError(f"target {t.tolist()} lies outside the Kirwan polytope")
    faces = _polygonal_polish_faces(t, report.active_faces) if t.size == 3 else ()
    limit = 50 * count if max_restarts is None else max_restarts
    accepted: list[FiberSample] = []
    done = 0
    wave = max(1, min(4, -(-limit // CHUNK)))
    while len(accepted) < count and done < limit:
        jobs = []
        for w in range(wave):
            start = done + w * CHUNK
            if start >= limit:
                break
            jobs.append((seed, start, min(CHUNK, limit - start), t, faces, tol))
        for (_, start, size, *_), found in zip(jobs, ordered_map(_run_chunk, jobs)):
            if len(accepted) >= count:
                break
            for trial, v, f, fres in found:
                accepted.append(FiberSample(PureState(v), f, seed, trial, fres))
                if len(accepted) >= count:
                    done = trial + 1
                    break
            else:
                done = start + size
    return FiberRun(tuple(t.tolist()), accepted[:count], done, count, faces)


# ------------------------------------------------------------ cloud dimension

@lru_cache(maxsize=1)
def _reference_ranges() -> np.ndarray:
    rng = np.random.default_rng(REFERENCE_SEED)
    inv = batch_invariants(haar_states(3, REFERENCE_SIZE, rng))[:, 3:]
    return inv.max(axis=0) - inv.min(axis=0)


@dataclass
class CloudReport:
    num_samples: int
    coordinates: np.ndarray
    centered_singular_values: tuple[float, float]
    hull_area: float
    max_pairwise_distance: float
    estimated_dimension: int
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "num_samples": self.num_samples,
            "centered_singular_values": list(self.centered_singular_values),
            "hull_area": self.hull_area,
            "max_pairwise_distance": self.max_pairwise_distance,
            "estimated_dimension": self.estimated_dimension,
            "notes": self.notes,
        }


def fiber_cloud(samples) -> np.ndarray:
    """Raw ``(I4, I5)`` coordinates of fiber samples."""
    amps = np.array([s.state.amplitudes if isinstance(s, FiberSample) else s.amplitudes for s in samples])
    return batch_invariants(amps)[:, 3:]


def fiber_dimension(target, samples, min_samples: int = 50) -> CloudReport:
    """Dimension of the (I4, I5) cloud of a fiber, up to local unitaries.

    Coordinates are divided by their range over a fixed Haar ensemble.
    Singular values of the centered cloud matrix (no 1/sqrt(n) factor)
    above 1e-3 count as dimensions; dimension 0 also needs a diameter below
    1e-6 and dimension 2 a hull area above 1e-4.
    """
    samples = list(samples)
    if len(samples) < min_samples:
        raise ValueError(f"need at least {min_samples} fiber samples, got {len(samples)}")
    raw = fiber_cloud(samples)
    coords = raw / _reference_ranges()
    centered = coords - coords.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    diameter = float(pdist(coords).max())
    try:
        area = float(ConvexHull(coords).volume)
    except QhullError:
        area = 0.0
    dim = int((sv > DIM_SV_THRESHOLD).sum())
    notes = []
    if dim == 2 and area <= DIM_MIN_AREA:
        dim = 1
        notes.append("two spreads above threshold but negligible hull area")
    if dim == 0 and diameter >= DIM_POINT_DIAMETER:
        notes.append("spread below threshold but diameter not point-like; inconclusive")
    if dim < 2 and target is not None:
        t = np.asarray(target.lambdas if isinstance(target, LocalSpectra) else target, dtype=float)
        if np.all(margins(t) > FACE_TOL):
            notes.append("inconclusive coordinates: interior target with degenerate cloud")
    return CloudReport(
        num_samples=len(samples),
        coordinates=raw,
        centered_singular_values=(float(sv[0]), float(sv[1])),
        hull_area=area,
        max_pairwise_distance=diameter,
        estimated_dimension=dim,
        notes=notes,
    )


# -------------------------------------------------------- local-unitary overlap

def _eigenbases(amps: np.ndarray) -> np.ndarray:
    """Per-qubit marginal eigenvectors, major eigenvector first: ``(M, N, 2, 2)``."""
    rho = batch_marginals(amps)
    _, vecs = np.linalg.eigh(rho)
    return vecs[..., ::-1]


def _contract_all_but(a: np.ndarray, b: np.ndarray, us: np.ndarray, q: int) -> np.ndarray:
    """2x2 matrix ``C`` with ``<b|U|a> = tr(U_q C)`` for the other slots fixed."""
    p, dim = a.shape
    n = us.shape[1]
    t = a
    for s in range(n):
        if s != q:
            t = _apply_slot(t, s, us[:, s])
    ta = t.reshape(p, 2**q, 2, 2 ** (n - q - 1))
    tb = b.reshape(p, 2**q, 2, 2 ** (n - q - 1))
    return np.einsum("mxjy,mxiy->mji", ta, tb.conj())


def _overlap(a: np.ndarray, b: np.ndarray, us: np.ndarray) -> np.ndarray:
    t = a
    for s in range(us.shape[1]):
        t = _apply_slot(t, s, us[:, s])
    return np.abs(np.einsum("mi,mi->m", b.conj(), t)) ** 2


def _alternate(a: np.ndarray, b: np.ndarray, us: np.ndarray, iters: int, tol: float = 1e-15) -> np.ndarray:
    """Sweeps of single-slot polar updates; a row stops once a sweep gains < tol."""
    us = us.copy()
    n = us.shape[1]
    best = _overlap(a, b, us)
    live = np.arange(a.shape[0])
    for _ in range(iters):
        sa, sb, su = a[live], b[live], us[live]
        for q in range(n):
            c = _contract_all_but(sa, sb, su, q)
            w, _, vh = np.linalg.svd(c)
            su[:, q] = np.einsum("mji,mkj->mik", vh.conj(), w.conj())
        new = _overlap(sa, sb, su)
        us[live] = su
        gain = new - best[live]
        best[live] = np.maximum(best[live], new)
        live = live[gain >= tol]
        if live.size == 0:
            break
    return best


def _starts(a: np.ndarray, b: np.ndarray, restarts: int, rng: np.random.Generator) -> np.ndarray:
    """Identity, eigenbasis alignment, then Haar-random local unitaries."""
    n = a.shape[-1].bit_length() - 1
    ea, eb = _eigenbases(a[None])[0], _eigenbases(b[None])[0]
    align = np.einsum("qij,qkj->qik", eb, ea.conj())
    us = [np.broadcast_to(np.eye(2, dtype=complex), (n, 2, 2)), align]
    us += [np.array([haar_unitary(rng) for _ in range(n)]) for _ in range(max(0, restarts - 2))]
    return np.array(us[: max(restarts, 1)])


def lu_overlap_pairs(
    a: np.ndarray, b: np.ndarray, restarts: int = 8, iters: int = 300, seed: int = 0
) -> np.ndarray:
    """Best ``|<b| U |a>|^2`` for many pairs at once (rows of ``a`` and ``b``).

    Both orientations are optimized, which makes the result symmetric.
    """
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    b = np.atleast_2d(np.asarray(b, dtype=complex))
    if a.shape != b.shape:
        raise ValueError("overlap needs states with equal qubit counts")
    rng = np.random.default_rng(seed)
    p = a.shape[0]
    aa, bb, uu = [], [], []
    for x, y in ((a, b), (b, a)):
        for i in range(p):
            s = _starts(x[i], y[i], restarts, rng)
            aa.append(np.repeat(x[i][None], len(s), axis=0))
            bb.append(np.repeat(y[i][None], len(s), axis=0))
            uu.append(s)
    per = len(uu[0])
    best = _alternate(np.concatenate(aa), np.concatenate(bb), np.concatenate(uu), iters)
    best = best.reshape(2, p, per).max(axis=(0, 2))
    return np.minimum(best, 1.0)


def lu_overlap_max(
    a: PureState, b: PureState, restarts: int = 8, iters: int = 300, seed: int = 0
) -> float:
    """Heuristic maximum of ``|<b| U_1 ⊗ ... ⊗ U_N |a>|^2`` over local unitaries.

    Alternating maximization: with all slots but one fixed, the best unitary
    in the free slot is the polar factor of a 2x2 contraction.  A lower
    bound on the true maximum.
    """
    if a.num_qubits != b.num_qubits:
        raise ValueError("states have different qubit counts")
    return float(lu_overlap_pairs(a.amplitudes, b.amplitudes, restarts, iters, seed)[0])


# ----------------------------------------------------------- boundary forms

@dataclass(frozen=True)
class BoundaryCanonicalForm:
    kind: str
    face: int
    moduli: tuple[float, float, float] | None = None
    pair: tuple[float, float] | None = None
    schmidt_pair: tuple[np.ndarray, np.ndarray] | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "face": self.face}
        if self.moduli is not None:
            out["moduli"] = list(self.moduli)
        if self.pair is not None:
            out["pair"] = list(self.pair)
        return out


def _swap_qubits(amps: np.ndarray, i: int, j: int) -> np.ndarray:
    t = amps.reshape(2, 2, 2)
    return np.swapaxes(t, i, j).reshape(-1)


# populations of |000>, |110>, |101> seen by each qubit: (p0 row, p1 row) per qubit
_POPULATION = np.array(
    [
        [[1, 0, 0], [0, 1, 1]],
        [[1, 0, 1], [0, 1, 0]],
        [[1, 1, 0], [0, 0, 1]],
    ],
    dtype=float,
)


def boundary_canonical_nondegenerate(target, tol: float = FACE_TOL) -> BoundaryCanonicalForm:
    """Moduli ``|c_j|^2`` of ``c1|000> + c2|110> + c3|101>`` on a polygonal face.

    The face index is moved to qubit 1 by a qubit swap first; ``face`` keeps
    the original index.  Moduli refer to the swapped frame.
    """
    t = np.asarray(target.lambdas if isinstance(target, LocalSpectra) else target, dtype=float)
    if t.shape != (3,):
        raise ValueError("boundary canonical forms are for three qubits")
    faces = face_classify(t, tol)
    if np.any(t <= tol):
        raise ValueError("target has a maximally mixed marginal; use the degenerate form")
    poly = [f.qubit for f in faces if f.kind == "polygonal"]
    if len(poly) != 1:
        raise ValueError(f"target must lie on exactly one polygonal face, found {len(poly)}")
    face = poly[0]
    perm = [0, 1, 2]
    perm[0], perm[face - 1] = perm[face - 1], perm[0]
    p = 0.5 - t[perm]
    solutions = []
    for choice in product((0, 1), repeat=3):
        rows = [_POPULATION[q, choice[q]] for q in range(3)] + [np.ones(3)]
        rhs = np.append(p, 1.0)
        x, *_ = np.linalg.lstsq(np.array(rows), rhs, rcond=None)
        if np.abs(np.array(rows) @ x - rhs).max() > 1e-10 or np.any(x < -1e-12):
            continue
        pops = _POPULATION @ x
        if np.all(np.abs(pops.min(axis=1) - p) < 1e-10):
            solutions.append(np.clip(x, 0.0, None))
    if not solutions:
        raise ValueError("no nonnegative solution: target is not on a polygonal face")
    x = solutions[0]
    if any(np.abs(s - x).max() > 1e-9 for s in solutions[1:]):
        raise ValueError("canonical moduli are not unique for this target")
    x = x / x.sum()
    return BoundaryCanonicalForm("nondegenerate", face, moduli=tuple(float(c) for c in x))


def canonical_state(form: BoundaryCanonicalForm) -> PureState:
    """A representative state for a nondegenerate canonical form, original qubit order."""
    if form.kind != "nondegenerate":
        raise ValueError("only nondegenerate forms have a three-term representative")
    amps = np.zeros(8, dtype=complex)
    amps[[0b000, 0b110, 0b101]] = np.sqrt(form.moduli)
    amps = _swap_qubits(amps, 0, form.face - 1)
    return PureState.normalized(amps)


def boundary_canonical_degenerate(
    state: PureState, tol: float = DEGENERATE_TOL, qubit: int | None = None
) -> BoundaryCanonicalForm:
    """Schmidt data across the cut (maximally mixed qubit | rest).

    ``pair`` holds the local spectra of the two remaining qubits, in order.
    """
    if state.num_qubits != 3:
        raise ValueError("boundary canonical forms are for three qubits")
    lam = batch_lambdas(state.amplitudes[None])[0]
    q = int(np.argmin(lam)) + 1 if qubit is None else qubit
    if lam[q - 1] >= tol:
        raise ValueError(f"qubit {q} is not maximally mixed (lambda = {lam[q - 1]:.3g})")
    mat = np.moveaxis(state.tensor, q - 1, 0).reshape(2, 4)
    _, s, vh = np.linalg.svd(mat)
    weights = np.sort(np.concatenate([s**2, np.zeros(2)]))[::-1]
    if np.abs(weights - np.array([0.5, 0.5, 0.0, 0.0])).max() > tol:
        raise ValueError("two-qubit marginal is not half a rank-2 projector")
    rest = [i for i in range(3) if i != q - 1]
    return BoundaryCanonicalForm(
        "degenerate",
        q,
        pair=(float(lam[rest[0]]), float(lam[rest[1]])),
        schmidt_pair=(vh[0].conj(), vh[1].conj()),
    )


def boundary_canonical_form(state: PureState, tol: float = DEGENERATE_TOL) -> BoundaryCanonicalForm:
    """Route a boundary state to its canonical form; degeneracy takes precedence."""
    lam = batch_lambdas(state.amplitudes[None])[0]
    if lam.min() < tol:
        return boundary_canonical_degenerate(state, tol)
    return boundary_canonical_nondegenerate(lam, max(FACE_TOL, tol))


# ----------------------------------------------------------- shell histogram

@dataclass
class ShellHistogram:
    edges: np.ndarray
    density: np.ndarray
    counts: np.ndarray

    def to_json(self) -> dict:
        return {"edges": self.edges.tolist(), "density": self.density.tolist(), "counts": self.counts.tolist()}


MAX_BOUNDARY_DISTANCE = 0.25  # attained at (1/4, 1/4, 1/4)


def boundary_shell_histogram(num_samples: int, num_bins: int, seed: int, chunk: int = 20000) -> ShellHistogram:
    """Density of Haar-random three-qubit spectra by distance to the boundary.

    Distance is the smallest constraint slack; shells are equal-width bins
    on [0, 1/4] and densities are per unit width, so they integrate to 1.
    """
    if num_samples < 10_000:
        raise ValueError("the shell histogram needs at least 10^4 samples")
    rng = np.random.default_rng(seed)
    dist = []
    left = num_samples
    while left > 0:
        k = min(chunk, left)
        dist.append(margins(batch_lambdas(haar_states(3, k, rng))).min(axis=1))
        left -= k
    d = np.clip(np.concatenate(dist), 0.0, MAX_BOUNDARY_DISTANCE)
    edges = np.linspace(0.0, MAX_BOUNDARY_DISTANCE, num_bins + 1)
    counts, _ = np.histogram(d, bins=edges)
    density = counts / (num_samples * np.diff(edges))
    return ShellHistogram(edges, density, counts)


def local_unitary_orbit_sample(state: PureState, rng: np.random.Generator) -> PureState:
    ops = [haar_unitary(rng) for _ in range(state.num_qubits)]
    return PureState(apply_ops_tensor(state.amplitudes, ops))
