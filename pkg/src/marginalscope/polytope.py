"""Kirwan polytope of N-qubit local spectra.

For qubits the polytope is cut out by the chamber walls ``lambda_i >= 0`` and
the polygonal inequalities ``p_i <= sum_{j != i} p_j`` on the minimal
eigenvalues ``p_i = 1/2 - lambda_i``.  Substituting gives the form used here,

    sum_{j != i} lambda_j - lambda_i <= (N - 2) / 2,

so every constraint is affine in lambda and its slack is a plain difference.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull

from .qstate import LocalSpectra

FACE_TOL = 1e-9


class SloccClass(str, Enum):
    GHZ = "GHZ"
    W = "W"
    B1 = "B1"
    B2 = "B2"
    B3 = "B3"
    SEP = "SEP"


@dataclass(frozen=True, order=True)
class FaceId:
    """``polygonal`` faces: p_i = sum of the others.  ``degenerate``: lambda_i = 0."""

    kind: str
    qubit: int

    def __post_init__(self):
        if self.kind not in ("polygonal", "degenerate"):
            raise ValueError(f"unknown face kind {self.kind!r}")

    def __str__(self):
        return f"{self.kind}({self.qubit})"

    def to_json(self) -> dict:
        return {"kind": self.kind, "qubit": self.qubit}


@dataclass(frozen=True)
class PolytopeReport:
    inside: bool
    margins: tuple[float, ...]
    constraints: tuple[FaceId, ...]
    active_faces: frozenset[FaceId] = field(default_factory=frozenset)
    distance_to_boundary: float = 0.0

    def to_json(self) -> dict:
        return {
            "inside": self.inside,
            "margins": list(self.margins),
            "active_faces": [f.to_json() for f in sorted(self.active_faces)],
            "distance_to_boundary": self.distance_to_boundary,
        }


def _as_array(lambdas) -> np.ndarray:
    if isinstance(lambdas, LocalSpectra):
        return lambdas.as_array()
    return np.asarray(lambdas, dtype=float)


def constraint_ids(num_qubits: int) -> tuple[FaceId, ...]:
    return tuple(FaceId("polygonal", i) for i in range(1, num_qubits + 1)) + tuple(
        FaceId("degenerate", i) for i in range(1, num_qubits + 1)
    )


def margins(lambdas) -> np.ndarray:
    """Constraint slacks, polygonal first then chamber walls.

    Works on a single vector or on a stack of shape ``(M, N)``; no range
    checks are made.
    """
    lam = _as_array(lambdas)
    n = lam.shape[-1]
    total = lam.sum(axis=-1, keepdims=True)
    polygonal = (n - 2) / 2 - (total - 2 * lam)
    return np.concatenate([polygonal, lam], axis=-1)


def higuchi_check(lambdas, tol: float = FACE_TOL) -> PolytopeReport:
    lam = _as_array(lambdas)
    if lam.ndim != 1 or lam.size < 1:
        raise ValueError("expected a single vector of local spectra")
    if np.any(lam < -tol) or np.any(lam > 0.5 + tol):
        raise ValueError(f"local spectra {lam.tolist()} outside [0, 1/2]")
    m = margins(lam)
    ids = constraint_ids(lam.size)
    active = frozenset(f for f, s in zip(ids, m) if abs(s) <= tol)
    return PolytopeReport(
        inside=bool(np.all(m >= -tol)),
        margins=tuple(float(x) for x in m),
        constraints=ids,
        active_faces=active,
        distance_to_boundary=float(m.min()),
    )


def face_classify(lambdas, tol: float = FACE_TOL) -> frozenset[FaceId]:
    """Active faces of a point of the polytope; empty means interior."""
    report = higuchi_check(lambdas, tol)
    if not report.inside:
        raise ValueError("point lies outside the Kirwan polytope")
    return report.active_faces


def three_qubit_vertices() -> dict[str, tuple[float, float, float]]:
    """Polytope vertices plus the W point, which is interior."""
    h = 0.5
    return {
        "SEP": (h, h, h),
        "B1": (h, 0.0, 0.0),
        "B2": (0.0, h, 0.0),
        "B3": (0.0, 0.0, h),
        "GHZ": (0.0, 0.0, 0.0),
        "W": (1 / 6, 1 / 6, 1 / 6),
    }


def face_lattice_counts(points: Sequence[Sequence[float]], tol: float = 1e-12) -> dict[str, int]:
    """Vertex/edge/facet counts of the convex hull of 3-D points.

    Coplanar hull triangles are merged into a single facet, so the numbers
    are those of the polytope, not of its triangulation.
    """
    pts = np.asarray(points, dtype=float)
    hull = ConvexHull(pts)
    planes: list[np.ndarray] = []
    facet_of = []
    for eq in hull.equations:
        for k, p in enumerate(planes):
            if np.allclose(p, eq, atol=tol):
                facet_of.append(k)
                break
        else:
            planes.append(eq)
            facet_of.append(len(planes) - 1)
    vertex_sets = [set() for _ in planes]
    for simplex, k in zip(hull.simplices, facet_of):
        vertex_sets[k].update(int(v) for v in simplex)
    # an edge is a pair of vertices shared by exactly two facets
    edges = set()
    for a, b in combinations(range(len(planes)), 2):
        common = vertex_sets[a] & vertex_sets[b]
        if len(common) == 2:
            edges.add(frozenset(common))
    return {"vertices": len(hull.vertices), "edges": len(edges), "facets": len(planes)}


@dataclass(frozen=True)
class ClassPolytope:
    class_label: SloccClass
    vertex_list: tuple[tuple[float, ...], ...]

    @property
    def dimension(self) -> int:
        pts = np.asarray(self.vertex_list)
        if len(pts) == 1:
            return 0
        return int(np.linalg.matrix_rank(pts[1:] - pts[0]))


_CLASS_VERTICES = {
    SloccClass.GHZ: ("SEP", "B1", "B2", "B3", "GHZ"),
    SloccClass.W: ("B1", "B2", "B3", "SEP"),
    SloccClass.B1: ("B1", "SEP"),
    SloccClass.B2: ("B2", "SEP"),
    SloccClass.B3: ("B3", "SEP"),
    SloccClass.SEP: ("SEP",),
}


def class_polytope(label: SloccClass | str) -> ClassPolytope:
    label = SloccClass(label)
    v = three_qubit_vertices()
    return ClassPolytope(label, tuple(v[name] for name in _CLASS_VERTICES[label]))


def in_w_polytope(lambdas, tol: float = FACE_TOL) -> bool:
    """Membership in conv{v_B1, v_B2, v_B3, v_SEP}.

    That hull is the part of the three-qubit polytope on the far side of the
    plane through v_W with normal v_W, i.e. ``sum(lambda) >= 1/2``.
    """
    lam = _as_array(lambdas)
    if lam.shape != (3,):
        raise ValueError("W polytope membership is defined for three qubits")
    if np.any(lam < -tol) or np.any(lam > 0.5 + tol):
        return False
    return bool(np.all(margins(lam) >= -tol) and lam.sum() >= 0.5 - tol)


def active_polygonal(faces: Iterable[FaceId]) -> list[int]:
    return sorted(f.qubit for f in faces if f.kind == "polygonal")


def active_degenerate(faces: Iterable[FaceId]) -> list[int]:
    return sorted(f.qubit for f in faces if f.kind == "degenerate")
