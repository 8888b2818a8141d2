"""End-to-end acceptance checks, one test per criterion.

Each test prints a ``criterion N: PASS|FAIL`` line (visible with ``-s``);
the same lines are repeated in the terminal summary by ``conftest.py``.
"""
import time
from itertools import combinations

import numpy as np
import pytest

from marginalscope import fibers, orbits, polytope, qstate, slocc
from marginalscope.cli import resolve_state
from marginalscope.qstate import batch_lambdas, haar_states

pytestmark = pytest.mark.slow

LINES: dict[int, str] = {}


def report(n: int, ok: bool, detail: str, elapsed: float, budget: float):
    ok = ok and elapsed < budget
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail}; {elapsed:.1f}s of {budget:.0f}s)"
    LINES[n] = line
    print(line)
    assert ok, line


def pair_index(n):
    return np.array(list(combinations(range(n), 2))).T


def test_criterion_1_vertices():
    t0 = time.perf_counter()
    verts = polytope.three_qubit_vertices()
    worst = max(
        np.abs(np.array(qstate.psi(resolve_state(name.lower())).lambdas) - verts[name]).max()
        for name in ("SEP", "B1", "B2", "B3", "GHZ", "W")
    )
    report(1, worst <= 1e-12, f"max deviation {worst:.1e}", time.perf_counter() - t0, 1)


def test_criterion_2_higuchi():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    worst = np.inf
    for n, count in ((3, 100_000), (4, 10_000), (5, 10_000)):
        lam = np.concatenate([batch_lambdas(haar_states(n, 10_000, rng)) for _ in range(count // 10_000)])
        worst = min(worst, polytope.margins(lam).min())
        # the public check, row by row on a subsample, agrees with the vectorized margins
        for row in lam[:200]:
            assert polytope.higuchi_check(row, 1e-9).inside
    report(2, worst >= -1e-9, f"smallest margin {worst:.2e}", time.perf_counter() - t0, 30)


def test_criterion_3_orbits():
    t0 = time.perf_counter()
    ok = True
    expected = {"GHZ": (14, None), "W": (12, 8), "B1": (8, 5), "B2": (8, 5), "B3": (8, 5), "SEP": (6, 6)}
    for label, (g, k) in expected.items():
        for tol in (orbits.RANK_TOL, 1e-6, 1e-8):
            r = orbits.orbit_report(slocc.representative(label), tol)
            ok &= r.g_dim_real == g and (k is None or r.k_dim_real == k)
    for L in (3, 4, 5):
        for tol in (orbits.RANK_TOL, 1e-6, 1e-8):
            r = orbits.w_sphericality_certificate(L, tol)
            ok &= r.b_dim_complex == 2 * L and r.spherical
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    for tol in (orbits.RANK_TOL, 1e-6, 1e-8):
        ok &= orbits.grassmannian_tangent_dim(np.kron(plus, plus), np.kron(minus, minus), tol) == 4
    report(3, bool(ok), "catalogue, W certificates L=3..5, Grassmannian", time.perf_counter() - t0, 5)


def test_criterion_4_slocc_round_trip():
    t0 = time.perf_counter()
    worst_rate, marginal_failures, total_failures = 1.0, 0, 0
    for label in slocc.SloccClass:
        hits = 0
        for seed in range(10_000):
            s = slocc.random_slocc_sample(label, seed)
            try:
                got = slocc.classify(s)
            except slocc.ClassificationError:
                got = None
            if got is label:
                hits += 1
                continue
            total_failures += 1
            d = abs(slocc.hyperdeterminant(s))
            ev = np.linalg.eigvalsh(qstate.batch_marginals(s.amplitudes[None])[0])[:, 0]
            near = slocc.DET_TOL / 10 <= d <= 10 * slocc.DET_TOL or np.any(
                (ev >= slocc.RANK_TOL / 10) & (ev <= 10 * slocc.RANK_TOL)
            )
            marginal_failures += bool(near)
        worst_rate = min(worst_rate, hits / 10_000)
    ok = worst_rate >= 0.99 and marginal_failures == total_failures
    detail = f"worst class rate {worst_rate:.4f}, failures {total_failures} ({marginal_failures} marginal)"
    report(4, ok, detail, time.perf_counter() - t0, 60)


def test_criterion_5_w_polytope():
    t0 = time.perf_counter()
    amps = np.array([slocc.random_slocc_sample("W", seed).amplitudes for seed in range(10_000)])
    lam = batch_lambdas(amps)
    inside = np.array([polytope.in_w_polytope(row, 1e-9) for row in lam])
    report(5, bool(inside.all()), f"{inside.sum()} of {len(inside)} inside", time.perf_counter() - t0, 30)


def interior_targets():
    rng = np.random.default_rng(20120101)
    out = [(0.1, 0.1, 0.1), (1 / 6, 1 / 6, 1 / 6)]
    while len(out) < 5:
        lam = rng.uniform(0, 0.5, 3)
        if polytope.margins(lam).min() > 0.05:
            out.append(tuple(float(x) for x in lam))
    return out


def test_criterion_6_interior_fibers():
    t0 = time.perf_counter()
    ok, parts = True, []
    for k, target in enumerate(interior_targets()):
        run = fibers.sample_fiber(target, 200, seed=100 + k)
        rep = fibers.fiber_dimension(target, run)
        coords = fibers.fiber_cloud(run) / fibers._reference_ranges()
        i, j = pair_index(len(run))
        dist = np.linalg.norm(coords[i] - coords[j], axis=1)
        far = np.argsort(dist)[::-1][:5]
        amps = run.amplitudes()
        ov = fibers.lu_overlap_pairs(amps[i[far]], amps[j[far]], restarts=8, iters=300)
        ok &= len(run) == 200 and rep.estimated_dimension == 2 and ov.min() < 1 - 1e-4
        parts.append(f"dim {rep.estimated_dimension} min overlap {ov.min():.3f}")
    report(6, bool(ok), "; ".join(parts), time.perf_counter() - t0, 600)


def test_criterion_7_boundary_fibers():
    t0 = time.perf_counter()
    ok, parts = True, []
    for target in ((0.1, 0.25, 0.35), (0.0, 0.2, 0.2)):
        run = fibers.sample_fiber(target, 200, seed=7)
        rep = fibers.fiber_dimension(target, run)
        amps = run.amplitudes()
        i, j = pair_index(len(run))
        ov = fibers.lu_overlap_pairs(amps[i], amps[j], restarts=3, iters=200)
        ok &= len(run) == 200 and rep.estimated_dimension == 0 and ov.min() >= 1 - 1e-6
        parts.append(f"dim {rep.estimated_dimension} min overlap 1-{1 - ov.min():.1e}")
        if target[0] > 0:
            form = fibers.boundary_canonical_nondegenerate(target)
            moduli_err = np.abs(np.array(form.moduli) - (0.6, 0.25, 0.15)).max()
            det = np.abs(slocc.batch_hyperdeterminant(amps)).max()
            ok &= moduli_err <= 1e-8 and det < 1e-8
            parts.append(f"moduli error {moduli_err:.1e} max |Det| {det:.1e}")
    report(7, bool(ok), "; ".join(parts), time.perf_counter() - t0, 600)


def test_criterion_8_flow():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    starts = {
        (1 / 6, 1 / 6, 1 / 6): np.array([slocc.random_slocc_sample("W", s).amplitudes for s in range(100)]),
        (0.0, 0.0, 0.0): haar_states(3, 100, rng),
        (0.5, 0.0, 0.0): np.array([slocc.random_slocc_sample("B1", s).amplitudes for s in range(100)]),
    }
    ok, parts = True, []
    for limit, amps in starts.items():
        traces = slocc.kirwan_flow_batch(amps)
        err = max(np.abs(np.array(t.limit_spectra) - limit).max() for t in traces)
        mono = all(t.is_monotone() for t in traces)
        ok &= err < 1e-4 and mono and all(t.converged for t in traces)
        parts.append(f"limit error {err:.1e}")
    report(8, bool(ok), "; ".join(parts), time.perf_counter() - t0, 120)


def test_criterion_9_density():
    t0 = time.perf_counter()
    h = fibers.boundary_shell_histogram(100_000, 20, seed=9)
    d = h.density
    ok = d[0] < 0.2 * d.max() and d[0] < d[1] < d[2]
    report(9, bool(ok), f"inner/modal {d[0] / d.max():.3f}, shells {d[0]:.2f} < {d[1]:.2f} < {d[2]:.2f}",
           time.perf_counter() - t0, 30)


def test_criterion_10_hygiene():
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    h = 1e-6
    worst_grad = 0.0
    checked = 0
    while checked < 100:
        v = haar_states(3, 1, rng)[0]
        if batch_lambdas(v[None])[0].min() < 1e-3:
            continue
        t = rng.uniform(0, 0.5, 3)
        g = fibers.fiber_gradient(v[None], t)[0]
        fd = np.empty(8, dtype=complex)
        for k in range(8):
            e = np.zeros(8, dtype=complex)
            e[k] = h
            fd[k] = (fibers.fiber_objective(v + e, t)[0] - fibers.fiber_objective(v - e, t)[0]) / (2 * h) + 1j * (
                fibers.fiber_objective(v + 1j * e, t)[0] - fibers.fiber_objective(v - 1j * e, t)[0]
            ) / (2 * h)
        worst_grad = max(worst_grad, np.abs(g - fd).max() / max(1.0, np.abs(fd).max()))
        checked += 1
    amps = haar_states(3, 10_000, rng)
    base = fibers.batch_invariants(amps)
    ops = np.array([[qstate.haar_unitary(rng) for _ in range(3)] for _ in range(10_000)])
    moved = np.array([qstate.apply_ops_tensor(a, u) for a, u in zip(amps, ops)])
    worst_inv = np.abs(fibers.batch_invariants(moved) - base).max()
    ok = worst_grad <= 1e-6 and worst_inv <= 1e-10
    report(10, bool(ok), f"gradient rel. error {worst_grad:.1e}, invariant drift {worst_inv:.1e}",
           time.perf_counter() - t0, 60)
