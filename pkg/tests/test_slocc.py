import numpy as np
import pytest

from marginalscope import qstate, slocc
from marginalscope.qstate import PureState, apply_ops_tensor, haar_states
from marginalscope.slocc import (
    ClassificationError,
    SloccClass,
    classify,
    hyperdeterminant,
    is_momentum_critical,
    kirwan_flow,
    kirwan_flow_batch,
    local_ranks,
    random_slocc_sample,
    representative,
)


def slice_discriminant(amps):
    """Det as the discriminant of q(x, y) = det(x A0 + y A1), A_k = slice at qubit 1 = k."""
    t = np.asarray(amps).reshape(2, 2, 2)
    a0, a1 = t[0], t[1]
    a = np.linalg.det(a0)
    c = np.linalg.det(a1)
    b = a0[0, 0] * a1[1, 1] + a0[1, 1] * a1[0, 0] - a0[0, 1] * a1[1, 0] - a0[1, 0] * a1[0, 1]
    return b * b - 4 * a * c


def random_sl2(rng):
    g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    return g / np.sqrt(np.linalg.det(g))


def test_det_matches_slice_discriminant(rng):
    for _ in range(200):
        v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        assert hyperdeterminant(v) == pytest.approx(slice_discriminant(v), rel=1e-12, abs=1e-14)


def test_det_examples(ghz, w, sep):
    assert hyperdeterminant(sep) == 0
    assert abs(hyperdeterminant(ghz)) == pytest.approx(0.25, abs=1e-15)
    assert abs(hyperdeterminant(w)) < 1e-16


def test_det_sl_invariance(rng):
    for _ in range(1000):
        v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        gv = apply_ops_tensor(v, [random_sl2(rng) for _ in range(3)])
        d0, d1 = hyperdeterminant(v), hyperdeterminant(gv)
        assert abs(d1 - d0) <= 1e-9 * abs(d0)


def test_ghz_det_invariant_under_sl_ops(ghz, rng):
    d0 = hyperdeterminant(ghz)
    for _ in range(100):
        assert hyperdeterminant(apply_ops_tensor(ghz.amplitudes, [random_sl2(rng) for _ in range(3)])) == (
            pytest.approx(d0, rel=1e-9)
        )


def test_det_modulus_bound():
    rng = np.random.default_rng(8)
    d = np.abs(slocc.batch_hyperdeterminant(haar_states(3, 100_000, rng)))
    assert d.max() <= 0.25 + 1e-9


def test_det_requires_three_qubits():
    with pytest.raises(ValueError):
        hyperdeterminant(np.ones(4))


def test_local_ranks(w, sep):
    assert local_ranks(representative("B1")) == (1, 2, 2)
    assert local_ranks(sep) == (1, 1, 1)
    assert local_ranks(w) == (2, 2, 2)


@pytest.mark.parametrize(
    "state, label",
    [
        (qstate.ghz_state(), "GHZ"),
        (qstate.w_state(), "W"),
        (PureState.from_bits({"000": 1, "011": 1}), "B1"),
        (PureState.from_bits({"000": 1, "101": 1}), "B2"),
        (PureState.from_bits({"000": 1, "110": 1}), "B3"),
        (qstate.product_state(), "SEP"),
    ],
)
def test_classify_representatives(state, label):
    assert classify(state) is SloccClass(label)


def test_classify_rejects_impossible_ranks():
    # rho_1 keeps its small eigenvalue above rank_tol, rho_2 and rho_3 drop below it
    e = np.sqrt(1.5e-9)
    v = np.zeros(8)
    v[0], v[5], v[6] = 1, e / np.sqrt(2), e / np.sqrt(2)
    s = PureState.normalized(v)
    assert local_ranks(s) == (2, 1, 1)
    with pytest.raises(ClassificationError, match="inconsistent"):
        classify(s)


@pytest.mark.parametrize("label", list(SloccClass))
def test_random_slocc_round_trip(label):
    hits = sum(classify(random_slocc_sample(label, seed)) is label for seed in range(500))
    assert hits >= 495


def test_random_slocc_deterministic():
    assert random_slocc_sample("W", 3) == random_slocc_sample("W", 3)


def test_sep_samples_stay_product():
    for seed in range(50):
        assert local_ranks(random_slocc_sample("SEP", seed)) == (1, 1, 1)


def test_conditioning_cap_respected(rng):
    for _ in range(200):
        assert np.linalg.cond(slocc.random_invertible(rng, 20)) <= 20


def test_flow_stationary_at_w(w):
    tr = kirwan_flow(w)
    assert tr.converged
    assert tr.limit_spectra == pytest.approx((1 / 6,) * 3, abs=1e-14)
    assert len(tr.iterates) == 2


def test_flow_stationary_at_ghz(ghz):
    tr = kirwan_flow(ghz)
    assert tr.converged and tr.limit_spectra == pytest.approx((0, 0, 0), abs=1e-14)


def test_flow_random_w_class_start():
    tr = kirwan_flow(random_slocc_sample("W", 11))
    assert tr.converged
    assert np.abs(np.array(tr.limit_spectra) - 1 / 6).max() < 1e-4
    assert tr.is_monotone()
    assert is_momentum_critical(tr.final_state, 1e-6)


def test_flow_monotone_and_critical_limits():
    rng = np.random.default_rng(4)
    traces = kirwan_flow_batch(haar_states(3, 20, rng))
    for tr in traces:
        ns = np.array([it[2] for it in tr.iterates])
        assert np.all(np.diff(ns) <= 1e-12)
        assert tr.converged and is_momentum_critical(tr.final_state, 1e-6)


def test_flow_reports_nonconvergence():
    tr = kirwan_flow(random_slocc_sample("W", 2), max_iter=3)
    assert not tr.converged and "no convergence" in tr.diagnostic


def test_flow_large_step_aborts_with_diagnostic():
    tr = kirwan_flow(random_slocc_sample("GHZ", 5), step=50.0, max_iter=200)
    assert not tr.converged
    assert "increased" in tr.diagnostic


def test_flow_jsonl(w):
    lines = kirwan_flow(random_slocc_sample("B1", 0), max_iter=5).to_jsonl().splitlines()
    assert len(lines) == 6
    import json

    rec = json.loads(lines[0])
    assert set(rec) == {"step", "lambdas", "moment_norm_square"}


def test_momentum_critical_representatives(w):
    assert is_momentum_critical(w)
    for k in (1, 2, 3):
        assert is_momentum_critical(representative(f"B{k}"))
    assert is_momentum_critical(qstate.product_state())


def test_haar_states_not_critical():
    assert not any(is_momentum_critical(qstate.haar_random_state(3, s)) for s in range(100))
