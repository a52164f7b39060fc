import math

import pytest

import specbound as sb


def test_hilbert_estimate_bounds_norm():
    op = sb.hilbert(30)
    assert op.rows == 30 and op.cols == 30 and op.adjoint_available
    truth = sb.dense_svd(sb.hilbert_dense(30))
    r = sb.estimate(op, "counterbalance", theta=1.58, seed=4)
    assert r["kind"] == "counterbalance"
    assert r["matvecs"] == 3 and r["sequential_depth"] == 2
    assert r["value"] > truth["spectral_norm"]  # typical draw; seed pinned


def test_estimate_is_deterministic():
    op = sb.hilbert(12)
    a = sb.estimate(op, "vanilla", theta=2.17, seed=9, k=3)
    b = sb.estimate(op, "vanilla", theta=2.17, seed=9, k=3)
    assert a["value"] == b["value"]
    c = sb.estimate(op, "vanilla", theta=2.17, seed=10, k=3)
    assert c["value"] != a["value"]


def test_theta_for_delta_closed_forms():
    v = sb.theta_for_delta("vanilla", 0.05, k=3)
    assert v["method"] == "closed_form"
    assert v["theta"] == pytest.approx(math.sqrt(2 / math.pi) * 0.05 ** (-1 / 3), rel=1e-12)
    d = sb.theta_for_delta("dixon", 0.05)
    assert d["theta"] == pytest.approx((2 / (math.pi * 0.05)) ** (1 / 3), rel=1e-12)


def test_g_cb_pin_and_sup():
    assert sb.g_cb(2.0, 10.0) == pytest.approx(2.0 ** -4 / 8, rel=1e-12)
    assert sb.g_cb_sup(1.58) == pytest.approx(0.1694367237, rel=1e-4)


def test_dense_round_trip_and_power_ratio():
    rows = [[3.0, 0.0], [0.0, 1.0], [0.0, 0.0]]
    op = sb.dense(rows)
    assert (op.rows, op.cols) == (3, 2)
    assert op.apply([1.0, 0.0]) == [3.0, 0.0, 0.0]
    assert op.apply_adjoint([0.0, 1.0, 0.0]) == [0.0, 1.0]
    # rank-1: the ratio estimator is exact
    one = sb.dense([[2.5]])
    assert sb.power_ratio(one, seed=7) == pytest.approx(2.5, rel=1e-12)


def test_synthetic_truth_and_batch():
    op, truth = sb.synthetic([1.0, 0.3], 20, 20, seed=1)
    assert truth["spectral_norm"] == pytest.approx(1.0, abs=1e-12)
    assert truth["effective_rank"] == pytest.approx(1.09, abs=1e-12)
    out = sb.run_batch(op, truth["spectral_norm"], "counterbalance", 1.58, 500, seed=1)
    assert len(out["values"]) == 500
    assert out["delta_real"] < 0.2


def test_registered_exceptions():
    with pytest.raises(sb.ContractError):
        sb.theta_for_delta("counterbalance", 0.0)
    assert issubclass(sb.ContractError, ValueError)
    assert issubclass(sb.CapabilityError, RuntimeError)
    with pytest.raises(sb.DegenerateDrawError):
        sb.estimate(sb.dense([[0.0, 0.0], [0.0, 0.0]]), "counterbalance", theta=1.58, seed=3)


def test_expm_diagonal():
    e = sb.expm([[1.0, 0.0], [0.0, -2.0]])
    assert e[0][0] == pytest.approx(math.e, rel=1e-12)
    assert e[1][1] == pytest.approx(math.exp(-2.0), rel=1e-12)
    assert e[0][1] == 0.0 and e[1][0] == 0.0
