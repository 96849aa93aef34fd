import math

import numpy as np
import pytest

from also.optimizer import (
    NonFiniteObjectiveError,
    OptTrace,
    PowellConfig,
    SpsaConfig,
    powell_minimize,
    spsa_minimize,
)


def quadratic(x):
    return float(np.sum(x * x))


def test_spsa_converges_on_quadratic_bowl():
    theta0 = np.full(12, 2.0)
    best, trace = spsa_minimize(quadratic, theta0,
                                SpsaConfig(iterations=2000, exponent=0.5, seed=0))
    assert np.linalg.norm(best) < 0.1 * np.linalg.norm(theta0)
    assert trace.evaluations == 4000


def test_spsa_exact_two_evaluations_per_iteration():
    calls = []

    def counting(x):
        calls.append(1)
        return quadratic(x)

    _, trace = spsa_minimize(counting, np.ones(4),
                             SpsaConfig(iterations=137, seed=1))
    assert len(calls) == 2 * 137
    assert trace.evaluations == 274


def test_spsa_deterministic_given_seed():
    cfg = SpsaConfig(iterations=50, exponent=0.5, seed=7)
    r1 = spsa_minimize(quadratic, np.ones(6), cfg, exact_fn=quadratic)
    r2 = spsa_minimize(quadratic, np.ones(6), cfg, exact_fn=quadratic)
    assert np.array_equal(r1[0], r2[0])
    assert r1[1].backend_values == r2[1].backend_values
    assert r1[1].exact_values == r2[1].exact_values


def test_spsa_gain_sequence_logged():
    _, trace = spsa_minimize(quadratic, np.ones(3),
                             SpsaConfig(iterations=10, exponent=0.3, seed=2))
    # row 0 is the initial point; gains start at r=1
    for row in range(1, len(trace)):
        r = trace.iters[row]
        assert trace.gains[row] == pytest.approx(r ** -0.3)


def test_spsa_returns_best_exact_iterate():
    cfg = SpsaConfig(iterations=300, exponent=0.5, seed=3)
    best, trace = spsa_minimize(quadratic, np.full(5, 1.5), cfg,
                                exact_fn=quadratic)
    logged_best = min(v for v in trace.exact_values if not math.isnan(v))
    assert quadratic(best) == pytest.approx(logged_best, abs=1e-12)


def test_spsa_aborts_on_non_finite():
    state = {"count": 0}

    def explodes(x):
        state["count"] += 1
        return math.nan if state["count"] > 10 else quadratic(x)

    with pytest.raises(NonFiniteObjectiveError) as err:
        spsa_minimize(explodes, np.ones(4), SpsaConfig(iterations=100, seed=4))
    assert err.value.trace.aborted
    assert len(err.value.trace) >= 1  # partial trace preserved


def test_spsa_ledger_column_monotone():
    state = {"copies": 0}

    def objective(x):
        state["copies"] += 3
        return quadratic(x)

    _, trace = spsa_minimize(objective, np.ones(4),
                             SpsaConfig(iterations=25, seed=5),
                             copies_fn=lambda: state["copies"])
    assert trace.copies == sorted(trace.copies)
    assert trace.copies[-1] == 2 * 25 * 3


def test_powell_quadratic_distinct_scales():
    def skew(x):
        return float(x[0] ** 2 + 25.0 * (x[1] - 1.0) ** 2)

    best, trace = powell_minimize(skew, np.array([3.0, -2.0]),
                                  PowellConfig(max_evaluations=5000,
                                               line_tol=1e-8, cost_tol=1e-12))
    assert skew(best) < 1e-6
    assert trace.evaluations < 500
    assert not trace.cap_hit


def test_powell_cap_enforced_exactly():
    calls = []

    def counting(x):
        calls.append(1)
        return quadratic(x)

    best, trace = powell_minimize(counting, np.full(6, 2.0),
                                  PowellConfig(max_evaluations=10))
    assert len(calls) == 10
    assert trace.evaluations == 10
    assert trace.cap_hit
    assert quadratic(best) <= quadratic(np.full(6, 2.0))


def test_powell_deterministic():
    cfg = PowellConfig(max_evaluations=200)
    r1 = powell_minimize(quadratic, np.full(3, 1.2), cfg)
    r2 = powell_minimize(quadratic, np.full(3, 1.2), cfg)
    assert np.array_equal(r1[0], r2[0])
    assert r1[1].backend_values == r2[1].backend_values


def test_powell_unlimited_runs_to_convergence():
    best, trace = powell_minimize(quadratic, np.full(4, 3.0),
                                  PowellConfig(max_evaluations=None))
    assert quadratic(best) < 1e-10
    assert not trace.cap_hit


def test_powell_aborts_on_non_finite():
    def explodes(x):
        return math.inf if abs(x[0]) > 2.5 else quadratic(x)

    with pytest.raises(NonFiniteObjectiveError):
        powell_minimize(explodes, np.array([2.0, 0.0]),
                        PowellConfig(max_evaluations=1000))


def test_trace_csv_round_trip(tmp_path):
    _, trace = spsa_minimize(quadratic, np.ones(3),
                             SpsaConfig(iterations=5, seed=6), exact_fn=quadratic)
    path = tmp_path / "trace.csv"
    trace.to_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "iter,backend_value,exact_value,copies,wall_ms"
    assert len(lines) == len(trace) + 1


def test_trace_best_exact_empty():
    trace = OptTrace()
    trace.log(0, math.nan, math.nan, 0, 0.0)
    assert trace.best_exact() is None


def test_config_validation():
    with pytest.raises(ValueError):
        SpsaConfig(iterations=0)
    with pytest.raises(ValueError):
        SpsaConfig(iterations=5, exponent=-1.0)
    with pytest.raises(ValueError):
        PowellConfig(max_evaluations=0)
