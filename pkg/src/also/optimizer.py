"""Derivative-free optimizers: SPSA and Powell's direction-set method.

Both minimize a cost callback over a flat parameter vector and never
touch the objective outside that callback, so copy ledgers owned by the
caller stay exact.  Traces record, per logged step, the backend value
the optimizer saw, an independently recomputed exact value (when a
recompute callback is supplied), the cumulative copy count and wall
time; the optimizer itself only ever consumes backend values.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

TRACE_COLUMNS = ("iter", "backend_value", "exact_value", "copies", "wall_ms")


class NonFiniteObjectiveError(RuntimeError):
    """Objective returned nan/inf; the partial trace rides along."""

    def __init__(self, message: str, trace: "OptTrace"):
        super().__init__(message)
        self.trace = trace


class _CapReached(Exception):
    pass


@dataclass
class SpsaConfig:
    """Plain first-order SPSA with gains c_r = a_r = r^(-exponent),
    Rademacher perturbations, two evaluations per iteration."""

    iterations: int
    exponent: float = 0.5
    seed: int | None = None
    log_every: int = 1

    def __post_init__(self):
        if self.iterations < 1 or self.exponent <= 0 or self.log_every < 1:
            raise ValueError("need iterations >= 1, exponent > 0, log_every >= 1")


@dataclass
class PowellConfig:
    """Direction-set minimization with an exact evaluation cap; the cap is
    None for deterministic objectives that may run to convergence."""

    max_evaluations: int | None = 50_000
    line_tol: float = 1e-4
    cost_tol: float = 1e-8
    log_every: int = 1

    def __post_init__(self):
        if self.max_evaluations is not None and self.max_evaluations < 1:
            raise ValueError("evaluation cap must be >= 1 when set")


@dataclass
class OptTrace:
    """Logged optimization history; one row per logged step."""

    method: str = ""
    iters: list = field(default_factory=list)
    backend_values: list = field(default_factory=list)
    exact_values: list = field(default_factory=list)
    copies: list = field(default_factory=list)
    wall_ms: list = field(default_factory=list)
    thetas: list = field(default_factory=list)
    gains: list = field(default_factory=list)
    evaluations: int = 0
    cap_hit: bool = False
    aborted: bool = False

    def log(self, it, backend, exact, copies, wall, theta=None, gain=math.nan):
        self.iters.append(int(it))
        self.backend_values.append(float(backend))
        self.exact_values.append(float(exact))
        self.copies.append(int(copies))
        self.wall_ms.append(float(wall))
        self.thetas.append(None if theta is None else np.array(theta))
        self.gains.append(float(gain))

    def __len__(self) -> int:
        return len(self.iters)

    def best_exact(self):
        """(row, iteration, value) of the lowest recorded exact cost."""
        vals = np.array(self.exact_values)
        if np.all(np.isnan(vals)):
            return None
        row = int(np.nanargmin(vals))
        return row, self.iters[row], float(vals[row])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRACE_COLUMNS)
            for row in zip(self.iters, self.backend_values, self.exact_values,
                           self.copies, self.wall_ms):
                writer.writerow([row[0], repr(row[1]), repr(row[2]), row[3],
                                 f"{row[4]:.3f}"])


def _copies(copies_fn) -> int:
    return int(copies_fn()) if copies_fn is not None else 0


def spsa_minimize(objective, theta0, cfg: SpsaConfig, exact_fn=None,
                  copies_fn=None):
    """Minimize with SPSA; returns (theta, trace).

    The update is theta <- theta - a_r * ghat with
    ghat = (f(theta + c_r D) - f(theta - c_r D)) / (2 c_r) * D for a
    Rademacher D, exactly two objective calls per iteration.  When an
    exact recompute callback is given, the returned theta is the logged
    iterate with the lowest exact cost; otherwise the final iterate.
    """
    theta = np.asarray(theta0, dtype=float).ravel().copy()
    rng = np.random.default_rng(cfg.seed)
    trace = OptTrace(method="spsa")
    start = time.perf_counter()
    best_val, best_theta = math.inf, theta.copy()

    def elapsed():
        return (time.perf_counter() - start) * 1000.0

    first_exact = float(exact_fn(theta)) if exact_fn else math.nan
    trace.log(0, math.nan, first_exact, _copies(copies_fn), elapsed(), theta, math.nan)
    if exact_fn:
        best_val, best_theta = first_exact, theta.copy()

    for r in range(1, cfg.iterations + 1):
        gain = r ** (-cfg.exponent)
        delta = rng.integers(0, 2, size=theta.size) * 2.0 - 1.0
        f_plus = float(objective(theta + gain * delta))
        f_minus = float(objective(theta - gain * delta))
        trace.evaluations += 2
        if not (math.isfinite(f_plus) and math.isfinite(f_minus)):
            trace.aborted = True
            raise NonFiniteObjectiveError(
                f"objective returned a non-finite value at iteration {r}", trace)
        ghat = (f_plus - f_minus) / (2.0 * gain) * delta
        theta = theta - gain * ghat
        if r % cfg.log_every == 0 or r == cfg.iterations:
            exact = float(exact_fn(theta)) if exact_fn else math.nan
            trace.log(r, 0.5 * (f_plus + f_minus), exact, _copies(copies_fn),
                      elapsed(), theta, gain)
            if exact_fn and exact < best_val:
                best_val, best_theta = exact, theta.copy()

    return (best_theta if exact_fn else theta), trace


def powell_minimize(objective, theta0, cfg: PowellConfig, exact_fn=None,
                    copies_fn=None):
    """Minimize with Powell's method; returns (theta, trace).

    The evaluation cap is enforced exactly by refusing the call that
    would exceed it; hitting the cap mid line-search is not an error,
    the best point seen so far comes back with trace.cap_hit set.
    """
    theta0 = np.asarray(theta0, dtype=float).ravel().copy()
    trace = OptTrace(method="powell")
    start = time.perf_counter()
    best = {"value": math.inf, "theta": theta0.copy()}
    cap = cfg.max_evaluations

    def wrapped(x):
        if cap is not None and trace.evaluations >= cap:
            raise _CapReached
        value = float(objective(x))
        trace.evaluations += 1
        if not math.isfinite(value):
            trace.aborted = True
            raise NonFiniteObjectiveError(
                f"objective returned {value} at evaluation {trace.evaluations}", trace)
        if value < best["value"]:
            best["value"], best["theta"] = value, np.array(x, dtype=float)
        if trace.evaluations % cfg.log_every == 0:
            wall = (time.perf_counter() - start) * 1000.0
            exact = float(exact_fn(x)) if exact_fn else math.nan
            trace.log(trace.evaluations, value, exact, _copies(copies_fn), wall, x)
        return value

    try:
        scipy.optimize.minimize(
            wrapped, theta0, method="Powell",
            options={"xtol": cfg.line_tol, "ftol": cfg.cost_tol,
                     "maxiter": 10 ** 9,
                     "maxfev": cap if cap is not None else 10 ** 12})
    except _CapReached:
        pass
    if cap is not None and trace.evaluations >= cap:
        trace.cap_hit = True

    theta = best["theta"]
    if not trace.iters or trace.iters[-1] != trace.evaluations:
        wall = (time.perf_counter() - start) * 1000.0
        exact = float(exact_fn(theta)) if exact_fn else math.nan
        trace.log(trace.evaluations, best["value"], exact, _copies(copies_fn),
                  wall, theta)
    return theta, trace
