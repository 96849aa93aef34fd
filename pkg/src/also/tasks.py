"""Problem generators: state preparation and the quantum autoencoder.

State preparation searches for parameters driving the input state to
the all-zeros state, scored by the 1-local surrogate
J = (1/n) sum_i |0><0|_i; the true quality metric is the infidelity,
recomputed densely where the register allows.  The autoencoder drives
an ensemble's trailing (trash) register to zeros with the same J built
over the trash qubits only.

Generated instances are compatible by construction: a hidden parameter
tensor theta_star achieving cost 0 exists and is returned for auditing,
but nothing downstream ever sees it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from also.ansatz import BrickTemplate, apply_ansatz, random_params
from also.estimator import CostFunction
from also.lightcone import LocalObservable, ObservableSum
from also.qsim import (
    DENSE_QUBIT_LIMIT,
    Ensemble,
    ProductState,
    PureState,
    SimulationError,
    as_dense,
    rotation,
)

_PROJ0 = np.array([[1, 0], [0, 0]], dtype=complex)


def state_prep_observable(n: int) -> ObservableSum:
    """J = (1/n) sum_i |0><0|_i, one 1-local term per qubit."""
    return ObservableSum(tuple(
        LocalObservable((q,), _PROJ0, weight=1.0 / n) for q in range(n)))


def trash_observable(n: int, n_b: int) -> ObservableSum:
    """J over the trailing n_b trash qubits, identity on the rest."""
    if not 0 < n_b < n:
        raise SimulationError(f"trash register size {n_b} must lie in 1..{n - 1}")
    return ObservableSum(tuple(
        LocalObservable((q,), _PROJ0, weight=1.0 / n_b)
        for q in range(n - n_b, n)))


@dataclass(frozen=True)
class StatePrepProblem:
    target: object            # PureState or ProductState
    n: int
    d: int
    template: BrickTemplate
    observable: ObservableSum

    def cost_function(self, **kwargs) -> CostFunction:
        return CostFunction("state-prep", self.target, self.observable,
                            self.n, self.d, self.template, **kwargs)


@dataclass(frozen=True)
class AutoencoderProblem:
    ensemble: Ensemble
    n: int
    n_b: int
    d: int
    template: BrickTemplate
    observable: ObservableSum

    def cost_function(self, **kwargs) -> CostFunction:
        return CostFunction("autoencoder", self.ensemble, self.observable,
                            self.n, self.d, self.template, **kwargs)


def gen_compatible_target(n: int, d: int, template: BrickTemplate,
                          rng: np.random.Generator):
    """Random target reachable by the ansatz: |psi> = U(theta*)^dag |0...0>.

    Returns (state, theta_star); theta_star is for auditing only and must
    not reach the optimizer.
    """
    theta_star = random_params(n, d, template, rng)
    target = apply_ansatz(PureState.zero(n), theta_star, template, adjoint=True)
    return target, theta_star


def gen_basis_target(n: int, rng: np.random.Generator) -> ProductState:
    """Uniformly random computational basis state, stored factored so the
    reduced paths work at any register size."""
    return ProductState.basis(rng.integers(0, 2, size=n))


def make_state_prep(target, d: int, template: BrickTemplate) -> StatePrepProblem:
    return StatePrepProblem(target, target.n, d, template,
                            state_prep_observable(target.n))


def true_infidelity(problem: StatePrepProblem, theta: np.ndarray) -> float:
    """1 - |<psi| U(theta)^dag |0...0>|^2; needs a dense-sized register."""
    if problem.n > DENSE_QUBIT_LIMIT:
        raise SimulationError(
            f"infidelity needs n <= {DENSE_QUBIT_LIMIT}; report the cost instead")
    prepared = apply_ansatz(PureState.zero(problem.n), theta,
                            problem.template, adjoint=True)
    overlap = np.vdot(as_dense(problem.target).amplitudes, prepared.amplitudes)
    return float(1.0 - np.abs(overlap) ** 2)


def gen_ensemble(n: int, n_b: int, d: int, template: BrickTemplate,
                 rng: np.random.Generator):
    """Two-state ensemble with p = (1/3, 2/3) for the autoencoder.

    Below the dense limit the members are U(theta*)^dag (|phi_i>_A (x)
    |0...0>_B) for orthonormal random |phi_i>_A, so a perfect encoder
    exists and (ensemble, theta_star) is returned.  Above it the members
    are independently rotated basis states (kept factored); theta_star
    is then None and cost 0 is not guaranteed.
    """
    if not 0 < n_b < n:
        raise SimulationError(f"trash register size {n_b} must lie in 1..{n - 1}")
    probs = (1.0 / 3.0, 2.0 / 3.0)
    if n <= DENSE_QUBIT_LIMIT:
        n_a = n - n_b
        dim_a = 2 ** n_a
        raw = rng.normal(size=(2, dim_a)) + 1j * rng.normal(size=(2, dim_a))
        phi1 = raw[0] / np.linalg.norm(raw[0])
        phi2 = raw[1] - np.vdot(phi1, raw[1]) * phi1
        phi2 = phi2 / np.linalg.norm(phi2)
        theta_star = random_params(n, d, template, rng)
        zeros_b = np.zeros(2 ** n_b, dtype=complex)
        zeros_b[0] = 1.0
        members = []
        for phi in (phi1, phi2):
            dense = PureState(np.kron(phi, zeros_b))
            members.append(apply_ansatz(dense, theta_star, template, adjoint=True))
        return Ensemble(tuple(zip(probs, members))), theta_star
    members = []
    for _ in range(2):
        bits = rng.integers(0, 2, size=n)
        angles = rng.uniform(0.0, 2 * np.pi, size=n)
        factors = np.empty((n, 2), dtype=complex)
        for q in range(n):
            e = np.zeros(2, dtype=complex)
            e[bits[q]] = 1.0
            factors[q] = rotation("Y", angles[q]) @ e
        members.append(ProductState(factors))
    return Ensemble(tuple(zip(probs, members))), None


def make_autoencoder(ensemble: Ensemble, n_b: int, d: int,
                     template: BrickTemplate) -> AutoencoderProblem:
    n = ensemble.n
    return AutoencoderProblem(ensemble, n, n_b, d, template,
                              trash_observable(n, n_b))
