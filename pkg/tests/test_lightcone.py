import time

import numpy as np
import pytest
from numpy.testing import assert_allclose

from also.ansatz import DEFAULT_TEMPLATE, layout, random_params, apply_ansatz
from also.lightcone import (
    ConeProgram,
    LocalObservable,
    ObservableSum,
    batched_cone_conjugate,
    brick_gate_array,
    compute_lightcone,
    contract,
    evaluate_exact_product,
    permute_to_entry,
    product_cone_vector,
)
from also.qsim import (
    CNOT,
    PROJ0,
    ProductState,
    PureState,
    SimulationError,
    expectation,
    reduced_density,
)
from also.tasks import state_prep_observable
from oracles import backward_cone_qubits


def test_local_observable_validation():
    with pytest.raises(SimulationError):
        LocalObservable((1, 0), np.eye(4))  # unsorted support
    with pytest.raises(SimulationError):
        LocalObservable((0,), np.array([[0, 1], [0, 0]]))  # not Hermitian
    with pytest.raises(SimulationError):
        LocalObservable((0, 1), np.eye(2))  # dim mismatch
    term = LocalObservable((2,), PROJ0, weight=0.25)
    assert term.norm_inf() == pytest.approx(0.25)
    with pytest.raises(SimulationError):
        ObservableSum(())


def test_cone_depth_one_is_two_qubits():
    obs = LocalObservable((0,), PROJ0)
    cone = compute_lightcone(obs, 8, 1)
    assert cone.qubits == (0, 1)
    assert len(cone.bricks) == 1


def test_cone_matches_backward_traversal_oracle():
    for n in (4, 6, 8, 10):
        for d in (1, 2, 3):
            for q in range(n):
                obs = LocalObservable((q,), PROJ0)
                cone = compute_lightcone(obs, n, d)
                assert set(cone.qubits) == backward_cone_qubits((q,), n, d)
                assert len(cone.qubits) <= min(2 * d, n)
                for pl in cone.bricks:
                    assert set(pl.qubits) <= set(cone.qubits)


def test_cone_depth_three_saturates_small_register():
    obs = LocalObservable((1,), PROJ0)
    cone = compute_lightcone(obs, 4, 3)
    assert len(cone.qubits) == 4


def test_cone_depth_three_size_six():
    obs = LocalObservable((3,), PROJ0)
    cone = compute_lightcone(obs, 8, 3)
    assert len(cone.qubits) == 6


def test_contract_zero_angles_reduces_to_cnot_conjugation():
    theta = np.zeros((4, 1, 4))
    for q, inner in ((2, np.kron(PROJ0, np.eye(2))),
                     (3, np.kron(np.eye(2), PROJ0))):
        obs = LocalObservable((q,), PROJ0)
        cone = compute_lightcone(obs, 8, 1)
        red = contract(obs, theta, DEFAULT_TEMPLATE, cone)
        assert red.support == (2, 3)
        assert_allclose(red.matrix, CNOT.conj().T @ inner @ CNOT, atol=1e-14)


def test_master_oracle_small_grid():
    rng = np.random.default_rng(11)
    for n in (4, 6):
        for d in (1, 2):
            placements = layout(n, d)
            for _ in range(20):
                theta = random_params(n, d, DEFAULT_TEMPLATE, rng)
                psi = PureState.random(n, rng)
                evolved = apply_ansatz(psi, theta, DEFAULT_TEMPLATE)
                for q in range(n):
                    obs = LocalObservable((q,), PROJ0)
                    cone = compute_lightcone(obs, n, d, placements)
                    red = contract(obs, theta, DEFAULT_TEMPLATE, cone)
                    rho = reduced_density(psi, red.support)
                    lhs = float(np.vdot(rho, red.matrix).real)
                    rhs = expectation(evolved, PROJ0, [q])
                    assert abs(lhs - rhs) < 1e-10


def test_spectral_norm_conserved():
    rng = np.random.default_rng(12)
    n, d = 6, 2
    placements = layout(n, d)
    herm = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    herm = herm + herm.conj().T
    obs = LocalObservable((2,), herm)
    want = np.max(np.abs(np.linalg.eigvalsh(herm)))
    cone = compute_lightcone(obs, n, d, placements)
    for _ in range(100):
        theta = random_params(n, d, DEFAULT_TEMPLATE, rng)
        red = contract(obs, theta, DEFAULT_TEMPLATE, cone)
        got = np.max(np.abs(np.linalg.eigvalsh(red.matrix)))
        assert abs(got - want) < 1e-9


def test_contract_rejects_mismatched_cone():
    theta = np.zeros((4, 1, 4))
    cone = compute_lightcone(LocalObservable((0,), PROJ0), 8, 1)
    with pytest.raises(SimulationError):
        contract(LocalObservable((4,), PROJ0), theta, DEFAULT_TEMPLATE, cone)
    cone2 = compute_lightcone(LocalObservable((0,), PROJ0), 8, 2)
    with pytest.raises(SimulationError):
        # parameters shallower than the cone's circuit
        contract(LocalObservable((0,), PROJ0), np.zeros((4, 1, 4)),
                 DEFAULT_TEMPLATE, cone2)


def test_exact_product_zero_state_unit_cost():
    theta = np.zeros((4, 2, 4))
    state = ProductState.basis([0] * 8)
    got = evaluate_exact_product(state_prep_observable(8), theta,
                                 DEFAULT_TEMPLATE, state)
    assert got == pytest.approx(1.0, abs=1e-12)


def test_exact_product_matches_dense_oracle():
    rng = np.random.default_rng(13)
    n, d = 8, 2
    raw = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    state = ProductState(raw)
    theta = random_params(n, d, DEFAULT_TEMPLATE, rng)
    got = evaluate_exact_product(state_prep_observable(n), theta,
                                 DEFAULT_TEMPLATE, state)
    from also.qsim import dense_from_product

    evolved = apply_ansatz(dense_from_product(state), theta, DEFAULT_TEMPLATE)
    want = float(np.mean([expectation(evolved, PROJ0, [q]) for q in range(n)]))
    assert got == pytest.approx(want, abs=1e-10)


def test_exact_product_scales_past_dense_limit():
    rng = np.random.default_rng(14)
    state = ProductState.basis(rng.integers(0, 2, size=30))
    theta = random_params(30, 4, DEFAULT_TEMPLATE, rng)
    got = evaluate_exact_product(state_prep_observable(30), theta,
                                 DEFAULT_TEMPLATE, state)
    assert np.isfinite(got) and -1e-9 <= got <= 1 + 1e-9


def test_batched_conjugation_matches_contract():
    rng = np.random.default_rng(15)
    n, d = 6, 2
    placements = layout(n, d)
    theta = random_params(n, d, DEFAULT_TEMPLATE, rng)
    gate_arr = brick_gate_array(theta, DEFAULT_TEMPLATE, n)
    terms = state_prep_observable(n).terms
    cones = [compute_lightcone(t, n, d, placements) for t in terms]
    programs = [ConeProgram.compile(t, c) for t, c in zip(terms, cones)]
    by_sig = {}
    for i, pr in enumerate(programs):
        by_sig.setdefault(pr.signature, []).append(i)
    for group in by_sig.values():
        obs_mats = np.stack([terms[i].matrix for i in group])
        batch = batched_cone_conjugate([programs[i] for i in group],
                                       obs_mats, gate_arr)
        for row, i in enumerate(group):
            red = contract(terms[i], theta, DEFAULT_TEMPLATE, cones[i])
            entry_ref = permute_to_entry(red.matrix, programs[i])
            assert_allclose(batch[row], entry_ref, atol=1e-12)


def test_product_cone_vector():
    rng = np.random.default_rng(16)
    raw = rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2))
    raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    state = ProductState(raw)
    vec = product_cone_vector(state, (1, 3))
    assert_allclose(vec, np.kron(raw[1], raw[3]), atol=1e-14)


def test_contraction_time_flat_in_n_at_fixed_depth():
    # cone size depends on d only, so the contraction cost must not grow
    # with the register; generous factor to absorb timer noise
    def contraction_time(n):
        rng = np.random.default_rng(17)
        d = 2
        placements = layout(n, d)
        theta = random_params(n, d, DEFAULT_TEMPLATE, rng)
        obs = LocalObservable((n // 2,), PROJ0)
        cone = compute_lightcone(obs, n, d, placements)
        best = np.inf
        for _ in range(5):
            t0 = time.perf_counter()
            for _ in range(20):
                contract(obs, theta, DEFAULT_TEMPLATE, cone)
            best = min(best, time.perf_counter() - t0)
        return best

    small, large = contraction_time(8), contraction_time(24)
    assert large < 8 * small + 1e-3


def test_contraction_cost_grows_no_faster_than_16_to_d():
    # doubling the depth multiplies the cone dimension by 4, so the
    # conjugation cost is bounded by c * 16^d; compare measured growth
    # against that envelope with generous slack
    def contraction_time(d):
        rng = np.random.default_rng(18)
        n = 16
        placements = layout(n, d)
        theta = random_params(n, d, DEFAULT_TEMPLATE, rng)
        obs = LocalObservable((7,), PROJ0)
        cone = compute_lightcone(obs, n, d, placements)
        best = np.inf
        for _ in range(5):
            t0 = time.perf_counter()
            for _ in range(10):
                contract(obs, theta, DEFAULT_TEMPLATE, cone)
            best = min(best, time.perf_counter() - t0)
        return best

    t1, t3 = contraction_time(1), contraction_time(3)
    assert t3 / t1 < 8 * 16 ** (3 - 1)
