"""Heisenberg-picture reduction of local observables.

Conjugating a k-local observable through the alternating circuit,
W_O = U(theta)^dag O U(theta), only the bricks inside the observable's
backward cone survive; everything else cancels.  The cone of a 1-local
observable holds at most min(2d, n) qubits, so W_O can be contracted as
a dense operator whose size is exponential in the depth only.

Cone qubits are stored sorted by global index; wrapped cones such as
{29, 0, 1, 2} therefore appear ascending, and every reduced object in
the package (reduced operators, reduced shadow states, reduced inputs)
uses the same axis order, so traces always line up.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from also.ansatz import (
    BrickTemplate,
    brick_unitaries_batch,
    brick_unitary,
    layout,
    validate_params,
)
from also.qsim import ProductState, SimulationError, is_hermitian


@dataclass(frozen=True)
class LocalObservable:
    """Hermitian term acting on a small sorted qubit subset, with a real
    weight that scales its contribution inside an ObservableSum."""

    support: tuple
    matrix: np.ndarray
    weight: float = 1.0

    def __post_init__(self):
        support = tuple(int(q) for q in self.support)
        if len(set(support)) != len(support) or list(support) != sorted(support):
            raise SimulationError(f"support {support} must be sorted and distinct")
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2 ** len(support),) * 2:
            raise SimulationError(
                f"matrix shape {m.shape} does not match support size {len(support)}")
        if not is_hermitian(m, atol=1e-12):
            raise SimulationError("observable matrix is not Hermitian")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "weight", float(self.weight))

    @property
    def locality(self) -> int:
        return len(self.support)

    def norm_inf(self) -> float:
        """Spectral norm of the weighted term, as the sample planner sees it."""
        return abs(self.weight) * float(np.max(np.abs(np.linalg.eigvalsh(self.matrix))))


@dataclass(frozen=True)
class ObservableSum:
    """Weighted sum of local terms, O = sum_i w_i O_i."""

    terms: tuple

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise SimulationError("observable sum needs at least one term")
        object.__setattr__(self, "terms", terms)

    def __len__(self) -> int:
        return len(self.terms)

    def max_norm(self) -> float:
        return max(t.norm_inf() for t in self.terms)


@dataclass(frozen=True)
class Lightcone:
    """Backward cone of an observable: its qubit subregister plus the
    bricks that survive the cancellation, listed top layer first (the
    order in which the conjugation is applied)."""

    n: int
    qubits: tuple
    bricks: tuple


@dataclass(frozen=True)
class ReducedOperator:
    """W_O restricted to its cone, dim 2^|support|."""

    support: tuple
    matrix: np.ndarray


def compute_lightcone(obs: LocalObservable, n: int, d: int,
                      placements=None) -> Lightcone:
    """Walk the brick layout backward from the observable's support."""
    if any(q < 0 or q >= n for q in obs.support):
        raise SimulationError(f"support {obs.support} out of range for n={n}")
    if placements is None:
        placements = layout(n, d)
    by_layer = [[] for _ in range(d)]
    for pl in placements:
        by_layer[pl.layer].append(pl)
    cone = set(obs.support)
    bricks = []
    for j in range(d - 1, -1, -1):
        for pl in by_layer[j]:
            if cone.intersection(pl.qubits):
                bricks.append(pl)
                cone.update(pl.qubits)
    return Lightcone(n, tuple(sorted(cone)), tuple(bricks))


def _embed(matrix: np.ndarray, old_support: tuple, new_support: tuple) -> np.ndarray:
    """Tensor an operator on old_support with identities up to new_support
    (both sorted), keeping row/column axes in ascending qubit order."""
    extra = [q for q in new_support if q not in old_support]
    if not extra:
        return matrix
    m = len(extra)
    eye = np.eye(2 ** m, dtype=complex)
    big = np.einsum("ab,ij->aibj", matrix, eye)
    k = len(new_support)
    # current axis order is old_support + extra; permute into sorted order
    source_order = list(old_support) + extra
    perm = [source_order.index(q) for q in new_support]
    t = big.reshape([2] * (2 * k))
    t = np.transpose(t, perm + [p + k for p in perm])
    return np.ascontiguousarray(t).reshape(2 ** k, 2 ** k)


def _conjugate_pair(matrix: np.ndarray, support: tuple, pair: tuple,
                    gate: np.ndarray) -> np.ndarray:
    """Return G^dag M G for a 4x4 gate on the ordered qubit pair."""
    k = len(support)
    ax_a, ax_b = support.index(pair[0]), support.index(pair[1])
    t = matrix.reshape([2] * (2 * k))
    g = gate.reshape(2, 2, 2, 2)
    gd = gate.conj().T.reshape(2, 2, 2, 2)
    # left multiply by G^dag: contract its column axes with M's row axes
    t = np.tensordot(gd, t, axes=([2, 3], [ax_a, ax_b]))
    t = np.moveaxis(t, [0, 1], [ax_a, ax_b])
    # right multiply by G: contract M's column axes with G's row axes
    t = np.tensordot(t, g, axes=([k + ax_a, k + ax_b], [0, 1]))
    t = np.moveaxis(t, [2 * k - 2, 2 * k - 1], [k + ax_a, k + ax_b])
    return t.reshape(2 ** k, 2 ** k)


def contract(obs: LocalObservable, theta: np.ndarray, template: BrickTemplate,
             cone: Lightcone, gates: dict | None = None) -> ReducedOperator:
    """Contract the cone bricks against the observable.

    The working operator starts on the observable's own support and grows
    as each brick pulls new qubits in, so the heavy conjugations happen
    at the smallest possible dimension.  Weight is not folded in.  A
    caller evaluating many cones under one theta can pass gates, a
    {(layer, block): 4x4} table, to share the brick construction.
    """
    if not set(obs.support).issubset(cone.qubits):
        raise SimulationError("lightcone does not cover the observable support")
    if gates is None:
        theta = validate_params(theta, cone.n, template)
        if cone.bricks and max(pl.layer for pl in cone.bricks) >= theta.shape[1]:
            raise SimulationError("lightcone was computed for a deeper circuit")
    support = obs.support
    w = obs.matrix
    for pl in cone.bricks:
        new = tuple(sorted(set(support).union(pl.qubits)))
        if new != support:
            w = _embed(w, support, new)
            support = new
        if gates is None:
            gate = brick_unitary(template, theta[pl.block, pl.layer])
        else:
            gate = gates[pl.layer, pl.block]
        w = _conjugate_pair(w, support, pl.qubits, gate)
    if support != cone.qubits:
        w = _embed(w, support, cone.qubits)
    return ReducedOperator(cone.qubits, w)


def brick_gate_array(theta: np.ndarray, template: BrickTemplate,
                     n: int) -> np.ndarray:
    """All brick unitaries as a (blocks, depth, 4, 4) array, one pass."""
    theta = validate_params(theta, n, template)
    blocks, depth = theta.shape[0], theta.shape[1]
    flat = theta.reshape(blocks * depth, theta.shape[2])
    return brick_unitaries_batch(template, flat).reshape(blocks, depth, 4, 4)


def brick_gate_table(theta: np.ndarray, template: BrickTemplate, n: int) -> dict:
    """brick_gate_array repackaged as a {(layer, block): 4x4} lookup."""
    arr = brick_gate_array(theta, template, n)
    blocks, depth = arr.shape[0], arr.shape[1]
    return {(j, i): arr[i, j] for i in range(blocks) for j in range(depth)}


@dataclass(frozen=True)
class ConeProgram:
    """A cone's contraction compiled into batch-friendly form.

    Axes are labeled in entry order (observable qubits first, then new
    qubits as the bricks pull them in), so growth always appends axes at
    the end and cones of identical shape share one instruction stream no
    matter where they sit on the ring.  signature identifies that stream;
    perm maps sorted-support axes to entry-order axes.
    """

    support: tuple        # sorted global qubits
    entry_order: tuple    # global qubits in entry order
    steps: tuple          # (ax_a, ax_b, k_after) per brick
    placements: tuple     # (layer, block) per brick
    k0: int
    signature: tuple
    perm: tuple           # entry axis i holds sorted axis perm[i]

    @classmethod
    def compile(cls, obs: LocalObservable, cone: Lightcone) -> "ConeProgram":
        entry = list(obs.support)
        steps = []
        placements = []
        for pl in cone.bricks:
            for q in pl.qubits:
                if q not in entry:
                    entry.append(q)
            steps.append((entry.index(pl.qubits[0]), entry.index(pl.qubits[1]),
                          len(entry)))
            placements.append((pl.layer, pl.block))
        support = tuple(sorted(entry))
        perm = tuple(support.index(q) for q in entry)
        return cls(support, tuple(entry), tuple(steps), tuple(placements),
                   len(obs.support), (len(obs.support), tuple(steps)), perm)


def permute_to_entry(matrix: np.ndarray, program: ConeProgram) -> np.ndarray:
    """Reorder a sorted-axis operator into the program's entry-order axes."""
    k = len(program.support)
    perm = list(program.perm)
    t = matrix.reshape([2] * (2 * k)).transpose(perm + [p + k for p in perm])
    return np.ascontiguousarray(t).reshape(2 ** k, 2 ** k)


def batched_cone_conjugate(programs, obs_mats: np.ndarray,
                           gate_arr: np.ndarray,
                           dtype=np.complex128) -> np.ndarray:
    """Conjugate a batch of observables through same-signature cones.

    programs share one signature; obs_mats is (B, 2^k0, 2^k0); gate_arr
    is the (blocks, depth, 4, 4) brick table for the current parameters.
    Returns (B, 2^K, 2^K) operators in entry-order axes.

    Each brick applies both sides at once as one (B, 16, 16) batched
    matmul over the paired row/column axes; this stage is memory-bound,
    so one fused pass beats two half-conjugations.
    """
    b = len(programs)
    steps = programs[0].steps
    k = programs[0].k0
    idx_block = np.array([[pr.placements[s][1] for pr in programs]
                          for s in range(len(steps))])
    idx_layer = np.array([[pr.placements[s][0] for pr in programs]
                          for s in range(len(steps))])
    # w_t keeps axes (batch, k row qubits, k col qubits); it may be a
    # strided view between steps, copies happen once per brick below
    w_t = np.ascontiguousarray(obs_mats, dtype=dtype).reshape([b] + [2] * (2 * k))
    for s, (ax_a, ax_b, k_after) in enumerate(steps):
        if k_after > k:
            grow = 2 ** (k_after - k)
            eye = np.eye(grow, dtype=dtype)
            flat = np.ascontiguousarray(w_t).reshape(b, 2 ** k, 2 ** k)
            flat = np.einsum("brc,ij->bricj", flat, eye).reshape(
                b, (2 ** k) * grow, (2 ** k) * grow)
            k = k_after
            w_t = flat.reshape([b] + [2] * (2 * k))
        gates_d = gate_arr[idx_block[s], idx_layer[s]].conj().transpose(0, 2, 1)
        gates_d = np.ascontiguousarray(gates_d, dtype=dtype)
        # one fused kernel for W -> G^dag W G on the paired axes
        kern = np.einsum("bij,bkl->bikjl", gates_d,
                         gates_d.conj()).reshape(b, 16, 16)
        pairs = [1 + ax_a, 1 + ax_b, 1 + k + ax_a, 1 + k + ax_b]
        t = np.moveaxis(w_t, pairs, [1, 2, 3, 4]).reshape(b, 16, -1)
        t = np.matmul(kern, t)
        w_t = np.moveaxis(t.reshape([b, 2, 2, 2, 2] + [2] * (2 * k - 4)),
                          [1, 2, 3, 4], pairs)
    return np.ascontiguousarray(w_t).reshape(b, 2 ** k, 2 ** k)


def product_cone_vector(state: ProductState, support: tuple) -> np.ndarray:
    """Kronecker product of the factors on a sorted qubit subset."""
    v = np.ones(1, dtype=complex)
    for q in support:
        v = np.kron(v, state.factors[q])
    return v


def evaluate_exact_product(obs_sum: ObservableSum, theta: np.ndarray,
                           template: BrickTemplate, state: ProductState,
                           cones=None) -> float:
    """Exact cost on a product input via the reduced operators only.

    Works at any register size: each term needs just the cone-restricted
    input vector, so nothing of size 2^n is ever built.
    """
    n = state.n
    theta = validate_params(theta, n, template)
    d = theta.shape[1]
    if cones is None:
        placements = layout(n, d)
        cones = [compute_lightcone(t, n, d, placements) for t in obs_sum.terms]
    total = 0.0
    for term, cone in zip(obs_sum.terms, cones):
        red = contract(term, theta, template, cone)
        vec = product_cone_vector(state, red.support)
        val = np.vdot(vec, red.matrix @ vec)
        total += term.weight * val.real
    return float(total)
