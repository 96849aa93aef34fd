"""Alternating layered brick circuit.

The circuit is a depth-d stack of layers; each layer tiles the n-qubit
ring with n/2 two-qubit bricks S(gamma), and consecutive layers are
offset by one qubit so the bricks alternate.  With 0-based indices,
layer j block i acts on qubits ((2i + j) mod n, (2i + j + 1) mod n);
layer 0 is the aligned tiling (0,1), (2,3), ...

All angles are in radians; the parameter tensor has shape (n/2, d, p)
where p is the brick template's parameter count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from also import qsim
from also.qsim import CNOT, I2, PureState, SimulationError, apply_gate, rotation

_SWAP = np.array(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]], dtype=complex)

_ROTATIONS = ("rx", "ry", "rz")
_FIXED_1Q = {"h": qsim.H, "s": qsim.S, "x": qsim.X, "y": qsim.Y, "z": qsim.Z}


@dataclass(frozen=True)
class BrickOp:
    """One gate inside a brick: a rotation bound to a parameter slot, a
    fixed single-qubit gate, or a CNOT given as an ordered (control,
    target) pair of brick slots."""

    kind: str          # "rx" | "ry" | "rz" | "cnot" | "h" | "s" | "x" | "y" | "z"
    slot: tuple        # (q,) for single-qubit ops, (control, target) for cnot
    param: int | None = None   # parameter index for rotations
    angle: float | None = None  # fixed angle alternative for rotations


@dataclass(frozen=True)
class BrickTemplate:
    """Gate list defining S(gamma) on two qubits, in application order."""

    name: str
    ops: tuple
    n_params: int

    def __post_init__(self):
        slots_used = []
        for op in self.ops:
            if any(s not in (0, 1) for s in op.slot):
                raise SimulationError(f"brick op {op} uses a slot outside (0, 1)")
            if op.kind == "cnot":
                if len(op.slot) != 2 or op.slot[0] == op.slot[1]:
                    raise SimulationError(f"cnot needs two distinct slots, got {op.slot}")
            elif op.kind in _ROTATIONS:
                if (op.param is None) == (op.angle is None):
                    raise SimulationError(
                        f"rotation {op} needs exactly one of param slot or fixed angle")
                if op.param is not None:
                    slots_used.append(op.param)
            elif op.kind not in _FIXED_1Q:
                raise SimulationError(f"unknown brick gate kind {op.kind!r}")
        if sorted(slots_used) != list(range(self.n_params)):
            raise SimulationError(
                f"parameter slots {sorted(slots_used)} must cover 0..{self.n_params - 1} once each")


# S(gamma) = [RY(g0) (x) RY(g1)] . CNOT . [RY(g2) (x) RY(g3)], control on
# the lower brick slot; all rotations wound down to zero leave a bare CNOT.
DEFAULT_TEMPLATE = BrickTemplate(
    name="ry-cnot-ry",
    ops=(
        BrickOp("ry", (0,), param=2),
        BrickOp("ry", (1,), param=3),
        BrickOp("cnot", (0, 1)),
        BrickOp("ry", (0,), param=0),
        BrickOp("ry", (1,), param=1),
    ),
    n_params=4,
)

# Cheaper two-parameter variant, handy for smoke tests and sweeps.
RY_CNOT_TEMPLATE = BrickTemplate(
    name="ry-cnot",
    ops=(
        BrickOp("cnot", (0, 1)),
        BrickOp("ry", (0,), param=0),
        BrickOp("ry", (1,), param=1),
    ),
    n_params=2,
)

TEMPLATES = {t.name: t for t in (DEFAULT_TEMPLATE, RY_CNOT_TEMPLATE)}


def _op_matrix(op: BrickOp, gamma: np.ndarray) -> np.ndarray:
    """4x4 matrix of one brick op in the (slot0, slot1) Kronecker order."""
    if op.kind == "cnot":
        return CNOT if op.slot == (0, 1) else _SWAP @ CNOT @ _SWAP
    if op.kind in _ROTATIONS:
        g = rotation(op.kind[1], op.angle if op.param is None else float(gamma[op.param]))
    else:
        g = _FIXED_1Q[op.kind]
    return np.kron(g, I2) if op.slot == (0,) else np.kron(I2, g)


def brick_unitary(template: BrickTemplate, gamma) -> np.ndarray:
    """Build the 4x4 brick unitary for one parameter vector."""
    gamma = np.asarray(gamma, dtype=float).ravel()
    if gamma.size != template.n_params:
        raise SimulationError(
            f"expected {template.n_params} brick parameters, got {gamma.size}")
    u = np.eye(4, dtype=complex)
    for op in template.ops:
        u = _op_matrix(op, gamma) @ u
    return u


def _rotation_batch(axis: str, angles: np.ndarray) -> np.ndarray:
    """(B, 2, 2) rotation matrices, one per angle."""
    c = np.cos(angles / 2)
    s = np.sin(angles / 2)
    out = np.zeros(angles.shape + (2, 2), dtype=complex)
    if axis == "y":
        out[..., 0, 0] = c
        out[..., 0, 1] = s
        out[..., 1, 0] = -s
        out[..., 1, 1] = c
    elif axis == "x":
        out[..., 0, 0] = c
        out[..., 0, 1] = 1j * s
        out[..., 1, 0] = 1j * s
        out[..., 1, 1] = c
    else:
        out[..., 0, 0] = c + 1j * s
        out[..., 1, 1] = c - 1j * s
    return out


def brick_unitaries_batch(template: BrickTemplate, gammas: np.ndarray) -> np.ndarray:
    """Vectorized brick_unitary over a (B, p) block of parameter vectors.

    This is the evaluation hot path: one optimizer step rebuilds every
    brick in every observable's cone, so the 4x4s are produced in bulk.
    """
    gammas = np.asarray(gammas, dtype=float)
    b = gammas.shape[0]
    if gammas.shape != (b, template.n_params):
        raise SimulationError(
            f"expected shape (B, {template.n_params}), got {gammas.shape}")
    u = np.broadcast_to(np.eye(4, dtype=complex), (b, 4, 4))
    for op in template.ops:
        if op.kind == "cnot":
            g4 = _op_matrix(op, None)
            u = g4 @ u
            continue
        if op.kind in _ROTATIONS:
            angles = (np.full(b, op.angle) if op.param is None
                      else gammas[:, op.param])
            g2 = _rotation_batch(op.kind[1], angles)
        else:
            g2 = np.broadcast_to(_FIXED_1Q[op.kind], (b, 2, 2))
        if op.slot == (0,):
            g4 = np.einsum("bij,kl->bikjl", g2, I2).reshape(b, 4, 4)
        else:
            g4 = np.einsum("ij,bkl->bikjl", I2, g2).reshape(b, 4, 4)
        u = g4 @ u
    return u


@dataclass(frozen=True)
class BlockPlacement:
    """Position of one brick: layer and block are 0-based, qubits is the
    ordered (lower-slot, upper-slot) pair with wrap-around on the ring."""

    layer: int
    block: int
    qubits: tuple


def layout(n: int, d: int) -> list:
    """All placements in application order: layer-major, blocks ascending."""
    if n < 2 or n % 2:
        raise SimulationError(f"qubit count must be even and >= 2, got {n}")
    if d < 1:
        raise SimulationError(f"depth must be >= 1, got {d}")
    placements = []
    for j in range(d):
        for i in range(n // 2):
            a = (2 * i + j) % n
            placements.append(BlockPlacement(j, i, (a, (a + 1) % n)))
    return placements


def validate_params(theta: np.ndarray, n: int,
                    template: BrickTemplate) -> np.ndarray:
    """Check shape (n/2, depth, p) and finiteness; depth is read off the tensor."""
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 3:
        raise SimulationError(f"parameter tensor must be 3-d, got shape {theta.shape}")
    want = (n // 2, theta.shape[1], template.n_params)
    if theta.shape != want:
        raise SimulationError(f"parameter tensor shape {theta.shape}, expected {want}")
    if not np.all(np.isfinite(theta)):
        raise SimulationError("parameter tensor contains non-finite values")
    return theta


def random_params(n: int, d: int, template: BrickTemplate,
                  rng: np.random.Generator) -> np.ndarray:
    """Uniform [0, 2*pi) initialization, shape (n/2, d, p)."""
    return rng.uniform(0.0, 2 * np.pi, size=(n // 2, d, template.n_params))


def apply_ansatz(state: PureState, theta: np.ndarray, template: BrickTemplate,
                 adjoint: bool = False) -> PureState:
    """Run the full circuit (or its adjoint) on a dense state."""
    n = state.n
    theta = validate_params(theta, n, template)
    depth = theta.shape[1]
    placements = layout(n, depth)
    gates = brick_unitaries_batch(
        template, theta.reshape(-1, template.n_params))
    if adjoint:
        placements = placements[::-1]
    for pl in placements:
        u = gates[pl.block * depth + pl.layer]
        if adjoint:
            u = u.conj().T
        state = apply_gate(state, u, pl.qubits)
    return state
