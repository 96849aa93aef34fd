"""Dense statevector simulation primitives.

States live in the Kronecker-product convention where qubit 0 is the
leftmost tensor factor, i.e. the most significant bit of the amplitude
index.  Everything here is immutable-in / value-out: operations return
new states and never mutate their inputs, so they are safe to call from
multiple workers as long as each worker owns its own RNG stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce as _fold

import numpy as np

# Dense statevectors are capped here (16 MB of complex128 at 20 qubits).
# Larger registers must go through ProductState and the reduced paths.
DENSE_QUBIT_LIMIT = 20

_NORM_ATOL = 1e-10
_FACTOR_NORM_ATOL = 1e-12
_HERMITIAN_ATOL = 1e-12


class SimulationError(ValueError):
    """Raised on malformed states, gates or targets."""


# --- gate library ---------------------------------------------------------

I2 = np.eye(2, dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
Y = 1j * X @ Z
CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]], dtype=complex)

PROJ0 = np.array([[1, 0], [0, 0]], dtype=complex)
PROJ1 = np.array([[0, 0], [0, 1]], dtype=complex)

_PAULIS = {"X": X, "Y": Y, "Z": Z}


def rotation(pauli: str, theta: float) -> np.ndarray:
    """R_P(theta) = cos(theta/2) I + i sin(theta/2) P, 4*pi periodic."""
    try:
        p = _PAULIS[pauli.upper()]
    except KeyError:
        raise SimulationError(f"unknown Pauli axis {pauli!r}") from None
    return np.cos(theta / 2) * I2 + 1j * np.sin(theta / 2) * p


def rx(theta: float) -> np.ndarray:
    return rotation("X", theta)


def ry(theta: float) -> np.ndarray:
    return rotation("Y", theta)


def rz(theta: float) -> np.ndarray:
    return rotation("Z", theta)


def is_unitary(m: np.ndarray, atol: float = 1e-10) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and np.max(
        np.abs(m.conj().T @ m - np.eye(m.shape[0]))) < atol


def is_hermitian(m: np.ndarray, atol: float = _HERMITIAN_ATOL) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T)) < atol


# --- states ---------------------------------------------------------------

@dataclass(frozen=True)
class PureState:
    """Normalized n-qubit statevector (n <= DENSE_QUBIT_LIMIT)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        object.__setattr__(self, "amplitudes", amps)
        n = int(amps.size).bit_length() - 1
        if amps.size != 2 ** n or amps.size < 2:
            raise SimulationError(f"amplitude count {amps.size} is not a power of two")
        if n > DENSE_QUBIT_LIMIT:
            raise SimulationError(
                f"{n} qubits exceeds the dense limit of {DENSE_QUBIT_LIMIT}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > _NORM_ATOL:
            raise SimulationError(f"state norm {norm!r} is not 1")

    @property
    def n(self) -> int:
        return int(self.amplitudes.size).bit_length() - 1

    @classmethod
    def zero(cls, n: int) -> "PureState":
        amps = np.zeros(2 ** n, dtype=complex)
        amps[0] = 1.0
        return cls(amps)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "PureState":
        v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
        return cls(v / np.linalg.norm(v))


@dataclass(frozen=True)
class ProductState:
    """Unentangled n-qubit state stored as n single-qubit factors.

    Not subject to the dense limit; this is the input format for the
    large-register experiments.
    """

    factors: np.ndarray  # shape (n, 2)

    def __post_init__(self):
        f = np.asarray(self.factors, dtype=complex)
        if f.ndim != 2 or f.shape[1] != 2 or f.shape[0] < 1:
            raise SimulationError(f"factors must have shape (n, 2), got {f.shape}")
        norms = np.linalg.norm(f, axis=1)
        if np.max(np.abs(norms - 1.0)) > _FACTOR_NORM_ATOL:
            raise SimulationError("every factor must be normalized")
        object.__setattr__(self, "factors", f)

    @property
    def n(self) -> int:
        return self.factors.shape[0]

    @classmethod
    def basis(cls, bits) -> "ProductState":
        bits = np.asarray(bits, dtype=int)
        f = np.zeros((bits.size, 2), dtype=complex)
        f[np.arange(bits.size), bits] = 1.0
        return cls(f)


@dataclass(frozen=True)
class Ensemble:
    """Mixture {(p_i, |psi_i>)} of pure or product states on one register."""

    items: tuple  # of (probability, PureState | ProductState)

    def __post_init__(self):
        items = tuple((float(p), s) for p, s in self.items)
        if not items:
            raise SimulationError("ensemble must contain at least one state")
        probs = np.array([p for p, _ in items])
        if np.any(probs <= 0):
            raise SimulationError("ensemble probabilities must be positive")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise SimulationError(f"ensemble probabilities sum to {probs.sum()!r}")
        ns = {s.n for _, s in items}
        if len(ns) != 1:
            raise SimulationError("all ensemble members must share the qubit count")
        object.__setattr__(self, "items", items)

    @property
    def n(self) -> int:
        return self.items[0][1].n


def dense_from_product(p: ProductState) -> PureState:
    """Kronecker-expand a ProductState (only below the dense limit)."""
    if p.n > DENSE_QUBIT_LIMIT:
        raise SimulationError(
            f"{p.n} qubits exceeds the dense limit of {DENSE_QUBIT_LIMIT}")
    return PureState(_fold(np.kron, p.factors))


def as_dense(state) -> PureState:
    return dense_from_product(state) if isinstance(state, ProductState) else state


# --- operations -----------------------------------------------------------

def _check_targets(n: int, targets) -> tuple:
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise SimulationError(f"duplicate target qubits {targets}")
    if any(t < 0 or t >= n for t in targets):
        raise SimulationError(f"targets {targets} out of range for {n} qubits")
    return targets


def apply_gate(state: PureState, gate: np.ndarray, targets) -> PureState:
    """Apply a 2^k x 2^k gate to the given qubits, in target order.

    For multi-qubit gates targets[0] is the gate's most significant
    qubit (e.g. the CNOT control for the matrix above).
    """
    n = state.n
    targets = _check_targets(n, targets)
    k = len(targets)
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (2 ** k, 2 ** k):
        raise SimulationError(
            f"gate shape {gate.shape} does not match {k} target qubit(s)")
    psi = state.amplitudes.reshape([2] * n)
    g = gate.reshape([2] * (2 * k))
    out = np.tensordot(g, psi, axes=(list(range(k, 2 * k)), list(targets)))
    out = np.moveaxis(out, list(range(k)), list(targets))
    return PureState(out.ravel())


def expectation(state: PureState, obs: np.ndarray, targets) -> float:
    """<psi| (obs on targets, identity elsewhere) |psi> for Hermitian obs."""
    obs = np.asarray(obs, dtype=complex)
    if not is_hermitian(obs):
        raise SimulationError("observable is not Hermitian")
    n = state.n
    targets = _check_targets(n, targets)
    k = len(targets)
    if obs.shape != (2 ** k, 2 ** k):
        raise SimulationError(
            f"observable shape {obs.shape} does not match {k} target qubit(s)")
    psi = state.amplitudes.reshape([2] * n)
    o = obs.reshape([2] * (2 * k))
    out = np.tensordot(o, psi, axes=(list(range(k, 2 * k)), list(targets)))
    out = np.moveaxis(out, list(range(k)), list(targets))
    val = np.vdot(state.amplitudes, out.ravel())
    if abs(val.imag) > 1e-10:
        raise SimulationError(f"expectation has imaginary residue {val.imag!r}")
    return float(val.real)


def sample_computational(state: PureState, rng: np.random.Generator,
                         shots: int) -> np.ndarray:
    """Draw i.i.d. computational-basis outcomes; returns (shots, n) bits."""
    if shots < 1:
        raise SimulationError("shots must be >= 1")
    probs = np.abs(state.amplitudes) ** 2
    probs = probs / probs.sum()  # remove float drift before sampling
    idx = rng.choice(probs.size, size=shots, p=probs)
    return bits_from_index(idx, state.n)


def bits_from_index(idx: np.ndarray, n: int) -> np.ndarray:
    """Expand amplitude indices to per-qubit bits (qubit 0 = MSB)."""
    idx = np.asarray(idx)
    shifts = n - 1 - np.arange(n)
    return ((idx[..., None] >> shifts) & 1).astype(np.uint8)


def reduced_density(state: PureState, support) -> np.ndarray:
    """Reduced density matrix of a pure state on a sorted qubit subset."""
    n = state.n
    support = _check_targets(n, support)
    if any(a >= b for a, b in zip(support, support[1:])):
        raise SimulationError("support must be sorted ascending")
    k = len(support)
    rest = [q for q in range(n) if q not in support]
    psi = state.amplitudes.reshape([2] * n)
    psi = np.transpose(psi, list(support) + rest).reshape(2 ** k, -1)
    return psi @ psi.conj().T
