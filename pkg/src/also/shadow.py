"""Randomized single-qubit Pauli-basis shadows.

Every snapshot measures each qubit in a basis drawn uniformly from
{Z, X, Y} (i.e. rotates by I, H or HS^dag and reads the computational
basis) and keeps only two small integers per qubit: the basis code and
the outcome bit.  The unbiased single-qubit reconstruction is
F(V) = 3V - 1 applied to the back-rotated outcome projector, so a
snapshot's state estimate is the tensor product of six possible 2x2
factors, and the T-snapshot shadow state is their mean.

Reductions onto a subregister A never materialize per-record matrices:
records are frequency-counted on their local (basis, outcome) pattern,
split into two halves of A so that the count table stays sparse, and
the mean is assembled from two dense pattern banks and one sparse
matrix product.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse

from also import qsim
from also.qsim import (
    Ensemble,
    ProductState,
    PureState,
    SimulationError,
    apply_gate,
    bits_from_index,
)

BASIS_Z, BASIS_X, BASIS_Y = 0, 1, 2
BASIS_NAMES = "ZXY"

# Basis-change gates applied before the computational-basis read-out.
_BASIS_GATES = (qsim.I2, qsim.H, qsim.H @ qsim.S.conj().T)

_MAGIC = b"ALSH"
_VERSION = 1


def _factor_table() -> np.ndarray:
    """The six possible 2x2 snapshot factors, indexed by 2*basis + outcome."""
    table = np.empty((6, 2, 2), dtype=complex)
    for b, u in enumerate(_BASIS_GATES):
        for out in (0, 1):
            proj = np.zeros((2, 2), dtype=complex)
            proj[out, out] = 1.0
            v = u.conj().T @ proj @ u
            table[2 * b + out] = 3.0 * v - np.eye(2)
    return table


_FACTORS = _factor_table()


def single_shadow_factor(basis: int, outcome: int) -> np.ndarray:
    """F(U^dag |u><u| U) for one qubit; trace-1 Hermitian, not positive."""
    if basis not in (0, 1, 2) or outcome not in (0, 1):
        raise SimulationError(f"invalid basis/outcome ({basis}, {outcome})")
    return _FACTORS[2 * basis + outcome].copy()


@dataclass(frozen=True)
class ShadowRecord:
    """One snapshot: per-qubit basis codes and outcome bits."""

    bases: np.ndarray
    outcomes: np.ndarray


@dataclass
class ShadowSet:
    """T snapshots of one n-qubit source, plus the seed that produced them.

    Reductions are cached per sorted support tuple, so a set can drive an
    entire optimization run (and several different objectives) while
    paying the averaging cost once per subregister.
    """

    bases: np.ndarray     # (T, n) uint8 in {0,1,2}
    outcomes: np.ndarray  # (T, n) uint8 in {0,1}
    seed: int | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        b = np.ascontiguousarray(self.bases, dtype=np.uint8)
        o = np.ascontiguousarray(self.outcomes, dtype=np.uint8)
        if b.ndim != 2 or b.shape != o.shape or b.shape[0] < 1:
            raise SimulationError(
                f"bases {b.shape} and outcomes {o.shape} must be equal (T, n) arrays")
        self.bases, self.outcomes = b, o

    @property
    def n(self) -> int:
        return self.bases.shape[1]

    @property
    def T(self) -> int:
        return self.bases.shape[0]

    def record(self, j: int) -> ShadowRecord:
        return ShadowRecord(self.bases[j].copy(), self.outcomes[j].copy())

    def concat(self, other: "ShadowSet") -> "ShadowSet":
        if other.n != self.n:
            raise SimulationError("cannot concatenate shadow sets of different n")
        return ShadowSet(np.vstack([self.bases, other.bases]),
                         np.vstack([self.outcomes, other.outcomes]))

    def reduced(self, support) -> "ReducedShadowState":
        key = tuple(sorted(int(q) for q in support))
        got = self._cache.get(key)
        if got is None:
            got = reduce_shadows(self, key)
            self._cache[key] = got
        return got

    # -- persistence --------------------------------------------------

    def save(self, path) -> None:
        """Binary layout: magic, version, n, T, seed, then per record the
        packed bit string (basis 2 bits then outcome 1 bit per qubit),
        each record padded to a whole byte."""
        n, t = self.n, self.T
        seed = -1 if self.seed is None else int(self.seed)
        bits = np.empty((t, 3 * n), dtype=np.uint8)
        bits[:, 0::3] = (self.bases >> 1) & 1
        bits[:, 1::3] = self.bases & 1
        bits[:, 2::3] = self.outcomes
        packed = np.packbits(bits, axis=1)
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<BIQq", _VERSION, n, t, seed))
            fh.write(packed.tobytes())

    @classmethod
    def load(cls, path) -> "ShadowSet":
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != _MAGIC:
                raise SimulationError(f"not a shadow set file (magic {magic!r})")
            version, n, t, seed = struct.unpack("<BIQq", fh.read(21))
            if version != _VERSION:
                raise SimulationError(f"unsupported shadow file version {version}")
            rec_bytes = (3 * n + 7) // 8
            raw = np.frombuffer(fh.read(t * rec_bytes), dtype=np.uint8)
        if raw.size != t * rec_bytes:
            raise SimulationError("shadow set file truncated")
        bits = np.unpackbits(raw.reshape(t, rec_bytes), axis=1)[:, :3 * n]
        bases = (bits[:, 0::3] << 1) | bits[:, 1::3]
        if np.any(bases > 2):
            raise SimulationError("corrupt basis codes in shadow set file")
        return cls(bases, bits[:, 2::3], seed=None if seed == -1 else seed)

    def to_json(self, path) -> None:
        """Debug-friendly export; much larger than the binary format."""
        payload = {
            "n": self.n,
            "T": self.T,
            "seed": self.seed,
            "records": [
                {"bases": "".join(BASIS_NAMES[b] for b in self.bases[j]),
                 "outcomes": self.outcomes[j].tolist()}
                for j in range(self.T)
            ],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh)

    @classmethod
    def from_json(cls, path) -> "ShadowSet":
        with open(path) as fh:
            payload = json.load(fh)
        bases = np.array([[BASIS_NAMES.index(c) for c in rec["bases"]]
                          for rec in payload["records"]], dtype=np.uint8)
        outs = np.array([rec["outcomes"] for rec in payload["records"]], dtype=np.uint8)
        return cls(bases, outs, seed=payload.get("seed"))


@dataclass(frozen=True)
class ReducedShadowState:
    """Shadow state restricted to a subregister: Hermitian, trace 1, and
    in general not positive semidefinite."""

    support: tuple
    matrix: np.ndarray
    T: int


# --- sampling -------------------------------------------------------------

def sample_shadows(source, T: int, rng: np.random.Generator) -> ShadowSet:
    """Draw T independent snapshots from a pure, product or ensemble source.

    Product states are sampled one qubit at a time and never hit the
    dense limit; dense states are grouped by basis string so each
    distinct rotation is simulated once.
    """
    if T < 1:
        raise SimulationError("shadow count T must be >= 1")
    if isinstance(source, Ensemble):
        bases, outcomes = _sample_ensemble(source, T, rng)
    elif isinstance(source, ProductState):
        bases, outcomes = _sample_product(source, T, rng)
    elif isinstance(source, PureState):
        bases, outcomes = _sample_dense(source, T, rng)
    else:
        raise SimulationError(f"cannot sample shadows from {type(source).__name__}")
    return ShadowSet(bases, outcomes)


def _sample_product(state: ProductState, T: int, rng) -> tuple:
    n = state.n
    bases = rng.integers(0, 3, size=(T, n), dtype=np.uint8)
    # prob of outcome 0 per (qubit, basis)
    p0 = np.empty((n, 3))
    for b, u in enumerate(_BASIS_GATES):
        rotated = state.factors @ u.T
        p0[:, b] = np.abs(rotated[:, 0]) ** 2
    hit = p0[np.arange(n)[None, :], bases]
    outcomes = (rng.random((T, n)) >= hit).astype(np.uint8)
    return bases, outcomes


def _sample_dense(state: PureState, T: int, rng) -> tuple:
    n = state.n
    bases = rng.integers(0, 3, size=(T, n), dtype=np.uint8)
    key = bases.astype(np.int64) @ (3 ** np.arange(n - 1, -1, -1, dtype=np.int64))
    order = np.argsort(key, kind="stable")
    outcomes = np.empty((T, n), dtype=np.uint8)
    start = 0
    while start < T:
        stop = start
        k0 = key[order[start]]
        while stop < T and key[order[stop]] == k0:
            stop += 1
        rows = order[start:stop]
        rotated = state
        for q, b in enumerate(bases[rows[0]]):
            if b != BASIS_Z:
                rotated = apply_gate(rotated, _BASIS_GATES[b], (q,))
        probs = np.abs(rotated.amplitudes) ** 2
        probs = probs / probs.sum()
        idx = rng.choice(probs.size, size=rows.size, p=probs)
        outcomes[rows] = bits_from_index(idx, n)
        start = stop
    return bases, outcomes


def _sample_ensemble(ens: Ensemble, T: int, rng) -> tuple:
    n = ens.n
    probs = np.array([p for p, _ in ens.items])
    member = rng.choice(len(ens.items), size=T, p=probs)
    bases = np.empty((T, n), dtype=np.uint8)
    outcomes = np.empty((T, n), dtype=np.uint8)
    for m, (_, state) in enumerate(ens.items):
        rows = np.flatnonzero(member == m)
        if rows.size == 0:
            continue
        sub = sample_shadows(state, rows.size, rng)
        bases[rows] = sub.bases
        outcomes[rows] = sub.outcomes
    return bases, outcomes


# --- reduction ------------------------------------------------------------

def _pattern_operators(codes: np.ndarray, k: int) -> np.ndarray:
    """Tensor products of snapshot factors for base-6 pattern codes.

    codes holds integers in [0, 6^k); digit 0 (most significant) is the
    first qubit of the half-register.  Returns (len(codes), 2^k, 2^k).
    """
    digits = np.empty((codes.size, k), dtype=np.int64)
    rem = codes.astype(np.int64)
    for pos in range(k - 1, -1, -1):
        digits[:, pos] = rem % 6
        rem //= 6
    ops = _FACTORS[digits[:, 0]]
    dim = 2
    for pos in range(1, k):
        nxt = _FACTORS[digits[:, pos]]
        ops = np.einsum("uab,ucd->uacbd", ops, nxt).reshape(-1, dim * 2, dim * 2)
        dim *= 2
    return ops


def reduce_shadows(shadow_set: ShadowSet, support) -> ReducedShadowState:
    """Average the snapshot factors over a sorted qubit subset.

    The mean runs over min(T, 6^|A|) distinct local patterns rather than
    T matrices: the register half-split keeps both pattern banks small
    and the joint counts sparse.
    """
    support = tuple(sorted(int(q) for q in support))
    if not support:
        raise SimulationError("support must not be empty")
    if len(set(support)) != len(support) or support[-1] >= shadow_set.n:
        raise SimulationError(f"bad support {support} for n={shadow_set.n}")
    k = len(support)
    t = shadow_set.T
    codes = (shadow_set.bases[:, support].astype(np.int64) * 2
             + shadow_set.outcomes[:, support])
    if k == 1:
        counts = np.bincount(codes[:, 0], minlength=6)
        mat = np.tensordot(counts, _FACTORS, axes=1) / t
        return ReducedShadowState(support, mat, t)

    k_left = (k + 1) // 2
    k_right = k - k_left
    pow_left = 6 ** np.arange(k_left - 1, -1, -1, dtype=np.int64)
    pow_right = 6 ** np.arange(k_right - 1, -1, -1, dtype=np.int64)
    left = codes[:, :k_left] @ pow_left
    right = codes[:, k_left:] @ pow_right

    lu, li = np.unique(left, return_inverse=True)
    ru, ri = np.unique(right, return_inverse=True)
    pair = li.astype(np.int64) * ru.size + ri
    pu, pc = np.unique(pair, return_counts=True)
    counts = scipy.sparse.csr_matrix(
        (pc.astype(np.float64), (pu // ru.size, pu % ru.size)),
        shape=(lu.size, ru.size))

    left_ops = _pattern_operators(lu, k_left)
    right_ops = _pattern_operators(ru, k_right)
    dl, dr = 2 ** k_left, 2 ** k_right
    mixed = counts @ right_ops.reshape(ru.size, dr * dr)
    grid = left_ops.reshape(lu.size, dl * dl).T @ mixed
    mat = (grid.reshape(dl, dl, dr, dr).transpose(0, 2, 1, 3)
           .reshape(dl * dr, dl * dr)) / t
    return ReducedShadowState(support, mat, t)


def estimate(shadow_set: ShadowSet, reduced_ops, weights=None) -> float:
    """Deterministic shadow estimate sum_i w_i tr(W_i rho_T|_{A_i}).

    Pure in (shadow set, operators): re-evaluating with the same inputs
    is bit-identical, which is what lets one set of measurements drive a
    whole optimization run.
    """
    if weights is None:
        weights = [1.0] * len(reduced_ops)
    if len(weights) != len(reduced_ops):
        raise SimulationError("weights and operators must pair up")
    total = 0.0
    for op, w in zip(reduced_ops, weights):
        rho = shadow_set.reduced(op.support)
        if rho.matrix.shape != op.matrix.shape:
            raise SimulationError(
                f"reduced operator on {op.support} does not match the cached reduction")
        # tr(W rho) = <rho, W> elementwise for Hermitian rho
        val = np.vdot(rho.matrix, op.matrix)
        total += float(w) * val.real
    return float(total)


# --- sample planning ------------------------------------------------------

def plan_samples(M: int, C: int, d: int, eps: float, delta: float,
                 max_norm: float, k0: int = 2, k1: int = 1,
                 bound: str = "conservative") -> int:
    """Shadow budget guaranteeing eps-accurate estimates for C evaluations
    of an M-term sum of k1-local observables through depth-d circuits of
    k0-local bricks, with failure probability at most delta.

    bound="conservative" uses the 4^(2d+1) constant for the standard
    (k0, k1) = (2, 1) case; bound="general" uses the generalized exponent
    k1 + (2*k0 - 2)*d - 1, a factor 4 smaller at (2, 1).  The two forms
    of the guarantee genuinely differ by that factor; the larger, safer
    value is the default.
    """
    if not (0 < eps < 1 and 0 < delta < 1):
        raise SimulationError("eps and delta must lie in (0, 1)")
    if min(M, C, d) < 1 or max_norm <= 0 or k0 < 2 or k1 < 1:
        raise SimulationError("M, C, d must be >= 1; max_norm > 0; k0 >= 2; k1 >= 1")
    if bound not in ("conservative", "general"):
        raise SimulationError(f"unknown bound variant {bound!r}")
    if bound == "conservative" and (k0, k1) == (2, 1):
        exponent = 2 * d + 1
    else:
        exponent = k1 + (2 * k0 - 2) * d - 1
    raw = (M * M / eps ** 2) * np.log(2 * M * C / delta) * 4.0 ** exponent * max_norm ** 2
    return int(np.ceil(raw))
