"""Cost evaluation backends and the copy ledger.

One CostFunction can be evaluated three ways:

- eval_exact: the idealized infinite-copy value, via reduced inputs on
  each observable's cone (works for any register size on product inputs).
- eval_shots: a finite-copy estimate, K measured copies per evaluation.
- eval_shadow: the deterministic estimate against a fixed ShadowSet.

The ledger counts consumed input-state copies the way the experiments
report them: the shot backend pays K per term per evaluation, the
shadow backend pays T once when the set is sampled and nothing per
evaluation, and the exact backend pays nothing at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from also import shadow as shadow_mod
from also.ansatz import BrickTemplate, apply_ansatz, layout, validate_params
from also.lightcone import (
    ConeProgram,
    LocalObservable,
    ObservableSum,
    batched_cone_conjugate,
    brick_gate_array,
    brick_gate_table,
    compute_lightcone,
    contract,
    permute_to_entry,
    product_cone_vector,
)
from also.qsim import (
    DENSE_QUBIT_LIMIT,
    Ensemble,
    ProductState,
    SimulationError,
    as_dense,
    reduced_density,
    sample_computational,
)

_PROJ0 = np.array([[1, 0], [0, 0]], dtype=complex)


@dataclass
class ResourceLedger:
    """Monotone counters for consumed state copies and evaluations."""

    copies_consumed: int = 0
    evaluations: int = 0

    def charge_copies(self, count: int) -> None:
        if count < 0:
            raise SimulationError("copy charges must be non-negative")
        self.copies_consumed += int(count)

    def count_evaluation(self) -> None:
        self.evaluations += 1


@dataclass
class CostFunction:
    """An objective f(theta) = sum_i w_i tr(O_i U rho U^dag), to maximize.

    kind is a label ("state-prep" | "autoencoder" | "custom"); source is
    the input state (pure, product, or an ensemble); observable holds the
    local terms.  Cones are computed once here and reused for every
    evaluation; reported costs are 1 - f.
    """

    kind: str
    source: object
    observable: ObservableSum
    n: int
    d: int
    template: BrickTemplate
    locality_cap: int = 1
    eval_dtype: str = "complex128"  # shadow objective internals only
    max_group: int = 4              # cone batch size; small keeps work in cache
    cones: tuple = field(init=False, repr=False)
    _rho_cache: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        if self.source.n != self.n:
            raise SimulationError(
                f"source has {self.source.n} qubits, cost function declares {self.n}")
        if self.eval_dtype not in ("complex128", "complex64"):
            raise SimulationError(f"unsupported eval dtype {self.eval_dtype!r}")
        for term in self.observable.terms:
            if term.locality > self.locality_cap:
                raise SimulationError(
                    f"term on {term.support} exceeds the {self.locality_cap}-local cap")
        placements = layout(self.n, self.d)
        self.cones = tuple(compute_lightcone(t, self.n, self.d, placements)
                           for t in self.observable.terms)
        # group same-shape cones so evaluations run as a few batched passes
        self.programs = tuple(ConeProgram.compile(t, cone)
                              for t, cone in zip(self.observable.terms, self.cones))
        grouped: dict = {}
        for i, pr in enumerate(self.programs):
            grouped.setdefault(pr.signature, []).append(i)
        chunks = []
        for g in grouped.values():
            width = self.max_group if self.max_group else len(g)
            chunks.extend(tuple(g[i:i + width]) for i in range(0, len(g), width))
        self._groups = tuple(chunks)
        self._group_obs = tuple(
            np.ascontiguousarray(np.stack(
                [self.observable.terms[i].matrix for i in g]))
            for g in self._groups)
        self._group_weights = tuple(
            np.array([self.observable.terms[i].weight for i in g])
            for g in self._groups)

    @property
    def members(self) -> tuple:
        if isinstance(self.source, Ensemble):
            return self.source.items
        return ((1.0, self.source),)

    @property
    def term_count(self) -> int:
        return len(self.observable.terms)

    def reduced_operators(self, theta: np.ndarray) -> list:
        theta = validate_params(theta, self.n, self.template)
        gates = brick_gate_table(theta, self.template, self.n)
        return [contract(term, theta, self.template, cone, gates=gates)
                for term, cone in zip(self.observable.terms, self.cones)]

    def _reduced_input(self, member_idx: int, state, support: tuple) -> np.ndarray:
        """theta-independent reduced density of one member on one cone."""
        key = (member_idx, support)
        got = self._rho_cache.get(key)
        if got is None:
            if isinstance(state, ProductState):
                vec = product_cone_vector(state, support)
                got = np.outer(vec, vec.conj())
            else:
                got = reduced_density(state, support)
            self._rho_cache[key] = got
        return got


def eval_exact(cf: CostFunction, theta: np.ndarray) -> float:
    """Infinite-copy value of f; consumes nothing from any ledger."""
    ops = cf.reduced_operators(theta)
    total = 0.0
    for m, (p, state) in enumerate(cf.members):
        for term, op in zip(cf.observable.terms, ops):
            rho = cf._reduced_input(m, state, op.support)
            val = np.vdot(rho, op.matrix).real
            total += p * term.weight * val
    return float(total)


def _check_diagonal_terms(cf: CostFunction) -> list:
    """Shot estimation reads per-qubit computational outcomes, so every
    term must be 1-local and diagonal; returns the (2,) diagonals."""
    diags = []
    for term in cf.observable.terms:
        m = term.matrix
        if term.locality != 1:
            raise SimulationError("shot backend supports only 1-local terms")
        if np.max(np.abs(m - np.diag(np.diag(m)))) > 1e-12:
            raise SimulationError(
                "shot backend supports only computational-basis-diagonal terms")
        diags.append(np.diag(m).real)
    return diags


def eval_shots(cf: CostFunction, theta: np.ndarray, K: int,
               rng: np.random.Generator, ledger: ResourceLedger | None = None,
               separate_terms: bool = False) -> float:
    """Finite-copy estimate of f from K measured copies.

    Below the dense limit the same K full-register outcomes feed every
    term (pass separate_terms=True for fresh copies per term).  Above it,
    each term is sampled from its exact cone marginal, which is the
    per-term-copies reading.  Either way the ledger is charged K
    copies per term, matching the 2KRn / 2KRn_B experiment accounting.
    """
    if K < 1:
        raise SimulationError("K must be >= 1")
    theta = validate_params(theta, cf.n, cf.template)
    diags = _check_diagonal_terms(cf)
    if ledger is not None:
        ledger.charge_copies(K * cf.term_count)
        ledger.count_evaluation()
    probs = np.array([p for p, _ in cf.members])
    if cf.n <= DENSE_QUBIT_LIMIT:
        if separate_terms:
            total = 0.0
            for term, diag in zip(cf.observable.terms, diags):
                bits = _draw_dense_bits(cf, theta, K, rng, probs)
                total += term.weight * float(np.mean(diag[bits[:, term.support[0]]]))
            return total
        bits = _draw_dense_bits(cf, theta, K, rng, probs)
        return float(sum(
            term.weight * np.mean(diag[bits[:, term.support[0]]])
            for term, diag in zip(cf.observable.terms, diags)))
    return _eval_shots_reduced(cf, theta, K, rng, probs, diags)


def _draw_dense_bits(cf: CostFunction, theta, K, rng, probs) -> np.ndarray:
    """K full-register outcomes of U(theta) rho U^dag, pooling ensemble
    members with multinomially split shot counts."""
    counts = rng.multinomial(K, probs) if probs.size > 1 else np.array([K])
    chunks = []
    for (p, state), cnt in zip(cf.members, counts):
        if cnt == 0:
            continue
        out = apply_ansatz(as_dense(state), theta, cf.template)
        chunks.append(sample_computational(out, rng, int(cnt)))
    return np.vstack(chunks)


def _eval_shots_reduced(cf, theta, K, rng, probs, diags) -> float:
    """Large-register path: Bernoulli draws from each term's cone marginal."""
    ops = cf.reduced_operators(theta)
    total = 0.0
    for term, diag, cone in zip(cf.observable.terms, diags, cf.cones):
        proj = LocalObservable(term.support, _PROJ0)
        red0 = contract(proj, theta, cf.template, cone)
        counts = rng.multinomial(K, probs) if probs.size > 1 else np.array([K])
        zeros = 0
        for m, ((p, state), cnt) in enumerate(zip(cf.members, counts)):
            if cnt == 0:
                continue
            rho = cf._reduced_input(m, state, red0.support)
            p0 = float(np.vdot(rho, red0.matrix).real)
            zeros += rng.binomial(int(cnt), min(max(p0, 0.0), 1.0))
        est = (zeros * diag[0] + (K - zeros) * diag[1]) / K
        total += term.weight * est
    return float(total)


def _entry_rho_stack(cf: CostFunction, shadows: shadow_mod.ShadowSet,
                     group_idx: int) -> np.ndarray:
    """Conjugated reduced shadow states in entry-order axes, stacked per
    group; cached on the shadow set so one set pays the cost once."""
    group = cf._groups[group_idx]
    key = ("entry-stack", cf.eval_dtype,
           tuple((cf.programs[i].support, cf.programs[i].perm) for i in group))
    got = shadows._cache.get(key)
    if got is None:
        mats = [permute_to_entry(shadows.reduced(cf.programs[i].support).matrix,
                                 cf.programs[i]) for i in group]
        got = np.ascontiguousarray(np.stack(mats).conj(), dtype=cf.eval_dtype)
        shadows._cache[key] = got
    return got


def eval_shadow(cf: CostFunction, theta: np.ndarray,
                shadows: shadow_mod.ShadowSet) -> float:
    """Shadow estimate of f; free per call (T was charged at sampling).

    Runs the grouped batched contraction; numerically identical to
    contracting each term separately and tracing against its reduction.
    """
    if shadows.n != cf.n:
        raise SimulationError(
            f"shadow set has {shadows.n} qubits, cost function has {cf.n}")
    theta = validate_params(theta, cf.n, cf.template)
    gate_arr = brick_gate_array(theta, cf.template, cf.n)
    dtype = np.dtype(cf.eval_dtype)
    if dtype != np.complex128:
        gate_arr = gate_arr.astype(dtype)
    total = 0.0
    for gi, group in enumerate(cf._groups):
        programs = [cf.programs[i] for i in group]
        w = batched_cone_conjugate(programs, cf._group_obs[gi], gate_arr,
                                   dtype=dtype)
        rho = _entry_rho_stack(cf, shadows, gi)
        traces = np.einsum("bij,bij->b", w, rho).real
        total += float(cf._group_weights[gi] @ traces)
    return float(total)
