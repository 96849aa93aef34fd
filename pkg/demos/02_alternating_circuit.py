"""The alternating layered brick circuit.

Each layer tiles the ring with two-qubit bricks S(gamma); consecutive
layers shift by one qubit.  Parameters live in a (n/2, depth, p) tensor,
one p-vector per brick.
"""

import numpy as np

from also.ansatz import (
    DEFAULT_TEMPLATE,
    apply_ansatz,
    brick_unitary,
    layout,
    random_params,
)
from also.qsim import PureState

n, d = 6, 3
print(f"{n} qubits, depth {d}:")
for pl in layout(n, d):
    print(f"  layer {pl.layer} block {pl.block} -> qubits {pl.qubits}")

# The default brick is RY rotations around a single CNOT; with all angles
# wound to zero it degenerates to the bare CNOT.
print("\nS(0,0,0,0) =\n", np.real_if_close(brick_unitary(DEFAULT_TEMPLATE, np.zeros(4))))

rng = np.random.default_rng(1)
theta = random_params(n, d, DEFAULT_TEMPLATE, rng)
print("\nparameter tensor shape:", theta.shape)

state = apply_ansatz(PureState.zero(n), theta, DEFAULT_TEMPLATE)
print("norm after the full circuit:", round(float(np.linalg.norm(state.amplitudes)), 12))

# The adjoint winds the circuit back.
back = apply_ansatz(state, theta, DEFAULT_TEMPLATE, adjoint=True)
print("round-trip overlap with |0...0>:",
      round(abs(back.amplitudes[0]) ** 2, 12))
