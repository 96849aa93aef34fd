"""States, gates, expectations and measurement sampling.

The simulator keeps qubit 0 as the leftmost tensor factor (the most
significant bit of the amplitude index), and every operation returns a
new state.
"""

import numpy as np

from also.qsim import (
    CNOT,
    H,
    PROJ0,
    ProductState,
    PureState,
    Z,
    apply_gate,
    dense_from_product,
    expectation,
    rotation,
    sample_computational,
)

rng = np.random.default_rng(0)

# A Bell pair from |00>: Hadamard on qubit 0, then CNOT(0 -> 1).
bell = apply_gate(apply_gate(PureState.zero(2), H, [0]), CNOT, [0, 1])
print("Bell amplitudes:", np.round(bell.amplitudes, 4))

# Z on either qubit averages to zero, but outcomes are perfectly correlated.
print("<Z_0> =", round(expectation(bell, Z, [0]), 12))
bits = sample_computational(bell, rng, 10)
print("ten correlated samples:\n", bits)

# Rotations follow R_P(theta) = cos(theta/2) I + i sin(theta/2) P and are
# periodic in 4*pi, not 2*pi.
ry = rotation("Y", np.pi / 2)
print("R_Y(pi/2)|0> =", np.round(apply_gate(PureState.zero(1), ry, [0]).amplitudes, 4))

# Product states stay factored; expanding them is opt-in and capped.
plus = np.array([1, 1]) / np.sqrt(2)
prod = ProductState(np.array([plus, [1, 0], [0, 1]]))
print("dense |+01> =", np.round(dense_from_product(prod).amplitudes, 4))
print("P(qubit 2 reads 0) =", expectation(dense_from_product(prod), PROJ0, [2]))
