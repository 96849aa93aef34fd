"""Classical shadows with random single-qubit Pauli measurements.

Each snapshot stores two small integers per qubit; the unbiased
single-qubit reconstruction is F(V) = 3V - 1.  A fixed shadow set
estimates any local observable deterministically, so the same
measurements can drive an entire optimization run, or several.
"""

import numpy as np

from also.ansatz import DEFAULT_TEMPLATE, random_params
from also.estimator import eval_exact, eval_shadow
from also.qsim import PureState
from also.shadow import plan_samples, sample_shadows, single_shadow_factor
from also.tasks import make_state_prep

rng = np.random.default_rng(3)

print("snapshot factors: F(|0><0|) and F(|+><+|)")
print(np.real_if_close(single_shadow_factor(0, 0)))
print(np.real_if_close(single_shadow_factor(1, 0)))

# sample a shadow set from a random 6-qubit state
n, d = 6, 2
psi = PureState.random(n, rng)
shadows = sample_shadows(psi, 100_000, rng)
print(f"\nsampled T={shadows.T} snapshots of a {n}-qubit state "
      f"({shadows.bases.nbytes + shadows.outcomes.nbytes} bytes)")

red = shadows.reduced((1, 4))
print("reduced shadow state on qubits (1, 4): trace =",
      round(float(np.trace(red.matrix).real), 9))
print("eigenvalues (need not be positive):",
      np.round(np.linalg.eigvalsh(red.matrix), 3))

# one set, many evaluations: the estimate is deterministic
problem = make_state_prep(psi, d, DEFAULT_TEMPLATE)
cf = problem.cost_function()
for trial in range(3):
    theta = random_params(n, d, DEFAULT_TEMPLATE, rng)
    est = eval_shadow(cf, theta, shadows)
    exact = eval_exact(cf, theta)
    print(f"theta #{trial}: shadow {est:+.4f}  exact {exact:+.4f}  "
          f"error {abs(est - exact):.4f}")

# how many snapshots a requested accuracy needs, by the worst-case bound
t = plan_samples(M=n, C=6000, d=d, eps=0.1, delta=0.01, max_norm=1 / n)
print(f"\nworst-case budget for 6000 evaluations at eps=0.1: T >= {t}")
print("(practice needs far fewer, as above)")
