"""Shadow-based training of alternating layered variational circuits.

The package is organized around the estimation pipeline:

- :mod:`also.qsim` -- dense statevector / product-state simulation
- :mod:`also.ansatz` -- the alternating layered brick circuit
- :mod:`also.lightcone` -- Heisenberg-picture reduction of local observables
- :mod:`also.shadow` -- randomized Pauli-basis shadows and sample planning
- :mod:`also.estimator` -- exact / shot / shadow cost backends and copy ledger
- :mod:`also.optimizer` -- SPSA and Powell derivative-free drivers
- :mod:`also.tasks` -- state-preparation and autoencoder problem generators
- :mod:`also.cli` -- experiment runner, resource sweeps, timing benchmark
"""

from also.qsim import (
    DENSE_QUBIT_LIMIT,
    Ensemble,
    ProductState,
    PureState,
    apply_gate,
    dense_from_product,
    expectation,
    sample_computational,
)
from also.ansatz import (
    DEFAULT_TEMPLATE,
    BlockPlacement,
    BrickTemplate,
    apply_ansatz,
    brick_unitary,
    layout,
    random_params,
)
from also.lightcone import (
    Lightcone,
    LocalObservable,
    ObservableSum,
    ReducedOperator,
    compute_lightcone,
    contract,
    evaluate_exact_product,
)
from also.shadow import (
    ReducedShadowState,
    ShadowRecord,
    ShadowSet,
    estimate,
    plan_samples,
    reduce_shadows,
    sample_shadows,
    single_shadow_factor,
)
from also.estimator import (
    CostFunction,
    ResourceLedger,
    eval_exact,
    eval_shadow,
    eval_shots,
)
from also.optimizer import (
    NonFiniteObjectiveError,
    OptTrace,
    PowellConfig,
    SpsaConfig,
    powell_minimize,
    spsa_minimize,
)

__version__ = "0.1.0"
