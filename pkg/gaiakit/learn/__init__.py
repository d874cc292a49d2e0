from gaiakit.learn.backprop import (
    AgreementReport,
    backprop_functor,
    check_equivalence,
    functoriality_check,
    reparameterize,
)
from gaiakit.learn.expr import (
    ParamFn,
    affine,
    bias,
    gradient_check,
    identity_fn,
    pointwise,
    scalar_product,
)
from gaiakit.learn.learner import (
    ErrorFn,
    Learner,
    TrainResult,
    braiding,
    compose_par,
    compose_seq,
    empty_learner,
    error_fn,
    identity_learner,
    log_cosh,
    quadratic,
    train,
)
from gaiakit.learn.pipeline import LearnerNerve, learner_nerve
from gaiakit.learn.transformer import (
    TransformerBlock,
    check_equivariance,
    compose_blocks,
    transformer_block_apply,
)
from gaiakit.learn.zeroth_order import (
    harmonic_schedule,
    two_point_estimate,
    zeroth_order_functor,
)

__all__ = [
    # Parameterized functions
    "ParamFn",
    "affine",
    "bias",
    "gradient_check",
    "identity_fn",
    "pointwise",
    "scalar_product",
    # Learners
    "ErrorFn",
    "Learner",
    "TrainResult",
    "braiding",
    "compose_par",
    "compose_seq",
    "empty_learner",
    "error_fn",
    "identity_learner",
    "log_cosh",
    "quadratic",
    "train",
    # Functors
    "AgreementReport",
    "backprop_functor",
    "check_equivalence",
    "functoriality_check",
    "reparameterize",
    "harmonic_schedule",
    "two_point_estimate",
    "zeroth_order_functor",
    # Transformers and pipelines
    "TransformerBlock",
    "check_equivariance",
    "compose_blocks",
    "transformer_block_apply",
    "LearnerNerve",
    "learner_nerve",
]
