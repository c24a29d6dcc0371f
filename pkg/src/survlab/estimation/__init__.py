from .baseline import kalbfleisch_prentice_baseline
from .cox import (
    cox_minibatch_objective,
    cox_partial_loglik,
    cox_partial_loglik_and_gradient,
    sample_cox_batches,
)
from .kaplan_meier import kaplan_meier
from .likelihood import full_loglik, full_loglik_and_gradient
from .optim import Adam
from .records import SurvivalData, SurvivalRecord
from .trainer import (
    LossTrace,
    TrainConfig,
    cox_minibatch_step,
    full_likelihood_step,
    train,
)

__all__ = [
    "Adam",
    "LossTrace",
    "SurvivalData",
    "SurvivalRecord",
    "TrainConfig",
    "cox_minibatch_objective",
    "cox_minibatch_step",
    "cox_partial_loglik",
    "cox_partial_loglik_and_gradient",
    "full_likelihood_step",
    "full_loglik",
    "full_loglik_and_gradient",
    "kalbfleisch_prentice_baseline",
    "kaplan_meier",
    "sample_cox_batches",
    "train",
]
