"""Recurrent cells, exact BPTT, losses, Adam and the training loop."""

from .adam import AdamConfig, AdamState, adam_step
from .cells import (
    CellKind,
    CellParams,
    TrajectoryRecord,
    backward_from_outputs,
    forward,
    make_params,
    zero_params,
)
from .losses import Loss, ce_grad, loss_ce_smoothed, loss_mse, mse_grad
from .training import (
    EpochRecord,
    ExperimentReport,
    TrainConfig,
    TrainingDiverged,
    backward,
    evaluate,
    train,
)

__all__ = [
    "AdamConfig",
    "AdamState",
    "CellKind",
    "CellParams",
    "EpochRecord",
    "ExperimentReport",
    "Loss",
    "TrainConfig",
    "TrainingDiverged",
    "TrajectoryRecord",
    "adam_step",
    "backward",
    "backward_from_outputs",
    "ce_grad",
    "evaluate",
    "forward",
    "loss_ce_smoothed",
    "loss_mse",
    "make_params",
    "mse_grad",
    "train",
    "zero_params",
]
