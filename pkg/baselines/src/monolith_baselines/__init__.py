"""Reference DQN and SAC agents for the monolith navigation environments."""

from monolith_baselines.dqn import DoubleDQNAgent, DQNConfig
from monolith_baselines.networks import (
    DQN_INPUT_HW,
    SAC_FLAT_FEATURES,
    SAC_INPUT_HW,
    DQNNetwork,
    SACEncoder,
    downsample_to_sac_input,
    parameter_count,
    polyak_update,
)
from monolith_baselines.plotting import moving_average, plot_learning_curve
from monolith_baselines.replay import Batch, ReplayBuffer
from monolith_baselines.sac import (
    ContinuousSACAgent,
    DiscreteSACAgent,
    SACConfig,
    continuous_entropy_target,
    discrete_entropy_target,
)
from monolith_baselines.schedules import LinearSchedule
from monolith_baselines.train import TrainResult, build_agent, train

__version__ = "0.1.0"

__all__ = [
    "Batch",
    "ContinuousSACAgent",
    "DQNConfig",
    "DQNNetwork",
    "DQN_INPUT_HW",
    "DiscreteSACAgent",
    "DoubleDQNAgent",
    "LinearSchedule",
    "ReplayBuffer",
    "SACConfig",
    "SACEncoder",
    "SAC_FLAT_FEATURES",
    "SAC_INPUT_HW",
    "TrainResult",
    "build_agent",
    "continuous_entropy_target",
    "discrete_entropy_target",
    "downsample_to_sac_input",
    "moving_average",
    "parameter_count",
    "plot_learning_curve",
    "polyak_update",
    "train",
]
