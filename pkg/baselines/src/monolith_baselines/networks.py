"""Network definitions.

DQN consumes the full 320x240 depth plane; SAC consumes an 84x84
area-downsampled copy. Conv arithmetic follows floor((in - k)/s) + 1, so the
SAC encoder flattens to exactly 64 * 9 * 9 = 5184 features.
"""

from __future__ import annotations

import torch
import torch.nn.functional as F
from torch import nn

DQN_INPUT_HW = (240, 320)
SAC_INPUT_HW = (84, 84)
SAC_FLAT_FEATURES = 5184


def parameter_count(module: nn.Module) -> int:
    return sum(p.numel() for p in module.parameters() if p.requires_grad)


def downsample_to_sac_input(depth: torch.Tensor) -> torch.Tensor:
    """(B, 1, 240, 320) depth -> (B, 1, 84, 84) by area interpolation."""
    return F.interpolate(depth, size=SAC_INPUT_HW, mode="area")


class DQNNetwork(nn.Module):
    """Three 4-filter 5x5/2 conv blocks with 2x2 max-pooling, two FC-16
    layers, leaky-rectifier activations, |A| Q-value outputs."""

    def __init__(self, n_actions: int = 4):
        super().__init__()
        self.conv = nn.Sequential(
            nn.Conv2d(1, 4, kernel_size=5, stride=2), nn.LeakyReLU(),
            nn.MaxPool2d(kernel_size=2, stride=2),
            nn.Conv2d(4, 4, kernel_size=5, stride=2), nn.LeakyReLU(),
            nn.MaxPool2d(kernel_size=2, stride=2),
            nn.Conv2d(4, 4, kernel_size=5, stride=2), nn.LeakyReLU(),
            nn.MaxPool2d(kernel_size=2, stride=2),
        )
        # 240x320 -> conv/pool x3 -> 4 channels of 2x4
        self.head = nn.Sequential(
            nn.Flatten(),
            nn.Linear(4 * 2 * 4, 16), nn.LeakyReLU(),
            nn.Linear(16, 16), nn.LeakyReLU(),
            nn.Linear(16, n_actions),
        )

    def forward(self, depth: torch.Tensor) -> torch.Tensor:
        return self.head(self.conv(depth))


class SACEncoder(nn.Module):
    """16/32/64 filters of 8x8/4x4/1x1 with strides 4/2/1 on 84x84 input."""

    def __init__(self):
        super().__init__()
        self.conv = nn.Sequential(
            nn.Conv2d(1, 16, kernel_size=8, stride=4), nn.ReLU(),
            nn.Conv2d(16, 32, kernel_size=4, stride=2), nn.ReLU(),
            nn.Conv2d(32, 64, kernel_size=1, stride=1), nn.ReLU(),
            nn.Flatten(),
        )

    def forward(self, depth: torch.Tensor) -> torch.Tensor:
        return self.conv(depth)


def _mlp(in_features: int, out_features: int) -> nn.Sequential:
    return nn.Sequential(
        nn.Linear(in_features, 64), nn.ReLU(),
        nn.Linear(64, 64), nn.ReLU(),
        nn.Linear(64, out_features),
    )


class DiscreteSACActor(nn.Module):
    def __init__(self, n_actions: int = 4):
        super().__init__()
        self.encoder = SACEncoder()
        self.head = _mlp(SAC_FLAT_FEATURES, n_actions)

    def forward(self, depth: torch.Tensor) -> torch.Tensor:
        """Action logits."""
        return self.head(self.encoder(depth))


class DiscreteSACCritic(nn.Module):
    """Q-values for every action at once."""

    def __init__(self, n_actions: int = 4):
        super().__init__()
        self.encoder = SACEncoder()
        self.head = _mlp(SAC_FLAT_FEATURES, n_actions)

    def forward(self, depth: torch.Tensor) -> torch.Tensor:
        return self.head(self.encoder(depth))


class ContinuousSACActor(nn.Module):
    """Squashed-Gaussian policy scaled to the action bounds."""

    LOG_STD_MIN = -20.0
    LOG_STD_MAX = 2.0

    def __init__(self, action_dim: int, action_scale):
        super().__init__()
        self.encoder = SACEncoder()
        self.trunk = nn.Sequential(nn.Linear(SAC_FLAT_FEATURES, 64), nn.ReLU(),
                                   nn.Linear(64, 64), nn.ReLU())
        self.mean = nn.Linear(64, action_dim)
        self.log_std = nn.Linear(64, action_dim)
        self.register_buffer("scale", torch.as_tensor(action_scale, dtype=torch.float32))

    def forward(self, depth: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        hidden = self.trunk(self.encoder(depth))
        mean = self.mean(hidden)
        log_std = torch.clamp(self.log_std(hidden), self.LOG_STD_MIN, self.LOG_STD_MAX)
        return mean, log_std

    def sample(self, depth: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        """Action in env units plus its log-probability."""
        mean, log_std = self(depth)
        normal = torch.distributions.Normal(mean, log_std.exp())
        raw = normal.rsample()
        squashed = torch.tanh(raw)
        # change of variables for the tanh squash
        log_prob = normal.log_prob(raw) - torch.log(1.0 - squashed.pow(2) + 1e-6)
        return squashed * self.scale, log_prob.sum(dim=-1)


class ContinuousSACCritic(nn.Module):
    def __init__(self, action_dim: int):
        super().__init__()
        self.encoder = SACEncoder()
        self.head = nn.Sequential(
            nn.Linear(SAC_FLAT_FEATURES + action_dim, 64), nn.ReLU(),
            nn.Linear(64, 64), nn.ReLU(),
            nn.Linear(64, 1),
        )

    def forward(self, depth: torch.Tensor, action: torch.Tensor) -> torch.Tensor:
        features = torch.cat([self.encoder(depth), action], dim=-1)
        return self.head(features).squeeze(-1)


def polyak_update(online: nn.Module, target: nn.Module, tau: float) -> None:
    """target <- (1 - tau) * target + tau * online, in place."""
    with torch.no_grad():
        for src, dst in zip(online.parameters(), target.parameters()):
            dst.mul_(1.0 - tau).add_(src, alpha=tau)
        for src, dst in zip(online.buffers(), target.buffers()):
            dst.copy_(src)
