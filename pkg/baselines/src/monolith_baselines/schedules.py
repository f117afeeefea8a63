"""Exploration schedules."""

from dataclasses import dataclass


@dataclass(frozen=True)
class LinearSchedule:
    """Linear interpolation from start to end over `steps`, then flat."""

    start: float = 0.9
    end: float = 0.1
    steps: int = 40_000

    def value(self, step: int) -> float:
        if step <= 0:
            return self.start
        if step >= self.steps:
            return self.end
        fraction = step / self.steps
        return self.start + fraction * (self.end - self.start)
