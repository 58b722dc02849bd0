from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Optional

from ..core import Config, Request, RequestSequence, SlotSetFamily, schedule_cost


@dataclass
class RunResult:
    """Outcome of running an algorithm over a whole sequence."""

    schedule: list[Config]
    cost: Any
    phases: list[int] = field(default_factory=list)
    details: dict = field(default_factory=dict)


class OnlineAlgorithm(ABC):
    """Consumes requests one at a time and returns the configuration after each."""

    name = "online"

    def reset(self, k: int, family: SlotSetFamily, weights=None) -> None:
        self.k = k
        self.family = family
        self.weights = weights

    @abstractmethod
    def step(self, request: Request) -> Config:
        ...

    def phase_starts(self) -> list[int]:
        return []

    def run(self, seq: RequestSequence, weights=None) -> RunResult:
        self.reset(seq.k, seq.family, weights)
        schedule = [self.step(r) for r in seq.requests]
        return RunResult(schedule, schedule_cost(schedule, weights), self.phase_starts(), self.diagnostics())

    def diagnostics(self) -> dict:
        return {}


def require_seed(seed: Optional[int]) -> int:
    return 0 if seed is None else int(seed)
