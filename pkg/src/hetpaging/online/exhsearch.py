from __future__ import annotations

from ..core import (GENERIC_SAT_CAP, Config, Request, closure_size, min_change_configuration,
                    satisfies)
from ..errors import CapExceeded, InvariantViolation
from .base import OnlineAlgorithm


class ExhSearch(OnlineAlgorithm):
    """Phase-based exhaustive search for arbitrary slot-set families.

    A phase collects requests while they stay jointly satisfiable.  A request
    the current configuration already serves is ignored; otherwise the cache
    moves to a configuration serving the whole phase, choosing the one that
    changes the fewest slots.  Each phase is checked against the bound on
    its number of faulting steps.
    """

    name = "exh"

    def __init__(self, cap: int = GENERIC_SAT_CAP, check_bounds: bool = True):
        self.cap = cap
        self.check_bounds = check_bounds

    def reset(self, k, family, weights=None):
        if k > self.cap:
            raise CapExceeded(f"exh limited to k <= {self.cap}")
        super().reset(k, family, weights)
        self.config: Config = (None,) * k
        self.phase: set[Request] = set()
        self.faults_in_phase: list[Request] = []
        self.t = 0
        self._starts: list[int] = []
        self.phase_lengths: list[int] = []
        self.mass = family.mass
        self.closure = closure_size(family)

    def step(self, request: Request) -> Config:
        self.t += 1
        if self.t == 1:
            self._starts.append(1)
        if satisfies(self.config, request):
            self.phase.add(request)
            return self.config
        target = min_change_configuration(self.phase | {request}, self.k, self.config)
        if target is None:
            self._close_phase()
            self._starts.append(self.t)
            self.phase = set()
            target = min_change_configuration({request}, self.k, self.config)
        self.phase.add(request)
        if request in self.faults_in_phase:
            raise InvariantViolation("a request faulted twice within one phase")
        self.faults_in_phase.append(request)
        self.config = target
        return target

    def _close_phase(self) -> None:
        length = len(self.faults_in_phase)
        if length:
            self.phase_lengths.append(length)
            if self.check_bounds:
                if length > self.mass:
                    raise InvariantViolation(f"phase of length {length} exceeds mass {self.mass}")
                if self.closure is not None and length > self.closure:
                    raise InvariantViolation(f"phase of length {length} exceeds closure size {self.closure}")
        self.faults_in_phase = []

    def phase_starts(self):
        return list(self._starts)

    def run(self, seq, weights=None):
        result = super().run(seq, weights)
        self._close_phase()
        result.details["phase_lengths"] = list(self.phase_lengths)
        return result
