"""
Service-time sampling for Poisson and MMP servers.
"""

import math
from typing import List, Optional

import numpy as np

from impatient_queue.models.server import MmpServer, MmpSpec, PoissonServer, ServerProcess


class StatePath:
    """
    Realised MMP server state per period, generated lazily from its own stream.

    `state(j)` is the server state during [j*T0, (j+1)*T0).
    """

    def __init__(self, spec: MmpSpec, initial_state: int, rng: np.random.Generator):
        self.spec = spec
        self.rng = rng
        self._states: List[int] = [initial_state]
        self._cumulative = np.cumsum(np.asarray(spec.transition, dtype=float), axis=1)

    def state(self, period_index: int) -> int:
        while len(self._states) <= period_index:
            row = self._cumulative[self._states[-1]]
            nxt = int(np.searchsorted(row, self.rng.random(), side="right"))
            self._states.append(min(nxt, self.spec.states - 1))
        return self._states[period_index]

    def state_at(self, t: float) -> int:
        return self.state(int(math.floor(t / self.spec.period)))


def draw_service_completion(
    process: ServerProcess, t: float, rng: np.random.Generator, path: Optional[StatePath] = None
) -> float:
    """
    Completion time of a service starting at t.

    Poisson service draws one exponential. MMP service inverts the cumulative
    hazard along the realised state path: one unit exponential is spent at
    rate mu of the state in force, period by period.

    Args:
        process: Server process
        t: Service start time
        rng: Service stream
        path: Realised state path, required for multi-state MMP service

    Returns:
        Absolute completion time

    """
    if isinstance(process, PoissonServer):
        return t + rng.standard_exponential() / process.rate
    assert isinstance(process, MmpServer)
    spec = process.spec
    if spec.states == 1:
        return t + rng.standard_exponential() / spec.rates[0]
    if path is None:
        raise ValueError("a multi-state MMP server needs its realised state path")
    budget = rng.standard_exponential()
    current = t
    index = int(math.floor(t / spec.period))
    while True:
        rate = spec.rates[path.state(index)]
        boundary = (index + 1) * spec.period
        hazard = rate * (boundary - current)
        if budget <= hazard:
            return current + budget / rate
        budget -= hazard
        current = boundary
        index += 1
