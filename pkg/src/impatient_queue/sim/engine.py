"""
Event-driven simulator of one MEC server with impatient users.

A single FCFS server receives Poisson arrivals over [0, horizon]. Each task
decides on arrival whether to balk, and under the risk-quantile policies
decides again on every queue-status update whether to renege. Tasks that
leave the queue are computed locally. After the horizon no new arrivals are
generated and the run drains until every task has completed.
"""

import heapq
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from impatient_queue.dist import utility
from impatient_queue.errors import ConfigurationError, ContractViolation
from impatient_queue.learner import LearnerState
from impatient_queue.models.policy import RiskImperfectPolicy, RiskPerfectPolicy
from impatient_queue.models.scenario import ScenarioConfig
from impatient_queue.models.server import MmpServer
from impatient_queue.models.task import Decision, EventKind, EventRecord, ServedBy, Task
from impatient_queue.sim.policies import (
    ArrivalDecision,
    MmpView,
    TickDecision,
    UpdateDecision,
    on_arrival,
    on_position_update,
    on_service_tick,
    server_view,
    service_deadline,
    start_learning,
)
from impatient_queue.sim.service import StatePath, draw_service_completion
from impatient_queue.sim.streams import make_streams

logger = logging.getLogger(__name__)

# Same-time ordering: completions free the server before a timeout, state
# switch or arrival at that instant is handled.
SERVICE_COMPLETE = 0
PREEMPT_TIMEOUT = 1
PERIOD_TICK = 2
ARRIVAL = 3


@dataclass
class SimulationResult:
    """Tasks in id order and the event log of one run."""

    tasks: List[Task]
    events: List[EventRecord] = field(default_factory=list)


def ensure_scenario(scenario: Union[ScenarioConfig, Dict[str, Any]]) -> ScenarioConfig:
    """Validate a scenario given as a model or a plain mapping."""
    if isinstance(scenario, ScenarioConfig):
        return scenario
    try:
        return ScenarioConfig.model_validate(scenario)
    except ValidationError as e:
        raise ConfigurationError(f"invalid scenario: {e}") from e


def generate_arrivals(rate: float, horizon: float, rng: np.random.Generator) -> np.ndarray:
    """Poisson arrival times in [0, horizon]."""
    times: List[float] = []
    t = rng.exponential(1.0 / rate)
    while t <= horizon:
        times.append(t)
        t += rng.exponential(1.0 / rate)
    return np.asarray(times)


class Simulator:
    """
    One replication of a scenario.

    All randomness comes from named substreams of the run seed. Arrival
    times, per-task local latencies and the MMP state path are drawn
    independently of the policy, so policies compared under the same seed
    face the same workload.
    """

    def __init__(self, scenario: Union[ScenarioConfig, Dict[str, Any]], seed: int, record_events: bool = True):
        self.scenario = ensure_scenario(scenario)
        self.seed = seed
        self.record_events = record_events
        self.policy = self.scenario.policy
        self.streams = make_streams(seed)

        self.now = 0.0
        self._heap: List[Tuple[float, int, int, int]] = []
        self._seq = itertools.count()
        self.events: List[EventRecord] = []

        self.tasks: List[Task] = []
        self._local_draws = np.empty(0)
        self.waiting: List[int] = []
        self.in_service: Optional[int] = None
        self._service_start = 0.0
        self._service_token = 0
        self.learners: Dict[int, LearnerState] = {}

        self.view = server_view(self.scenario.server, self.scenario.offload_overhead)
        self.path: Optional[StatePath] = None
        self.state: Optional[int] = None
        if isinstance(self.scenario.server, MmpServer):
            server = self.scenario.server
            self.path = StatePath(server.spec, server.initial_state, self.streams["mmp_path"])
            self.state = server.initial_state
        self._pending_arrivals = 0

    @property
    def system_size(self) -> int:
        return len(self.waiting) + (self.in_service is not None)

    @property
    def _modulated(self) -> bool:
        return self.path is not None and self.path.spec.states > 1

    def _schedule(self, time: float, priority: int, payload: int) -> None:
        heapq.heappush(self._heap, (time, priority, next(self._seq), payload))

    def _record(self, kind: EventKind, task_id: Optional[int] = None, position: Optional[int] = None) -> None:
        if self.record_events:
            self.events.append(
                EventRecord(
                    time=self.now,
                    kind=kind,
                    task_id=task_id,
                    queue_length=self.system_size,
                    position=position,
                    state=self.state,
                )
            )

    def _setup(self) -> None:
        scenario = self.scenario
        arrivals = generate_arrivals(scenario.arrival_rate, scenario.horizon, self.streams["arrivals"])
        n = len(arrivals)
        local_means = self.streams["local_means"].uniform(scenario.local_model.low, scenario.local_model.high, size=n)
        self._local_draws = self.streams["local_draws"].standard_exponential(size=n)
        self.tasks = [
            Task(id=i, arrival_time=float(arrivals[i]), local_mean=float(local_means[i])) for i in range(n)
        ]
        for task in self.tasks:
            self._schedule(task.arrival_time, ARRIVAL, task.id)
        self._pending_arrivals = n
        if self._modulated:
            self._schedule(scenario.period, PERIOD_TICK, 1)
        logger.debug(f"seed={self.seed}: {n} arrivals over [0, {scenario.horizon}]")

    def run(self) -> SimulationResult:
        self._setup()
        while self._heap:
            time, kind, _, payload = heapq.heappop(self._heap)
            self.now = time
            if kind == ARRIVAL:
                self._handle_arrival(self.tasks[payload])
            elif kind == SERVICE_COMPLETE:
                self._handle_completion(payload)
            elif kind == PREEMPT_TIMEOUT:
                self._handle_timeout(payload)
            else:
                self._handle_tick(payload)
        for task in self.tasks:
            if task.end_utility is None:
                raise ContractViolation(f"task {task.id} never completed")
        return SimulationResult(tasks=self.tasks, events=self.events)

    # -- local computation --------------------------------------------------

    def _finish_locally(self, task: Task, served_by: ServedBy) -> None:
        task.decision_trace.append((self.now, Decision.LOCAL))
        task.served_by = served_by
        task.completion_time = self.now + task.local_mean * float(self._local_draws[task.id])
        task.end_utility = utility(self.scenario.utility, task.completion_time - task.arrival_time)

    # -- server -------------------------------------------------------------

    def _start_service(self, task_id: int) -> None:
        self.in_service = task_id
        self._service_start = self.now
        self._service_token += 1
        completion = draw_service_completion(self.scenario.server, self.now, self.streams["service"], self.path)
        self._schedule(completion, SERVICE_COMPLETE, self._service_token)
        deadline = service_deadline(self.policy)
        if deadline is not None:
            self._schedule(self.now + deadline, PREEMPT_TIMEOUT, self._service_token)
        self._record(EventKind.SERVICE_START, task_id, position=1)

    def _release_server(self) -> None:
        self.in_service = None
        if self.waiting:
            self._start_service(self.waiting.pop(0))
        self._deliver_updates()

    def _handle_arrival(self, task: Task) -> None:
        self._pending_arrivals -= 1
        self._sync_view()
        queue_length = self.system_size
        decision = on_arrival(task, queue_length, self.policy, self.view)
        if decision is ArrivalDecision.BALK:
            self._finish_locally(task, ServedBy.LOCAL_DEVICE)
            self._record(EventKind.ARRIVAL, task.id)
            self._record(EventKind.BALK, task.id)
            return
        position = queue_length + 1
        task.decision_trace.append((self.now, Decision.CLOUD))
        task.entry_position = position
        if isinstance(self.policy, RiskImperfectPolicy):
            self.learners[task.id] = start_learning(task, position, self.policy, self.scenario.utility)
            task.observations = 1
        if self.in_service is None:
            self._record(EventKind.ARRIVAL, task.id, position=position)
            self._start_service(task.id)
        else:
            self.waiting.append(task.id)
            self._record(EventKind.ARRIVAL, task.id, position=position)

    def _handle_completion(self, token: int) -> None:
        if token != self._service_token or self.in_service is None:
            return
        task = self.tasks[self.in_service]
        task.served_by = ServedBy.MEC_SERVER
        task.completion_time = self.now
        task.end_utility = utility(self.scenario.utility, self.now - task.arrival_time)
        self.in_service = None
        self._record(EventKind.SERVICE_COMPLETE, task.id)
        self._release_server()

    def _handle_timeout(self, token: int) -> None:
        if token != self._service_token or self.in_service is None:
            return
        task = self.tasks[self.in_service]
        # now - start can round to just under the deadline that scheduled this event.
        elapsed = max(self.now - self._service_start, service_deadline(self.policy) or 0.0)
        if on_service_tick(self.policy, task, elapsed) is not TickDecision.PREEMPT_TO_LOCAL:
            return
        self._finish_locally(task, ServedBy.LOCAL_AFTER_PREEMPT)
        self._service_token += 1
        self.in_service = None
        self._record(EventKind.PREEMPT, task.id)
        self._release_server()

    def _handle_tick(self, period_index: int) -> None:
        state = self.path.state(period_index)
        if state != self.state:
            self.state = state
            self._record(EventKind.STATE_SWITCH)
            if isinstance(self.policy, RiskPerfectPolicy):
                self._deliver_updates()
        if self._pending_arrivals or self.system_size:
            self._schedule((period_index + 1) * self.scenario.period, PERIOD_TICK, period_index + 1)

    # -- queue status updates -----------------------------------------------

    def _sync_view(self) -> None:
        if isinstance(self.view, MmpView):
            self.view.observe(self.path.state_at(self.now), self.now)

    def _deliver_updates(self) -> None:
        """Front-to-back pass over the waiting line; positions behind a renege shift in the same pass."""
        if not isinstance(self.policy, (RiskPerfectPolicy, RiskImperfectPolicy)):
            return
        self._sync_view()
        index = 0
        while index < len(self.waiting):
            task = self.tasks[self.waiting[index]]
            position = index + 2
            decision, learner = on_position_update(
                task, position, self.now, self.policy, self.view, self.learners.get(task.id)
            )
            if learner is not None:
                self.learners[task.id] = learner
                task.observations = learner.n_obs
            self._record(EventKind.QSI_UPDATE, task.id, position=position)
            if decision is UpdateDecision.RENEGE:
                self.waiting.pop(index)
                self._finish_locally(task, ServedBy.LOCAL_AFTER_RENEGE)
                self._record(EventKind.RENEGE, task.id, position=position)
            else:
                index += 1


def run_simulation(
    scenario: Union[ScenarioConfig, Dict[str, Any]], seed: int, record_events: bool = True
) -> Tuple[List[Task], List[EventRecord]]:
    """
    Simulate one replication.

    Args:
        scenario: Scenario model or mapping; mappings are validated first
        seed: Run seed
        record_events: Keep the event log

    Returns:
        Tasks in id order and the event log, both deterministic in (scenario, seed)

    """
    result = Simulator(scenario, seed, record_events=record_events).run()
    logger.debug(
        f"seed={seed}: {len(result.tasks)} tasks, "
        f"{sum(t.served_by is ServedBy.MEC_SERVER for t in result.tasks)} served by the MEC server"
    )
    return result.tasks, result.events

