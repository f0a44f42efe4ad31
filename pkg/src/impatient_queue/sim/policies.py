"""
Policy hooks called by the simulator at arrivals, position updates and
service ticks.

The risk-quantile policies need a view of the server: `ServerView` answers
"what is the (1 - P_o) quantile of the remaining wait at position k, right
now" from the perfect queue status information the simulator holds.
"""

import math
from enum import Enum
from typing import Optional, Protocol, Tuple

from impatient_queue.belief import decide_offload, entrance_quantile, mmp_waiting_quantile, waiting_quantile
from impatient_queue.dist import erlang_quantile, exp_quantile
from impatient_queue.errors import ContractViolation
from impatient_queue.learner import LearnerState, record_observation, should_renege
from impatient_queue.models.belief import MmpBelief, PoissonBelief
from impatient_queue.models.distributions import ErlangDist, ExpDist, UtilitySpec
from impatient_queue.models.learner import ObservationLog
from impatient_queue.models.policy import (
    Policy,
    PreemptPolicy,
    RiskImperfectPolicy,
    RiskPerfectPolicy,
    TruncatePolicy,
)
from impatient_queue.models.server import MmpServer, PoissonServer, ServerProcess
from impatient_queue.models.task import Decision, Task


class ArrivalDecision(str, Enum):
    ENTER_QUEUE = "EnterQueue"
    BALK = "Balk"


class UpdateDecision(str, Enum):
    STAY = "Stay"
    RENEGE = "Renege"


class TickDecision(str, Enum):
    CONTINUE = "Continue"
    PREEMPT_TO_LOCAL = "PreemptToLocal"


class ServerView(Protocol):
    """Perfect queue status information about the server at the current instant."""

    offload_overhead: float

    def cloud_quantile(self, position: int, outage: float, entering: bool) -> float: ...


class PoissonView:
    """Server view for exponential service: the remaining wait at position k is Erlang(k, mu)."""

    def __init__(self, server: PoissonServer, offload_overhead: float):
        self.rate = server.rate
        self.offload_overhead = offload_overhead

    def cloud_quantile(self, position: int, outage: float, entering: bool) -> float:
        belief = PoissonBelief(position=position, rate=self.rate, offload_overhead=self.offload_overhead)
        if entering:
            return entrance_quantile(belief, outage)
        return waiting_quantile(belief, outage)


class MmpView:
    """
    Server view for MMP service: the current state and the phase within the
    period are known, later states follow the transition matrix.
    """

    def __init__(self, server: MmpServer, offload_overhead: float):
        self.spec = server.spec
        self.offload_overhead = offload_overhead
        self.state = server.initial_state
        self.offset = 0.0

    def observe(self, state: int, now: float) -> None:
        self.state = state
        self.offset = math.fmod(now, self.spec.period)

    def cloud_quantile(self, position: int, outage: float, entering: bool) -> float:
        belief = MmpBelief.known_state(position, self.state, self.spec, offset=self.offset)
        waiting = mmp_waiting_quantile(belief, outage)
        return self.offload_overhead + waiting if entering else waiting


def server_view(server: ServerProcess, offload_overhead: float):
    if isinstance(server, PoissonServer):
        return PoissonView(server, offload_overhead)
    return MmpView(server, offload_overhead)


def local_quantile(task: Task, outage: float) -> float:
    return exp_quantile(ExpDist(mean=task.local_mean), 1.0 - outage)


def on_arrival(task: Task, queue_length: int, policy: Policy, view: ServerView) -> ArrivalDecision:
    """
    Balking decision of an arriving task.

    Args:
        task: The arriving task
        queue_length: Tasks in the system (waiting plus in service) at arrival
        policy: Congestion-control policy
        view: Server view; used by the risk-quantile policies

    Returns:
        EnterQueue or Balk

    """
    position = queue_length + 1
    if isinstance(policy, RiskPerfectPolicy):
        cloud_q = view.cloud_quantile(position, policy.outage, entering=True)
        decision = decide_offload(local_quantile(task, policy.outage), cloud_q)
        return ArrivalDecision.BALK if decision is Decision.LOCAL else ArrivalDecision.ENTER_QUEUE
    if isinstance(policy, RiskImperfectPolicy):
        # Without a prior the rate estimate is +inf and every task offloads.
        if policy.prior_rate is None:
            return ArrivalDecision.ENTER_QUEUE
        cloud_q = view.offload_overhead + erlang_quantile(
            ErlangDist(shape=position, rate=policy.prior_rate), 1.0 - policy.outage
        )
        decision = decide_offload(local_quantile(task, policy.outage), cloud_q)
        return ArrivalDecision.BALK if decision is Decision.LOCAL else ArrivalDecision.ENTER_QUEUE
    if isinstance(policy, TruncatePolicy):
        return ArrivalDecision.BALK if queue_length >= policy.max_length else ArrivalDecision.ENTER_QUEUE
    return ArrivalDecision.ENTER_QUEUE


def start_learning(task: Task, position: int, policy: RiskImperfectPolicy, utility: UtilitySpec) -> LearnerState:
    """Learner of a task that has just entered at `position`; the entrance is its first observation."""
    return LearnerState(
        log=record_observation(ObservationLog(), position, 0.0),
        outage=policy.outage,
        local_dist=ExpDist(mean=task.local_mean),
        utility=utility,
        prior_rate=policy.prior_rate,
        min_observations=policy.min_observations,
    )


def on_position_update(
    task: Task,
    new_position: int,
    now: float,
    policy: Policy,
    view: ServerView,
    learner: Optional[LearnerState] = None,
) -> Tuple[UpdateDecision, Optional[LearnerState]]:
    """
    Reneging decision of a waiting task after its queue status changed.

    Args:
        task: The waiting task
        new_position: Its position after the change, at least 2 while waiting
        now: Simulation time
        policy: Congestion-control policy
        view: Server view; used under perfect information
        learner: The task's learner under imperfect information

    Returns:
        The decision and the learner updated with the new observation

    """
    if isinstance(policy, RiskPerfectPolicy):
        cloud_q = view.cloud_quantile(new_position, policy.outage, entering=False)
        decision = decide_offload(local_quantile(task, policy.outage), cloud_q)
        return (UpdateDecision.RENEGE if decision is Decision.LOCAL else UpdateDecision.STAY), learner
    if isinstance(policy, RiskImperfectPolicy):
        if learner is None:
            raise ContractViolation(f"task {task.id} waits under imperfect information without a learner")
        age = now - task.arrival_time
        last_position, last_age = learner.log.entries[-1]
        # Simultaneous changes collapse into one observation.
        if new_position == last_position or age <= last_age:
            return UpdateDecision.STAY, learner
        learner = learner.with_log(record_observation(learner.log, new_position, age))
        if should_renege(new_position, age, learner):
            return UpdateDecision.RENEGE, learner
        return UpdateDecision.STAY, learner
    return UpdateDecision.STAY, learner


def service_deadline(policy: Policy) -> Optional[float]:
    """Longest service a policy tolerates before pre-empting to local computation."""
    if isinstance(policy, PreemptPolicy):
        return policy.timeout
    return None


def on_service_tick(policy: Policy, task: Task, elapsed: float) -> TickDecision:
    """PreemptToLocal iff the policy pre-empts and `elapsed` has reached its timeout."""
    deadline = service_deadline(policy)
    if deadline is not None and elapsed >= deadline:
        return TickDecision.PREEMPT_TO_LOCAL
    return TickDecision.CONTINUE
