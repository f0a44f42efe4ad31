"""
Optimal stopping of online rate learning for an imperfect-QSI waiting task.

A waiting task keeps learning the service rate while the expected-loss
reduction of one more observation (learning gain) exceeds the utility decay
until that observation arrives (learning cost). Once learning has saturated,
it reneges iff the risk-quantile rule prefers local computation.
"""

import logging
import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import quad

from impatient_queue.belief import decide_offload
from impatient_queue.dist import erlang_quantile, exp_quantile, unit_erlang_quantile, utility
from impatient_queue.errors import ContractViolation, DomainError, NumericalError
from impatient_queue.learner.estimator import estimate_rate, estimator_coefficient
from impatient_queue.models.distributions import ErlangDist, ExpDist, UtilitySpec
from impatient_queue.models.learner import ObservationLog
from impatient_queue.models.task import Decision

logger = logging.getLogger(__name__)

QUAD_EPSREL = 1e-5


class LearnerState(BaseModel):
    """Per-task learner: the observation log plus the task's decision inputs."""

    model_config = ConfigDict(frozen=True)

    log: ObservationLog = ObservationLog()
    outage: float = Field(..., gt=0, lt=1)
    local_dist: ExpDist
    utility: UtilitySpec = UtilitySpec()
    prior_rate: Optional[float] = Field(None, gt=0)
    min_observations: Optional[int] = Field(None, ge=1)

    @property
    def mu_hat(self) -> float:
        """Current rate estimate; the configured prior stands in for +inf at N = 1."""
        if len(self.log) == 1 and self.prior_rate is not None:
            return self.prior_rate
        return estimate_rate(self.log)

    @property
    def n_obs(self) -> int:
        return len(self.log)

    def with_log(self, log: ObservationLog) -> "LearnerState":
        return self.model_copy(update={"log": log})


def critical_rate(k: int, local_quantile: float, outage: float) -> float:
    """
    Service rate at which the Erlang(k) risk quantile equals the local one.

    Args:
        k: Queue position
        local_quantile: Local latency quantile at 1 - P_o, positive
        outage: Outage probability P_o

    Returns:
        mu_c(k) = g_k(1 - P_o) / local_quantile, g_k the unit-rate Erlang quantile

    """
    if local_quantile <= 0:
        raise DomainError(f"local quantile must be positive, got {local_quantile}")
    if not 0.0 < outage < 1.0:
        raise DomainError(f"outage probability must lie in (0, 1), got {outage}")
    return unit_erlang_quantile(k, 1.0 - outage) / local_quantile


def _integrate(integrand, lower: float, upper: float, what: str) -> float:
    value, abserr, info, *message = quad(integrand, lower, upper, epsrel=QUAD_EPSREL, limit=200, full_output=1)
    if message and abserr > max(1e-8, 1e-3 * abs(value)):
        raise NumericalError(
            f"quadrature for {what} did not converge: value={value}, abserr={abserr}, "
            f"evaluations={info['neval']}, message={message[0]}"
        )
    return value


def expected_loss(k: int, t: float, state: LearnerState, clamp: bool = True) -> float:
    """
    Expected utility loss from a decision error at position k and task age t.

    The true rate is replaced by the plug-in estimate. If mu_hat exceeds the
    critical rate the right decision is to wait and the error region is the
    estimator mass below mu_c; otherwise it is the mass above mu_c. Each error
    outcome x costs the gap between the local utility u(t + E[tau_l]) and the
    cloud surrogate u(t + k / x).

    Args:
        k: Queue position
        t: Time since the task was generated
        state: Learner state; at least three observations for a finite loss
        clamp: Clamp the result at zero

    Returns:
        The loss, or +inf when fewer than three observations exist

    """
    if k < 1:
        raise DomainError(f"position must be at least 1, got {k}")
    n_obs = state.n_obs
    if n_obs < 3:
        return math.inf
    mu_hat = state.mu_hat
    local_q = exp_quantile(state.local_dist, 1.0 - state.outage)
    mu_c = critical_rate(k, local_q, state.outage)
    spec = state.utility
    u_local = utility(spec, t + state.local_dist.mean)

    c = estimator_coefficient(n_obs)
    shape = n_obs - 1
    log_norm = shape * math.log(mu_hat) + math.log(c) - math.lgamma(shape)

    def density(x: float) -> float:
        if x <= 0.0:
            return 0.0
        s = c / x
        return math.exp(log_norm + (shape - 1) * math.log(s) - mu_hat * s - 2.0 * math.log(x))

    if mu_hat > mu_c:

        def waited_too_little(x: float) -> float:
            if x <= 0.0:
                return 0.0
            return (u_local - utility(spec, t + k / x)) * density(x)

        loss = _integrate(waited_too_little, 0.0, mu_c, "under-patient loss")
    else:

        def waited_too_long(s: float) -> float:
            if s >= 1.0:
                return 0.0
            x = mu_c / (1.0 - s)
            jacobian = mu_c / (1.0 - s) ** 2
            return (utility(spec, t + k / x) - u_local) * density(x) * jacobian

        loss = _integrate(waited_too_long, 0.0, 1.0, "over-patient loss")
    return max(0.0, loss) if clamp else loss


def learning_gain(k: int, t: float, state_before: LearnerState, state_after: LearnerState) -> float:
    """
    Marginal learning gain G = L(k_prev, t-) - L(k, t) of the observation (k, t).

    k_prev is the last position in the pre-update log, so jumps of more than
    one place are priced at the position the task actually held. The first
    observation that makes the loss finite has infinite gain; while the loss
    stays infinite the gain is zero.
    """
    before, after = state_before.log.entries, state_after.log.entries
    if after[:-1] != before or after[-1] != (k, t):
        raise ContractViolation(f"state_after must extend state_before by exactly the observation ({k}, {t})")
    loss_after = expected_loss(k, t, state_after)
    if math.isinf(loss_after):
        return 0.0
    if state_before.n_obs < 3:
        return math.inf
    return expected_loss(state_before.log.last_position, t, state_before) - loss_after


def learning_cost(t: float, state: LearnerState) -> float:
    """Utility decay over one mean inter-service interval: u(t) - u(t + 1/mu_hat)."""
    mu_hat = state.mu_hat
    if math.isinf(mu_hat):
        return 0.0
    return utility(state.utility, t) - utility(state.utility, t + 1.0 / mu_hat)


def prefers_local(k: int, state: LearnerState) -> bool:
    """Risk-quantile condition evaluated at the estimated rate."""
    mu_hat = state.mu_hat
    local_q = exp_quantile(state.local_dist, 1.0 - state.outage)
    if math.isinf(mu_hat):
        cloud_q = 0.0
    else:
        cloud_q = erlang_quantile(ErlangDist(shape=k, rate=mu_hat), 1.0 - state.outage)
    return decide_offload(local_q, cloud_q) is Decision.LOCAL


def learning_saturated(k: int, t: float, state: LearnerState) -> bool:
    """Whether learning should stop: G' <= C', or the fixed observation count is reached."""
    if state.min_observations is not None:
        return state.n_obs >= state.min_observations
    if state.n_obs < 3:
        return False
    before = state.with_log(state.log.without_last())
    scale = utility(state.utility, t)
    gain = learning_gain(k, t, before, state) / scale
    cost = learning_cost(t, state) / scale
    logger.debug(f"k={k} t={t:.4f} N={state.n_obs} G'={gain:.6g} C'={cost:.6g}")
    return gain <= cost


def should_renege(k: int, t: float, state: LearnerState) -> bool:
    """
    Reneging test run after every position update of a waiting task.

    Args:
        k: New position
        t: Time since the task was generated
        state: Learner state including the observation just made

    Returns:
        True iff learning has saturated and the local quantile does not exceed
        the cloud quantile at the estimated rate

    """
    if math.isinf(state.mu_hat):
        return False
    return prefers_local(k, state) and learning_saturated(k, t, state)
