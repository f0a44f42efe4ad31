"""
Queue beliefs and the risk-quantile offloading rule.

A user compares the (1 - P_o) quantile of its local latency with the same
quantile of its remaining cloud latency and keeps whichever is smaller; ties
go to local computation.
"""

import math
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from impatient_queue.dist import erlang_quantile, poisson_tail_sf, unit_erlang_quantile
from impatient_queue.errors import DomainError
from impatient_queue.models.belief import PMF_TOLERANCE, MmpBelief, PoissonBelief
from impatient_queue.models.distributions import ErlangDist
from impatient_queue.models.server import MmpSpec
from impatient_queue.models.task import Decision


def _check_outage(outage: float) -> None:
    if not 0.0 < outage < 1.0:
        raise DomainError(f"outage probability must lie in (0, 1), got {outage}")


def entrance_quantile(belief: PoissonBelief, outage: float) -> float:
    """
    Risk quantile of the cloud latency for a task that has not entered the queue.

    Args:
        belief: Position, service rate and offloading overhead
        outage: Tolerated outage probability P_o

    Returns:
        tau_s + Erlang(k, mu) quantile at 1 - P_o

    """
    _check_outage(outage)
    waiting = erlang_quantile(ErlangDist(shape=belief.position, rate=belief.rate), 1.0 - outage)
    return belief.offload_overhead + waiting


def waiting_quantile(belief: PoissonBelief, outage: float) -> float:
    """Risk quantile of the remaining wait for a task already in the queue."""
    _check_outage(outage)
    return erlang_quantile(ErlangDist(shape=belief.position, rate=belief.rate), 1.0 - outage)


def decide_offload(local_q: float, cloud_q: float) -> Decision:
    """Local iff the local quantile does not exceed the cloud quantile."""
    return Decision.LOCAL if local_q <= cloud_q else Decision.CLOUD


def _as_pmf(state_pmf: Sequence[float], spec: MmpSpec) -> np.ndarray:
    y = np.asarray(state_pmf, dtype=float)
    if y.shape != (spec.states,) or np.any(y < 0) or abs(y.sum() - 1.0) > PMF_TOLERANCE:
        raise DomainError(f"malformed state pmf {tuple(state_pmf)} for {spec.states} states")
    return y


def mmp_evolve(state_pmf: Sequence[float], spec: MmpSpec, steps: int) -> np.ndarray:
    """
    Advance a state pmf by `steps` periods: y <- y P^steps (row-vector convention).

    Args:
        state_pmf: Probability vector over the D server states
        spec: MMP specification holding the per-period transition matrix
        steps: Number of periods, non-negative

    Returns:
        The evolved pmf as a numpy array

    """
    if steps < 0:
        raise DomainError(f"steps must be non-negative, got {steps}")
    y = _as_pmf(state_pmf, spec)
    transition = np.asarray(spec.transition, dtype=float)
    for _ in range(steps):
        y = y @ transition
    return y


def mmp_stationary(spec: MmpSpec) -> np.ndarray:
    """Stationary distribution of the transition matrix (left eigenvector for eigenvalue 1)."""
    transition = np.asarray(spec.transition, dtype=float)
    eigenvalues, eigenvectors = np.linalg.eig(transition.T)
    vector = np.real(eigenvectors[:, np.argmin(np.abs(eigenvalues - 1.0))])
    return vector / vector.sum()


@lru_cache(maxsize=4096)
def _mean_rate_schedule(spec: MmpSpec, state_pmf: Tuple[float, ...], periods: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Expected service rate in each of the next `periods` whole periods, and
    their running sum. Entry j is rates . (y P^(j+1)).
    """
    rates = np.asarray(spec.rates, dtype=float)
    transition = np.asarray(spec.transition, dtype=float)
    y = np.asarray(state_pmf, dtype=float)
    means = np.empty(periods)
    for j in range(periods):
        y = y @ transition
        means[j] = rates @ y
    return means, np.concatenate(([0.0], np.cumsum(means)))


def _schedule_for(belief: MmpBelief, periods_needed: int) -> Tuple[np.ndarray, np.ndarray]:
    periods = 16
    while periods < periods_needed:
        periods *= 2
    return _mean_rate_schedule(belief.spec, belief.state_pmf, periods)


def mmp_cumulative_rate(belief: MmpBelief, horizon: float) -> float:
    """
    Integrated expected service rate over the next `horizon` time units.

    The current (partial) period runs at rates . y; every later period holds
    the mean rate of the pmf evolved to it, constant within the period.

    Args:
        belief: Current state pmf, period phase and MMP spec
        horizon: Length x of the integration window, non-negative

    Returns:
        Lambda(t, t + x), dimensionless

    """
    if horizon < 0:
        raise DomainError(f"horizon must be non-negative, got {horizon}")
    spec = belief.spec
    if spec.states == 1:
        return spec.rates[0] * horizon
    current_rate = float(np.dot(spec.rates, belief.state_pmf))
    first = min(horizon, spec.period - belief.offset)
    remaining = horizon - first
    if remaining <= 0.0:
        return current_rate * first
    whole = int(math.floor(remaining / spec.period))
    fraction = remaining - whole * spec.period
    means, cumulative = _schedule_for(belief, whole + 1)
    return current_rate * first + spec.period * cumulative[whole] + fraction * means[whole]


def mmp_waiting_cdf(belief: MmpBelief, x: float) -> float:
    """
    CDF of the remaining wait at position k under MMP service:
    1 - sum_{i=0}^{k-1} Lambda^i e^{-Lambda} / i!, with Lambda the cumulative rate.
    """
    if x < 0:
        raise DomainError(f"waiting time must be non-negative, got {x}")
    return 1.0 - poisson_tail_sf(belief.position, mmp_cumulative_rate(belief, x))


def mmp_cumulative_rate_inverse(belief: MmpBelief, target: float) -> float:
    """
    Smallest horizon x with mmp_cumulative_rate(belief, x) = target.

    Lambda is piecewise linear with positive slopes, so the inverse is found
    by locating the period that crosses `target` and solving within it.
    """
    if target < 0:
        raise DomainError(f"cumulative rate must be non-negative, got {target}")
    spec = belief.spec
    if spec.states == 1:
        return target / spec.rates[0]
    current_rate = float(np.dot(spec.rates, belief.state_pmf))
    head = spec.period - belief.offset
    if current_rate * head >= target:
        return target / current_rate
    remaining = target - current_rate * head
    periods_needed = int(math.ceil(remaining / (spec.period * min(spec.rates)))) + 1
    means, cumulative = _schedule_for(belief, periods_needed)
    whole = int(np.searchsorted(spec.period * cumulative, remaining, side="left")) - 1
    return head + whole * spec.period + (remaining - spec.period * cumulative[whole]) / means[whole]


def mmp_waiting_quantile(belief: MmpBelief, outage: float) -> float:
    """
    Inverse of mmp_waiting_cdf at level 1 - P_o.

    The waiting CDF is the unit-rate Erlang(k) CDF evaluated at Lambda(x), so
    the quantile is the horizon whose cumulative rate reaches the (cached)
    unit-rate Erlang quantile.
    """
    _check_outage(outage)
    return mmp_cumulative_rate_inverse(belief, unit_erlang_quantile(belief.position, 1.0 - outage))
