"""
Position-observation logging and the service-rate estimator.

Under update-on-change, every inter-observation interval of a waiting task
is one exponential inter-service time, so the summed intervals after the
entrance observation are Erlang(N - 1) distributed. That sampling law gives
the estimator's density.
"""

import math

from impatient_queue.errors import ContractViolation, DomainError
from impatient_queue.models.learner import ObservationLog


def record_observation(log: ObservationLog, k: int, t: float) -> ObservationLog:
    """
    Append a (position, time) observation.

    Args:
        log: Existing log, possibly empty
        k: Observed position, positive
        t: Observation time, after the last logged time

    Returns:
        A new log with the entry appended

    """
    if k < 1:
        raise ContractViolation(f"position must be at least 1, got {k}")
    if log.entries:
        last_k, last_t = log.entries[-1]
        if t <= last_t:
            raise ContractViolation(f"observation at {t} is not after the last one at {last_t}")
        if k > last_k:
            raise ContractViolation(f"position {k} increased from {last_k}")
    return ObservationLog.model_construct(entries=log.entries + ((k, t),))


def estimator_coefficient(n_obs: int) -> float:
    """
    Numerator c of mu_hat = c / sum(dt) for a log with `n_obs` >= 2 entries.

    N = 2 and N = 3 use the plain ML form N - 1 (the bias factor N - 3 would
    zero the estimate at N = 3); N >= 4 uses (N-1)(N-3)/(N-2).
    """
    if n_obs < 2:
        raise ContractViolation(f"need at least two observations, got {n_obs}")
    if n_obs <= 3:
        return float(n_obs - 1)
    return (n_obs - 1) * (n_obs - 3) / (n_obs - 2)


def estimate_rate(log: ObservationLog) -> float:
    """
    Bias-corrected ML estimate of the service rate from a position log.

    Args:
        log: Observation log with at least one entry

    Returns:
        +inf with a single observation, otherwise c / (t_N - t_1)

    """
    n_obs = len(log)
    if n_obs == 0:
        raise ContractViolation("cannot estimate a rate from an empty log")
    if n_obs == 1:
        return math.inf
    return estimator_coefficient(n_obs) / log.span


def log_estimator_density(n_obs: int, plug_in_rate: float, x: float) -> float:
    """Log density of c / S with S ~ Erlang(n_obs - 1, plug_in_rate), at x > 0."""
    c = estimator_coefficient(n_obs)
    shape = n_obs - 1
    s = c / x
    return (
        shape * math.log(plug_in_rate)
        + (shape - 1) * math.log(s)
        - plug_in_rate * s
        - math.lgamma(shape)
        + math.log(c)
        - 2.0 * math.log(x)
    )


def estimator_density(log: ObservationLog, plug_in_rate: float, x: float) -> float:
    """
    Sampling density of the rate estimator given the log length.

    Args:
        log: Observation log with at least three entries
        plug_in_rate: Rate assumed for the Erlang law of the summed intervals
        x: Rate value at which to evaluate the density

    Returns:
        f(x) = f_S(c / x) * c / x^2

    """
    n_obs = len(log)
    if n_obs < 3:
        raise ContractViolation(f"estimator density needs at least three observations, got {n_obs}")
    if x < 0:
        raise DomainError(f"rate must be non-negative, got {x}")
    if x == 0.0 or not math.isfinite(plug_in_rate):
        return 0.0
    return math.exp(log_estimator_density(n_obs, plug_in_rate, x))
