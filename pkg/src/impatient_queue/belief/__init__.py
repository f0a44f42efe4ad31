"""
Queue beliefs and the risk-quantile offloading decision.

Poisson (Erlang) and Markov-modulated Poisson forms of a user's belief
about its remaining cloud latency.
"""

from impatient_queue.belief.queue_belief import (
    decide_offload,
    entrance_quantile,
    mmp_cumulative_rate,
    mmp_cumulative_rate_inverse,
    mmp_evolve,
    mmp_stationary,
    mmp_waiting_cdf,
    mmp_waiting_quantile,
    waiting_quantile,
)

__all__ = [
    "entrance_quantile",
    "waiting_quantile",
    "decide_offload",
    "mmp_evolve",
    "mmp_stationary",
    "mmp_cumulative_rate",
    "mmp_cumulative_rate_inverse",
    "mmp_waiting_cdf",
    "mmp_waiting_quantile",
]
