"""
Imperfect queue status information: observation logging, rate estimation
and the optimal stopping rule for reneging.
"""

from impatient_queue.learner.estimator import (
    estimate_rate,
    estimator_coefficient,
    estimator_density,
    record_observation,
)
from impatient_queue.learner.stopping import (
    LearnerState,
    critical_rate,
    expected_loss,
    learning_cost,
    learning_gain,
    learning_saturated,
    prefers_local,
    should_renege,
)
from impatient_queue.models.learner import ObservationLog

__all__ = [
    "ObservationLog",
    "LearnerState",
    "record_observation",
    "estimate_rate",
    "estimator_coefficient",
    "estimator_density",
    "critical_rate",
    "expected_loss",
    "learning_gain",
    "learning_cost",
    "learning_saturated",
    "prefers_local",
    "should_renege",
]
