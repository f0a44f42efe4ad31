"""Tests for observation logging, rate estimation and the optimal stopping rule."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from impatient_queue.dist import erlang_quantile, exp_quantile
from impatient_queue.errors import ContractViolation, DomainError
from impatient_queue.learner import (
    LearnerState,
    ObservationLog,
    critical_rate,
    estimate_rate,
    estimator_coefficient,
    estimator_density,
    expected_loss,
    learning_cost,
    learning_gain,
    learning_saturated,
    prefers_local,
    record_observation,
    should_renege,
)
from impatient_queue.models import ErlangDist, ExpDist, UtilitySpec

OUTAGE = 0.1


def synthetic_log(n_obs: int, rate: float, seed: int, first_position: int = None) -> ObservationLog:
    """Log of a task observing `n_obs` positions while the server completes at `rate`."""
    rng = np.random.default_rng(seed)
    times = np.concatenate(([0.0], np.cumsum(rng.exponential(1.0 / rate, size=n_obs - 1))))
    start = first_position if first_position is not None else n_obs + 1
    return ObservationLog.model_construct(entries=tuple((start - i, float(t)) for i, t in enumerate(times)))


def evenly_spaced_log(n_obs: int, span: float, last_position: int) -> ObservationLog:
    step = span / (n_obs - 1)
    return ObservationLog(
        entries=tuple((last_position + n_obs - 1 - i, i * step) for i in range(n_obs))
    )


def make_state(log: ObservationLog, local_mean: float = 5.0, **kwargs) -> LearnerState:
    return LearnerState(log=log, outage=OUTAGE, local_dist=ExpDist(mean=local_mean), **kwargs)


def test_record_observation_appends():
    log = record_observation(ObservationLog(), 5, 0.0)
    assert len(log) == 1
    log = record_observation(log, 4, 0.7)
    assert len(log) == 2
    assert log.span == pytest.approx(0.7)
    assert log.last_position == 4


def test_record_observation_rejects_out_of_order():
    log = record_observation(record_observation(ObservationLog(), 5, 0.0), 4, 0.7)
    with pytest.raises(ContractViolation):
        record_observation(log, 5, 0.5)
    with pytest.raises(ContractViolation):
        record_observation(log, 3, 0.7)
    with pytest.raises(ContractViolation):
        record_observation(log, 5, 1.0)
    with pytest.raises(ContractViolation):
        record_observation(log, 0, 1.0)


def test_observation_log_validates_entries():
    with pytest.raises(ValueError):
        ObservationLog(entries=((3, 0.0), (4, 1.0)))
    with pytest.raises(ValueError):
        ObservationLog(entries=((3, 1.0), (2, 1.0)))


def test_estimate_rate_cases():
    assert estimate_rate(ObservationLog(entries=((5, 0.0),))) == math.inf
    assert estimate_rate(ObservationLog(entries=((5, 0.0), (4, 0.5)))) == pytest.approx(2.0)
    assert estimate_rate(evenly_spaced_log(5, 2.0, 1)) == pytest.approx(4.0 / 3.0)
    # Three observations use the plain (N - 1) / sum form.
    assert estimate_rate(evenly_spaced_log(3, 4.0, 1)) == pytest.approx(0.5)
    with pytest.raises(ContractViolation):
        estimate_rate(ObservationLog())


def test_estimator_coefficient():
    assert estimator_coefficient(2) == 1.0
    assert estimator_coefficient(3) == 2.0
    assert estimator_coefficient(5) == pytest.approx(8.0 / 3.0)
    with pytest.raises(ContractViolation):
        estimator_coefficient(1)


def test_estimate_rate_scale_equivariant():
    log = synthetic_log(12, 1.3, seed=3)
    scaled = ObservationLog(entries=tuple((k, 2.5 * t) for k, t in log.entries))
    assert estimate_rate(scaled) == pytest.approx(estimate_rate(log) / 2.5, rel=1e-12)


@pytest.mark.parametrize("rate", [1.0, 2.0])
def test_estimate_rate_consistent(rate):
    n_obs = 10_000
    hits = 0
    for seed in range(200):
        rng = np.random.default_rng(seed)
        span = float(rng.exponential(1.0 / rate, size=n_obs - 1).sum())
        log = ObservationLog.model_construct(entries=((n_obs + 1, 0.0),) * (n_obs - 1) + ((2, span),))
        hits += abs(estimate_rate(log) - rate) / rate <= 0.05
    assert hits / 200 >= 0.9


def test_critical_rate_examples():
    local_q = exp_quantile(ExpDist(mean=5.0), 1.0 - OUTAGE)
    assert critical_rate(1, local_q, OUTAGE) == pytest.approx(0.2, rel=1e-9)
    assert critical_rate(2, local_q, OUTAGE) > 0.2


def test_critical_rate_equalises_quantiles():
    rng = np.random.default_rng(11)
    for _ in range(25):
        k = int(rng.integers(1, 40))
        local_q = float(rng.uniform(0.5, 60.0))
        mu_c = critical_rate(k, local_q, OUTAGE)
        assert abs(erlang_quantile(ErlangDist(shape=k, rate=mu_c), 1.0 - OUTAGE) - local_q) <= 1e-8


def test_critical_rate_rejects_bad_inputs():
    with pytest.raises(DomainError):
        critical_rate(2, 0.0, OUTAGE)
    with pytest.raises(DomainError):
        critical_rate(2, 1.0, 1.0)


@pytest.mark.parametrize("n_obs", [3, 5, 10])
def test_estimator_density_normalised(n_obs):
    log = synthetic_log(n_obs, 1.5, seed=n_obs)
    rate = 1.5
    head, _ = quad(lambda x: estimator_density(log, rate, x), 0.0, rate, epsabs=1e-12, limit=200)
    tail, _ = quad(lambda x: estimator_density(log, rate, x), rate, math.inf, epsabs=1e-12, limit=200)
    assert head + tail == pytest.approx(1.0, abs=1e-6)


def test_estimator_density_concentrates():
    rate = 1.0
    variances = []
    for n_obs in (5, 10, 20, 50):
        log = synthetic_log(n_obs, rate, seed=1)
        mean, _ = quad(lambda x: x * estimator_density(log, rate, x), 0.0, math.inf, limit=200)
        second, _ = quad(lambda x: x * x * estimator_density(log, rate, x), 0.0, math.inf, limit=200)
        variances.append(second - mean**2)
    assert all(a > b for a, b in zip(variances, variances[1:]))


def test_estimator_density_mode_near_rate():
    rate = 2.0
    log = synthetic_log(50, rate, seed=5)
    grid = np.linspace(0.5, 4.0, 3501)
    mode = grid[np.argmax([estimator_density(log, rate, x) for x in grid])]
    assert abs(mode - rate) / rate <= 0.1


def test_estimator_density_edge_cases():
    short = synthetic_log(2, 1.0, seed=0)
    with pytest.raises(ContractViolation):
        estimator_density(short, 1.0, 1.0)
    log = synthetic_log(4, 1.0, seed=0)
    with pytest.raises(DomainError):
        estimator_density(log, 1.0, -1.0)
    assert estimator_density(log, 1.0, 0.0) == 0.0


def test_expected_loss_infinite_before_three_observations():
    state = make_state(ObservationLog(entries=((4, 0.0), (3, 1.0))))
    assert expected_loss(3, 1.0, state) == math.inf


def test_expected_loss_non_negative_sweep():
    rng = np.random.default_rng(2024)
    for seed in range(40):
        n_obs = int(rng.integers(3, 30))
        rate = float(rng.uniform(0.2, 3.0))
        log = synthetic_log(n_obs, rate, seed=seed)
        state = make_state(log, local_mean=float(rng.uniform(2.0, 10.0)))
        t = log.entries[-1][1]
        for k in (1, 2, 5, 12):
            assert expected_loss(k, t, state) >= 0.0
        assert expected_loss(1, t, state, clamp=False) >= -1e-6


def test_expected_loss_branches_split_at_critical_rate():
    # Fast estimated server: the error is waiting too little, mass below mu_c only.
    fast = make_state(evenly_spaced_log(20, 8.0, 2))
    # Slow estimated server: the error is waiting too long.
    slow = make_state(evenly_spaced_log(20, 80.0, 2))
    local_q = exp_quantile(ExpDist(mean=5.0), 1.0 - OUTAGE)
    assert fast.mu_hat > critical_rate(2, local_q, OUTAGE) > slow.mu_hat
    assert expected_loss(2, 8.0, fast) >= 0.0
    assert expected_loss(2, 80.0, slow) >= 0.0


def test_expected_loss_converges():
    losses = []
    for seed in range(100):
        log = synthetic_log(200, 1.0, seed=seed)
        state = make_state(log)
        losses.append(expected_loss(3, log.entries[-1][1], state))
    assert float(np.mean(losses)) <= 0.01


def _direct_loss(k: int, t: float, state: LearnerState) -> float:
    """Loss evaluated straight from the estimator density on the original rate axis."""
    spec = state.utility
    local_q = exp_quantile(state.local_dist, 1.0 - state.outage)
    mu_c = critical_rate(k, local_q, state.outage)
    u_local = spec.u0 * math.exp(-spec.beta * (t + state.local_dist.mean))

    def u_cloud(x):
        return spec.u0 * math.exp(-spec.beta * (t + k / x))

    if state.mu_hat > mu_c:
        value, _ = quad(
            lambda x: (u_local - u_cloud(x)) * estimator_density(state.log, state.mu_hat, x) if x > 0 else 0.0,
            0.0,
            mu_c,
            epsabs=1e-14,
            epsrel=1e-12,
            limit=400,
        )
    else:
        value, _ = quad(
            lambda x: (u_cloud(x) - u_local) * estimator_density(state.log, state.mu_hat, x),
            mu_c,
            math.inf,
            epsabs=1e-14,
            epsrel=1e-12,
            limit=400,
        )
    return max(0.0, value)


def test_learning_gain_matches_direct_evaluation():
    log = synthetic_log(8, 0.6, seed=42, first_position=12)
    after = make_state(log)
    before = after.with_log(log.without_last())
    k, t = log.entries[-1]
    gain = learning_gain(k, t, before, after)
    direct = _direct_loss(k + 1, t, before) - _direct_loss(k, t, after)
    assert gain == pytest.approx(direct, rel=1e-3, abs=1e-8)


def test_learning_gain_vanishes_with_many_observations():
    log = synthetic_log(500, 1.0, seed=9)
    after = make_state(log)
    before = after.with_log(log.without_last())
    k, t = log.entries[-1]
    assert abs(learning_gain(k, t, before, after)) <= 1e-3


def test_learning_gain_infinite_once_loss_becomes_finite():
    log = ObservationLog(entries=((6, 0.0), (5, 0.8), (4, 1.9)))
    after = make_state(log)
    before = after.with_log(log.without_last())
    assert math.isinf(expected_loss(5, 1.9, before))
    assert math.isfinite(expected_loss(4, 1.9, after))
    assert learning_gain(4, 1.9, before, after) == math.inf
    assert not learning_saturated(4, 1.9, after)


def test_learning_gain_zero_while_loss_stays_infinite():
    empty = make_state(ObservationLog())
    first = make_state(ObservationLog(entries=((6, 0.0),)))
    second = make_state(ObservationLog(entries=((6, 0.0), (5, 0.8))))
    assert learning_gain(6, 0.0, empty, first) == 0.0
    assert learning_gain(5, 0.8, first, second) == 0.0
    assert not learning_saturated(5, 0.8, second)


def test_learning_gain_prices_previous_logged_position():
    log = ObservationLog(entries=((9, 0.0), (8, 1.0), (7, 2.0), (5, 3.0)))
    after = make_state(log)
    before = after.with_log(log.without_last())
    gain = learning_gain(5, 3.0, before, after)
    assert gain == pytest.approx(expected_loss(7, 3.0, before) - expected_loss(5, 3.0, after), rel=1e-12)
    assert gain != pytest.approx(expected_loss(6, 3.0, before) - expected_loss(5, 3.0, after), rel=1e-6)


def test_learning_gain_rejects_mismatched_states():
    log = ObservationLog(entries=((6, 0.0), (5, 0.8), (4, 1.9), (3, 2.5)))
    after = make_state(log)
    with pytest.raises(ContractViolation):
        learning_gain(3, 2.5, after, after)
    with pytest.raises(ContractViolation):
        learning_gain(2, 2.5, after.with_log(log.without_last()), after)


def test_learning_cost_values():
    state = make_state(ObservationLog(entries=((4, 0.0), (3, 1.0))))
    assert state.mu_hat == pytest.approx(1.0)
    assert learning_cost(0.0, state) == pytest.approx(1.0 - math.exp(-0.1), abs=1e-12)
    assert learning_cost(0.0, make_state(ObservationLog(entries=((4, 0.0),)))) == 0.0
    for t in (0.0, 3.0, 30.0):
        assert learning_cost(t, state) > 0.0


def test_learning_cost_ignores_position():
    for shift in (0, 3, 40):
        shifted = make_state(evenly_spaced_log(6, 4.0, 2 + shift))
        reference = make_state(evenly_spaced_log(6, 4.0, 2))
        for t in (4.0, 11.0):
            assert learning_cost(t, shifted) == learning_cost(t, reference)


def test_should_renege_monotone_in_position():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n_obs = int(rng.integers(3, 10))
        span = float(rng.uniform(2.0, 40.0))
        local_mean = float(rng.uniform(2.0, 10.0))
        verdicts = []
        for k in range(1, 30):
            log = evenly_spaced_log(n_obs, span, k)
            state = make_state(log, local_mean=local_mean, min_observations=3)
            verdicts.append(should_renege(k, log.entries[-1][1], state))
            assert prefers_local(k, make_state(log, local_mean=local_mean)) == verdicts[-1]
        assert verdicts == sorted(verdicts)


def test_should_renege_monotone_in_position_when_saturated():
    n_obs, target_rate = 50, 0.1
    span = estimator_coefficient(n_obs) / target_rate
    verdicts = []
    for k in range(20, 41, 5):
        log = evenly_spaced_log(n_obs, span, k)
        verdicts.append(should_renege(k, log.entries[-1][1], make_state(log, local_mean=2.0)))
    assert all(verdicts)


def test_prior_rate_replaces_infinite_estimate():
    single = ObservationLog(entries=((4, 0.0),))
    assert make_state(single).mu_hat == math.inf
    assert make_state(single, prior_rate=0.7).mu_hat == 0.7
    two = ObservationLog(entries=((4, 0.0), (3, 0.5)))
    assert make_state(two, prior_rate=0.7).mu_hat == pytest.approx(2.0)


def test_should_renege_false_without_estimate():
    state = make_state(ObservationLog(entries=((9, 0.0),)), local_mean=0.1)
    assert not should_renege(9, 0.0, state)


def test_should_renege_overloaded_instance():
    n_obs, k, target_rate = 50, 20, 0.1
    span = estimator_coefficient(n_obs) / target_rate
    log = evenly_spaced_log(n_obs, span, k)
    state = make_state(log, local_mean=2.0)
    assert state.mu_hat == pytest.approx(target_rate)
    t = log.entries[-1][1]
    assert prefers_local(k, state)
    assert learning_saturated(k, t, state)
    assert should_renege(k, t, state)


def test_should_renege_is_the_conjunction():
    rng = np.random.default_rng(77)
    for seed in range(30):
        log = synthetic_log(int(rng.integers(3, 15)), float(rng.uniform(0.1, 2.0)), seed=seed, first_position=20)
        state = make_state(log, local_mean=float(rng.uniform(2.0, 10.0)))
        k, t = log.entries[-1]
        expected = prefers_local(k, state) and learning_saturated(k, t, state)
        assert should_renege(k, t, state) == expected


def test_fixed_observation_variant_waits_for_count():
    log = evenly_spaced_log(4, estimator_coefficient(4) / 0.05, 15)
    k, t = log.entries[-1]
    impatient = make_state(log, local_mean=2.0, min_observations=3)
    patient = make_state(log, local_mean=2.0, min_observations=6)
    assert prefers_local(k, impatient)
    assert should_renege(k, t, impatient)
    assert not should_renege(k, t, patient)


def test_learner_state_validates():
    with pytest.raises(ValueError):
        LearnerState(outage=0.0, local_dist=ExpDist(mean=1.0))
    with pytest.raises(ValueError):
        LearnerState(outage=0.1, local_dist=ExpDist(mean=1.0), min_observations=0)
    assert LearnerState(outage=0.1, local_dist=ExpDist(mean=1.0)).utility == UtilitySpec()
