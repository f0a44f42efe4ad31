"""Tests for the scenario catalog, KPI computation, Monte-Carlo runner and reports."""

import json
import math

import pytest

from impatient_queue.errors import UnknownScenarioError
from impatient_queue.experiments import (
    BENCHES,
    REPORT_COLUMNS,
    MonteCarloRunner,
    ReportWriter,
    ScenarioRegistry,
    builtin_scenario,
    compare_report,
    empirical_cdf,
    kpi_from_tasks,
    lower_median,
    read_report_csv,
    run_monte_carlo,
)
from impatient_queue.experiments.report import split_name
from impatient_queue.models import (
    MmpServer,
    PatientFcfsPolicy,
    PoissonServer,
    PreemptPolicy,
    RiskImperfectPolicy,
    RiskPerfectPolicy,
    ServedBy,
    Task,
    TruncatePolicy,
)
from impatient_queue.sim import replication_seed


def small(name: str, horizon: float = 60.0, replications: int = 2):
    return builtin_scenario(name).model_copy(update={"horizon": horizon, "replications": replications})


def finished(task_id: int, served_by: ServedBy, end_utility: float) -> Task:
    return Task(
        id=task_id,
        arrival_time=float(task_id),
        local_mean=5.0,
        served_by=served_by,
        completion_time=float(task_id) + 1.0,
        end_utility=end_utility,
    )


@pytest.fixture
def registry() -> ScenarioRegistry:
    return ScenarioRegistry()


def test_catalog_entries(registry):
    scenario = registry.get("poisson-high/T5")
    assert scenario.server == PoissonServer(rate=1.0)
    assert scenario.policy == TruncatePolicy(max_length=5)
    assert scenario.arrival_rate == 1.5
    assert scenario.offload_overhead == 0.0
    assert scenario.utility.beta == 0.1

    assert registry.get("poisson-low/R0.1").policy == RiskPerfectPolicy(outage=0.001)
    assert registry.get("mmpC/P3").policy == PreemptPolicy(timeout=3.0)
    assert registry.get("imperfect-high/fixed6").policy == RiskImperfectPolicy(outage=0.1, min_observations=6)
    assert registry.get("poisson-low/fcfs").policy == PatientFcfsPolicy()

    mmp = registry.get("mmpB/R10").server
    assert isinstance(mmp, MmpServer)
    assert mmp.spec.rates == (2.0, 1.0)
    assert mmp.spec.transition == ((0.7, 0.3), (0.3, 0.7))
    assert registry.get("mmpC-model2/T10").local_model.high == 15.0


def test_catalog_names_are_unique_and_resolvable(registry):
    names = registry.names()
    assert len(names) == len(set(names)) == 54
    assert all(registry.get(name).name == name for name in names)


def test_unknown_scenario(registry):
    with pytest.raises(UnknownScenarioError) as excinfo:
        registry.get("poisson-low/R99")
    assert "poisson-low/R10" in str(excinfo.value)
    with pytest.raises(LookupError):
        builtin_scenario("nope")


@pytest.mark.parametrize("bench, size", [("table2", 12), ("table3", 24), ("table4", 12)])
def test_bench_sizes(registry, bench, size):
    scenarios = registry.bench(bench)
    assert len(scenarios) == size
    assert [s.name.split("/")[0] for s in scenarios][0] == BENCHES[bench][0][0]


def test_unknown_bench(registry):
    with pytest.raises(UnknownScenarioError):
        registry.bench("table9")


def test_kpi_from_tasks_example():
    tasks = [
        finished(0, ServedBy.MEC_SERVER, 0.9),
        finished(1, ServedBy.LOCAL_DEVICE, 0.5),
        finished(2, ServedBy.LOCAL_AFTER_RENEGE, 0.3),
        finished(3, ServedBy.MEC_SERVER, 0.8),
    ]
    summary = kpi_from_tasks(tasks, observing_tasks=3, observations=9)
    assert summary.admission_rate == 0.5
    assert summary.avg_utility == pytest.approx(0.625)
    assert summary.median_utility == 0.5
    assert summary.ecdf == [(0.3, 0.25), (0.5, 0.5), (0.8, 0.75), (0.9, 1.0)]
    assert (summary.task_count, summary.mec_served_count) == (4, 2)
    assert (summary.balk_count, summary.renege_count, summary.preempt_count) == (1, 1, 0)
    assert summary.mean_observations_per_task == 3.0
    assert not summary.empty


@pytest.mark.parametrize(
    "utilities, served, expected",
    [
        ((0.1, 0.2, 0.3, 0.4), (True, False, True, False), (0.5, 0.25, 0.2)),
        ((0.7,), (True,), (1.0, 0.7, 0.7)),
    ],
)
def test_kpi_hand_computed(utilities, served, expected):
    tasks = [
        finished(i, ServedBy.MEC_SERVER if mec else ServedBy.LOCAL_DEVICE, u)
        for i, (u, mec) in enumerate(zip(utilities, served))
    ]
    summary = kpi_from_tasks(tasks)
    assert summary.admission_rate == expected[0]
    assert summary.avg_utility == pytest.approx(expected[1])
    assert summary.median_utility == expected[2]
    assert summary.ecdf[-1][1] == 1.0


def test_kpi_single_task():
    summary = kpi_from_tasks([finished(0, ServedBy.LOCAL_AFTER_PREEMPT, 0.4)])
    assert summary.admission_rate == 0.0
    assert summary.avg_utility == summary.median_utility == 0.4
    assert summary.ecdf == [(0.4, 1.0)]
    assert summary.preempt_count == 1
    assert summary.mean_observations_per_task is None


def test_kpi_empty_is_absent():
    summary = kpi_from_tasks([])
    assert summary.empty
    assert math.isnan(summary.admission_rate)
    assert summary.ecdf == []


def test_empirical_cdf_properties():
    values = [0.2, 0.7, 0.2, 0.1, 0.9, 0.7, 0.7]
    ecdf = empirical_cdf(values)
    xs = [x for x, _ in ecdf]
    fs = [f for _, f in ecdf]
    assert xs == sorted(set(values))
    assert all(a < b for a, b in zip(fs, fs[1:]))
    assert fs[-1] == 1.0
    assert dict(ecdf)[0.7] == pytest.approx(6 / 7)


def test_lower_median():
    assert lower_median([4.0, 1.0, 3.0, 2.0]) == 2.0
    assert lower_median([3.0, 1.0, 2.0]) == 2.0
    assert lower_median([5.0]) == 5.0


def test_replication_seeds():
    seeds = [replication_seed(1, r) for r in range(50)]
    assert len(set(seeds)) == 50
    assert seeds == [replication_seed(1, r) for r in range(50)]
    assert replication_seed(2, 0) != seeds[0]


def test_fcfs_admits_everyone():
    summary = run_monte_carlo(small("poisson-low/fcfs"))
    assert summary.admission_rate == 1.0
    assert summary.balk_count == summary.renege_count == summary.preempt_count == 0
    assert summary.seed == 1
    assert set(summary.replication_spread) == {"admission_rate", "avg_utility", "median_utility"}


def test_runner_is_deterministic_across_workers():
    scenario = small("mmpC/R10", horizon=40.0, replications=3)
    sequential = MonteCarloRunner(workers=1).run(scenario)
    parallel = MonteCarloRunner(workers=2).run(scenario)
    assert parallel == sequential
    assert run_monte_carlo(scenario) == sequential


def test_runner_master_seed_changes_result():
    scenario = small("poisson-high/T5")
    other = scenario.model_copy(update={"master_seed": 2})
    assert run_monte_carlo(scenario).ecdf != run_monte_carlo(other).ecdf


def test_runner_counts_observations_under_imperfect_information():
    summary = run_monte_carlo(small("imperfect-low/fixed3", horizon=30.0, replications=1))
    assert summary.mean_observations_per_task >= 1.0
    assert summary.balk_count == 0


def test_runner_empty_horizon():
    scenario = small("poisson-low/R10", horizon=1e-9, replications=1)
    summary = run_monte_carlo(scenario)
    assert summary.empty
    assert summary.replication_spread == {}


def test_report_files(tmp_path):
    names = ("poisson-low/R10", "poisson-low/T5")
    named = [(name, run_monte_carlo(small(name, horizon=30.0, replications=1))) for name in names]
    report = compare_report(named)
    assert list(report.columns) == REPORT_COLUMNS
    assert list(report["method"]) == ["R10", "T5"]

    writer = ReportWriter(tmp_path)
    parsed = read_report_csv(writer.write_csv(report))
    for column in ("admission_rate", "avg_utility", "median_utility"):
        assert list(parsed[column]) == list(report[column])
    assert list(parsed["task_count"]) == list(report["task_count"])

    payload = json.loads(writer.write_json(named).read_text())
    assert [(entry["scenario"], entry["method"]) for entry in payload] == [split_name(name) for name in names]
    assert payload[0]["ecdf"][-1][1] == 1.0

    text = writer.write_text(report).read_text()
    assert "R10" in text and "T5" in text

    ecdf = read_report_csv(writer.write_ecdf_csv(named[0][1]))
    assert list(ecdf.columns) == ["utility", "cum_fraction"]
    assert ecdf["cum_fraction"].iloc[-1] == 1.0


def test_svg_is_reproducible(tmp_path):
    summary = run_monte_carlo(small("poisson-high/P3", horizon=30.0, replications=1))
    writer = ReportWriter(tmp_path)
    first = writer.write_ecdf_svg([("P3", summary)], filename="a.svg").read_bytes()
    second = writer.write_ecdf_svg([("P3", summary)], filename="b.svg").read_bytes()
    assert first == second
    assert b"<svg" in first


@pytest.mark.slow
def test_risk_policy_beats_patience_under_high_load():
    risk = run_monte_carlo(small("poisson-high/R10", horizon=300.0))
    patient = run_monte_carlo(small("poisson-high/fcfs", horizon=300.0))
    assert risk.avg_utility > patient.avg_utility
    assert risk.renege_count == 0


@pytest.mark.slow
def test_learning_policy_beats_patience_under_high_load():
    learning = run_monte_carlo(small("imperfect-high/optlearn", horizon=300.0))
    patient = run_monte_carlo(small("poisson-high/fcfs", horizon=300.0))
    assert learning.avg_utility > patient.avg_utility
    assert learning.admission_rate < 1.0


@pytest.mark.slow
def test_patient_queue_matches_mm1_utility():
    # FCFS sojourn in M/M/1 is Exp(mu - lambda), so E[u] = (mu - lambda) / (mu - lambda + beta).
    summary = run_monte_carlo(small("poisson-low/fcfs", horizon=2000.0, replications=10))
    assert summary.avg_utility == pytest.approx(0.5 / 0.6, abs=0.03)


@pytest.mark.slow
def test_low_load_risk_admission_band():
    summary = run_monte_carlo(builtin_scenario("poisson-low/R10"))
    assert summary.admission_rate == pytest.approx(0.9718, abs=0.03)
    assert summary.renege_count == 0


@pytest.mark.slow
def test_high_load_preemption_band():
    preempt = run_monte_carlo(builtin_scenario("poisson-high/P3"))
    assert preempt.avg_utility <= 0.15
    assert preempt.median_utility <= 0.05
    for name in ("poisson-high/R10", "poisson-high/T5"):
        assert run_monte_carlo(builtin_scenario(name)).avg_utility >= preempt.avg_utility + 0.05, name


@pytest.mark.slow
def test_dense_mmp_risk_band():
    for name in ("mmpC/R0.1", "mmpC/R10"):
        assert run_monte_carlo(builtin_scenario(name)).avg_utility >= 0.38, name


@pytest.mark.slow
def test_moderate_mmp_methods_agree():
    averages = [run_monte_carlo(builtin_scenario(f"mmpA/{method}")).avg_utility for method in ("R10", "T5", "P3")]
    assert max(averages) - min(averages) <= 0.07


@pytest.mark.slow
def test_low_load_learning_close_to_perfect_information():
    learning = run_monte_carlo(builtin_scenario("imperfect-low/optlearn"))
    perfect = run_monte_carlo(builtin_scenario("imperfect-low/perfect"))
    assert abs(learning.avg_utility - perfect.avg_utility) <= 0.05
