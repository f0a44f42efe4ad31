"""
Command line interface for impatient-queue.

Commands:
    run             simulate one scenario and write its KPIs, report and ECDF
    bench           run every configuration of table2, table3 or table4
    list-scenarios  print the built-in catalog
    replay          re-run a saved run directory and compare its KPIs

Exit codes: 0 success, 1 replay mismatch, 2 invalid configuration or
unknown scenario, 3 I/O failure. Logs go to stderr; stdout carries JSON.
"""

import argparse
import inspect
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from loguru import logger

from impatient_queue.config import SimulatorSettings, get_settings
from impatient_queue.errors import ConfigurationError, UnknownScenarioError
from impatient_queue.experiments import BENCHES, MonteCarloRunner, ReportWriter, ScenarioRegistry, compare_report
from impatient_queue.models.kpi import KpiSummary
from impatient_queue.models.scenario import ScenarioConfig
from impatient_queue.parser import EventLogWriter, ScenarioParser
from impatient_queue.sim import ensure_scenario, replication_seed, run_simulation

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_IO = 3

FORMATS = ("csv", "json", "svg")


class InterceptHandler(logging.Handler):
    """Route stdlib logging records into loguru."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno
        frame, depth = inspect.currentframe(), 0
        while frame and (depth == 0 or frame.f_code.co_filename == logging.__file__):
            frame = frame.f_back
            depth += 1
        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def setup_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level.upper(), format="{time:HH:mm:ss} | {level: <7} | {name} | {message}")
    logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)


def _formats(value: str) -> Tuple[str, ...]:
    chosen = tuple(part.strip() for part in value.split(",") if part.strip())
    unknown = [part for part in chosen if part not in FORMATS]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown format(s) {unknown}; choose from {', '.join(FORMATS)}")
    return chosen


def build_parser(settings: SimulatorSettings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="impatient-queue", description="Risk-based balking and reneging for MEC task offloading"
    )
    parser.add_argument("--log-level", default=settings.log_level, help="stderr log level")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (default: scenario's)")
    common.add_argument("--replications", type=int, default=None, help="Monte-Carlo replications")
    common.add_argument("--horizon", type=float, default=None, help="arrival horizon in time units")
    common.add_argument("--output-dir", type=Path, default=None, help="directory for artifacts")
    common.add_argument("--formats", type=_formats, default=("csv", "json"), help="comma list of csv,json,svg")
    common.add_argument("--workers", type=int, default=settings.workers, help="parallel replication workers")

    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="simulate one scenario")
    source = run.add_mutually_exclusive_group(required=True)
    source.add_argument("--scenario", help="catalog key, e.g. poisson-low/R10")
    source.add_argument("--config", type=Path, help="JSON scenario file")
    run.add_argument("--debug-events", action="store_true", help="write events.ndjson for the first replication")

    bench = sub.add_parser("bench", parents=[common], help="run a table of configurations")
    bench.add_argument("bench", choices=sorted(BENCHES))

    sub.add_parser("list-scenarios", help="print the built-in catalog")

    replay = sub.add_parser("replay", help="re-run a saved run directory")
    replay.add_argument("run_dir", type=Path)
    replay.add_argument("--workers", type=int, default=settings.workers)
    return parser


def apply_overrides(
    scenario: ScenarioConfig, args: argparse.Namespace, settings: Optional[SimulatorSettings] = None
) -> ScenarioConfig:
    """
    Apply --seed, --replications and --horizon.

    Catalog scenarios pass `settings`, whose horizon, replication count and
    seed (environment-overridable) stand in for flags that were not given.
    Scenarios read from a file keep their own values.
    """
    updates = {}
    if settings is not None:
        updates = {
            "master_seed": settings.master_seed,
            "replications": settings.replications,
            "horizon": settings.horizon,
        }
    if args.seed is not None:
        updates["master_seed"] = args.seed
    if args.replications is not None:
        updates["replications"] = args.replications
    if args.horizon is not None:
        updates["horizon"] = args.horizon
    if not updates:
        return scenario
    return ensure_scenario({**scenario.model_dump(), **updates})


def _slug(name: str) -> str:
    return name.replace("/", "_")


def _print_json(payload) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    sys.stdout.flush()


def _kpi_line(name: str, summary: KpiSummary) -> dict:
    return {"name": name, **summary.model_dump(mode="json", exclude={"ecdf", "replication_spread"})}


def cmd_run(args: argparse.Namespace, settings: SimulatorSettings) -> int:
    registry = ScenarioRegistry()
    parser = ScenarioParser()
    if args.scenario:
        scenario = apply_overrides(registry.get(args.scenario), args, settings)
    else:
        scenario = apply_overrides(parser.parse_file(args.config), args)
    output_dir = args.output_dir or Path(settings.output_dir) / _slug(scenario.name)

    summary = MonteCarloRunner(workers=args.workers).run(scenario)
    writer = ReportWriter(output_dir)
    named = [(scenario.name, summary)]
    parser.write_file(scenario, output_dir / "scenario.json")
    writer.write_kpi(summary)
    writer.write_csv(compare_report(named))
    writer.write_ecdf_csv(summary)
    if "json" in args.formats:
        writer.write_json(named)
    if "svg" in args.formats:
        writer.write_ecdf_svg(named)
    if args.debug_events:
        _, events = run_simulation(scenario, replication_seed(scenario.master_seed, 0))
        EventLogWriter().write(events, output_dir / "events.ndjson")
    _print_json(_kpi_line(scenario.name, summary))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, settings: SimulatorSettings) -> int:
    registry = ScenarioRegistry()
    runner = MonteCarloRunner(workers=args.workers)
    output_dir = args.output_dir or Path(settings.output_dir) / args.bench
    writer = ReportWriter(output_dir)

    named: List[Tuple[str, KpiSummary]] = []
    for scenario in registry.bench(args.bench):
        scenario = apply_overrides(scenario, args, settings)
        summary = runner.run(scenario)
        named.append((scenario.name, summary))
        writer.write_ecdf_csv(summary, filename=f"ecdf_{_slug(scenario.name)}.csv")

    report = compare_report(named)
    writer.write_csv(report)
    writer.write_text(report)
    if "json" in args.formats:
        writer.write_json(named)
    if "svg" in args.formats:
        for group in dict.fromkeys(name.split("/")[0] for name, _ in named):
            curves = [(name.split("/")[1], summary) for name, summary in named if name.startswith(f"{group}/")]
            writer.write_ecdf_svg(curves, filename=f"ecdf_{group}.svg")
    for name, summary in named:
        _print_json(_kpi_line(name, summary))
    return EXIT_OK


def cmd_list_scenarios(args: argparse.Namespace, settings: SimulatorSettings) -> int:
    for name in ScenarioRegistry().names():
        sys.stdout.write(name + "\n")
    return EXIT_OK


def cmd_replay(args: argparse.Namespace, settings: SimulatorSettings) -> int:
    """Re-run the scenario saved in a run directory; exit 0 iff kpi.json is reproduced byte for byte."""
    run_dir = Path(args.run_dir)
    scenario = ScenarioParser().parse_file(run_dir / "scenario.json")
    saved = (run_dir / "kpi.json").read_text()
    recorded_seed = json.loads(saved).get("seed")
    if recorded_seed is not None and recorded_seed != scenario.master_seed:
        raise ConfigurationError(f"kpi.json seed {recorded_seed} differs from scenario seed {scenario.master_seed}")
    summary = MonteCarloRunner(workers=args.workers).run(scenario)
    reproduced = summary.model_dump_json(indent=2) + "\n"
    if reproduced != saved:
        logging.getLogger(__name__).error(f"Replay of {run_dir} does not reproduce kpi.json")
        return EXIT_MISMATCH
    logging.getLogger(__name__).info(f"Replay of {run_dir} reproduced kpi.json")
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "bench": cmd_bench,
    "list-scenarios": cmd_list_scenarios,
    "replay": cmd_replay,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = get_settings()
    args = build_parser(settings).parse_args(argv)
    setup_logging(args.log_level)
    try:
        return COMMANDS[args.command](args, settings)
    except (ConfigurationError, UnknownScenarioError) as e:
        logger.error(str(e))
        sys.stderr.write(f"error: {e}\n")
        return EXIT_CONFIG
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
