"""
Report emission: comparison tables, KPI JSON, ECDF data and ECDF plots.
"""

import json
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from impatient_queue.models.kpi import KpiSummary  # noqa: E402

REPORT_COLUMNS = [
    "scenario",
    "method",
    "admission_rate",
    "avg_utility",
    "median_utility",
    "task_count",
    "balk_count",
    "renege_count",
    "preempt_count",
    "mean_observations_per_task",
]

# Fixed SVG ids and no timestamp keep plots byte-identical across runs.
plt.rcParams["svg.hashsalt"] = "impatient-queue"
SVG_METADATA = {"Date": None}


def split_name(name: str) -> Tuple[str, str]:
    """`scenario/method` -> (scenario, method); names without a method get an empty one."""
    scenario, _, method = name.partition("/")
    return scenario, method


def compare_report(summaries: Sequence[Tuple[str, KpiSummary]]) -> pd.DataFrame:
    """
    One row per named summary, in the given order.

    Args:
        summaries: (catalog key, summary) pairs

    Returns:
        A DataFrame with REPORT_COLUMNS

    """
    rows = []
    for name, summary in summaries:
        scenario, method = split_name(name)
        row = {"scenario": scenario, "method": method}
        for column in REPORT_COLUMNS[2:]:
            row[column] = getattr(summary, column)
        rows.append(row)
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def read_report_csv(path: Path) -> pd.DataFrame:
    """Parse a report written by ReportWriter.write_csv; floats round-trip exactly."""
    return pd.read_csv(path, float_precision="round_trip", keep_default_na=False, na_values=[""])


def ecdf_frame(summary: KpiSummary) -> pd.DataFrame:
    return pd.DataFrame(summary.ecdf, columns=["utility", "cum_fraction"])


class ReportWriter:
    """
    Writes reports and ECDF artifacts into an output directory.

    Every file is written in one call, so two identical runs produce
    byte-identical files.
    """

    def __init__(self, output_dir: Path, logger: Optional[logging.Logger] = None):
        self.output_dir = Path(output_dir)
        self.logger = logger or logging.getLogger(__name__)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def _path(self, filename: str) -> Path:
        return self.output_dir / filename

    def write_csv(self, report: pd.DataFrame, filename: str = "report.csv") -> Path:
        path = self._path(filename)
        report.to_csv(path, index=False, lineterminator="\n")
        self.logger.info(f"Wrote {path}")
        return path

    def write_text(self, report: pd.DataFrame, filename: str = "report.txt") -> Path:
        path = self._path(filename)
        path.write_text(report.to_string(index=False) + "\n")
        self.logger.info(f"Wrote {path}")
        return path

    def write_json(self, summaries: Sequence[Tuple[str, KpiSummary]], filename: str = "report.json") -> Path:
        """One object per method: its KPI fields and ECDF array."""
        path = self._path(filename)
        payload = []
        for name, summary in summaries:
            scenario, method = split_name(name)
            payload.append({"scenario": scenario, "method": method, **summary.model_dump(mode="json")})
        path.write_text(json.dumps(payload, indent=2) + "\n")
        self.logger.info(f"Wrote {path}")
        return path

    def write_kpi(self, summary: KpiSummary, filename: str = "kpi.json") -> Path:
        path = self._path(filename)
        path.write_text(summary.model_dump_json(indent=2) + "\n")
        self.logger.info(f"Wrote {path}")
        return path

    def write_ecdf_csv(self, summary: KpiSummary, filename: str = "ecdf.csv") -> Path:
        path = self._path(filename)
        ecdf_frame(summary).to_csv(path, index=False, lineterminator="\n")
        self.logger.info(f"Wrote {path}")
        return path

    def write_ecdf_svg(self, curves: Iterable[Tuple[str, KpiSummary]], filename: str = "ecdf.svg") -> Path:
        """Step plot of one or more utility ECDFs."""
        path = self._path(filename)
        fig, ax = plt.subplots(figsize=(6, 4))
        labels: List[str] = []
        for label, summary in curves:
            if summary.empty:
                continue
            frame = ecdf_frame(summary)
            ax.step(frame["utility"], frame["cum_fraction"], where="post", label=label)
            labels.append(label)
        ax.set_xlabel("end utility")
        ax.set_ylabel("cumulative fraction of tasks")
        ax.set_xlim(0.0, 1.0)
        ax.set_ylim(0.0, 1.0)
        ax.grid(True, linewidth=0.5)
        if len(labels) > 1:
            ax.legend(fontsize="small")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata=SVG_METADATA)
        plt.close(fig)
        self.logger.info(f"Wrote {path}")
        return path
