#!/usr/bin/env python3
"""Render sweep CSVs into figure panels.

Reads the experiment harness CSV schema

    axis,value,estimator,mean_distance,sd_distance,mean_time_ns,sd_time_ns,trials

and writes, per swept axis, one distance panel and one runtime panel
(mean with standard-deviation error bars, one curve per estimator,
runtime on a log scale).  Pure CSV-to-image transformation: nothing is
recomputed beyond what plotting needs, and identical input produces
identical output files.

Usage: plot_sweep.py --csv <path> --out <dir>
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "plot-sweep"  # stable SVG element ids
import matplotlib.pyplot as plt

REQUIRED_COLUMNS = (
    "axis", "value", "estimator",
    "mean_distance", "sd_distance", "mean_time_ns", "sd_time_ns", "trials",
)
METRICS = {
    "distance": ("mean_distance", "sd_distance", "clock distance"),
    "time": ("mean_time_ns", "sd_time_ns", "runtime (ns)"),
}
FIGSIZE = (4.0, 3.0)
STYLE = {"fastclock": dict(color="#1f77b4", marker="o"),
         "dp": dict(color="#d62728", marker="s")}


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class PanelSpec:
    """One output panel: a metric plotted against one swept axis."""

    axis: str
    metric: str  # "distance" | "time"
    log_x: bool = False
    log_y: bool = False
    filename: str = ""

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {sorted(METRICS)}, got {self.metric!r}")
        if not self.filename:
            object.__setattr__(self, "filename", f"{self.axis}_{self.metric}")


@dataclass
class SweepTable:
    rows: list[dict] = field(default_factory=list)

    @classmethod
    def read(cls, csv_path) -> "SweepTable":
        with open(csv_path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in REQUIRED_COLUMNS if c not in header]
            if missing:
                raise SchemaError(f"{csv_path}: missing column {missing[0]!r}")
            rows = list(reader)
        if not rows:
            raise SchemaError(f"{csv_path}: no data rows, nothing to plot")
        return cls(rows)

    def axes(self) -> list[str]:
        seen: list[str] = []
        for row in self.rows:
            if row["axis"] not in seen:
                seen.append(row["axis"])
        return seen

    def estimators(self, axis: str) -> list[str]:
        seen: list[str] = []
        for row in self.rows:
            if row["axis"] == axis and row["estimator"] not in seen:
                seen.append(row["estimator"])
        return seen

    def series(self, axis: str, estimator: str, mean_col: str, sd_col: str):
        xs, means, sds = [], [], []
        for row in self.rows:
            if row["axis"] != axis or row["estimator"] != estimator:
                continue
            if int(row["trials"]) == 0 or not row[mean_col]:
                continue  # skipped or fully degenerate point
            xs.append(float(row["value"]))
            means.append(float(row[mean_col]))
            sds.append(float(row[sd_col]))
        return xs, means, sds


def default_panels(table: SweepTable) -> list[PanelSpec]:
    """Distance and runtime panel per swept axis; runtime on log y."""
    panels = []
    for axis in table.axes():
        panels.append(PanelSpec(axis=axis, metric="distance"))
        panels.append(PanelSpec(axis=axis, metric="time", log_y=True))
    return panels


def plot_sweep(csv_path, panel_specs: list[PanelSpec], out_dir) -> list[Path]:
    """Render every panel as PNG and SVG; returns the written files."""
    table = csv_path if isinstance(csv_path, SweepTable) else SweepTable.read(csv_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for spec in panel_specs:
        mean_col, sd_col, ylabel = METRICS[spec.metric]
        fig, ax = plt.subplots(figsize=FIGSIZE)
        plotted = False
        for estimator in table.estimators(spec.axis):
            xs, means, sds = table.series(spec.axis, estimator, mean_col, sd_col)
            if not xs:
                continue
            ax.errorbar(xs, means, yerr=sds, label=estimator, capsize=3,
                        **STYLE.get(estimator, {}))
            plotted = True
        if not plotted:
            plt.close(fig)
            raise SchemaError(f"no plottable rows for axis {spec.axis!r}")
        if spec.log_x:
            ax.set_xscale("log")
        if spec.log_y:
            ax.set_yscale("log")
        ax.set_xlabel(spec.axis)
        ax.set_ylabel(ylabel)
        ax.legend()
        fig.tight_layout()
        for ext in ("png", "svg"):
            path = out_dir / f"{spec.filename}.{ext}"
            fig.savefig(path, metadata={"Date": None} if ext == "svg" else
                        {"Software": None})
            written.append(path)
        plt.close(fig)
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--csv", required=True, help="sweep results CSV")
    parser.add_argument("--out", required=True, help="output directory for panels")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        table = SweepTable.read(args.csv)
        files = plot_sweep(table, default_panels(table), args.out)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
