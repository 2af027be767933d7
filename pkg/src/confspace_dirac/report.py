"""Report emission: JSON-lines check records, delimited spectrum/kernel
tables, and rendered figures.

The report and the tables are byte-stable for a fixed config and seed; wall
times and environment details go to a separate sidecar that carries no
determinism guarantee.
"""

from __future__ import annotations

import csv
import json
import os

import numpy as np

from .config import ExperimentConfig
from .suites import SuiteResult

TABLE_FORMATS = ("csv", "json-lines")


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"))


def write_report(results: list[SuiteResult], config: ExperimentConfig, path: str):
    """One JSON line per check, then one summary line per suite."""
    cfg_hash = config.config_hash()
    lines = []
    for res in results:
        for c in res.checks:
            lines.append(_dump({
                "type": "check",
                "suite": c.suite,
                "name": c.name,
                "anchor": c.anchor,
                "residual": c.residual,
                "tolerance": c.tolerance,
                "passed": c.passed,
                "note": c.note,
                "seed": config.seed,
                "config_hash": cfg_hash,
            }))
        lines.append(_dump({
            "type": "suite-summary",
            "suite": res.suite,
            "checks": len(res.checks),
            "failures": sum(1 for c in res.checks if not c.passed),
            "constants": res.constants,
            "notes": res.notes,
            "seed": config.seed,
            "config_hash": cfg_hash,
            "config": config.raw,
        }))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_tables(results: list[SuiteResult], out_dir: str, fmt: str = "csv"):
    if fmt not in TABLE_FORMATS:
        raise ValueError(f"table format must be one of {TABLE_FORMATS}, got {fmt!r}")
    os.makedirs(out_dir, exist_ok=True)
    spectra = [(r.suite, label, idx, val, resid)
               for r in results for (label, idx, val, resid) in r.spectra]
    kernels = [(r.suite, m1, m2, comp, val)
               for r in results for (m1, m2, comp, val) in r.kernels]
    if fmt == "csv":
        _write_csv(os.path.join(out_dir, "spectra.csv"),
                   ("suite", "label", "index", "eigenvalue", "residual"), spectra)
        _write_csv(os.path.join(out_dir, "kernels.csv"),
                   ("suite", "m1", "m2", "component", "value"), kernels)
    else:
        _write_jsonl_table(os.path.join(out_dir, "spectra.jsonl"),
                           ("suite", "label", "index", "eigenvalue", "residual"), spectra)
        _write_jsonl_table(os.path.join(out_dir, "kernels.jsonl"),
                           ("suite", "m1", "m2", "component", "value"), kernels)


def _fmt_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv(path: str, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt_cell(v) for v in row])


def _write_jsonl_table(path: str, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(_dump(dict(zip(header, row))) + "\n")


def write_run_meta(results: list[SuiteResult], config: ExperimentConfig, path: str):
    """Sidecar with wall times; excluded from the byte-stability guarantee."""
    from . import __version__

    meta = {
        "version": __version__,
        "config_hash": config.config_hash(),
        "seed": config.seed,
        "elapsed_seconds": {r.suite: round(r.elapsed, 3) for r in results},
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(meta, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# Figures
# ---------------------------------------------------------------------------

def render_figures(results: list[SuiteResult], out_dir: str) -> list[str]:
    """Render the residual charts and any suite curves to PNG files."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(out_dir, exist_ok=True)
    written = []
    meta = {"Software": "confspace-dirac"}

    for res in results:
        if not res.checks:
            continue
        fig, ax = plt.subplots(figsize=(8.0, 0.5 + 0.32 * len(res.checks)))
        names = [c.name for c in res.checks]
        residuals = np.array([max(c.residual, 1e-18) for c in res.checks])
        tols = np.array([c.tolerance for c in res.checks])
        y = np.arange(len(names))
        colors = ["#2a7e43" if c.passed else "#b03a2e" for c in res.checks]
        ax.barh(y, residuals, color=colors, height=0.6)
        ax.plot(tols, y, "k|", markersize=10, label="tolerance")
        ax.set_xscale("log")
        ax.set_yticks(y)
        ax.set_yticklabels(names, fontsize=7)
        ax.invert_yaxis()
        ax.set_xlabel("measured residual (log scale)")
        ax.set_title(f"{res.suite}: residuals against tolerances")
        ax.legend(loc="lower right", fontsize=7)
        fig.tight_layout()
        path = os.path.join(out_dir, f"{res.suite}-residuals.png")
        fig.savefig(path, dpi=110, metadata=meta)
        plt.close(fig)
        written.append(path)

    curve_groups = {}
    for res in results:
        for label, (xs, ys) in res.curves.items():
            curve_groups.setdefault(res.suite, []).append((label, xs, ys))
    for suite, curves in curve_groups.items():
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for label, xs, ys in curves:
            ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.2, label=label)
        ax.set_title(f"{suite}: profiles")
        ax.set_xlabel("index")
        ax.grid(alpha=0.3)
        ax.legend(fontsize=7)
        fig.tight_layout()
        path = os.path.join(out_dir, f"{suite}-profiles.png")
        fig.savefig(path, dpi=110, metadata=meta)
        plt.close(fig)
        written.append(path)
    return written
