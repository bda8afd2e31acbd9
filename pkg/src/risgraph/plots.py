"""Figure rendering for experiment reports.

Three figures mirror the emitted metrics: conflict complexity per test,
reduction ratio versus the baseline, and fraction of time.  Files land
next to the delimited output.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .experiment import CSV_COLUMNS
from .mapping import METHODS

_STYLE = {
    "zim": dict(color="tab:red", marker="s"),
    "rcs": dict(color="tab:orange", marker="^"),
    "dcs": dict(color="tab:blue", marker="o"),
    "ics": dict(color="tab:green", marker="d"),
}


def _series(rows: Sequence[tuple], column: str) -> dict[str, tuple[list, list]]:
    col = CSV_COLUMNS.index(column)
    test_col = CSV_COLUMNS.index("test_id")
    method_col = CSV_COLUMNS.index("method")
    out: dict[str, tuple[list, list]] = {m: ([], []) for m in METHODS}
    for row in rows:
        value = row[col]
        if isinstance(value, float) and not math.isfinite(value):
            continue
        xs, ys = out[row[method_col]]
        xs.append(row[test_col])
        ys.append(value)
    return out


def _plot(rows: Sequence[tuple], column: str, ylabel: str, path: Path, skip: Iterable[str] = ()) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for method, (xs, ys) in _series(rows, column).items():
        if method in skip or not xs:
            continue
        ax.plot(xs, ys, label=method.upper(), markersize=3, linewidth=0.9, **_STYLE[method])
    ax.set_xlabel("test")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_metric_figures(rows: Sequence[tuple], out_dir: Path) -> list[Path]:
    out_dir = Path(out_dir)
    targets = [
        ("C", "conflict complexity", "conflict_complexity.png", ()),
        ("ratio_vs_zim", "complexity reduction vs baseline", "reduction_ratio.png", ("zim",)),
        ("F", "fraction of time", "fraction_of_time.png", ()),
    ]
    written = []
    for column, ylabel, filename, skip in targets:
        path = out_dir / filename
        _plot(rows, column, ylabel, path, skip)
        written.append(path)
    return written
