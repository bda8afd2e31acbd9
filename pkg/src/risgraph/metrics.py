"""Scheduling metrics of an interference graph.

Conflict complexity counts both directions of every edge.  A pair's
average conflict load divides the complexity by the number of source/sink
communication pairs, and its reciprocal (capped at one) is the fraction of
time a pair can occupy the spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .mapping import InterferenceGraph


@dataclass(frozen=True)
class MetricsReport:
    method: str
    conflict_complexity: int
    num_pairs: int
    avg_conflicts: float       # uncapped C / N_p
    fraction_of_time: float    # min(1, 1/avg), 1.0 when conflict-free
    ratio_vs_zim: float


def conflict_complexity(graph: InterferenceGraph) -> int:
    return 2 * len(graph.edges)


def reduction_ratio(c_zim: int, c_method: int) -> float:
    if c_zim < 0 or c_method < 0:
        raise ValueError("conflict counts must be nonnegative")
    if c_method == 0:
        return 1.0 if c_zim == 0 else math.inf
    return c_zim / c_method


def fraction_of_time(conflicts: int, num_pairs: int) -> tuple[float, float]:
    """(average conflicts per pair, fraction of time).

    A conflict-free graph leaves every pair the whole spectrum; with no
    pairs at all the load is undefined.
    """
    if conflicts == 0:
        return 0.0, 1.0
    if num_pairs == 0:
        return math.nan, math.nan
    avg = conflicts / num_pairs
    return avg, min(1.0, 1.0 / avg)


def build_report(graph: InterferenceGraph, num_pairs: int, c_zim: int) -> MetricsReport:
    c = conflict_complexity(graph)
    avg, frac = fraction_of_time(c, num_pairs)
    return MetricsReport(
        method=graph.method,
        conflict_complexity=c,
        num_pairs=num_pairs,
        avg_conflicts=avg,
        fraction_of_time=frac,
        ratio_vs_zim=reduction_ratio(c_zim, c),
    )
