"""Experiment sweeps: per-test pipeline, CSV emission and graph dumps.

Each test draws its own scenario from (master seed + test id), routes all
pairs, builds the conflict matrix, runs the four mapping methods and
reports their metrics.  Results are independent of worker count and
iteration order: rows are keyed by (test id, method) and written sorted.

results.csv is byte-stable across reruns; wall-clock build times go to a
separate timings.csv because they can never be.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from . import mapping, metrics, network
from .channel import Segment, threshold_distance
from .config import ExperimentConfig
from .geometry import BeamChain, build_beam_chain
from .interference import ConflictMatrix, build_conflict_matrix
from .mapping import METHODS, InterferenceGraph, SinrContext

CSV_COLUMNS = (
    "test_id",
    "method",
    "num_pairs",
    "blocked_pairs",
    "num_segments",
    "C",
    "ratio_vs_zim",
    "A",
    "F",
)


@dataclass(frozen=True)
class TestOutcome:
    """Everything one test produced, for callers that inspect internals."""

    test_id: int
    segments: tuple[Segment, ...]
    chains: dict[str, BeamChain]
    matrix: ConflictMatrix
    graphs: dict[str, InterferenceGraph]
    reports: dict[str, metrics.MetricsReport]
    ctx: SinrContext
    num_pairs: int
    blocked_pairs: int
    build_time_ms: float


def simulate_test(config: ExperimentConfig, test_id: int) -> TestOutcome:
    """Run one full test: scenario, routing, chains, matrix, four graphs."""
    params = config.channel_params()
    ris = config.ris_geometry()
    scenario = network.generate_scenario(config.scenario_spec(), config.seed + test_id)
    routing = network.route_all(scenario, params, backup=config.backup)
    segments = tuple(network.segment_paths(routing.paths))

    chains: dict[str, BeamChain] = {}
    for seg in segments:
        d_th = threshold_distance(seg, params)
        chains[seg.id] = build_beam_chain(seg, d_th, params.alpha, ris)

    g2 = params.gain * params.gain
    ctx = SinrContext(
        numerators={seg.id: seg.p_eu * g2 for seg in segments},
        noise=params.noise,
        t_linear=params.t_snr_linear,
    )

    started = time.perf_counter()
    matrix = build_conflict_matrix(segments, chains, params, ris)
    graphs = mapping.build_all(matrix, ctx, rcs_seed=f"{config.seed}:{test_id}")
    build_time_ms = (time.perf_counter() - started) * 1000.0

    num_pairs = len({seg.pair_id for seg in segments if seg.backup_of is None})
    c_zim = metrics.conflict_complexity(graphs[mapping.METHOD_ZIM])
    reports = {
        method: metrics.build_report(graphs[method], num_pairs, c_zim)
        for method in METHODS
    }
    return TestOutcome(
        test_id=test_id,
        segments=segments,
        chains=chains,
        matrix=matrix,
        graphs=graphs,
        reports=reports,
        ctx=ctx,
        num_pairs=num_pairs,
        blocked_pairs=len(routing.blocked_pairs),
        build_time_ms=build_time_ms,
    )


def _fmt(value: float) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def outcome_rows(outcome: TestOutcome) -> list[dict[str, object]]:
    rows = []
    for method in METHODS:
        rep = outcome.reports[method]
        rows.append(
            {
                "test_id": outcome.test_id,
                "method": method,
                "num_pairs": outcome.num_pairs,
                "blocked_pairs": outcome.blocked_pairs,
                "num_segments": len(outcome.segments),
                "C": rep.conflict_complexity,
                "ratio_vs_zim": rep.ratio_vs_zim,
                "A": rep.avg_conflicts,
                "F": rep.fraction_of_time,
            }
        )
    return rows


def dump_graph(graph: InterferenceGraph) -> str:
    """Structured text dump: method line, sorted vertices, sorted edges."""
    lines = [f"method {graph.method}"]
    lines.extend(f"vertex {v}" for v in sorted(graph.vertices))
    lines.extend(f"edge {a} {b}" for a, b in graph.edges)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class _SlimResult:
    test_id: int
    rows: tuple[tuple, ...]
    dumps: Optional[dict[str, str]]
    build_time_ms: float


def _run_one(args: tuple[ExperimentConfig, int, bool]) -> _SlimResult:
    config, test_id, want_dumps = args
    outcome = simulate_test(config, test_id)
    rows = tuple(
        tuple(row[col] for col in CSV_COLUMNS) for row in outcome_rows(outcome)
    )
    dumps = (
        {method: dump_graph(outcome.graphs[method]) for method in METHODS}
        if want_dumps
        else None
    )
    return _SlimResult(test_id, rows, dumps, outcome.build_time_ms)


def rows_to_csv(rows: Iterable[tuple]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def run_experiment(
    config: ExperimentConfig,
    out_dir: Path,
    dump_graphs: bool = False,
    workers: int = 1,
    make_plots: bool = True,
) -> Path:
    """Run all tests and write results.csv (+ timings.csv, dumps, figures).

    Returns the path of the results file.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(config, t, dump_graphs) for t in range(config.tests)]

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(job) for job in jobs]
    results.sort(key=lambda r: r.test_id)

    all_rows = [row for res in results for row in res.rows]
    results_path = out_dir / "results.csv"
    results_path.write_text(rows_to_csv(all_rows))

    with (out_dir / "timings.csv").open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("test_id", "build_time_ms"))
        for res in results:
            writer.writerow((res.test_id, f"{res.build_time_ms:.3f}"))

    if dump_graphs:
        graph_dir = out_dir / "graphs"
        graph_dir.mkdir(exist_ok=True)
        for res in results:
            for method, text in (res.dumps or {}).items():
                (graph_dir / f"test{res.test_id:04d}_{method}.txt").write_text(text)

    if make_plots:
        from .plots import render_metric_figures

        render_metric_figures(all_rows, out_dir)
    return results_path
