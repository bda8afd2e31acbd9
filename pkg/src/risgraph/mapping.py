"""Interference-graph construction: the conservative baseline and the three
ordered conflict-selection methods.

The baseline (zim) connects every overlapping pair.  The ordered methods
walk each primary's overlapping secondaries in a chosen order, accumulate
their interference powers, and connect only the secondary at which the
accumulated SNIR drops to the threshold plus all later ones; earlier
secondaries are tolerated.  Half-duplex pairs are connected in every method.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .channel import Segment, snir_value
from .errors import DomainError
from .interference import ConflictMatrix, shares_relay_opposite_roles

METHOD_ZIM = "zim"
METHOD_RCS = "rcs"
METHOD_DCS = "dcs"
METHOD_ICS = "ics"
METHODS = (METHOD_ZIM, METHOD_RCS, METHOD_DCS, METHOD_ICS)


@dataclass(frozen=True)
class OrderingPolicy:
    """How a primary's overlapping secondaries are walked.

    Ties on equal interference power break by ascending vertex id; the
    random policy derives one independent permutation per primary from
    (seed, primary id).
    """

    kind: str  # "increasing" | "decreasing" | "random"
    seed: Union[int, str, None] = None

    def __post_init__(self) -> None:
        if self.kind not in ("increasing", "decreasing", "random"):
            raise DomainError(f"unknown ordering policy {self.kind!r}")
        if self.kind == "random" and self.seed is None:
            raise DomainError("random policy needs a seed")

    def order(self, primary: str, couples: list[tuple[str, float]]) -> list[tuple[str, float]]:
        if self.kind == "increasing":
            return sorted(couples, key=lambda sd: (sd[1], sd[0]))
        if self.kind == "decreasing":
            return sorted(couples, key=lambda sd: (-sd[1], sd[0]))
        ids = sorted(couples, key=lambda sd: sd[0])
        rng = random.Random(f"{self.seed}|{primary}")
        rng.shuffle(ids)
        return ids


@dataclass(frozen=True)
class SinrContext:
    """Per-vertex signal numerators plus shared noise and threshold."""

    numerators: Mapping[str, float]
    noise: float
    t_linear: float


@dataclass(frozen=True)
class InterferenceGraph:
    method: str
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]  # each (a, b) with a < b, sorted
    directed_conflicts: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    @property
    def edge_set(self) -> frozenset[frozenset[str]]:
        return frozenset(frozenset(e) for e in self.edges)


def _finish_edges(raw: set[frozenset[str]]) -> tuple[tuple[str, str], ...]:
    return tuple(sorted(tuple(sorted(e)) for e in raw))


def conflict_suffix_start(
    ordered_deltas: Sequence[float], numerator: float, noise: float, t_linear: float
) -> Optional[int]:
    """Index at which the accumulated interference pushes SNIR to or below
    the threshold; None when the whole set is tolerated."""
    cum = 0.0
    for j, delta in enumerate(ordered_deltas):
        cum += delta
        if snir_value(numerator, noise, cum) <= t_linear:
            return j
    return None


def zim(matrix: ConflictMatrix) -> InterferenceGraph:
    """Baseline: an edge for every overlapping pair, no power calculation."""
    raw: set[frozenset[str]] = {frozenset(k) for k in matrix.entries}
    raw |= set(matrix.structural_pairs)
    return InterferenceGraph(
        method=METHOD_ZIM, vertices=matrix.vertices, edges=_finish_edges(raw)
    )


def ordered_mapping(
    matrix: ConflictMatrix,
    policy: OrderingPolicy,
    ctx: SinrContext,
    method: str,
) -> InterferenceGraph:
    """Accumulate per-primary interference in policy order and connect the
    crossing secondary plus every later one."""
    raw: set[frozenset[str]] = set(matrix.structural_pairs)
    directed: dict[str, tuple[str, ...]] = {}
    for primary in matrix.vertices:
        couples = matrix.secondaries_of(primary)
        if not couples:
            continue
        ordered = policy.order(primary, couples)
        start = conflict_suffix_start(
            [d for _, d in ordered], ctx.numerators[primary], ctx.noise, ctx.t_linear
        )
        if start is None:
            continue
        suffix = tuple(s for s, _ in ordered[start:])
        directed[primary] = suffix
        for s in suffix:
            raw.add(frozenset((primary, s)))
    return InterferenceGraph(
        method=method,
        vertices=matrix.vertices,
        edges=_finish_edges(raw),
        directed_conflicts=directed,
    )


def dcs(matrix: ConflictMatrix, ctx: SinrContext) -> InterferenceGraph:
    return ordered_mapping(matrix, OrderingPolicy("decreasing"), ctx, METHOD_DCS)


def ics(matrix: ConflictMatrix, ctx: SinrContext) -> InterferenceGraph:
    return ordered_mapping(matrix, OrderingPolicy("increasing"), ctx, METHOD_ICS)


def rcs(matrix: ConflictMatrix, ctx: SinrContext, seed: Union[int, str]) -> InterferenceGraph:
    return ordered_mapping(matrix, OrderingPolicy("random", seed), ctx, METHOD_RCS)


def build_all(
    matrix: ConflictMatrix, ctx: SinrContext, rcs_seed: Union[int, str]
) -> dict[str, InterferenceGraph]:
    return {
        METHOD_ZIM: zim(matrix),
        METHOD_RCS: rcs(matrix, ctx, rcs_seed),
        METHOD_DCS: dcs(matrix, ctx),
        METHOD_ICS: ics(matrix, ctx),
    }


def structural_edges(segments: Iterable[Segment]) -> tuple[tuple[str, str], ...]:
    """Edges forced by repeaters shared in opposite roles."""
    segs = list(segments)
    raw: set[frozenset[str]] = set()
    for p in segs:
        for s in segs:
            if p.id != s.id and shares_relay_opposite_roles(p, s):
                raw.add(frozenset((p.id, s.id)))
    return _finish_edges(raw)
