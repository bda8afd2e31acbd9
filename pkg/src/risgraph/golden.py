"""Replay of an abstract conflict fixture, bypassing the geometry pipeline.

A fixture lists graph vertices, directed interference values, half-duplex
pairs and backup exemptions together with the SNIR numerator, noise and
linear threshold.  Feeding it through the mapping methods exercises the
graph construction in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Union

from .errors import FixtureError
from .interference import ConflictMatrix, MatrixEntry
from .mapping import (
    METHOD_DCS,
    METHOD_ICS,
    METHOD_ZIM,
    InterferenceGraph,
    SinrContext,
    dcs,
    ics,
    zim,
)
from .metrics import conflict_complexity

DEFAULT_FIXTURE = "reference_fixture.txt"


@dataclass(frozen=True)
class GoldenFixture:
    vertices: tuple[str, ...]
    conflicts: dict[tuple[str, str], float]
    half_duplex: frozenset[frozenset[str]]
    exempt: frozenset[frozenset[str]]
    numerator: float
    noise: float
    t_linear: float

    def to_matrix(self) -> ConflictMatrix:
        entries = {
            key: MatrixEntry(
                delta=delta,
                hits=(),
                structural=frozenset(key) in self.half_duplex,
            )
            for key, delta in self.conflicts.items()
        }
        return ConflictMatrix(
            vertices=self.vertices,
            entries=entries,
            structural_pairs=self.half_duplex,
            exempt_pairs=self.exempt,
        )

    def sinr_context(self) -> SinrContext:
        return SinrContext(
            numerators={v: self.numerator for v in self.vertices},
            noise=self.noise,
            t_linear=self.t_linear,
        )


def parse_fixture(text: str) -> GoldenFixture:
    vertices: list[str] = []
    conflicts: dict[tuple[str, str], float] = {}
    half_duplex: set[frozenset[str]] = set()
    exempt: set[frozenset[str]] = set()
    scalars: dict[str, float] = {}

    def need_vertex(name: str, lineno: int) -> None:
        if name not in vertices:
            raise FixtureError(f"line {lineno}: unknown vertex {name!r}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        word = fields[0]
        try:
            if word in ("numerator", "noise", "t_linear"):
                if len(fields) != 2:
                    raise FixtureError(f"line {lineno}: {word} takes one value")
                scalars[word] = float(fields[1])
            elif word == "vertex":
                if len(fields) != 2:
                    raise FixtureError(f"line {lineno}: vertex takes one name")
                if fields[1] in vertices:
                    raise FixtureError(f"line {lineno}: duplicate vertex {fields[1]!r}")
                vertices.append(fields[1])
            elif word == "conflict":
                if len(fields) != 4:
                    raise FixtureError(
                        f"line {lineno}: conflict takes primary, secondary, delta"
                    )
                p, s = fields[1], fields[2]
                need_vertex(p, lineno)
                need_vertex(s, lineno)
                if p == s:
                    raise FixtureError(f"line {lineno}: no self-conflicts")
                if (p, s) in conflicts:
                    raise FixtureError(f"line {lineno}: duplicate conflict {p} {s}")
                conflicts[(p, s)] = float(fields[3])
            elif word in ("halfduplex", "exempt"):
                if len(fields) != 3:
                    raise FixtureError(f"line {lineno}: {word} takes two vertex names")
                need_vertex(fields[1], lineno)
                need_vertex(fields[2], lineno)
                target = half_duplex if word == "halfduplex" else exempt
                target.add(frozenset((fields[1], fields[2])))
            else:
                raise FixtureError(f"line {lineno}: unknown directive {word!r}")
        except ValueError:
            raise FixtureError(f"line {lineno}: bad numeric value in {raw!r}") from None

    for name in ("numerator", "noise", "t_linear"):
        if name not in scalars:
            raise FixtureError(f"missing {name} line")
    for key in conflicts:
        if frozenset(key) in exempt:
            raise FixtureError(f"conflict {key} contradicts an exempt line")
    for pair in half_duplex:
        if pair in exempt:
            raise FixtureError(f"halfduplex pair {sorted(pair)} contradicts an exempt line")

    return GoldenFixture(
        vertices=tuple(vertices),
        conflicts=conflicts,
        half_duplex=frozenset(half_duplex),
        exempt=frozenset(exempt),
        numerator=scalars["numerator"],
        noise=scalars["noise"],
        t_linear=scalars["t_linear"],
    )


def load_fixture(path: Union[str, Path]) -> GoldenFixture:
    return parse_fixture(Path(path).read_text())


def default_fixture_text() -> str:
    return resources.files("risgraph.data").joinpath(DEFAULT_FIXTURE).read_text()


def golden_graphs(fixture: GoldenFixture) -> dict[str, tuple[InterferenceGraph, int]]:
    """Build the baseline and both deterministic ordered graphs with their
    conflict complexities."""
    matrix = fixture.to_matrix()
    ctx = fixture.sinr_context()
    out: dict[str, tuple[InterferenceGraph, int]] = {}
    for method, graph in (
        (METHOD_ZIM, zim(matrix)),
        (METHOD_DCS, dcs(matrix, ctx)),
        (METHOD_ICS, ics(matrix, ctx)),
    ):
        out[method] = (graph, conflict_complexity(graph))
    return out
