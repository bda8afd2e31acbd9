"""Pairwise interference detection and the conflict matrix.

For an ordered pair (primary p, secondary s), s interferes with p when any
solid of s's extended beam chain covers p's receiver or one of p's
reflectors.  Segments sharing a repeater in opposite roles always conflict:
the repeater cannot transmit and receive at the same time, recorded as an
infinite interference power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from . import channel
from .channel import ChannelParams, Segment
from .geometry import (
    BeamChain,
    Cone,
    CoverageHit,
    Point3,
    RisGeometry,
    beam_covers_point,
    distance,
    ris_overlap_elements,
)

HIT_DIRECT = "direct_at_receiver"
HIT_AT_RIS = "at_ris"
HIT_HALF_DUPLEX = "half_duplex"


@dataclass(frozen=True)
class OverlapHit:
    """One way a secondary chain reaches into a primary segment."""

    kind: str
    secondary_hop: int          # 1-based solid index on the secondary chain
    axis_offset: float
    ris_id: Optional[str] = None
    ris_position: int = 0       # 1-based reflector index on the primary path
    n_iota: float = 0.0         # shared illuminated element count (at_ris only)


@dataclass(frozen=True)
class MatrixEntry:
    delta: float
    hits: tuple[OverlapHit, ...]
    structural: bool


@dataclass(frozen=True)
class ConflictMatrix:
    """Directed overlap flags and interference powers for all segment pairs.

    Entries exist only for pairs with at least one hit; exempt pairs
    (a path and its own backup) are never computed.
    """

    vertices: tuple[str, ...]
    entries: Mapping[tuple[str, str], MatrixEntry]
    structural_pairs: frozenset[frozenset[str]]
    exempt_pairs: frozenset[frozenset[str]]

    def __post_init__(self) -> None:
        by_primary: dict[str, list[tuple[str, float]]] = {}
        for (p, s), entry in self.entries.items():
            by_primary.setdefault(p, []).append((s, entry.delta))
        for couples in by_primary.values():
            couples.sort(key=lambda item: item[0])
        object.__setattr__(self, "_by_primary", by_primary)

    def overlap(self, primary: str, secondary: str) -> bool:
        return (primary, secondary) in self.entries

    def delta(self, primary: str, secondary: str) -> float:
        entry = self.entries.get((primary, secondary))
        return entry.delta if entry is not None else 0.0

    def secondaries_of(self, primary: str) -> list[tuple[str, float]]:
        """(secondary id, delta) couples for one primary, id-sorted."""
        return list(self._by_primary.get(primary, ()))


def shares_relay_opposite_roles(p: Segment, s: Segment) -> bool:
    """True when one segment transmits from the repeater the other receives at."""
    if p.tx_kind == "RN" and p.tx_id == s.rx_id:
        return True
    if p.rx_kind == "RN" and p.rx_id == s.tx_id:
        return True
    return False


def is_exempt(p: Segment, s: Segment) -> bool:
    """A path and its own backup never conflict (only one of them transmits)."""
    if s.backup_of is not None and p.backup_of is None and s.backup_of == p.pair_id:
        return True
    if p.backup_of is not None and s.backup_of is None and p.backup_of == s.pair_id:
        return True
    return False


def _covers_prefix(chain: BeamChain, p: Point3, upto: int) -> Optional[CoverageHit]:
    """Lowest covering solid among the first `upto` solids of the chain."""
    for i, solid in enumerate(chain.solids[:upto], start=1):
        got = solid.contains(p)
        if got is not None:
            offset, radius = got
            return CoverageHit(hop_index=i, axis_offset=offset, radius_at_point=radius)
    return None


def _radius_at_hop_end(chain: BeamChain, hop: int) -> float:
    solid = chain.solids[hop - 1]
    if isinstance(solid, Cone):
        return math.tan(solid.half_angle) * solid.length
    return solid.radius


def _hit_on_point(
    s_seg: Segment, s_chain: BeamChain, point: Point3, shared_hop: Optional[int]
) -> Optional[CoverageHit]:
    """Coverage of a target point by the secondary chain.

    When the point is a node of the secondary's own path (a shared
    reflector), the hop arriving there covers it by construction; only
    earlier solids are queried geometrically.  This keeps shared devices
    off the float boundary of the arriving solid.
    """
    if shared_hop is None:
        return beam_covers_point(s_chain, point)
    early = _covers_prefix(s_chain, point, shared_hop - 1)
    if early is not None:
        return early
    return CoverageHit(
        hop_index=shared_hop,
        axis_offset=0.0,
        radius_at_point=_radius_at_hop_end(s_chain, shared_hop),
    )


def _shared_hop(s_seg: Segment, ris_id: str) -> Optional[int]:
    """1-based index of the secondary hop arriving at ris_id, if shared."""
    try:
        return s_seg.ris_ids.index(ris_id) + 1
    except ValueError:
        return None


def detect_overlaps(
    p_seg: Segment,
    p_chain: BeamChain,
    s_seg: Segment,
    s_chain: BeamChain,
    ris: RisGeometry,
) -> list[OverlapHit]:
    """All hits of secondary s on primary p, in deterministic order."""
    hits: list[OverlapHit] = []
    rx_hit = beam_covers_point(s_chain, p_seg.node_positions[-1])
    if rx_hit is not None:
        hits.append(
            OverlapHit(
                kind=HIT_DIRECT,
                secondary_hop=rx_hit.hop_index,
                axis_offset=rx_hit.axis_offset,
            )
        )
    for m, ris_id in enumerate(p_seg.ris_ids, start=1):
        hit = _hit_on_point(
            s_seg, s_chain, p_seg.node_positions[m], _shared_hop(s_seg, ris_id)
        )
        if hit is None:
            continue
        n_iota = ris_overlap_elements(
            p_chain.phi_ira, hit.radius_at_point, hit.axis_offset, ris
        )
        hits.append(
            OverlapHit(
                kind=HIT_AT_RIS,
                secondary_hop=hit.hop_index,
                axis_offset=hit.axis_offset,
                ris_id=ris_id,
                ris_position=m,
                n_iota=n_iota,
            )
        )
    if shares_relay_opposite_roles(p_seg, s_seg):
        hits.append(OverlapHit(kind=HIT_HALF_DUPLEX, secondary_hop=0, axis_offset=0.0))
    return hits


def interference_delta(
    p_seg: Segment,
    s_seg: Segment,
    hits: Sequence[OverlapHit],
    params: ChannelParams,
) -> float:
    """Total interference power of s on p, antenna gains applied.

    A hit at p's receiver propagates s's signal up to the covering solid's
    start node and then straight to the receiver.  A hit at one of p's
    reflectors continues over p's remaining hops with p's own element
    counts, using the shared element count at the covered reflector.
    """
    total = 0.0
    g2 = params.gain * params.gain
    for hit in hits:
        if hit.kind == HIT_HALF_DUPLEX:
            return math.inf
        k = hit.secondary_hop
        if hit.kind == HIT_DIRECT:
            reach = distance(s_seg.node_positions[k - 1], p_seg.node_positions[-1])
            hops = list(s_seg.hop_distances[: k - 1]) + [reach]
            n_primes = list(s_seg.n_prime_per_ris[: k - 1])
        else:
            m = hit.ris_position
            reach = distance(s_seg.node_positions[k - 1], p_seg.node_positions[m])
            hops = (
                list(s_seg.hop_distances[: k - 1])
                + [reach]
                + list(p_seg.hop_distances[m:])
            )
            n_primes = (
                list(s_seg.n_prime_per_ris[: k - 1])
                + [hit.n_iota]
                + list(p_seg.n_prime_per_ris[m:])
            )
        total += channel.received_power(params, hops, n_primes) * g2
    return total


# -- vectorized coverage prepass ------------------------------------------


def _chain_cover_hops(chain: BeamChain, pts: np.ndarray) -> np.ndarray:
    """Lowest covering solid index (1-based, 0 = none) for each point.

    Uses the same arithmetic as the scalar containment tests so both paths
    agree bit-for-bit.
    """
    n = pts.shape[0]
    out = np.zeros(n, dtype=np.int32)
    for i, solid in enumerate(chain.solids, start=1):
        open_mask = out == 0
        if not open_mask.any():
            break
        is_cone = isinstance(solid, Cone)
        base = solid.apex if is_cone else solid.base_center
        wx = pts[:, 0] - base.x
        wy = pts[:, 1] - base.y
        wz = pts[:, 2] - base.z
        ax, ay, az = solid.axis
        t = wx * ax + wy * ay + wz * az
        lat_sq = wx * wx + wy * wy + wz * wz - t * t
        lat = np.sqrt(np.maximum(lat_sq, 0.0))
        if is_cone:
            inside = (t > 0.0) & (t <= solid.length) & (lat <= math.tan(solid.half_angle) * t)
        else:
            inside = (t >= 0.0) & (t <= solid.length) & (lat <= solid.radius)
        out[open_mask & inside] = i
    return out


def build_conflict_matrix(
    segments: Sequence[Segment],
    chains: Mapping[str, BeamChain],
    params: ChannelParams,
    ris: RisGeometry,
) -> ConflictMatrix:
    """Fill overlap flags and interference powers over all ordered pairs."""
    vertices = tuple(seg.id for seg in segments)
    seg_by_id = {seg.id: seg for seg in segments}

    # target points: every segment's receiver and reflector centers
    targets: list[tuple[str, str, int, Point3]] = []  # (owner id, kind, m, point)
    for seg in segments:
        targets.append((seg.id, HIT_DIRECT, 0, seg.node_positions[-1]))
        for m in range(1, len(seg.ris_ids) + 1):
            targets.append((seg.id, HIT_AT_RIS, m, seg.node_positions[m]))
    pts = np.array([[t[3].x, t[3].y, t[3].z] for t in targets]) if targets else np.zeros((0, 3))

    hits_by_pair: dict[tuple[str, str], list[OverlapHit]] = {}

    def exempt_or_self(p_id: str, s_id: str) -> bool:
        if p_id == s_id:
            return True
        return is_exempt(seg_by_id[p_id], seg_by_id[s_id])

    def record_at_ris(p_seg: Segment, s_seg: Segment, m: int, hit) -> None:
        n_iota = ris_overlap_elements(
            chains[p_seg.id].phi_ira, hit.radius_at_point, hit.axis_offset, ris
        )
        hits_by_pair.setdefault((p_seg.id, s_seg.id), []).append(
            OverlapHit(
                kind=HIT_AT_RIS,
                secondary_hop=hit.hop_index,
                axis_offset=hit.axis_offset,
                ris_id=p_seg.ris_ids[m - 1],
                ris_position=m,
                n_iota=n_iota,
            )
        )

    for s_seg in segments:
        chain = chains[s_seg.id]
        s_ris = set(s_seg.ris_ids)
        cover = _chain_cover_hops(chain, pts)
        for ti in np.nonzero(cover)[0]:
            owner, kind, m, point = targets[ti]
            if exempt_or_self(owner, s_seg.id):
                continue
            p_seg = seg_by_id[owner]
            if kind == HIT_DIRECT:
                hit = beam_covers_point(chain, point)
                if hit is None:
                    continue
                hits_by_pair.setdefault((owner, s_seg.id), []).append(
                    OverlapHit(
                        kind=HIT_DIRECT,
                        secondary_hop=hit.hop_index,
                        axis_offset=hit.axis_offset,
                    )
                )
            elif p_seg.ris_ids[m - 1] not in s_ris:
                # shared reflectors handled below, off the float boundary
                hit = beam_covers_point(chain, point)
                if hit is None:
                    continue
                record_at_ris(p_seg, s_seg, m, hit)

    # reflectors shared between two paths always overlap, concentric
    users_of_ris: dict[str, list[tuple[Segment, int]]] = {}
    for seg in segments:
        for m, rid in enumerate(seg.ris_ids, start=1):
            users_of_ris.setdefault(rid, []).append((seg, m))
    for rid, users in users_of_ris.items():
        for p_seg, m in users:
            for s_seg, _ in users:
                if p_seg.id == s_seg.id or exempt_or_self(p_seg.id, s_seg.id):
                    continue
                hit = _hit_on_point(
                    s_seg,
                    chains[s_seg.id],
                    p_seg.node_positions[m],
                    _shared_hop(s_seg, rid),
                )
                record_at_ris(p_seg, s_seg, m, hit)

    # structural half-duplex pairs via shared repeaters
    structural: set[frozenset[str]] = set()
    tx_at: dict[str, list[Segment]] = {}
    rx_at: dict[str, list[Segment]] = {}
    for seg in segments:
        if seg.tx_kind == "RN":
            tx_at.setdefault(seg.tx_id, []).append(seg)
        if seg.rx_kind == "RN":
            rx_at.setdefault(seg.rx_id, []).append(seg)
    for rn_id, receivers in rx_at.items():
        for p_seg in receivers:
            for s_seg in tx_at.get(rn_id, []):
                if p_seg.id == s_seg.id or exempt_or_self(p_seg.id, s_seg.id):
                    continue
                for pair in ((p_seg, s_seg), (s_seg, p_seg)):
                    key = (pair[0].id, pair[1].id)
                    hits = hits_by_pair.setdefault(key, [])
                    if not any(h.kind == HIT_HALF_DUPLEX for h in hits):
                        hits.append(
                            OverlapHit(kind=HIT_HALF_DUPLEX, secondary_hop=0, axis_offset=0.0)
                        )
                structural.add(frozenset((p_seg.id, s_seg.id)))

    _kind_order = {HIT_DIRECT: 0, HIT_AT_RIS: 1, HIT_HALF_DUPLEX: 2}
    entries: dict[tuple[str, str], MatrixEntry] = {}
    for (p_id, s_id), hits in sorted(hits_by_pair.items()):
        hits.sort(key=lambda h: (_kind_order[h.kind], h.ris_position))
        delta = interference_delta(seg_by_id[p_id], seg_by_id[s_id], hits, params)
        entries[(p_id, s_id)] = MatrixEntry(
            delta=delta,
            hits=tuple(hits),
            structural=any(h.kind == HIT_HALF_DUPLEX for h in hits),
        )

    exempt: set[frozenset[str]] = set()
    for p_seg in segments:
        for s_seg in segments:
            if p_seg.id != s_seg.id and is_exempt(p_seg, s_seg):
                exempt.add(frozenset((p_seg.id, s_seg.id)))

    return ConflictMatrix(
        vertices=vertices,
        entries=entries,
        structural_pairs=frozenset(structural),
        exempt_pairs=frozenset(exempt),
    )
