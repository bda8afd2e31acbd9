"""Scenario generation, reachability, and relay-aware path selection.

Devices live in a cubic box; links exist between role-compatible devices
within the reach limit.  A pair's path is the shortest reflector-only route
whose repeater-delimited segments all clear the SNR threshold; repeaters are
introduced (fewest first) only when no reflector-only route qualifies.
"""

from __future__ import annotations

import heapq
import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import channel
from .channel import ChannelParams, Segment
from .errors import ConfigError
from .geometry import Point3, RisGeometry, footprint_radius, illumination

KIND_BS = "BS"
KIND_UE = "UE"
KIND_RIS = "RIS"
KIND_RN = "RN"

# role-compatible undirected link kinds; sources never receive, sinks never
# talk to each other
_LEGAL_LINKS = frozenset(
    frozenset(pair)
    for pair in [
        (KIND_BS, KIND_RIS), (KIND_BS, KIND_RN), (KIND_BS, KIND_UE),
        (KIND_RIS, KIND_RIS), (KIND_RIS, KIND_RN), (KIND_RIS, KIND_UE),
        (KIND_RN, KIND_RN), (KIND_RN, KIND_UE),
    ]
)


@dataclass(frozen=True)
class Device:
    id: str
    kind: str
    position: Point3
    index: int
    ris: Optional[RisGeometry] = None


@dataclass(frozen=True)
class ScenarioSpec:
    n_bs: int
    n_ue: int
    n_ris: int
    n_rn: int
    box: float
    reach_limit: float
    num_pairs: int
    ris_geometry: RisGeometry

    def __post_init__(self) -> None:
        if min(self.n_bs, self.n_ue) <= 0 or min(self.n_ris, self.n_rn) < 0:
            raise ConfigError("need at least one source and one sink device")
        if self.box <= 0.0 or self.reach_limit <= 0.0:
            raise ConfigError("box and reach_limit must be positive")
        if self.num_pairs < 0:
            raise ConfigError("num_pairs must be nonnegative")


@dataclass(frozen=True)
class Scenario:
    devices: tuple[Device, ...]
    box: float
    reach_limit: float
    pairs: tuple[tuple[str, str], ...]
    seed: int
    ris_geometry: RisGeometry

    def device(self, device_id: str) -> Device:
        return self._by_id[device_id]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {d.id: d for d in self.devices})


@dataclass(frozen=True)
class TransmissionPath:
    pair_id: str
    node_ids: tuple[str, ...]
    segments: tuple[Segment, ...]
    total_length: float
    is_backup: bool = False


def generate_scenario(spec: ScenarioSpec, seed: int) -> Scenario:
    """Draw device positions i.i.d. uniform in the box and pairs with replacement."""
    rng = random.Random(seed)
    devices: list[Device] = []

    def add(kind: str, count: int, ris: Optional[RisGeometry]) -> None:
        for i in range(count):
            pos = Point3(
                rng.uniform(0.0, spec.box),
                rng.uniform(0.0, spec.box),
                rng.uniform(0.0, spec.box),
            )
            devices.append(Device(f"{kind}{i}", kind, pos, len(devices), ris))

    add(KIND_BS, spec.n_bs, None)
    add(KIND_UE, spec.n_ue, None)
    add(KIND_RIS, spec.n_ris, spec.ris_geometry)
    add(KIND_RN, spec.n_rn, None)

    pairs = tuple(
        (f"{KIND_BS}{rng.randrange(spec.n_bs)}", f"{KIND_UE}{rng.randrange(spec.n_ue)}")
        for _ in range(spec.num_pairs)
    )
    return Scenario(
        devices=tuple(devices),
        box=spec.box,
        reach_limit=spec.reach_limit,
        pairs=pairs,
        seed=seed,
        ris_geometry=spec.ris_geometry,
    )


def reachability_graph(scenario: Scenario) -> dict[str, tuple[str, ...]]:
    """Undirected adjacency: within reach and role-compatible."""
    adj: dict[str, list[str]] = {d.id: [] for d in scenario.devices}
    devs = scenario.devices
    for i in range(len(devs)):
        for j in range(i + 1, len(devs)):
            a, b = devs[i], devs[j]
            if frozenset((a.kind, b.kind)) not in _LEGAL_LINKS:
                continue
            dx = a.position.x - b.position.x
            dy = a.position.y - b.position.y
            dz = a.position.z - b.position.z
            if math.sqrt(dx * dx + dy * dy + dz * dz) <= scenario.reach_limit:
                adj[a.id].append(b.id)
                adj[b.id].append(a.id)
    return {k: tuple(sorted(v)) for k, v in adj.items()}


@dataclass(frozen=True)
class _Leg:
    """A feasible reflector-only chain between two endpoints."""

    dist: float
    ris_indices: tuple[int, ...]

    @property
    def n_hops(self) -> int:
        return len(self.ris_indices) + 1


_FEAS_MARGIN = 1.0 - 1e-9


class Router:
    """Shared search state for all pairs of one scenario."""

    def __init__(
        self,
        scenario: Scenario,
        params: ChannelParams,
        max_hops: int = 6,
        max_relays: int = 2,
        leg_alternatives: int = 4,
    ) -> None:
        self.scenario = scenario
        self.params = params
        self.max_hops = max_hops
        self.max_relays = max_relays
        self.leg_alternatives = leg_alternatives
        self.ris = scenario.ris_geometry

        devs = scenario.devices
        n = len(devs)
        self._ids = [d.id for d in devs]
        self._kinds = [d.kind for d in devs]
        self._points = [d.position for d in devs]
        xs = np.array([p.x for p in self._points])
        ys = np.array([p.y for p in self._points])
        zs = np.array([p.z for p in self._points])
        dx = xs[:, None] - xs[None, :]
        dy = ys[:, None] - ys[None, :]
        dz = zs[:, None] - zs[None, :]
        self.dist = np.sqrt(dx * dx + dy * dy + dz * dz)
        self.reach = (self.dist <= scenario.reach_limit) & ~np.eye(n, dtype=bool)

        self.ris_idx = np.array([d.index for d in devs if d.kind == KIND_RIS], dtype=int)
        self.rn_idx = [d.index for d in devs if d.kind == KIND_RN]

        # per-hop amplitude and first-hop element count, for all device pairs
        with np.errstate(divide="ignore", invalid="ignore"):
            c_over = params.c / (4.0 * math.pi * params.f)
            self.amp = np.where(
                self.dist > 0.0,
                c_over / self.dist * np.exp(-0.5 * params.k_f * self.dist),
                0.0,
            )
            tan_half = math.tan(params.alpha / 2.0)
            s_fp = math.pi * (tan_half * self.dist) ** 2
            self.nprime = np.minimum(s_fp, self.ris.area) / (self.ris.dx * self.ris.dy)

        # feasible iff amplitude product beats this bound
        k = params.p_be * params.gain * params.gain / params.noise
        self.amp_threshold = math.sqrt(params.t_snr_linear * _FEAS_MARGIN / k)
        off_diag = self.dist[~np.eye(n, dtype=bool)]
        self._min_dist = max(float(off_diag.min()) if off_diag.size else 1.0, 1e-12)
        self._amp_sup = c_over / self._min_dist

        self._leg_cache: dict[tuple[int, int], list[_Leg]] = {}

    # -- channel helpers -------------------------------------------------

    def _scalar_feasible(self, u: int, ris_seq: Sequence[int], v: int) -> Optional[float]:
        """Authoritative SNR of a chain; None when it misses the threshold."""
        nodes = [u, *ris_seq, v]
        hops = [
            float(self.dist[nodes[i], nodes[i + 1]]) for i in range(len(nodes) - 1)
        ]
        n_primes = self._chain_nprimes(hops[0], len(ris_seq))
        p_eu = channel.received_power(self.params, hops, n_primes)
        snr = p_eu * self.params.gain * self.params.gain / self.params.noise
        return snr if snr > self.params.t_snr_linear else None

    def _chain_nprimes(self, d1: float, n_ris: int) -> list[float]:
        if n_ris == 0:
            return []
        ill = illumination(footprint_radius(self.params.alpha, d1), self.ris)
        return [ill.n_prime] * n_ris

    # -- reflector-only leg search ---------------------------------------

    def leg_options(self, u: int, v: int) -> list[_Leg]:
        """Feasible reflector-only chains u -> v, sorted by (distance, chain)."""
        key = (u, v)
        cached = self._leg_cache.get(key)
        if cached is not None:
            return cached

        found: list[_Leg] = []
        thr = self.amp_threshold

        if self.reach[u, v] and float(self.amp[u, v]) > thr:
            if self._scalar_feasible(u, (), v) is not None:
                found.append(_Leg(float(self.dist[u, v]), ()))

        ris = self.ris_idx
        if ris.size and self.max_hops >= 2:
            m1 = self.reach[u, ris] & self.reach[ris, v]
            if m1.any():
                amp1 = self.amp[u, ris] * self.nprime[u, ris] * self.amp[ris, v]
                cand = np.nonzero(m1 & (amp1 > thr))[0]
                d1 = self.dist[u, ris[cand]] + self.dist[ris[cand], v]
                for ci in np.argsort(d1, kind="stable")[: self.leg_alternatives]:
                    r = int(ris[cand[ci]])
                    if self._scalar_feasible(u, (r,), v) is not None:
                        found.append(_Leg(float(d1[ci]), (r,)))

        if ris.size >= 2 and self.max_hops >= 3:
            first = self.amp[u, ris] * self.nprime[u, ris]
            mid = self.amp[np.ix_(ris, ris)] * self.nprime[u, ris][:, None]
            last = self.amp[ris, v]
            amp2 = first[:, None] * mid * last[None, :]
            m2 = (
                self.reach[u, ris][:, None]
                & self.reach[np.ix_(ris, ris)]
                & self.reach[ris, v][None, :]
            )
            np.fill_diagonal(m2, False)
            good = np.nonzero(m2 & (amp2 > thr))
            if good[0].size:
                d2 = (
                    self.dist[u, ris[good[0]]]
                    + self.dist[ris[good[0]], ris[good[1]]]
                    + self.dist[ris[good[1]], v]
                )
                for ci in np.argsort(d2, kind="stable")[: self.leg_alternatives]:
                    ra, rb = int(ris[good[0][ci]]), int(ris[good[1][ci]])
                    if self._scalar_feasible(u, (ra, rb), v) is not None:
                        found.append(_Leg(float(d2[ci]), (ra, rb)))

        max_ris = self.max_hops - 1
        if max_ris >= 3:
            found.extend(self._deep_chains(u, v, max_ris))

        found.sort(key=lambda leg: (leg.dist, leg.ris_indices))
        self._leg_cache[key] = found
        return found

    def _deep_chains(self, u: int, v: int, max_ris: int) -> list[_Leg]:
        """Exhaustive chains with >= 3 reflectors, pruned by an SNR upper bound.

        Each additional reflector multiplies the best achievable amplitude by
        at most amp_sup * n_prime(d1); once that bound falls below the
        feasibility threshold the subtree cannot contain a feasible chain.
        """
        out: list[_Leg] = []
        ris_list = [int(r) for r in self.ris_idx]
        thr = self.amp_threshold

        def extend(node: int, used: list[int], amp_prefix: float, np1: float) -> None:
            depth = len(used)
            if depth >= 3 and self.reach[node, v]:
                amp = amp_prefix * float(self.amp[node, v])
                if amp > thr and self._scalar_feasible(u, tuple(used), v) is not None:
                    dist = sum(
                        float(self.dist[a, b])
                        for a, b in zip([u, *used], [*used, v])
                    )
                    out.append(_Leg(dist, tuple(used)))
            if depth >= max_ris:
                return
            step = self._amp_sup * np1
            remaining = max_ris - depth
            best_growth = step ** remaining if step > 1.0 else step
            if amp_prefix * self._amp_sup * best_growth <= thr:
                return
            for r in ris_list:
                if r in used or not self.reach[node, r]:
                    continue
                extend(r, used + [r], amp_prefix * float(self.amp[node, r]) * np1, np1)

        for r1 in ris_list:
            if not self.reach[u, r1]:
                continue
            np1 = float(self.nprime[u, r1])
            extend(r1, [r1], float(self.amp[u, r1]), np1)
        return out

    # -- path composition -------------------------------------------------

    def _min_combo(
        self, option_lists: list[list[_Leg]], hop_budget: int
    ) -> Optional[tuple[_Leg, ...]]:
        """Cheapest cross-leg combination respecting hop budget and
        reflector disjointness."""
        if any(not opts for opts in option_lists):
            return None
        start = tuple(0 for _ in option_lists)
        heap = [(sum(o[0].dist for o in option_lists), start)]
        seen = {start}
        while heap:
            _, idx = heapq.heappop(heap)
            legs = tuple(option_lists[i][j] for i, j in enumerate(idx))
            hops = sum(leg.n_hops for leg in legs)
            all_ris = [r for leg in legs for r in leg.ris_indices]
            if hops <= hop_budget and len(set(all_ris)) == len(all_ris):
                return legs
            for i in range(len(idx)):
                nxt = idx[:i] + (idx[i] + 1,) + idx[i + 1 :]
                if nxt[i] < len(option_lists[i]) and nxt not in seen:
                    seen.add(nxt)
                    heapq.heappush(
                        heap,
                        (
                            sum(option_lists[k][j].dist for k, j in enumerate(nxt)),
                            nxt,
                        ),
                    )
        return None

    def _candidate(
        self, bs: int, ue: int, relays: tuple[int, ...]
    ) -> Optional[tuple[float, tuple[int, ...]]]:
        """Best node sequence bs -> relays -> ue, or None."""
        endpoints = [bs, *relays, ue]
        option_lists = [
            self.leg_options(endpoints[i], endpoints[i + 1])
            for i in range(len(endpoints) - 1)
        ]
        legs = self._min_combo(option_lists, self.max_hops)
        if legs is None:
            return None
        nodes: list[int] = [bs]
        for leg, nxt in zip(legs, endpoints[1:]):
            nodes.extend(leg.ris_indices)
            nodes.append(nxt)
        return sum(leg.dist for leg in legs), tuple(nodes)

    def best_with_relays(self, bs: int, ue: int, n_relays: int) -> Optional[tuple[float, tuple[int, ...]]]:
        if n_relays == 0:
            return self._candidate(bs, ue, ())
        best: Optional[tuple[float, tuple[int, ...]]] = None
        for seq in itertools.permutations(self.rn_idx, n_relays):
            cand = self._candidate(bs, ue, seq)
            if cand is not None and (best is None or cand < best):
                best = cand
        return best

    def search(self, bs_id: str, ue_id: str) -> Optional[tuple[int, float, tuple[int, ...]]]:
        """Best path class-by-class: reflector-only first, then 1..max relays.

        Returns (relay_count, total_distance, node index sequence).
        """
        bs = self.scenario.device(bs_id).index
        ue = self.scenario.device(ue_id).index
        for n_relays in range(self.max_relays + 1):
            cand = self.best_with_relays(bs, ue, n_relays)
            if cand is not None:
                return n_relays, cand[0], cand[1]
        return None

    def build_path(
        self,
        pair_id: str,
        node_indices: tuple[int, ...],
        total_length: float,
        is_backup: bool = False,
    ) -> TransmissionPath:
        segments: list[Segment] = []
        seg_nodes: list[int] = [node_indices[0]]
        groups: list[list[int]] = []
        for idx in node_indices[1:]:
            seg_nodes.append(idx)
            if self._kinds[idx] in (KIND_RN, KIND_UE):
                groups.append(seg_nodes)
                seg_nodes = [idx]
        tag = "b" if is_backup else "s"
        for k, group in enumerate(groups):
            segments.append(self._make_segment(f"{pair_id}{tag}{k}", pair_id, group, is_backup))
        return TransmissionPath(
            pair_id=pair_id,
            node_ids=tuple(self._ids[i] for i in node_indices),
            segments=tuple(segments),
            total_length=total_length,
            is_backup=is_backup,
        )

    def _make_segment(
        self, seg_id: str, pair_id: str, nodes: Sequence[int], is_backup: bool
    ) -> Segment:
        hops = tuple(
            float(self.dist[nodes[i], nodes[i + 1]]) for i in range(len(nodes) - 1)
        )
        ris_ids = tuple(self._ids[i] for i in nodes[1:-1])
        n_primes = tuple(self._chain_nprimes(hops[0], len(ris_ids)))
        p_eu = channel.received_power(self.params, hops, n_primes)
        snr = p_eu * self.params.gain * self.params.gain / self.params.noise
        return Segment(
            id=seg_id,
            pair_id=pair_id,
            tx_id=self._ids[nodes[0]],
            tx_kind=self._kinds[nodes[0]],
            rx_id=self._ids[nodes[-1]],
            rx_kind=self._kinds[nodes[-1]],
            ris_ids=ris_ids,
            hop_distances=hops,
            n_prime_per_ris=n_primes,
            node_positions=tuple(self._points[i] for i in nodes),
            p_eu=p_eu,
            snr_linear=snr,
            backup_of=pair_id if is_backup else None,
        )


def find_path(
    scenario: Scenario,
    params: ChannelParams,
    pair: tuple[str, str],
    pair_id: str = "p0000",
    max_hops: int = 6,
    max_relays: int = 2,
    router: Optional[Router] = None,
) -> Optional[TransmissionPath]:
    """Route one source/sink pair; None means the pair is blocked."""
    r = router or Router(scenario, params, max_hops=max_hops, max_relays=max_relays)
    got = r.search(pair[0], pair[1])
    if got is None:
        return None
    _, total, nodes = got
    return r.build_path(pair_id, nodes, total)


@dataclass(frozen=True)
class RoutingResult:
    paths: tuple[TransmissionPath, ...]
    blocked_pairs: tuple[str, ...]


def route_all(
    scenario: Scenario,
    params: ChannelParams,
    backup: bool = False,
    max_hops: int = 6,
    max_relays: int = 2,
) -> RoutingResult:
    """Route every pair of the scenario; optionally attach relay backups to
    relay-free paths."""
    router = Router(scenario, params, max_hops=max_hops, max_relays=max_relays)
    paths: list[TransmissionPath] = []
    blocked: list[str] = []
    for i, pair in enumerate(scenario.pairs):
        pair_id = f"p{i:04d}"
        got = router.search(pair[0], pair[1])
        if got is None:
            blocked.append(pair_id)
            continue
        n_relays, total, nodes = got
        paths.append(router.build_path(pair_id, nodes, total))
        if backup and n_relays == 0:
            bs = scenario.device(pair[0]).index
            ue = scenario.device(pair[1]).index
            alt = None
            for c in range(1, max_relays + 1):
                alt = router.best_with_relays(bs, ue, c)
                if alt is not None:
                    break
            if alt is not None:
                paths.append(router.build_path(pair_id, alt[1], alt[0], is_backup=True))
    return RoutingResult(tuple(paths), tuple(blocked))


def segment_paths(paths: Iterable[TransmissionPath]) -> list[Segment]:
    """Flatten paths into the segment list that seeds the conflict analysis."""
    return [seg for path in paths for seg in path.segments]
