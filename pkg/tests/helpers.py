"""Independent oracles shared by the test modules.

Everything here re-derives expected results through a different route than
the production code: Monte-Carlo sampling for lens areas, voxel
rasterization with an angle-based containment formulation for beam solids,
plain path enumeration for routing, and a direct reimplementation of the
cumulative interference walk.
"""

from __future__ import annotations

import math
import numpy as np

from risgraph import channel
from risgraph.geometry import BeamChain, Cone, Point3


def lens_area_mc(r1: float, r2: float, d: float, n: int, seed: int) -> float:
    """Monte-Carlo lens area: uniform samples over the intersection's
    bounding box, first circle at the origin, second at (d, 0)."""
    x_lo = max(-r1, d - r2)
    x_hi = min(r1, d + r2)
    if x_hi <= x_lo:
        return 0.0
    # sound height bound: each circle caps |y| by its closest x in the slab
    m1 = 0.0 if x_lo <= 0.0 <= x_hi else min(abs(x_lo), abs(x_hi))
    m2 = 0.0 if x_lo <= d <= x_hi else min(abs(x_lo - d), abs(x_hi - d))
    y_bound = min(
        min(r1, r2),
        math.sqrt(max(r1 * r1 - m1 * m1, 0.0)),
        math.sqrt(max(r2 * r2 - m2 * m2, 0.0)),
    )
    rng = np.random.default_rng(seed)
    hits = 0
    remaining = n
    batch = 4_000_000
    while remaining > 0:
        m = min(batch, remaining)
        xs = rng.uniform(x_lo, x_hi, m)
        ys = rng.uniform(-y_bound, y_bound, m)
        inside = (xs * xs + ys * ys <= r1 * r1) & (
            (xs - d) ** 2 + ys * ys <= r2 * r2
        )
        hits += int(inside.sum())
        remaining -= m
    box = (x_hi - x_lo) * 2.0 * y_bound
    return box * hits / n


def solid_contains_oracle(solid, pts: np.ndarray) -> np.ndarray:
    """Containment via an angle/cross-product formulation (vectorized)."""
    ax, ay, az = solid.axis
    if isinstance(solid, Cone):
        base = solid.apex
    else:
        base = solid.base_center
    w = pts - np.array([base.x, base.y, base.z])
    t = w @ np.array([ax, ay, az])
    # lateral distance through the cross product, not the Pythagorean form
    cx = w[:, 1] * az - w[:, 2] * ay
    cy = w[:, 2] * ax - w[:, 0] * az
    cz = w[:, 0] * ay - w[:, 1] * ax
    lat = np.sqrt(cx * cx + cy * cy + cz * cz)
    if isinstance(solid, Cone):
        norm = np.sqrt((w * w).sum(axis=1))
        with np.errstate(invalid="ignore", divide="ignore"):
            cos_angle = np.where(norm > 0, t / norm, 1.0)
        return (
            (t > 0.0)
            & (t <= solid.length)
            & (np.arccos(np.clip(cos_angle, -1.0, 1.0)) <= solid.half_angle)
        )
    return (t >= 0.0) & (t <= solid.length) & (lat <= solid.radius)


def chain_contains_oracle(chain: BeamChain, pts: np.ndarray) -> np.ndarray:
    out = np.zeros(pts.shape[0], dtype=bool)
    for solid in chain.solids:
        out |= solid_contains_oracle(solid, pts)
    return out


def rasterize_chain(chain: BeamChain, lo: np.ndarray, hi: np.ndarray, step: float):
    """Boolean voxel grid over [lo, hi): True where the voxel center is
    inside any solid of the chain (oracle formulation)."""
    axes = [np.arange(lo[k] + step / 2.0, hi[k], step) for k in range(3)]
    gx, gy, gz = np.meshgrid(*axes, indexing="ij")
    centers = np.column_stack([gx.ravel(), gy.ravel(), gz.ravel()])
    grid = chain_contains_oracle(chain, centers).reshape(gx.shape)
    return grid, axes


def voxel_of(point: np.ndarray, lo: np.ndarray, step: float, shape) -> tuple:
    idx = np.floor((point - lo) / step).astype(int)
    idx = np.clip(idx, 0, np.array(shape) - 1)
    return tuple(idx)


def all_simple_paths(adj: dict, start: str, end: str, max_hops: int):
    """Every simple path start -> end with at most max_hops edges."""
    out = []

    def walk(node, path):
        if len(path) - 1 > max_hops:
            return
        if node == end:
            out.append(list(path))
            return
        if len(path) - 1 == max_hops:
            return
        for nxt in adj[node]:
            if nxt not in path:
                path.append(nxt)
                walk(nxt, path)
                path.pop()

    walk(start, [start])
    return out


def path_feasibility(scenario, params, node_ids: list[str]):
    """(relay count, total distance, all segments above threshold) of a
    candidate node sequence."""
    devices = [scenario.device(i) for i in node_ids]
    total = 0.0
    for a, b in zip(devices, devices[1:]):
        total += math.dist(a.position.as_tuple(), b.position.as_tuple())
    groups = []
    current = [devices[0]]
    for dev in devices[1:]:
        current.append(dev)
        if dev.kind in ("RN", "UE"):
            groups.append(current)
            current = [dev]
    relays = sum(1 for d in devices[1:-1] if d.kind == "RN")
    feasible = True
    for group in groups:
        hops = [
            math.dist(a.position.as_tuple(), b.position.as_tuple())
            for a, b in zip(group, group[1:])
        ]
        n_ris = len(group) - 2
        if n_ris > 0:
            from risgraph.geometry import footprint_radius, illumination

            ill = illumination(
                footprint_radius(params.alpha, hops[0]), scenario.ris_geometry
            )
            n_primes = [ill.n_prime] * n_ris
        else:
            n_primes = []
        p_eu = channel.received_power(params, hops, n_primes)
        snr = p_eu * params.gain * params.gain / params.noise
        if snr <= params.t_snr_linear:
            feasible = False
            break
    return relays, total, feasible


def cumulative_walk_oracle(ordered, numerator, noise, t_linear):
    """Plain reimplementation of the ordered conflict walk.

    ordered: list of (secondary id, delta).  Returns the ids that end up
    connected to the primary.
    """
    acc = 0.0
    for j, (_, delta) in enumerate(ordered):
        acc += delta
        if numerator / (noise + acc) <= t_linear:
            return [s for s, _ in ordered[j:]]
    return []


def build_segment(
    params,
    ris_geom,
    points: list[Point3],
    seg_id: str = "s0",
    pair_id: str = "p0000",
    tx_kind: str = "BS",
    rx_kind: str = "UE",
    ris_ids=None,
    backup_of=None,
):
    """Hand-build a segment from node positions, deriving the channel fields."""
    from risgraph.geometry import distance, footprint_radius, illumination

    hops = tuple(distance(a, b) for a, b in zip(points, points[1:]))
    n_ris = len(points) - 2
    if ris_ids is None:
        ris_ids = tuple(f"{seg_id}-r{i}" for i in range(n_ris))
    if n_ris > 0:
        ill = illumination(footprint_radius(params.alpha, hops[0]), ris_geom)
        n_primes = (ill.n_prime,) * n_ris
    else:
        n_primes = ()
    p_eu = channel.received_power(params, hops, n_primes)
    snr = p_eu * params.gain * params.gain / params.noise
    return channel.Segment(
        id=seg_id,
        pair_id=pair_id,
        tx_id=f"{seg_id}-tx",
        tx_kind=tx_kind,
        rx_id=f"{seg_id}-rx",
        rx_kind=rx_kind,
        ris_ids=tuple(ris_ids),
        hop_distances=hops,
        n_prime_per_ris=n_primes,
        node_positions=tuple(points),
        p_eu=p_eu,
        snr_linear=snr,
        backup_of=backup_of,
    )
