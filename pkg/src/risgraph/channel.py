"""Link budget: antenna gain, transfer gain, received power, SNR/SNIR.

A segment is one transmitter -> (reflector chain) -> receiver transmission.
Its received power multiplies one transfer-gain amplitude per hop and one
illuminated-element count per reflector, then squares the product.  The
SNR threshold is compared in linear units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import DomainError, InfeasibleSegment
from .geometry import Point3

BOLTZMANN = 1.380649e-23  # J/K, exact SI
LIGHT_SPEED = 299792458.0  # m/s, exact SI


@dataclass(frozen=True)
class ChannelParams:
    """Physical-layer constants of one experiment."""

    f: float            # carrier frequency, Hz
    w: float            # bandwidth, Hz
    k_f: float          # molecular absorption coefficient, 1/m
    p_be: float         # transmit power of a source or repeater, W
    alpha: float        # full antenna opening angle, rad
    t_noise: float      # noise temperature, K
    t_snr_db: float     # SNR threshold, dB
    k_b: float = BOLTZMANN
    c: float = LIGHT_SPEED

    def __post_init__(self) -> None:
        for name in ("f", "w", "k_f", "p_be", "alpha", "t_noise", "k_b", "c"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be strictly positive")

    @property
    def t_snr_linear(self) -> float:
        return 10.0 ** (self.t_snr_db / 10.0)

    @property
    def gain(self) -> float:
        return antenna_gain(self.alpha)

    @property
    def noise(self) -> float:
        return noise_power(self.t_noise, self.w, self.k_b)


@dataclass(frozen=True)
class Segment:
    """One repeater-delimited hop group of a transmission path."""

    id: str
    pair_id: str
    tx_id: str
    tx_kind: str                      # "BS" or "RN"
    rx_id: str
    rx_kind: str                      # "RN" or "UE"
    ris_ids: tuple[str, ...]
    hop_distances: tuple[float, ...]  # length I + 1
    n_prime_per_ris: tuple[float, ...]
    node_positions: tuple[Point3, ...]  # tx, reflectors..., rx
    p_eu: float
    snr_linear: float
    backup_of: Optional[str] = None

    def __post_init__(self) -> None:
        if len(self.hop_distances) != len(self.ris_ids) + 1:
            raise DomainError("a segment has one hop more than reflectors")
        if len(self.node_positions) != len(self.hop_distances) + 1:
            raise DomainError("node positions must cover every hop endpoint")
        if any(d <= 0.0 for d in self.hop_distances):
            raise DomainError("hop distances must be positive")


def antenna_gain(alpha: float) -> float:
    """Directivity gain of a conical beam with full opening angle alpha."""
    if not 0.0 < alpha < 2.0 * math.pi:
        raise DomainError(f"alpha must be in (0, 2*pi), got {alpha!r}")
    return 2.0 / (1.0 - math.cos(alpha / 2.0))


def transfer_gain(f: float, d: float, k_f: float, c: float = LIGHT_SPEED) -> float:
    """Amplitude transfer over one hop: spreading loss times absorption."""
    if d <= 0.0:
        raise DomainError(f"distance must be positive, got {d!r}")
    return (c / (4.0 * math.pi * f * d)) * math.exp(-0.5 * k_f * d)


def noise_power(t_noise: float, w: float, k_b: float = BOLTZMANN) -> float:
    """Thermal noise power over bandwidth w."""
    if t_noise < 0.0 or w <= 0.0:
        raise DomainError("need t_noise >= 0 and w > 0")
    return k_b * t_noise * w


def received_power(
    params: ChannelParams,
    hop_distances: Sequence[float],
    n_primes: Sequence[float],
) -> float:
    """Received signal power after a chain of hops and reflections.

    One transfer-gain amplitude per hop and one element count per reflector;
    with no reflector the product collapses to the single-hop amplitude.
    """
    if len(n_primes) != len(hop_distances) - 1:
        raise DomainError("need exactly one element count per reflector")
    amp = 1.0
    for d in hop_distances:
        amp *= transfer_gain(params.f, d, params.k_f, params.c)
    for n in n_primes:
        amp *= n
    return params.p_be * amp * amp


def snr_value(numerator: float, noise: float) -> float:
    return numerator / noise


def snir_value(numerator: float, noise: float, delta_total: float) -> float:
    """Signal over noise plus accumulated interference power."""
    if delta_total < 0.0:
        raise DomainError("interference power must be nonnegative")
    return numerator / (noise + delta_total)


def snr(segment: Segment, params: ChannelParams) -> float:
    """Linear SNR of a segment, recomputed from its raw fields."""
    p_eu = received_power(params, segment.hop_distances, segment.n_prime_per_ris)
    return p_eu * params.gain * params.gain / params.noise


def snir(segment: Segment, params: ChannelParams, delta_total: float) -> float:
    """Linear SNIR of a segment under accumulated interference delta_total."""
    p_eu = received_power(params, segment.hop_distances, segment.n_prime_per_ris)
    return snir_value(p_eu * params.gain * params.gain, params.noise, delta_total)


_MAX_BRACKET_DOUBLINGS = 200
_SNR_REL_TOL = 1e-9  # solve well inside the 1e-6 contract


def threshold_distance(segment: Segment, params: ChannelParams) -> float:
    """Longest total segment length that still meets the SNR threshold.

    Only the final hop is stretched; earlier hops are fixed by the
    reflector positions.  The SNR is monotone decreasing in the final hop,
    so a doubling bracket plus bisection finds the unique crossing.
    """
    hops = list(segment.hop_distances)
    fixed = sum(hops[:-1])
    t_lin = params.t_snr_linear

    def snr_at(last: float) -> float:
        p = received_power(params, hops[:-1] + [last], segment.n_prime_per_ris)
        return p * params.gain * params.gain / params.noise

    x0 = hops[-1]
    s0 = snr_at(x0)
    if abs(s0 - t_lin) / t_lin <= _SNR_REL_TOL:
        return fixed + x0
    if s0 < t_lin:
        raise InfeasibleSegment(
            f"segment {segment.id} has SNR {s0!r} <= threshold {t_lin!r} at its actual length"
        )

    lo = x0
    hi = x0
    for _ in range(_MAX_BRACKET_DOUBLINGS):
        hi *= 2.0
        if snr_at(hi) < t_lin:
            break
    else:
        raise InfeasibleSegment(
            f"segment {segment.id}: could not bracket the SNR threshold"
        )

    for _ in range(_MAX_BRACKET_DOUBLINGS):
        mid = 0.5 * (lo + hi)
        s = snr_at(mid)
        if abs(s - t_lin) / t_lin <= _SNR_REL_TOL:
            return fixed + mid
        if s > t_lin:
            lo = mid
        else:
            hi = mid
    return fixed + 0.5 * (lo + hi)
