"""3D beam solids (cones, cylinders), reflector illumination and overlap tests.

A transmitter emits a conical beam; each reflector panel re-emits a
cylindrical beam whose radius equals the illuminated-disc radius and which
keeps that radius for the rest of the chain.  The chain of solids is extended
to the threshold distance so that coverage tests capture interference beyond
the intended receiver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import DomainError, InfeasibleSegment

Vec3 = tuple[float, float, float]

_UNIT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class Point3:
    """A position in meters."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise DomainError(f"non-finite coordinates: {(self.x, self.y, self.z)}")

    def as_tuple(self) -> Vec3:
        return (self.x, self.y, self.z)


def distance(a: Point3, b: Point3) -> float:
    return math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2)


def direction(a: Point3, b: Point3) -> Vec3:
    """Unit vector from a to b."""
    d = distance(a, b)
    if d == 0.0:
        raise DomainError("cannot take the direction between coincident points")
    return ((b.x - a.x) / d, (b.y - a.y) / d, (b.z - a.z) / d)


def _check_axis(axis: Vec3) -> None:
    n = math.sqrt(axis[0] ** 2 + axis[1] ** 2 + axis[2] ** 2)
    if abs(n - 1.0) > _UNIT_NORM_TOL:
        raise DomainError(f"axis must have unit norm, got |axis|={n!r}")


@dataclass(frozen=True)
class Cone:
    """Solid cone: apex, unit axis, half opening angle, axial length."""

    apex: Point3
    axis: Vec3
    half_angle: float
    length: float

    def __post_init__(self) -> None:
        if not 0.0 < self.half_angle < math.pi / 2:
            raise DomainError(f"half_angle must be in (0, pi/2), got {self.half_angle!r}")
        if self.length <= 0.0:
            raise DomainError(f"length must be positive, got {self.length!r}")
        _check_axis(self.axis)

    def contains(self, p: Point3) -> Optional[tuple[float, float]]:
        """Return (axis_offset, radius_at_point) if p lies in the closed cone.

        The apex itself is excluded: the axial projection must be strictly
        positive.
        """
        wx, wy, wz = p.x - self.apex.x, p.y - self.apex.y, p.z - self.apex.z
        t = wx * self.axis[0] + wy * self.axis[1] + wz * self.axis[2]
        if not 0.0 < t <= self.length:
            return None
        lat_sq = wx * wx + wy * wy + wz * wz - t * t
        lat = math.sqrt(lat_sq) if lat_sq > 0.0 else 0.0
        radius = math.tan(self.half_angle) * t
        if lat > radius:
            return None
        return lat, radius


@dataclass(frozen=True)
class Cylinder:
    """Solid cylinder: base center, unit axis, radius, axial length."""

    base_center: Point3
    axis: Vec3
    radius: float
    length: float

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise DomainError(f"radius must be positive, got {self.radius!r}")
        if self.length <= 0.0:
            raise DomainError(f"length must be positive, got {self.length!r}")
        _check_axis(self.axis)

    def contains(self, p: Point3) -> Optional[tuple[float, float]]:
        """Return (axis_offset, radius) if p lies in the closed cylinder."""
        wx = p.x - self.base_center.x
        wy = p.y - self.base_center.y
        wz = p.z - self.base_center.z
        t = wx * self.axis[0] + wy * self.axis[1] + wz * self.axis[2]
        if not 0.0 <= t <= self.length:
            return None
        lat_sq = wx * wx + wy * wy + wz * wz - t * t
        lat = math.sqrt(lat_sq) if lat_sq > 0.0 else 0.0
        if lat > self.radius:
            return None
        return lat, self.radius


Solid = Union[Cone, Cylinder]


@dataclass(frozen=True)
class RisGeometry:
    """Reflector panel: element count and element pitch.

    The panel is modeled as an orientation-free disc of area
    ``n * dx * dy`` so that a circular illuminated spot maps directly onto
    element counts.
    """

    n: int
    dx: float
    dy: float

    def __post_init__(self) -> None:
        if self.n <= 0 or self.dx <= 0.0 or self.dy <= 0.0:
            raise DomainError("reflector needs n > 0 and positive element pitch")

    @property
    def area(self) -> float:
        return self.n * self.dx * self.dy

    @property
    def radius(self) -> float:
        return math.sqrt(self.area / math.pi)


@dataclass(frozen=True)
class Illumination:
    """Illuminated spot on a reflector panel."""

    s_footprint: float     # full footprint area of the incoming cone, m^2
    s_illuminated: float   # area actually landing on the panel, m^2
    phi_ira: float         # radius of the illuminated disc, m
    n_prime: float         # real-valued illuminated element count


def footprint_radius(alpha: float, d1: float) -> float:
    """Radius of a conical beam's circular cross-section at distance d1.

    alpha is the full opening angle in radians.
    """
    if not 0.0 < alpha < math.pi:
        raise DomainError(f"alpha must be in (0, pi), got {alpha!r}")
    if d1 <= 0.0:
        raise DomainError(f"d1 must be positive, got {d1!r}")
    return math.tan(alpha / 2.0) * d1


def illumination(phi_fp: float, ris: RisGeometry) -> Illumination:
    """Clip a circular footprint of radius phi_fp onto a reflector panel."""
    if phi_fp <= 0.0:
        raise DomainError(f"phi_fp must be positive, got {phi_fp!r}")
    s_fp = math.pi * phi_fp * phi_fp
    s_ill = min(s_fp, ris.area)
    phi_ira = min(phi_fp, ris.radius)
    n_prime = s_ill / (ris.dx * ris.dy)
    return Illumination(s_fp, s_ill, phi_ira, n_prime)


def circle_overlap_area(r1: float, r2: float, offset: float) -> float:
    """Exact lens area of two circles with radii r1, r2 at center distance offset."""
    if r1 <= 0.0 or r2 <= 0.0:
        raise DomainError("radii must be positive")
    if offset < 0.0:
        raise DomainError("offset must be nonnegative")
    if offset >= r1 + r2:
        return 0.0
    if offset <= abs(r1 - r2):
        rm = min(r1, r2)
        return math.pi * rm * rm
    if r2 > r1:
        r1, r2 = r2, r1  # canonical order keeps the result exactly symmetric
    d1 = (r1 * r1 - r2 * r2 + offset * offset) / (2.0 * offset)
    d2 = offset - d1
    # clamp guards against roundoff at the configuration boundaries
    a1 = r1 * r1 * math.acos(max(-1.0, min(1.0, d1 / r1)))
    a2 = r2 * r2 * math.acos(max(-1.0, min(1.0, d2 / r2)))
    h1 = max(r1 * r1 - d1 * d1, 0.0)
    h2 = max(r2 * r2 - d2 * d2, 0.0)
    return a1 - d1 * math.sqrt(h1) + a2 - d2 * math.sqrt(h2)


def ris_overlap_elements(
    phi_ira_primary: float,
    secondary_radius: float,
    axis_offset: float,
    ris: RisGeometry,
) -> float:
    """Real-valued count of panel elements lit by both beams.

    The two illuminated discs are registered by the lateral offset between
    the beam axes at the panel center; the shared area is clipped to the
    panel before converting to elements.
    """
    area = circle_overlap_area(phi_ira_primary, secondary_radius, axis_offset)
    area = min(max(area, 0.0), ris.area)
    return area / (ris.dx * ris.dy)


@dataclass(frozen=True)
class CoverageHit:
    """A point covered by one solid of a beam chain."""

    hop_index: int        # 1-based index of the covering solid
    axis_offset: float    # lateral distance from the point to the solid axis
    radius_at_point: float  # solid cross-section radius at the point


@dataclass(frozen=True)
class BeamChain:
    """Ordered beam solids of one segment, extended to the threshold distance.

    solids[0] is always the transmitter cone; every later solid is a
    cylinder of the chain's shared illuminated-disc radius.
    """

    segment_id: str
    solids: tuple[Solid, ...]
    phi_fp: float
    s_fp: float
    phi_ira: Optional[float]
    s_ill: Optional[float]
    volumes: tuple[float, ...] = field(repr=False)
    d_th: float = 0.0
    d_last: float = 0.0

    def __post_init__(self) -> None:
        if not self.solids or not isinstance(self.solids[0], Cone):
            raise DomainError("a beam chain starts with a cone")
        for s in self.solids[1:]:
            if not isinstance(s, Cylinder):
                raise DomainError("all solids after the first must be cylinders")
            if self.phi_ira is None or abs(s.radius - self.phi_ira) > 1e-12:
                raise DomainError("all cylinders of a chain share the illuminated radius")


def build_beam_chain(segment, d_th: float, alpha: float, ris: RisGeometry) -> BeamChain:
    """Construct the solids and per-hop volumes for a segment.

    The segment provides node positions (transmitter, reflectors, receiver)
    and hop distances.  The last solid is stretched so the chain's total
    axial length equals d_th; a reflector-free segment stretches its single
    cone instead.
    """
    hops = segment.hop_distances
    h = len(hops)
    nodes = segment.node_positions
    fixed = sum(hops[:-1])
    if d_th < fixed:
        raise InfeasibleSegment(
            f"d_th={d_th!r} is shorter than the {h - 1} fixed hops ({fixed!r} m)"
        )
    d_last = d_th - fixed

    solids: list[Solid] = []
    volumes: list[float] = []
    if h == 1:
        # no reflector: one cone stretched to the threshold distance
        phi_fp = footprint_radius(alpha, d_th)
        solids.append(Cone(nodes[0], direction(nodes[0], nodes[1]), alpha / 2.0, d_th))
        volumes.append(math.pi * phi_fp * phi_fp * d_th / 3.0)
        return BeamChain(
            segment_id=segment.id,
            solids=tuple(solids),
            phi_fp=phi_fp,
            s_fp=math.pi * phi_fp * phi_fp,
            phi_ira=None,
            s_ill=None,
            volumes=tuple(volumes),
            d_th=d_th,
            d_last=d_last,
        )

    phi_fp = footprint_radius(alpha, hops[0])
    ill = illumination(phi_fp, ris)
    solids.append(Cone(nodes[0], direction(nodes[0], nodes[1]), alpha / 2.0, hops[0]))
    volumes.append(math.pi * phi_fp * phi_fp * hops[0] / 3.0)
    for i in range(1, h):
        length = hops[i] if i < h - 1 else d_last
        solids.append(Cylinder(nodes[i], direction(nodes[i], nodes[i + 1]), ill.phi_ira, length))
        volumes.append(math.pi * ill.phi_ira * ill.phi_ira * length)
    return BeamChain(
        segment_id=segment.id,
        solids=tuple(solids),
        phi_fp=phi_fp,
        s_fp=ill.s_footprint,
        phi_ira=ill.phi_ira,
        s_ill=ill.s_illuminated,
        volumes=tuple(volumes),
        d_th=d_th,
        d_last=d_last,
    )


def beam_covers_point(chain: BeamChain, p: Point3) -> Optional[CoverageHit]:
    """First solid of the chain (lowest hop index) that contains p, if any."""
    for i, solid in enumerate(chain.solids):
        got = solid.contains(p)
        if got is not None:
            offset, radius = got
            return CoverageHit(hop_index=i + 1, axis_offset=offset, radius_at_point=radius)
    return None
