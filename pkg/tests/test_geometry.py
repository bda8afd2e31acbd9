import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import build_segment, lens_area_mc, rasterize_chain, voxel_of
from risgraph.errors import DomainError, InfeasibleSegment
from risgraph.geometry import (
    BeamChain,
    Cone,
    Cylinder,
    Point3,
    RisGeometry,
    beam_covers_point,
    build_beam_chain,
    circle_overlap_area,
    footprint_radius,
    illumination,
    ris_overlap_elements,
)

DEG = math.pi / 180.0


# -- footprint -------------------------------------------------------------


def test_footprint_radius_values():
    # tan(5 deg) * 10, high-precision reference
    assert math.isclose(footprint_radius(10 * DEG, 10.0), 0.87488663525924005, rel_tol=1e-12)
    assert math.isclose(footprint_radius(90 * DEG, 1.0), 1.0, rel_tol=1e-12)
    assert footprint_radius(1e-9, 10.0) < 1e-8


def test_footprint_radius_domain():
    with pytest.raises(DomainError):
        footprint_radius(10 * DEG, 0.0)
    with pytest.raises(DomainError):
        footprint_radius(0.0, 1.0)
    with pytest.raises(DomainError):
        footprint_radius(math.pi, 1.0)


@given(
    a1=st.floats(0.01, 3.0),
    a2=st.floats(0.01, 3.0),
    d1=st.floats(0.01, 100.0),
    d2=st.floats(0.01, 100.0),
)
def test_footprint_radius_strictly_increasing(a1, a2, d1, d2):
    lo_a, hi_a = sorted((a1, a2))
    lo_d, hi_d = sorted((d1, d2))
    if hi_a > lo_a:
        assert footprint_radius(hi_a, lo_d) > footprint_radius(lo_a, lo_d)
    if hi_d > lo_d:
        assert footprint_radius(lo_a, hi_d) > footprint_radius(lo_a, lo_d)


# -- illumination ----------------------------------------------------------


def test_illumination_footprint_exceeds_panel():
    panel = RisGeometry(n=10000, dx=1.5e-4, dy=1.5e-4)
    ill = illumination(0.87489, panel)
    assert math.isclose(ill.s_illuminated, 2.25e-4, rel_tol=1e-12)
    assert math.isclose(ill.n_prime, 10000.0, rel_tol=1e-12)
    assert math.isclose(ill.phi_ira, panel.radius, rel_tol=1e-12)


def test_illumination_boundary_equality():
    panel = RisGeometry(n=10000, dx=1.5e-4, dy=1.5e-4)
    ill = illumination(panel.radius, panel)
    assert math.isclose(ill.s_illuminated, panel.area, rel_tol=1e-12)
    assert math.isclose(ill.n_prime, panel.n, rel_tol=1e-12)


def test_illumination_small_footprint():
    panel = RisGeometry(n=10000, dx=1.5e-4, dy=1.5e-4)
    ill = illumination(5e-3, panel)
    assert math.isclose(ill.s_illuminated, 7.853981633974483e-5, rel_tol=1e-12)
    assert math.isclose(ill.n_prime, 3490.658503988659, rel_tol=1e-12)


@given(phi=st.floats(1e-6, 10.0))
def test_illumination_bounds(phi):
    panel = RisGeometry(n=4096, dx=2e-4, dy=2e-4)
    ill = illumination(phi, panel)
    assert ill.n_prime <= panel.n + 1e-9
    assert ill.phi_ira <= panel.radius + 1e-15
    assert ill.phi_ira <= phi


# -- circle overlap --------------------------------------------------------


def test_circle_overlap_trivial_cases():
    assert math.isclose(circle_overlap_area(1.0, 1.0, 0.0), math.pi, rel_tol=1e-12)
    assert circle_overlap_area(1.0, 1.0, 2.0) == 0.0
    assert circle_overlap_area(1.0, 1.0, 5.0) == 0.0
    assert math.isclose(circle_overlap_area(3.0, 1.0, 0.5), math.pi, rel_tol=1e-12)


def test_circle_overlap_lens_value():
    # 2*acos(1/2) - (1/2)*sqrt(3), high-precision reference
    assert math.isclose(circle_overlap_area(1.0, 1.0, 1.0), 1.2283696986087568, rel_tol=1e-12)


def test_circle_overlap_against_monte_carlo():
    exact = circle_overlap_area(1.0, 1.0, 1.0)
    approx = lens_area_mc(1.0, 1.0, 1.0, n=10_000_000, seed=2024)
    assert abs(approx - exact) / exact < 1e-3


@given(
    r1=st.floats(0.1, 3.0),
    r2=st.floats(0.1, 3.0),
    d=st.floats(0.0, 7.0),
    shrink=st.floats(0.0, 1.0),
)
@settings(max_examples=200)
def test_circle_overlap_symmetry_and_monotonicity(r1, r2, d, shrink):
    a = circle_overlap_area(r1, r2, d)
    assert a == circle_overlap_area(r2, r1, d)
    closer = circle_overlap_area(r1, r2, d * shrink)
    assert closer >= a - 1e-12


# -- overlap element counts ------------------------------------------------


def test_ris_overlap_full_concentric():
    panel = RisGeometry(n=10000, dx=1.5e-4, dy=1.5e-4)
    n_iota = ris_overlap_elements(panel.radius * 2, panel.radius * 3, 0.0, panel)
    assert math.isclose(n_iota, panel.n, rel_tol=1e-12)


def test_ris_overlap_disjoint():
    panel = RisGeometry(n=10000, dx=1.5e-4, dy=1.5e-4)
    assert ris_overlap_elements(1e-3, 1e-3, 5e-3, panel) == 0.0


def test_ris_overlap_lens_case():
    panel = RisGeometry(n=10000, dx=1.5e-4, dy=1.5e-4)
    r = 8.46e-3
    expected = circle_overlap_area(r, r, r) / (1.5e-4 * 1.5e-4)
    got = ris_overlap_elements(r, r, r, panel)
    assert math.isclose(got, expected, rel_tol=1e-12)


# -- beam chains -----------------------------------------------------------


def _segment_two_ris(params, ris):
    pts = [
        Point3(0.0, 0.0, 0.0),
        Point3(5.0, 0.0, 0.0),
        Point3(5.0, 5.0, 0.0),
        Point3(5.0, 5.0, 3.0),
    ]
    return build_segment(params, ris, pts)


def test_build_chain_two_reflectors(params, ris):
    seg = _segment_two_ris(params, ris)
    chain = build_beam_chain(seg, 20.0, params.alpha, ris)
    kinds = [type(s).__name__ for s in chain.solids]
    assert kinds == ["Cone", "Cylinder", "Cylinder"]
    assert [s.length for s in chain.solids] == [5.0, 5.0, 10.0]
    phi_fp = footprint_radius(params.alpha, 5.0)
    assert math.isclose(chain.volumes[0], math.pi * phi_fp**2 * 5.0 / 3.0, rel_tol=1e-9)
    assert math.isclose(chain.volumes[1], math.pi * chain.phi_ira**2 * 5.0, rel_tol=1e-9)
    assert math.isclose(chain.volumes[2], math.pi * chain.phi_ira**2 * 10.0, rel_tol=1e-9)
    assert all(
        isinstance(s, Cone) or s.radius == chain.phi_ira for s in chain.solids
    )


def test_build_chain_no_reflector(params, ris):
    seg = build_segment(params, ris, [Point3(0, 0, 0), Point3(5, 0, 0)])
    chain = build_beam_chain(seg, 15.0, params.alpha, ris)
    assert len(chain.solids) == 1
    assert isinstance(chain.solids[0], Cone)
    assert chain.solids[0].length == 15.0
    phi_fp = footprint_radius(params.alpha, 15.0)
    assert math.isclose(chain.volumes[0], math.pi * phi_fp**2 * 15.0 / 3.0, rel_tol=1e-9)
    assert chain.phi_ira is None


def test_build_chain_one_reflector(params, ris):
    pts = [Point3(0, 0, 0), Point3(5, 0, 0), Point3(9, 0, 0)]
    seg = build_segment(params, ris, pts)
    chain = build_beam_chain(seg, 12.0, params.alpha, ris)
    assert [s.length for s in chain.solids] == [5.0, 7.0]
    assert chain.d_last == 7.0


def test_build_chain_infeasible_extension(params, ris):
    seg = _segment_two_ris(params, ris)
    with pytest.raises(InfeasibleSegment):
        build_beam_chain(seg, 9.0, params.alpha, ris)


# -- point coverage --------------------------------------------------------


def _axis_chain(params, ris):
    pts = [Point3(0, 0, 0), Point3(4, 0, 0), Point3(8, 0, 0)]
    seg = build_segment(params, ris, pts)
    return build_beam_chain(seg, 12.0, params.alpha, ris)


def test_cover_on_axis(params, ris):
    chain = _axis_chain(params, ris)
    hit = beam_covers_point(chain, Point3(2.0, 0.0, 0.0))
    assert hit is not None
    assert hit.hop_index == 1
    assert hit.axis_offset == 0.0


def test_cover_just_outside_cylinder(params, ris):
    chain = _axis_chain(params, ris)
    radius = chain.phi_ira
    assert beam_covers_point(chain, Point3(6.0, radius * 1.0001, 0.0)) is None
    inside = beam_covers_point(chain, Point3(6.0, radius * 0.9999, 0.0))
    assert inside is not None and inside.hop_index == 2


def test_cover_tie_breaks_to_lowest_hop(params, ris):
    # a chain folding back on itself: the cylinder re-enters the cone region
    pts = [Point3(0, 0, 0), Point3(6, 0, 0), Point3(1, 0, 0)]
    seg = build_segment(params, ris, pts)
    chain = build_beam_chain(seg, 14.0, params.alpha, ris)
    probe = Point3(3.0, 0.0, 0.0)
    assert chain.solids[1].contains(probe) is not None
    hit = beam_covers_point(chain, probe)
    assert hit.hop_index == 1


def test_cover_matches_voxel_rasterization(params, ris):
    """Coverage agrees with a rasterized oracle away from voxel boundaries."""
    rng = np.random.default_rng(99)
    step = 0.01
    disagreements = 0
    for _ in range(4):
        pts = [
            Point3(0.3, 0.5, 0.5),
            Point3(float(rng.uniform(0.8, 1.2)), 0.5, 0.5),
            Point3(
                float(rng.uniform(1.0, 1.6)),
                float(rng.uniform(0.4, 0.9)),
                0.5,
            ),
        ]
        seg = build_segment(params, ris, pts)
        chain = build_beam_chain(
            seg, sum(seg.hop_distances) + 0.5, params.alpha, ris
        )
        lo = np.zeros(3)
        hi = np.full(3, 2.5)
        grid, _ = rasterize_chain(chain, lo, hi, step)
        probes = rng.uniform(0.0, 2.5, size=(500, 3))
        from helpers import chain_contains_oracle

        oracle_at_probe = chain_contains_oracle(chain, probes)
        for k in range(probes.shape[0]):
            p = probes[k]
            actual = beam_covers_point(chain, Point3(*p)) is not None
            if actual != bool(oracle_at_probe[k]):
                disagreements += 1
                continue
            expected = bool(grid[voxel_of(p, lo, step, grid.shape)])
            if actual != expected:
                # tolerated only when the boundary crosses this voxel
                center = (np.floor((p - lo) / step) + 0.5) * step + lo
                oracle_center = chain_contains_oracle(chain, center[None, :])[0]
                assert bool(oracle_center) != bool(oracle_at_probe[k])
    assert disagreements == 0


# -- solid validation ------------------------------------------------------


def test_solid_invariants():
    with pytest.raises(DomainError):
        Cone(Point3(0, 0, 0), (1.0, 0.0, 0.0), half_angle=2.0, length=1.0)
    with pytest.raises(DomainError):
        Cone(Point3(0, 0, 0), (0.5, 0.0, 0.0), half_angle=0.1, length=1.0)
    with pytest.raises(DomainError):
        Cylinder(Point3(0, 0, 0), (1.0, 0.0, 0.0), radius=0.0, length=1.0)
    with pytest.raises(DomainError):
        Point3(math.nan, 0.0, 0.0)
