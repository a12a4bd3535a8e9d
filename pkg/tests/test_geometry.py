import json
import math

import numpy as np
import pytest

from robinpeaks.geometry import (CrossSection, PeakGeometry, exponents,
                                 hardy_constant, predicted_coefficient,
                                 ratio_A)


def random_convex_polygon(rng, n=8):
    # convex hull of points on a randomized ellipse-like curve
    angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=n))
    radii = rng.uniform(0.5, 1.5, size=n)
    pts = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
    from scipy.spatial import ConvexHull

    hull = ConvexHull(pts)
    return pts[hull.vertices]


def test_ratio_examples():
    assert ratio_A(CrossSection.ball(1.0, 2)) == 2.0
    assert ratio_A(CrossSection.interval(1.0)) == 2.0
    square = CrossSection.polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert ratio_A(square) == pytest.approx(4.0, rel=1e-14)


def test_ratio_ball_exact_any_dimension():
    for dim in (1, 2, 3, 5):
        for rho in (0.3, 1.0, 2.5):
            assert ratio_A(CrossSection.ball(rho, dim)) == dim / rho


def test_hardy_examples():
    assert hardy_constant(1.5, 2) == pytest.approx(-0.1875, abs=1e-15)
    assert hardy_constant(1.5, 3) == pytest.approx(0.75, abs=1e-15)
    assert hardy_constant(1.2, 2) == pytest.approx(-0.24, abs=1e-15)


def test_hardy_lower_bound():
    for q in np.linspace(1.01, 1.99, 23):
        for d in (2, 3, 4):
            h = hardy_constant(float(q), d)
            assert h >= -0.25
            assert h == pytest.approx(((q * (d - 1) - 1) ** 2 - 1) / 4, rel=1e-13)


def test_hardy_rejects_bad_arguments():
    with pytest.raises(ValueError):
        hardy_constant(2.0, 2)
    with pytest.raises(ValueError):
        hardy_constant(1.0, 2)
    with pytest.raises(ValueError):
        hardy_constant(1.5, 1)


def test_exponents_examples():
    assert exponents(1.5) == pytest.approx((4.0, 3.5))
    assert exponents(1.2) == pytest.approx((2.5, 2.3))
    p, rem = exponents(1.0 + 1e-6)
    assert p == pytest.approx(2.0, abs=1e-5)
    assert abs(p - 2.0 / (2.0 - (1.0 + 1e-6))) < 1e-9
    with pytest.raises(ValueError):
        exponents(2.5)


def test_exponent_ordering():
    for q in (1.1, 1.5, 1.9):
        p, rem = exponents(q)
        assert p > rem > p - 1.0


def test_predicted_coefficient():
    geom = PeakGeometry(q=1.5, d=2, cross_section=CrossSection.interval(1.0), a=1.0)
    constants = geom.constants()
    assert constants.a_omega == 2.0
    assert constants.p == 4.0
    assert predicted_coefficient(constants, -0.5) == pytest.approx(-8.0)
    one = PeakGeometry(q=1.5, d=2, cross_section=CrossSection.interval(2.0), a=1.0)
    assert one.constants().a_omega == 1.0
    assert predicted_coefficient(one.constants(), -0.37) == pytest.approx(-0.37)
    with pytest.raises(ValueError):
        predicted_coefficient(constants, 0.1)


def test_coefficient_ordering_follows_ratio():
    lam = -0.5
    ball = CrossSection.ball(1.0, 2)
    disk_unit_area = CrossSection.ball(1.0 / math.sqrt(math.pi), 2)
    geom = lambda cs: PeakGeometry(q=1.5, d=2, cross_section=cs, a=1.0).constants()
    c_ball = predicted_coefficient(geom(ball), lam)
    c_disk = predicted_coefficient(geom(disk_unit_area), lam)
    assert (abs(c_disk) > abs(c_ball)) == (ratio_A(disk_unit_area) > ratio_A(ball))


def test_isoperimetric_property_random_convex_polygons():
    rng = np.random.default_rng(42)
    for _ in range(20):
        poly = CrossSection.polygon(random_convex_polygon(rng))
        disk = CrossSection.ball(math.sqrt(poly.area / math.pi), 2)
        assert disk.area == pytest.approx(poly.area, rel=1e-12)
        assert ratio_A(poly) >= ratio_A(disk) * (1.0 - 1e-12)


def test_ratio_scaling_homogeneity():
    rng = np.random.default_rng(7)
    poly = CrossSection.polygon(random_convex_polygon(rng))
    for t in (0.5, 2.0, 3.7):
        scaled = poly.scaled(t)
        assert ratio_A(scaled) == pytest.approx(ratio_A(poly) / t, rel=1e-12)


def test_polygon_centering_and_circumradius():
    poly = CrossSection.polygon([(10, 10), (12, 10), (12, 11), (10, 11)])
    cx = np.mean([v[0] for v in poly.vertices])
    cy = np.mean([v[1] for v in poly.vertices])
    assert abs(cx) < 1e-12 and abs(cy) < 1e-12
    assert poly.circumradius == pytest.approx(math.hypot(1.0, 0.5), rel=1e-12)
    assert poly.area == pytest.approx(2.0, rel=1e-12)


def test_polygon_rejects_self_intersection_and_degenerate():
    with pytest.raises(ValueError):
        CrossSection.polygon([(0, 0), (1, 1), (1, 0), (0, 1)])  # bowtie
    with pytest.raises(ValueError):
        CrossSection.polygon([(0, 0), (1, 0), (2, 0)])  # zero area


def test_json_parsing():
    cs = CrossSection.from_json({"kind": "interval", "length": 1.0})
    assert cs.kind == "interval" and cs.area == 1.0 and cs.perimeter == 2.0
    cs = CrossSection.from_json(json.dumps({"kind": "ball", "radius": 1.0, "dim": 2}))
    assert cs.kind == "ball" and ratio_A(cs) == 2.0
    cs = CrossSection.from_json(
        {"kind": "polygon", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]})
    assert cs.area == pytest.approx(1.0)
    with pytest.raises(ValueError):
        CrossSection.from_json({"kind": "pentagon"})
    back = CrossSection.from_json(cs.to_json())
    assert back.area == pytest.approx(cs.area)


def test_peak_geometry_validation():
    good = CrossSection.interval(1.0)
    with pytest.raises(ValueError):
        PeakGeometry(q=2.0, d=2, cross_section=good, a=1.0)
    with pytest.raises(ValueError):
        PeakGeometry(q=1.5, d=1, cross_section=good, a=1.0)
    with pytest.raises(ValueError):
        PeakGeometry(q=1.5, d=2, cross_section=good, a=0.0)
    with pytest.raises(ValueError):
        PeakGeometry(q=1.5, d=2, cross_section=good, a=1.0, epsilon=0.0)
