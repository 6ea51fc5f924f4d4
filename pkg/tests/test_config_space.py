import math

import numpy as np
import pytest

from spinbundles.config_space import (
    ATLAS,
    GroupElement,
    IDENTITY,
    SWAP,
    SpherePoint,
    angles_of,
    antipode,
    antipode_angles,
    chart_contains,
    chart_inverse,
    chart_map,
    partition_phi,
    project,
    sample_sphere,
)
from spinbundles.errors import ChartDomainError, GeometryError


def test_sphere_point_unit_norm_enforced():
    SpherePoint(1.0, 0.0, 0.0)
    with pytest.raises(GeometryError):
        SpherePoint(1.0, 1.0, 0.0)


def test_angles_round_trip(rng):
    for _ in range(200):
        theta = rng.uniform(0.05, math.pi - 0.05)
        phi = rng.uniform(0.0, 2.0 * math.pi)
        p = SpherePoint.from_angles(theta, phi)
        q = SpherePoint.from_angles(p.theta, p.phi)
        assert np.linalg.norm(p.vec - q.vec) < 1e-12


def test_antipode_examples():
    p = SpherePoint(0.0, 0.0, 1.0)
    assert antipode(p) == SpherePoint(0.0, 0.0, -1.0)


def test_antipode_involution(points):
    for v in points[:100]:
        p = SpherePoint.from_vec(v)
        assert antipode(antipode(p)) == p


def test_antipode_in_angles_matches_cartesian_negation():
    # trigonometric route: (theta, phi) -> (pi - theta, phi + pi)
    p = SpherePoint.from_angles(math.pi / 3, math.pi / 4)
    q = antipode(p)
    expected = SpherePoint.from_angles(2 * math.pi / 3, 5 * math.pi / 4)
    assert np.linalg.norm(q.vec - expected.vec) < 1e-12
    theta_a, phi_a = antipode_angles(p.theta, p.phi)
    assert abs(theta_a - q.theta) < 1e-12
    assert abs(phi_a - q.phi) < 1e-12


def test_action_is_free(many_points):
    dist = np.linalg.norm(many_points - (-many_points), axis=1)
    assert np.abs(dist - 2.0).max() < 1e-12


def test_group_element_axioms():
    assert IDENTITY * IDENTITY == IDENTITY
    assert SWAP * SWAP == IDENTITY
    assert SWAP * IDENTITY == SWAP
    assert SWAP.inverse() == SWAP
    with pytest.raises(GeometryError):
        GroupElement(2)


def test_project_canonicalization_examples():
    assert project(SpherePoint(0.0, 0.0, -1.0)).rep == SpherePoint(0.0, 0.0, 1.0)
    a = project(SpherePoint(-1.0, 0.0, 0.0))
    b = project(SpherePoint(1.0, 0.0, 0.0))
    assert a == b
    assert hash(a) == hash(b)
    q = project(SpherePoint(0.0, -0.6, 0.8))
    assert np.allclose(q.rep.vec, [0.0, 0.6, -0.8])


def test_project_respects_antipode(many_points):
    for v in many_points[:10_000:7]:
        p = SpherePoint.from_vec(v)
        assert project(p) == project(antipode(p))


def test_chart_map_examples():
    q = project(SpherePoint(1.0, 0.0, 0.0))
    assert chart_map(1, q) == (0.0, 0.0)
    s = 1.0 / math.sqrt(2.0)
    q2 = project(SpherePoint(s, s, 0.0))
    u, v = chart_map(1, q2)
    assert abs(u - 1.0) < 1e-15 and abs(v) < 1e-15
    pole = project(SpherePoint(0.0, 0.0, 1.0))
    assert chart_map(3, pole) == (0.0, 0.0)
    with pytest.raises(ChartDomainError):
        chart_map(1, pole)


def test_chart_cover(many_points):
    # every unit vector has a coordinate of size at least 1/sqrt(3)
    assert np.abs(many_points).max(axis=1).min() >= 1.0 / math.sqrt(3.0) - 1e-12
    for v in many_points[:50]:
        assert ATLAS.charts_containing(project(SpherePoint.from_vec(v)))


def test_chart_transition_geometry(points):
    # h_b . h_a^{-1} applied to h_a([x]) lands on h_b([x])
    worst = 0.0
    for v in points[:300]:
        q = project(SpherePoint.from_vec(v))
        inside = ATLAS.charts_containing(q)
        for a in inside:
            back = chart_inverse(a, chart_map(a, q))
            for b in inside:
                expect = chart_map(b, q)
                got = chart_map(b, back)
                worst = max(worst, abs(expect[0] - got[0]), abs(expect[1] - got[1]))
    assert worst < 1e-10


def test_partition_examples():
    q = project(SpherePoint(1.0, 0.0, 0.0))
    assert partition_phi(1, q) == 1.0
    assert partition_phi(2, q) == 0.0 and partition_phi(3, q) == 0.0
    d = 1.0 / math.sqrt(3.0)
    qd = project(SpherePoint(d, d, d))
    phis = [partition_phi(a, qd) for a in (1, 2, 3)]
    assert np.allclose(phis, d)
    assert abs(sum(p * p for p in phis) - 1.0) < 1e-12


def test_partition_of_unity(many_points):
    sq = (many_points**2).sum(axis=1)
    assert np.abs(sq - 1.0).max() < 1e-12


def test_partition_even_under_antipode(points):
    for v in points[:200]:
        q1 = project(SpherePoint.from_vec(v))
        q2 = project(SpherePoint.from_vec(-v))
        for a in (1, 2, 3):
            assert partition_phi(a, q1) == partition_phi(a, q2)


def test_chart_membership_threshold():
    q = project(SpherePoint(0.0, 0.0, 1.0))
    assert not chart_contains(1, q)
    assert chart_contains(3, q)


def test_sample_sphere_deterministic():
    a = sample_sphere(64, 9)
    b = sample_sphere(64, 9)
    assert np.array_equal(a, b)
    assert np.abs(np.linalg.norm(a, axis=1) - 1.0).max() < 1e-12


def test_angles_of_pole_convention():
    theta, phi = angles_of(np.array([0.0, 0.0, 1.0]))
    assert theta == 0.0 and phi == 0.0
    theta, phi = angles_of(np.array([0.0, 0.0, -1.0]))
    assert abs(theta - math.pi) < 1e-15 and phi == 0.0
