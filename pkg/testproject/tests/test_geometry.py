import pytest

import logging
import numpy as np
from math import pi, sin, sqrt

from nestedcones.exceptions import (
    ApexError,
    DimensionMismatchError,
    DomainError,
    NotOnConeError,
    ParameterRangeError,
)
from nestedcones.geometry import (
    ON_CONE_TOLERANCE,
    aligned_columns,
    angle_between,
    cone_angles,
    cone_distance,
    flatten_pair,
    flatten_to_sector,
    hypercone_geodesic_distance,
    map_down,
    map_down_columns,
    project_to_cone,
    residual,
    rodrigues_rotation,
    sample_on_cone,
    signed_angle_2d,
    stage_residuals,
    unit_rejections,
)
from nestedcones.hyperspherical import from_hyperspherical, to_hyperspherical
from nestedcones.models import (
    ConePoint,
    HyperconeStage,
    HypersphericalAngles,
    ResidualKind,
)


E3 = np.array([0.0, 0.0, 1.0])


def _cone_point(opening: float, size: float, angle: float) -> ConePoint:
    base = np.array([[np.cos(angle)], [np.sin(angle)]])
    return ConePoint(sample_on_cone(E3, opening, [size], base)[:, 0])


def test_cone_distance_of_unrolled_sector():
    assert cone_distance(7, 10, pi / 6) == pytest.approx(5.2684, abs=1e-3)


def test_cone_distance_reduces_to_size_difference():
    assert cone_distance(3.0, 5.5, 0.0) == pytest.approx(2.5)
    assert cone_distance(0.0, 4.0, 1.2) == pytest.approx(4.0)


def test_cone_distance_opposite_directions_add_sizes():
    assert cone_distance(2.0, 3.0, pi) == pytest.approx(5.0)


@pytest.mark.parametrize("base_distance", [-0.1, pi + 1e-6])
def test_cone_distance_rejects_base_distance_out_of_range(base_distance):
    with pytest.raises(DomainError):
        cone_distance(1.0, 1.0, base_distance)


def test_cone_distance_rejects_negative_size():
    with pytest.raises(DomainError):
        cone_distance(-1.0, 1.0, 0.5)


def test_geodesic_on_three_dimensional_cone():
    p = _cone_point(pi / 6, 7.0, 0.0)
    q = _cone_point(pi / 6, 10.0, pi / 3)
    assert hypercone_geodesic_distance(p, q, pi / 6, E3) == pytest.approx(
        5.2684, abs=1e-3
    )
    assert hypercone_geodesic_distance(p, q, pi / 6) == pytest.approx(
        hypercone_geodesic_distance(p, q, pi / 6, E3), abs=1e-9
    )


def test_geodesic_with_equal_base_directions_is_size_difference():
    p = _cone_point(pi / 4, 2.0, 1.0)
    q = _cone_point(pi / 4, 6.5, 1.0)
    assert hypercone_geodesic_distance(p, q, pi / 4, E3) == pytest.approx(4.5)


def test_geodesic_is_symmetric():
    p = _cone_point(pi / 5, 1.5, 0.3)
    q = _cone_point(pi / 5, 4.0, 2.9)
    assert hypercone_geodesic_distance(p, q, pi / 5, E3) == pytest.approx(
        hypercone_geodesic_distance(q, p, pi / 5, E3), abs=1e-12
    )


def test_geodesic_to_apex_is_size():
    apex = ConePoint(np.zeros(3))
    q = _cone_point(pi / 3, 2.5, 0.7)
    assert hypercone_geodesic_distance(apex, q, pi / 3) == pytest.approx(2.5)


def test_geodesic_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        hypercone_geodesic_distance(
            ConePoint([1.0, 0.0, 1.0]), ConePoint([1.0, 0.0, 0.0, 1.0]), pi / 4
        )


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7, 8])
def test_flattening_is_an_isometry_for_pairs(m, rng):
    axis = rng.normal(size=m)
    axis /= np.linalg.norm(axis)
    for _ in range(50):
        opening = rng.uniform(0.05, pi / 2)
        base = rng.normal(size=(m - 1, 2))
        base /= np.linalg.norm(base, axis=0)
        points = sample_on_cone(axis, opening, rng.uniform(0.5, 5.0, size=2), base)
        p, q = ConePoint(points[:, 0]), ConePoint(points[:, 1])
        flat_p, flat_q = flatten_pair(p, q, axis, opening)
        assert np.linalg.norm(flat_p - flat_q) == pytest.approx(
            hypercone_geodesic_distance(p, q, opening, axis), abs=1e-8
        )
        assert np.linalg.norm(flat_q) == pytest.approx(q.size, rel=1e-12)


def test_flatten_three_dimensional_cone_unrolls_sector():
    point = _cone_point(pi / 6, 2.0, pi / 2)
    flat = flatten_to_sector(point, E3, pi / 6)
    angle = sin(pi / 6) * pi / 2
    np.testing.assert_allclose(flat, [2.0 * np.cos(angle), 2.0 * np.sin(angle)])


def test_flatten_reference_direction_maps_to_first_axis():
    point = _cone_point(pi / 4, 3.0, 0.0)
    np.testing.assert_allclose(
        flatten_to_sector(point, E3, pi / 4), [3.0, 0.0], atol=1e-12
    )


def test_flatten_off_cone_point():
    with pytest.raises(NotOnConeError):
        flatten_to_sector(ConePoint([1.0, 0.0, 1.0]), E3, pi / 6)


def test_flatten_apex():
    with pytest.raises(ApexError):
        flatten_to_sector(ConePoint(np.zeros(3)), E3, pi / 6)


def test_rodrigues_rotation_takes_axis_to_last_basis_vector(rng):
    for m in range(2, 8):
        axis = rng.normal(size=m)
        axis /= np.linalg.norm(axis)
        rotation = rodrigues_rotation(axis)
        e_m = np.eye(m)[-1]
        np.testing.assert_allclose(rotation @ axis, e_m, atol=1e-12)
        np.testing.assert_allclose(rotation @ rotation.T, np.eye(m), atol=1e-12)
        assert np.linalg.det(rotation) == pytest.approx(1.0)


def test_rodrigues_rotation_special_axes():
    np.testing.assert_array_equal(rodrigues_rotation(E3), np.eye(3))
    flip = rodrigues_rotation(-E3)
    np.testing.assert_array_equal(flip, np.diag([-1.0, 1.0, -1.0]))
    np.testing.assert_allclose(flip @ -E3, E3)


def test_sample_on_cone_respects_opening_and_sizes(rng):
    axis = np.array([1.0, 2.0, 2.0, 4.0]) / 5.0
    sizes = rng.uniform(1.0, 3.0, size=20)
    base = rng.normal(size=(3, 20))
    base /= np.linalg.norm(base, axis=0)
    data = sample_on_cone(axis, pi / 5, sizes, base)
    np.testing.assert_allclose(cone_angles(data, axis), pi / 5, atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(data, axis=0), sizes)


def test_sample_on_cone_rejects_wrong_base_dimension():
    with pytest.raises(DimensionMismatchError):
        sample_on_cone(E3, pi / 4, [1.0], np.ones((3, 1)))


def test_project_to_cone_keeps_size():
    stage = HyperconeStage(axis=E3, opening=pi / 4)
    point = ConePoint([3.0, 0.0, 4.0])
    projected = project_to_cone(point, stage)
    assert projected.size == pytest.approx(5.0)
    assert cone_angles(projected.ambient[:, None], E3)[0] == pytest.approx(pi / 4)


def test_residual_kinds():
    stage = HyperconeStage(axis=E3, opening=pi / 6)
    point = ConePoint([np.sin(pi / 3), 0.0, np.cos(pi / 3)])
    assert residual(point, stage) == pytest.approx(pi / 6)
    assert residual(point, stage, ResidualKind.CHORDAL) == pytest.approx(
        2 * np.sin(pi / 12)
    )


def test_stage_residuals_scale_with_size(on_cone_data):
    data = on_cone_data(E3, pi / 4, 10)
    tilted = data * 1.0
    tilted[2] *= 0.5
    residuals = stage_residuals(tilted, E3, pi / 4, ResidualKind.RIEMANNIAN)
    doubled = stage_residuals(2 * tilted, E3, pi / 4, ResidualKind.RIEMANNIAN)
    np.testing.assert_allclose(doubled, 2 * residuals, rtol=1e-12)


def test_signed_angle_2d_range():
    axis = np.array([1.0, 0.0])
    assert signed_angle_2d(ConePoint([0.0, 1.0]), axis) == pytest.approx(pi / 2)
    assert signed_angle_2d(ConePoint([0.0, -1.0]), axis) == pytest.approx(-pi / 2)
    assert signed_angle_2d(ConePoint([-1.0, 0.0]), axis) == pytest.approx(pi)


def test_map_down_preserves_size(random_data):
    data = random_data(5, 30)
    axis = np.ones(5) / np.sqrt(5)
    reduced = map_down_columns(data, axis)
    assert reduced.shape == (4, 30)
    np.testing.assert_allclose(
        np.linalg.norm(reduced, axis=0), np.linalg.norm(data, axis=0), rtol=1e-12
    )
    assert map_down(ConePoint(data[:, 0]), axis).size == pytest.approx(
        np.linalg.norm(data[:, 0])
    )


def test_aligned_columns_use_fallback_direction(caplog):
    data = np.array([[0.0, 1.0], [0.0, 0.0], [2.0, 1.0]])
    with caplog.at_level(logging.WARNING):
        directions = unit_rejections(data, E3)
    assert "1 column(s) aligned" in caplog.text
    np.testing.assert_allclose(np.linalg.norm(directions, axis=0), 1.0)
    np.testing.assert_allclose(E3 @ directions, 0.0, atol=1e-15)


def test_hyperspherical_round_trip(rng):
    for m in range(2, 9):
        v = rng.normal(size=m)
        v /= np.linalg.norm(v)
        angles = to_hyperspherical(v)
        assert angles.dim == m
        np.testing.assert_allclose(from_hyperspherical(angles), v, atol=1e-12)


def test_hyperspherical_of_zero_vector():
    with pytest.raises(DomainError):
        to_hyperspherical(np.zeros(3))


def test_hyperspherical_angle_ranges():
    with pytest.raises(ParameterRangeError):
        HypersphericalAngles(angles=[4.0, 0.1])
    with pytest.raises(ParameterRangeError):
        HypersphericalAngles(angles=[0.5, 2 * pi])


def test_cone_stage_validation():
    with pytest.raises(DomainError):
        HyperconeStage(axis=[1.0, 1.0, 0.0], opening=0.2)
    with pytest.raises(ParameterRangeError):
        HyperconeStage(axis=E3, opening=2.0)


def _random_units(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    vectors = rng.normal(size=(m, n))
    return vectors / np.linalg.norm(vectors, axis=0)


def test_cone_distance_is_a_metric_on_random_triples(rng):
    sizes = rng.uniform(0.0, 5.0, size=(3, 10000))
    a, b, c = (_random_units(rng, 3, 10000) for _ in range(3))

    def base(u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.arccos(np.clip(np.sum(u * v, axis=0), -1.0, 1.0))

    ab_base, bc_base, ac_base = base(a, b), base(b, c), base(a, c)
    for t in range(10000):
        ab = cone_distance(sizes[0, t], sizes[1, t], ab_base[t])
        bc = cone_distance(sizes[1, t], sizes[2, t], bc_base[t])
        ac = cone_distance(sizes[0, t], sizes[2, t], ac_base[t])
        assert ab >= 0.0
        assert ac <= ab + bc + 1e-9
        assert ab == pytest.approx(
            cone_distance(sizes[1, t], sizes[0, t], ab_base[t]), rel=1e-14
        )
    assert cone_distance(2.5, 2.5, 0.0) == 0.0
    assert cone_distance(0.0, 0.0, 2.0) == 0.0
    assert cone_distance(2.5, 2.5, 1e-6) > 0.0


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7, 8])
def test_projection_keeps_norm_and_lands_on_the_cone(m, rng):
    axis = _random_units(rng, m, 1)[:, 0]
    for _ in range(200):
        opening = rng.uniform(0.0, pi / 2)
        stage = HyperconeStage(axis=axis, opening=opening)
        point = ConePoint(rng.normal(size=m) * rng.uniform(0.1, 10.0))
        projected = project_to_cone(point, stage)
        assert projected.size == pytest.approx(point.size, rel=1e-10)
        assert angle_between(projected.ambient, axis) == pytest.approx(
            opening, abs=ON_CONE_TOLERANCE
        )


def test_projection_is_the_identity_on_the_cone(on_cone_data):
    axis = np.array([1.0, 2.0, 2.0, 4.0]) / 5.0
    stage = HyperconeStage(axis=axis, opening=pi / 3)
    data = on_cone_data(axis, pi / 3, 50)
    for column in data.T:
        projected = project_to_cone(ConePoint(column), stage)
        np.testing.assert_allclose(projected.ambient, column, rtol=1e-12, atol=1e-12)


def test_map_down_example():
    reduced = map_down(ConePoint([3.0, 4.0, 5.0]), E3)
    np.testing.assert_allclose(reduced.ambient, [4.24264, 5.65685], atol=1e-5)
    assert reduced.size == pytest.approx(sqrt(50.0), rel=1e-12)


def test_map_down_keeps_angular_order_around_the_axis(rng):
    axis = _random_units(rng, 3, 1)[:, 0]
    angles = rng.uniform(0.0, 2 * pi, size=40)
    base = np.vstack((np.cos(angles), np.sin(angles)))
    sizes = rng.uniform(0.5, 3.0, size=40)
    reduced = map_down_columns(sample_on_cone(axis, pi / 5, sizes, base), axis)
    np.testing.assert_allclose(reduced, base * sizes, atol=1e-12)
    mapped = np.arctan2(reduced[1], reduced[0]) % (2 * pi)
    np.testing.assert_array_equal(np.argsort(mapped), np.argsort(angles))


@pytest.mark.parametrize("factor", [1e-3, 0.7, 250.0])
def test_projection_and_map_down_are_scale_equivariant(factor, rng):
    stage = HyperconeStage(axis=_random_units(rng, 5, 1)[:, 0], opening=0.4)
    for column in rng.normal(size=(5, 20)).T:
        point = ConePoint(column)
        scaled = ConePoint(factor * column)
        np.testing.assert_allclose(
            project_to_cone(scaled, stage).ambient,
            factor * project_to_cone(point, stage).ambient,
            rtol=1e-12,
            atol=1e-14 * factor,
        )
        np.testing.assert_allclose(
            map_down(scaled, stage.axis).ambient,
            factor * map_down(point, stage.axis).ambient,
            rtol=1e-12,
            atol=1e-14 * factor,
        )
        assert residual(scaled, stage) == pytest.approx(
            factor * residual(point, stage), rel=1e-12, abs=1e-14 * factor
        )


def test_chordal_residual_never_exceeds_the_riemannian_one(rng):
    axis = _random_units(rng, 4, 1)[:, 0]
    for _ in range(500):
        stage = HyperconeStage(axis=axis, opening=rng.uniform(0.0, pi / 2))
        point = ConePoint(rng.normal(size=4) * rng.uniform(0.1, 5.0))
        riemannian = residual(point, stage, ResidualKind.RIEMANNIAN)
        chordal = residual(point, stage, ResidualKind.CHORDAL)
        assert abs(chordal) <= abs(riemannian) * (1 + 1e-12)
        assert np.sign(chordal) == np.sign(riemannian)


def test_aligned_columns_marks_both_axis_rays():
    data = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [2.0, -3.0, 1.0]])
    np.testing.assert_array_equal(aligned_columns(data, E3), [True, True, False])


def test_hyperspherical_parameter_ranges():
    np.testing.assert_allclose(
        to_hyperspherical(np.array([1.0, 2.0, 2.0, 4.0]) / 5.0).ranges,
        [pi, pi, 2 * pi],
    )
    np.testing.assert_allclose(to_hyperspherical(np.array([0.0, 1.0])).ranges, [2 * pi])
