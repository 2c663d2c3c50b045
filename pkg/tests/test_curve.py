import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sobolev.curve import (
    DiscreteCurve,
    area,
    circle,
    curvature,
    ellipse,
    geometry,
    is_convex,
    is_immersed,
    isoperimetric_ratio,
    length,
    length_variation,
    limacon,
    resample_constant_speed,
    square,
    star,
    sup_norm,
    turning_number,
    warn_if_rough,
)
from sobolev.errors import DegenerateCurveError, DomainError, NotImmersedError


def constant_curve(n=8):
    return DiscreteCurve(np.ones((n, 2)))


class TestDiscreteCurve:
    def test_rejects_too_few_samples(self):
        with pytest.raises(DomainError):
            DiscreteCurve(np.zeros((7, 2)))

    def test_rejects_wrong_shape(self):
        with pytest.raises(DomainError):
            DiscreteCurve(np.zeros((10, 3)))

    def test_rejects_non_finite_points(self):
        points = circle(1.0, 16).points.copy()
        points[3, 0] = np.nan
        with pytest.raises(DomainError):
            DiscreteCurve(points)

    def test_points_are_read_only(self):
        curve = circle(1.0, 16)
        with pytest.raises(ValueError):
            curve.points[0, 0] = 5.0

    def test_reparametrised_rolls_the_index_origin(self):
        curve = ellipse(2.0, 1.0, 32)
        shifted = curve.reparametrised(5)
        np.testing.assert_array_equal(shifted.points[0], curve.points[5])
        np.testing.assert_array_equal(shifted.points[-5], curve.points[0])


class TestLengthAndGeometry:
    @pytest.mark.parametrize("n", [16, 256, 1024])
    def test_circle_length_matches_stencil_formula(self, n):
        r = 1.7
        expected = n * r * math.sin(2 * math.pi / n)
        assert length(circle(r, n)) == pytest.approx(expected, rel=1e-12)

    def test_circle_length_converges(self):
        assert length(circle(1.0, 256)) == pytest.approx(2 * math.pi, rel=1e-4)

    def test_square_length_matches_corner_formula(self):
        side, per_side = 2.0, 16
        n = 4 * per_side
        expected = 4 * side - 16 * side / n * (1 - math.sqrt(2) / 2)
        assert length(square(side, per_side)) == pytest.approx(expected, rel=1e-12)

    def test_geometry_weights_and_arc_length(self):
        geom = geometry(star(3, 0.2, 128))
        assert geom.weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert geom.xi[0] == 0.0
        assert np.all(np.diff(geom.xi) > 0)
        assert geom.xi[-1] < 1.0
        assert geom.length == pytest.approx(length(star(3, 0.2, 128)), rel=1e-14)

    @pytest.mark.parametrize("n", [8, 100, 1024])
    def test_circle_arc_length_is_the_parameter(self, n):
        xi = geometry(circle(3.0, n)).xi
        np.testing.assert_allclose(xi, np.arange(n) / n, rtol=0, atol=1e-12)

    def test_constant_map_has_zero_length_and_zero_weights(self):
        geom = geometry(constant_curve())
        assert geom.length == 0.0
        assert np.all(geom.weights == 0)
        assert not is_immersed(constant_curve())

    @given(
        rho=st.floats(min_value=1e-3, max_value=1e3),
        amplitude=st.floats(min_value=0.0, max_value=0.5),
        lobes=st.integers(min_value=1, max_value=6),
    )
    @settings(max_examples=30, deadline=None)
    def test_length_scales_linearly(self, rho, amplitude, lobes):
        curve = star(lobes, amplitude, 64)
        assert length(curve.scaled(rho)) == pytest.approx(rho * length(curve), rel=1e-12)

    def test_length_is_translation_invariant(self):
        curve = ellipse(2.0, 1.0, 64)
        assert length(curve.translated((3.0, -4.0))) == pytest.approx(length(curve), rel=1e-12)

    def test_sup_norm_and_area_of_circle(self):
        n, r = 128, 2.0
        curve = circle(r, n)
        assert sup_norm(curve) == pytest.approx(r, rel=1e-15)
        assert area(curve) == pytest.approx(0.5 * n * r * r * math.sin(2 * math.pi / n), rel=1e-12)

    def test_isoperimetric_ratio(self):
        assert isoperimetric_ratio(circle(1.0, 512)) == pytest.approx(1.0, abs=1e-4)
        assert isoperimetric_ratio(ellipse(2.0, 1.0, 512)) < 0.95
        with pytest.raises(DegenerateCurveError):
            isoperimetric_ratio(constant_curve())


class TestLengthVariation:
    def test_matches_central_difference_of_length(self):
        curve = ellipse(2.0, 1.0, 128)
        theta = 2 * np.pi * np.arange(128) / 128
        v = 0.3 * curve.points + np.column_stack((np.cos(3 * theta), 0.5 * np.sin(theta)))
        eps = 1e-6
        plus = length(DiscreteCurve(curve.points + eps * v))
        minus = length(DiscreteCurve(curve.points - eps * v))
        assert length_variation(curve, v) == pytest.approx((plus - minus) / (2 * eps), rel=1e-6)

    def test_radial_scaling_direction_gives_length(self):
        curve = star(3, 0.2, 128)
        assert length_variation(curve, curve.points) == pytest.approx(length(curve), rel=1e-12)

    def test_requires_an_immersion(self):
        with pytest.raises(NotImmersedError):
            length_variation(constant_curve(), np.zeros((8, 2)))


class TestCurvature:
    def test_circle_curvature_is_inverse_radius(self):
        k = curvature(circle(2.0, 256))
        np.testing.assert_allclose(k, 0.5, rtol=1e-3)

    def test_clockwise_circle_has_negative_curvature(self):
        points = circle(1.0, 64).points[::-1]
        k = curvature(DiscreteCurve(points))
        assert np.all(k < 0)
        assert is_convex(DiscreteCurve(points))

    def test_convexity(self):
        assert is_convex(ellipse(2.0, 1.0, 128))
        assert not is_convex(star(3, 0.2, 128))

    def test_ellipse_curvature_at_the_end_of_the_major_axis(self):
        k = curvature(ellipse(2.0, 1.0, 2048))
        assert k[0] == pytest.approx(2.0, abs=1e-4)

    @pytest.mark.parametrize("angle", [0.3, 1.0, 2.5])
    def test_curvature_is_rotation_invariant(self, angle):
        curve = star(3, 0.2, 256)
        rotation = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
        rotated = DiscreteCurve(curve.points @ rotation.T)
        np.testing.assert_allclose(curvature(rotated), curvature(curve), rtol=1e-9, atol=1e-9)

    def test_zero_speed_sample_is_reported(self):
        points = circle(1.0, 16).points.copy()
        points[2] = points[0]
        with pytest.raises(NotImmersedError) as excinfo:
            curvature(DiscreteCurve(points))
        assert excinfo.value.index == 1


class TestResampling:
    def test_resampled_curve_has_nearly_constant_speed(self):
        resampled = resample_constant_speed(ellipse(2.0, 1.0, 512), 512)
        speed = geometry(resampled).speed
        assert (speed.max() - speed.min()) / speed.mean() < 1e-2

    def test_resampling_keeps_the_length(self):
        curve = ellipse(2.0, 1.0, 512)
        assert length(resample_constant_speed(curve, 512)) == pytest.approx(length(curve), rel=1e-4)

    def test_first_station_is_anchored(self):
        curve = star(3, 0.2, 128)
        resampled = resample_constant_speed(curve, 100)
        assert resampled.n == 100
        np.testing.assert_array_equal(resampled.points[0], curve.points[0])

    def test_circle_is_left_in_place(self):
        curve = circle(1.0, 64)
        np.testing.assert_allclose(resample_constant_speed(curve, 64).points, curve.points, atol=1e-12)

    def test_rejects_too_few_stations_and_constant_maps(self):
        with pytest.raises(DomainError):
            resample_constant_speed(circle(1.0, 64), 4)
        with pytest.raises(DegenerateCurveError):
            resample_constant_speed(constant_curve(), 8)


class TestBuiltinShapes:
    def test_invalid_shape_parameters(self):
        with pytest.raises(DomainError):
            circle(0.0, 64)
        with pytest.raises(DomainError):
            circle(1.0, 4)
        with pytest.raises(DomainError):
            ellipse(-1.0, 1.0, 64)
        with pytest.raises(DomainError):
            star(3, 1.0, 64)
        with pytest.raises(DomainError):
            limacon(1.0, 1.0, 64)
        with pytest.raises(DomainError):
            square(1.0, 1)

    def test_eight_sample_circle_sits_on_the_eighth_roots_of_unity(self):
        half = math.sqrt(0.5)
        expected = [
            (1, 0), (half, half), (0, 1), (-half, half), (-1, 0), (-half, -half), (0, -1), (half, -half)
        ]
        np.testing.assert_allclose(circle(1.0, 8).points, expected, rtol=0, atol=1e-15)

    @pytest.mark.parametrize("n", [8, 64, 255])
    def test_degenerate_star_and_ellipse_are_the_circle(self, n):
        np.testing.assert_array_equal(star(3, 0.0, n).points, circle(1.0, n).points)
        np.testing.assert_array_equal(ellipse(1.0, 1.0, n).points, circle(1.0, n).points)

    def test_limacon_with_inner_loop_is_immersed(self):
        assert is_immersed(limacon(2.0, 1.0, 256))


class TestRoughness:
    def test_smooth_curve_is_not_flagged(self):
        assert warn_if_rough(circle(1.0, 64)) is False

    def test_clustered_sampling_is_flagged(self):
        theta = np.concatenate((np.linspace(0.0, 0.1, 16, endpoint=False), np.linspace(0.1, 2 * np.pi, 16, endpoint=False)))
        curve = DiscreteCurve(np.column_stack((np.cos(theta), np.sin(theta))))
        assert warn_if_rough(curve) is True

    def test_constant_map_is_not_flagged(self):
        assert warn_if_rough(constant_curve()) is False


class TestTurningNumber:
    def test_simple_loops_turn_once(self):
        assert turning_number(circle(1.0, 64)) == 1
        assert turning_number(DiscreteCurve(circle(1.0, 64).points[::-1])) == -1
        assert turning_number(star(3, 0.2, 128)) == 1

    def test_limacon_inner_loop_turns_twice_and_is_not_convex(self):
        curve = limacon(2.0, 1.0, 256)
        assert np.all(curvature(curve) > 0)
        assert turning_number(curve) == 2
        assert not is_convex(curve)
