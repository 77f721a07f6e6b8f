import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from circle_envelopes.creativity import classify_family
from circle_envelopes.discriminant import (COINCIDENT, EMPTY, EXTRAPOLATED, FULL_CIRCLE, PAIR, TANGENT,
                                           CoincidentCirclesError, circle_circle_intersect, discriminant_set,
                                           discriminant_slice, e1_limit, extrapolate_limit, signed_epsilons,
                                           solve_slices)
from circle_envelopes.frames import build_frames
from circle_envelopes.helpers import rotate
from .test_helpers import CREATIVE_GALLERY, brute_force_slice, family_of, gallery_family


class CircleCircleIntersectTests(SimpleTestCase):
    def test_pair(self):
        hit = circle_circle_intersect((0, 0), 1.0, (1, 0), 1.0)
        self.assertEqual(hit.kind, PAIR)
        root = np.sqrt(3) / 2
        np.testing.assert_allclose(hit.points, [[0.5, root], [0.5, -root]])

    def test_external_tangency(self):
        hit = circle_circle_intersect((0, 0), 1.0, (2, 0), 1.0)
        self.assertEqual(hit.kind, TANGENT)
        np.testing.assert_allclose(hit.points, [[1.0, 0.0]])

    def test_internal_tangency(self):
        hit = circle_circle_intersect((0, 0), 2.0, (1, 0), 1.0)
        self.assertEqual(hit.kind, TANGENT)
        np.testing.assert_allclose(hit.points, [[2.0, 0.0]])

    def test_apart(self):
        self.assertEqual(circle_circle_intersect((0, 0), 1.0, (3, 0), 1.0).kind, EMPTY)

    def test_nested(self):
        hit = circle_circle_intersect((0, 0), 3.0, (0.5, 0), 1.0)
        self.assertEqual(hit.kind, EMPTY)
        self.assertEqual(hit.points.shape, (0, 2))

    def test_concentric(self):
        self.assertEqual(circle_circle_intersect((1, 1), 1.0, (1, 1), 2.0).kind, EMPTY)

    def test_coincident(self):
        with self.assertRaises(CoincidentCirclesError) as context:
            circle_circle_intersect((1, 2), 3.0, (1, 2), 3.0)
        self.assertEqual(context.exception.radius, 3.0)

    def test_radius_must_be_positive(self):
        with self.assertRaises(ValueError):
            circle_circle_intersect((0, 0), 0.0, (1, 0), 1.0)


class DiscriminantSliceTests(SimpleTestCase):
    def test_pair_of_the_translated_circle(self):
        item = discriminant_slice(gallery_family('example5'), 0.3)
        self.assertEqual(item.kind, PAIR)
        np.testing.assert_allclose(item.points, [[0.3, -1.0], [0.3, 1.0]], atol=1e-15)

    def test_tangent_at_the_common_point(self):
        item = discriminant_slice(gallery_family('example4'), 1.0)
        self.assertEqual(item.kind, TANGENT)
        np.testing.assert_allclose(item.points, [[0.0, 0.0]], atol=1e-15)

    def test_full_circle_over_a_stationary_centre(self):
        item = discriminant_slice(gallery_family('example6'), 0.2)
        self.assertEqual(item.kind, FULL_CIRCLE)
        self.assertEqual(item.as_row(), (0.2, FULL_CIRCLE, 0.0, 0.0, None, None, 1.0))

    def test_full_circle_at_the_cusp(self):
        self.assertEqual(discriminant_slice(gallery_family('example9'), 0.0).kind, FULL_CIRCLE)

    def test_empty_when_the_radius_outgrows(self):
        self.assertEqual(discriminant_slice(gallery_family('example7'), 1.0).kind, EMPTY)
        self.assertEqual(discriminant_slice(gallery_family('concentric'), 1.0).kind, EMPTY)

    def test_pair_row(self):
        row = discriminant_slice(gallery_family('example5'), 0.5).as_row()
        self.assertEqual(row[:2], (0.5, PAIR))
        np.testing.assert_allclose(row[2:6], [0.5, -1.0, 0.5, 1.0], atol=1e-15)
        self.assertIsNone(row[6])

    def test_parameter_outside_the_interval(self):
        with self.assertRaises(ValidationError) as context:
            discriminant_slice(gallery_family('example5'), 2.0)
        self.assertEqual(context.exception.code, 'malformed')

    def test_agrees_with_a_brute_force_scan(self):
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 50:
            center = rng.normal(size=2)
            velocity = rng.normal(scale=2.0, size=2)
            radius = rng.uniform(0.5, 2.0)
            radius_rate = rng.normal(scale=2.0)
            speed = float(np.hypot(*velocity))
            if abs(abs(radius_rate) / speed - 1.0) < 1e-3:
                continue
            mu = velocity / speed
            nu = -rotate(mu)
            item = solve_slices(np.zeros(1), center[None, :], np.array([radius]), np.array([radius_rate]),
                                np.array([speed]), mu[None, :], nu[None, :], 1e-8)[0]
            kind, points = brute_force_slice(center, velocity, radius, radius_rate)
            with self.subTest(draw=checked):
                self.assertEqual(item.kind, kind)
                self.assertEqual(len(item.points), len(points))
                for point in points:
                    self.assertLess(np.hypot(*(item.points - point).T).min(), 1e-6)
            checked += 1


class DiscriminantSetTests(SimpleTestCase):
    def decompose(self, name, **options):
        family = gallery_family(name)
        frames = build_frames(family)
        report = classify_family(frames, family.radius_rate(frames.t), family.interval)
        return discriminant_set(family, frames, report, **options)

    def test_bundled_decompositions_are_complete(self):
        for name in CREATIVE_GALLERY + ('example6',):
            with self.subTest(example=name):
                decomposition = self.decompose(name)
                self.assertTrue(decomposition.complete, decomposition.summary())

    def test_full_circle_of_the_sextic(self):
        decomposition = self.decompose('example3')
        self.assertEqual(decomposition.full_circles, [0.0])
        self.assertEqual(decomposition.matched, 2 * 2000)

    def test_repeated_circle_is_all_full_circles(self):
        decomposition = self.decompose('example6')
        self.assertEqual(len(decomposition.full_circles), 2001)
        self.assertEqual(decomposition.matched, 0)

    def test_summary(self):
        summary = self.decompose('example5').summary()
        self.assertIn('2001 slices (2001 Pair)', summary)
        self.assertIn('4002 points matched to 2 envelope branches, 0 unmatched', summary)

    def test_points_without_a_branch_are_reported(self):
        with self.assertLogs('circle_envelopes.discriminant', 'WARNING'):
            decomposition = self.decompose('example5', branches=[])
        self.assertFalse(decomposition.complete)
        self.assertEqual(len(decomposition.unmatched), 4002)

    def test_not_creative_family(self):
        with self.assertRaises(ValidationError) as context:
            self.decompose('example7')
        self.assertEqual(context.exception.code, 'not_creative')


class E1LimitTests(SimpleTestCase):
    def test_signed_epsilons(self):
        np.testing.assert_allclose(signed_epsilons([1e-3, 1e-2, 1e-2]), [1e-2, 1e-3, -1e-2, -1e-3])

    def test_translated_circle(self):
        result = e1_limit(gallery_family('example5'), 0.0)
        self.assertEqual(result.reference_kind, PAIR)
        self.assertEqual(set(result.kinds), {PAIR})
        self.assertEqual(len(result.tracks), 2)
        np.testing.assert_allclose(result.tracks[0].reference, [0.0, -1.0], atol=1e-15)
        for track in result.tracks:
            self.assertTrue(track.converged)
            self.assertAlmostEqual(track.order, 1.0, delta=0.1)
            np.testing.assert_allclose(track.distances, np.abs(result.epsilons) / 2, rtol=1e-4)
        self.assertTrue(result.converged)

    def test_tracks_keep_their_side(self):
        result = e1_limit(gallery_family('example5'), 0.0)
        self.assertTrue((result.tracks[0].points[:, 1] < 0).all())
        self.assertTrue((result.tracks[1].points[:, 1] > 0).all())

    def test_cusp(self):
        result = e1_limit(gallery_family('example9'), 1.0)
        self.assertEqual(result.reference_kind, PAIR)
        self.assertTrue(result.converged)
        for track in result.tracks:
            self.assertGreaterEqual(track.order, 0.9)

    def test_internal_tangency_is_exact(self):
        result = e1_limit(gallery_family('example4'), 1.0)
        self.assertEqual(result.reference_kind, TANGENT)
        self.assertEqual(set(result.kinds), {TANGENT})
        self.assertTrue(result.converged)
        self.assertLessEqual(result.tracks[0].distances.max(), 1e-12)

    def test_coincident_circles_are_degenerate(self):
        with self.assertLogs('circle_envelopes.discriminant', 'WARNING'):
            result = e1_limit(gallery_family('example6'), 0.0)
        self.assertTrue(result.degenerate)
        self.assertFalse(result.converged)
        self.assertEqual(result.reference_kind, FULL_CIRCLE)
        self.assertEqual(set(result.kinds), {COINCIDENT})
        self.assertEqual(result.tracks, [])

    def test_offsets_leaving_the_interval_are_dropped(self):
        with self.assertLogs('circle_envelopes.discriminant', 'WARNING'):
            result = e1_limit(gallery_family('example4'), 0.005)
        self.assertEqual(len(result.epsilons), 7)
        self.assertTrue((result.epsilons > -0.005).all())

    def test_rows(self):
        result = e1_limit(gallery_family('example5'), 0.0, epsilons=[0.1])
        rows = list(result.as_rows())
        self.assertEqual(len(rows), 6)
        self.assertEqual(rows[0][:3], (0.1, PAIR, 1))
        self.assertEqual(rows[-2][:3], (0.0, EXTRAPOLATED, 1))
        self.assertAlmostEqual(rows[-2][4], -np.sqrt(1 - 0.0025), places=12)
        self.assertAlmostEqual(rows[-2][5], 1 - np.sqrt(1 - 0.0025), places=12)

    def test_cusp_limit_is_extrapolated_to_the_envelope(self):
        family = family_of(gamma_x='t^3', gamma_y='t^2', radius='1', interval='-2 2')
        result = e1_limit(family, 1.0)
        root = np.sqrt(13.0)
        expected = np.array([[1 + 2 / root, 1 - 3 / root], [1 - 2 / root, 1 + 3 / root]])
        np.testing.assert_allclose(expected, [[1.5547002, 0.1679497], [0.4452998, 1.8320503]], atol=1e-7)
        limits = sorted((tuple(track.limit) for track in result.tracks), reverse=True)
        np.testing.assert_allclose(limits, expected, rtol=0, atol=1e-6)
        for track in result.tracks:
            self.assertGreater(track.distances[-1], 1e-6)

    def test_limits_of_random_parameters(self):
        rng = np.random.default_rng(2024)
        for name in CREATIVE_GALLERY:
            family = gallery_family(name)
            a, b = family.interval
            margin = 0.05 * (b - a)
            for t0 in rng.uniform(a + margin, b - margin, 10):
                result = e1_limit(family, t0)
                for number, track in enumerate(result.tracks, start=1):
                    with self.subTest(example=name, t0=t0, track=number):
                        scale = 1.0 + float(np.hypot(*track.reference))
                        final = track.distances[np.argmin(np.abs(result.epsilons))]
                        self.assertTrue(track.converged)
                        self.assertLessEqual(final, 1e-4 * scale)
                        if np.isnan(track.order):
                            self.assertLessEqual(track.distances.max(), 1e-12 * scale)
                        else:
                            self.assertGreaterEqual(track.order, 0.9)


class ExtrapolateLimitTests(SimpleTestCase):
    def test_quadratic_track_is_exact(self):
        epsilons = np.array([1e-2, 1e-3, -1e-2, -1e-3])
        points = np.stack((2 + 3 * epsilons, 1 - epsilons ** 2), axis=-1)
        np.testing.assert_allclose(extrapolate_limit(epsilons, points), [2.0, 1.0], rtol=0, atol=1e-12)

    def test_smallest_offsets_are_used(self):
        epsilons = np.array([0.5, 1e-2, 1e-3, 1e-4, 1e-5])
        points = np.stack((epsilons, np.where(epsilons > 0.1, 40.0, 0.0)), axis=-1)
        np.testing.assert_allclose(extrapolate_limit(epsilons, points), [0.0, 0.0], atol=1e-12)

    def test_missing_points_are_skipped(self):
        epsilons = np.array([1e-2, 1e-3])
        points = np.array([[np.nan, np.nan], [3.0, 4.0]])
        np.testing.assert_array_equal(extrapolate_limit(epsilons, points), [3.0, 4.0])
        self.assertTrue(np.isnan(extrapolate_limit(epsilons, np.full((2, 2), np.nan))).all())
