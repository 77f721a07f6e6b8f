import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from circle_envelopes.creativity import Classification
from circle_envelopes.envelopes import EnvelopeBranch
from circle_envelopes.expressions import parse_expr
from circle_envelopes.seismic import (SurveyData, SurveyFamily, ingest_survey, orthotomic_point, parse_point,
                                      radii_from_times, reconstruct_reflector, recover_orthotomic,
                                      reflection_point, survey_csv, synthesize_survey)
from .test_helpers import reflection_oracle

HEADER = 't,sensor_x,sensor_y,arrival_s\n'
SOURCE = np.array([0.0, 0.0])
FLAT = parse_expr('-1')
PARABOLA = parse_expr('-1 - t^2/8')


def survey(*rows):
    return HEADER + ''.join(row + '\n' for row in rows)


def recover(reflector, side=None, noise=0.0, seed=3, declared=0.0):
    data = synthesize_survey(reflector, SOURCE, np.linspace(-0.5, 0.5, 101))
    if noise:
        rng = np.random.default_rng(seed)
        data = SurveyData(data.t, data.sensors, data.arrivals + rng.normal(scale=noise, size=len(data)),
                          data.source, data.speed)
    return recover_orthotomic(data, side, noise=declared)


class IngestSurveyTests(SimpleTestCase):
    def assert_code(self, code, text, speed=1500.0):
        with self.assertRaises(ValidationError) as context:
            ingest_survey(text, '0 0', speed)
        self.assertEqual(context.exception.code, code)
        return context.exception

    def test_records(self):
        data = ingest_survey(survey('0,0,0,2', '1,1,0,2.5'), '0 -10', 1500)
        self.assertEqual(len(data), 2)
        np.testing.assert_array_equal(data.sensors, [[0.0, 0.0], [1.0, 0.0]])
        np.testing.assert_array_equal(data.source, [0.0, -10.0])
        np.testing.assert_array_equal(radii_from_times(data), [3000.0, 3750.0])

    def test_blank_lines_are_skipped(self):
        self.assertEqual(len(ingest_survey(survey('0,0,0,2', '', '1,1,0,2'), (0, 0), 1.0)), 2)

    def test_header_is_required(self):
        error = self.assert_code('bad_row', '0,0,0,2\n1,1,0,2\n')
        self.assertIn('Line 1', error.message % error.params)

    def test_field_count(self):
        error = self.assert_code('bad_row', survey('0,0,0,2', '1,1,0'))
        self.assertEqual(error.params['line'], 3)

    def test_non_numeric_field(self):
        self.assert_code('bad_row', survey('0,0,0,2', '1,x,0,2'))

    def test_non_finite_field(self):
        self.assert_code('bad_row', survey('0,0,0,2', '1,1,0,nan'))

    def test_arrival_must_be_positive(self):
        error = self.assert_code('non_positive', survey('0,0,0,2', '1,1,0,0'))
        self.assertEqual(error.params['line'], 3)

    def test_speed_must_be_positive(self):
        self.assert_code('non_positive', survey('0,0,0,2', '1,1,0,2'), speed=0)

    def test_duplicate_parameter(self):
        self.assert_code('duplicate', survey('0,0,0,2', '0,1,0,2'))

    def test_unsorted_parameter(self):
        self.assert_code('unsorted', survey('1,0,0,2', '0,1,0,2'))

    def test_two_records_are_required(self):
        self.assert_code('bad_row', survey('0,0,0,2'))

    def test_source_must_be_a_point(self):
        with self.assertRaises(ValidationError):
            parse_point('1 2 3')
        np.testing.assert_array_equal(parse_point('1.5, -2'), [1.5, -2.0])

    def test_written_surveys_read_back(self):
        data = synthesize_survey(FLAT, SOURCE, np.linspace(-0.5, 0.5, 5), speed=2.0)
        again = ingest_survey(survey_csv(data), SOURCE, 2.0)
        np.testing.assert_array_equal(again.arrivals, data.arrivals)


class SurveyFamilyTests(SimpleTestCase):
    def test_radius_spline(self):
        data = SurveyData(t=np.array([0.0, 1.0, 2.0]), sensors=np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]),
                          arrivals=np.array([2.0, 2.0, 2.0]), source=SOURCE, speed=1500.0)
        family = SurveyFamily(data, samples=11)
        np.testing.assert_allclose(family.radius_values(np.array([0.5])), [3000.0])
        np.testing.assert_allclose(family.radius_rate(np.array([0.5])), [0.0], atol=1e-9)
        np.testing.assert_allclose(family.velocity(np.array([0.5])), [[1.0, 0.0]])
        self.assertEqual(family.interval, (0.0, 2.0))
        self.assertFalse(family.stationary)


class SyntheticSurveyTests(SimpleTestCase):
    def test_reflection_point_of_a_flat_mirror(self):
        point = reflection_point(FLAT, SOURCE, np.array([1.0, 0.0]))
        np.testing.assert_allclose(point, [0.5, -1.0], atol=1e-12)

    def test_arrivals_are_reflected_path_lengths(self):
        data = synthesize_survey(PARABOLA, SOURCE, [0.3], speed=2.0)
        sensor = data.sensors[0]
        mirror = reflection_point(PARABOLA, SOURCE, sensor)
        self.assertAlmostEqual(data.arrivals[0], reflection_oracle(SOURCE, mirror, sensor) / 2.0, places=12)
        for x in (mirror[0] - 0.01, mirror[0] + 0.01):
            nearby = np.array([x, -1 - x ** 2 / 8])
            self.assertGreater(reflection_oracle(SOURCE, nearby, sensor), reflection_oracle(SOURCE, mirror, sensor))

    def test_orthotomic_point_of_a_flat_mirror(self):
        np.testing.assert_allclose(orthotomic_point(FLAT, SOURCE, 0.7), [0.0, -2.0], atol=1e-15)


class RecoverOrthotomicTests(SimpleTestCase):
    def test_flat_mirror(self):
        result = recover(FLAT)
        self.assertIs(result.report.classification, Classification.EXACTLY_TWO)
        self.assertEqual(result.selected.label, 'plus')
        np.testing.assert_allclose(result.selected.points, np.tile([0.0, -2.0], (len(result.selected.t), 1)),
                                   rtol=0, atol=1e-6)

    def test_upper_side(self):
        result = recover(FLAT, side='upper')
        self.assertEqual(result.selected.label, 'minus')
        self.assertTrue((result.selected.points[:, 1] > 0).all())

    def test_parabolic_mirror(self):
        result = recover(PARABOLA)
        branch = result.selected
        for k in range(0, len(branch.t), 100):
            sensor = result.family.center(branch.t[k:k + 1])[0]
            mirror = reflection_point(PARABOLA, SOURCE, sensor)
            with self.subTest(t=branch.t[k]):
                np.testing.assert_allclose(branch.points[k], orthotomic_point(PARABOLA, SOURCE, mirror[0]),
                                           rtol=0, atol=1e-6)

    def test_noisy_arrivals(self):
        result = recover(FLAT, noise=1e-7)
        error = np.hypot(*(result.selected.points - [0.0, -2.0]).T)
        self.assertLess(error.max(), 2e-3)

    def test_declared_noise_is_smoothed(self):
        for seed in range(5):
            with self.subTest(seed=seed):
                result = recover(FLAT, noise=1e-6, seed=seed, declared=1e-6)
                error = np.hypot(*(result.selected.points - [0.0, -2.0]).T)
                self.assertLess(error.max(), 2e-3)

    def test_declared_noise_on_exact_records(self):
        result = recover(PARABOLA, declared=1e-9)
        self.assertEqual(result.family.noise, 1e-9)
        sensor = result.family.center(result.selected.t[1000:1001])[0]
        mirror = reflection_point(PARABOLA, SOURCE, sensor)
        np.testing.assert_allclose(result.selected.points[1000], orthotomic_point(PARABOLA, SOURCE, mirror[0]),
                                   rtol=0, atol=1e-5)

    def test_negative_noise(self):
        data = synthesize_survey(FLAT, SOURCE, np.linspace(-0.5, 0.5, 5))
        with self.assertRaises(ValidationError) as context:
            SurveyFamily(data, noise=-1e-6)
        self.assertEqual(context.exception.code, 'malformed')

    def test_stationary_sensor(self):
        t = np.linspace(0.0, 1.0, 11)
        data = SurveyData(t=t, sensors=np.zeros((11, 2)), arrivals=np.ones(11), source=SOURCE, speed=1.0)
        with self.assertLogs('circle_envelopes.seismic', 'WARNING'):
            result = recover_orthotomic(data, samples=101)
        self.assertIs(result.report.classification, Classification.UNCOUNTABLY_MANY)
        self.assertIsNone(result.selected)

    def test_inconsistent_times(self):
        t = np.linspace(0.0, 1.0, 11)
        data = SurveyData(t=t, sensors=np.zeros((11, 2)), arrivals=1.0 + t, source=SOURCE, speed=1.0)
        with self.assertRaises(ValidationError) as context:
            recover_orthotomic(data, samples=101)
        self.assertEqual(context.exception.code, 'not_creative')


class ReconstructReflectorTests(SimpleTestCase):
    def branch(self, t, points):
        points = np.asarray(points, dtype=float)
        return EnvelopeBranch('plus', np.asarray(t, dtype=float), np.zeros_like(points), points)

    def test_mirror_point_of_a_flat_mirror(self):
        reflector = reconstruct_reflector(self.branch([3.0], [[0.0, -2.0]]), SOURCE, np.array([[3.0, 0.0]]))
        np.testing.assert_allclose(reflector.points, [[1.5, -1.0]])
        self.assertFalse(reflector.flagged.any())
        self.assertEqual(list(reflector.as_rows())[0][-1], 0)

    def test_recovered_reflector(self):
        result = recover(FLAT)
        sensors = result.family.center(result.selected.t)
        reflector = reconstruct_reflector(result.selected, SOURCE, sensors)
        np.testing.assert_allclose(reflector.points[:, 1], -1.0, rtol=0, atol=1e-6)
        np.testing.assert_allclose(reflector.points[:, 0], sensors[:, 0] / 2, rtol=0, atol=1e-6)

    def test_orthotomic_through_the_source(self):
        with self.assertRaises(ValidationError) as context:
            reconstruct_reflector(self.branch([0.0], [[0.0, 0.0]]), SOURCE, np.array([[1.0, 0.0]]))
        self.assertEqual(context.exception.code, 'degenerate_bisector')

    def test_points_off_the_ray_are_flagged(self):
        with self.assertLogs('circle_envelopes.seismic', 'WARNING'):
            reflector = reconstruct_reflector(self.branch([0.0], [[0.0, -2.0]]), np.array([0.0, -10.0]),
                                              np.array([[0.0, 0.0]]))
        self.assertTrue(reflector.flagged[0])

    def test_parabolic_reflector_round_trip(self):
        result = recover(PARABOLA)
        sensors = result.family.center(result.selected.t)
        reflector = reconstruct_reflector(result.selected, SOURCE, sensors)
        self.assertFalse(reflector.flagged.any())
        x, y = reflector.points.T
        np.testing.assert_allclose(y, -1 - x ** 2 / 8, rtol=0, atol=1e-6)
        for k in range(0, len(reflector.t), 250):
            with self.subTest(t=reflector.t[k]):
                np.testing.assert_allclose(reflector.points[k], reflection_point(PARABOLA, SOURCE, sensors[k]),
                                           rtol=0, atol=1e-6)
