import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from circle_envelopes.family import build_family, parse_config
from circle_envelopes.helpers import open_grid
from .test_helpers import family_of


class ParseConfigTests(SimpleTestCase):
    def test_comments_and_blank_lines_are_skipped(self):
        config = parse_config('# a family\n\ngamma.x = t^3   # cubic\nlambda=1\n')
        self.assertEqual(config, {'gamma.x': 't^3', 'lambda': '1'})

    def test_line_without_equals_sign(self):
        with self.assertRaises(ValidationError) as context:
            parse_config('gamma.x = t\ngamma.y t\n')
        self.assertEqual(context.exception.code, 'malformed')
        self.assertEqual(context.exception.params['line'], 2)

    def test_duplicate_key(self):
        with self.assertRaises(ValidationError) as context:
            parse_config('lambda = 1\nlambda = 2\n')
        self.assertEqual(context.exception.code, 'malformed')

    def test_empty_value(self):
        with self.assertRaises(ValidationError):
            parse_config('lambda =\n')


class BuildFamilyTests(SimpleTestCase):
    def assert_code(self, code, **keys):
        with self.assertRaises(ValidationError) as context:
            family_of(samples=101, **keys)
        self.assertEqual(context.exception.code, code)
        return context.exception

    def test_from_text(self):
        family = build_family('gamma.x = t\ngamma.y = 0\nlambda = 1\ninterval = -2 2\nsamples = 11\n')
        self.assertEqual(family.interval, (-2.0, 2.0))
        self.assertEqual(family.samples, 11)
        self.assertFalse(family.has_gauss)

    def test_values_and_derivatives(self):
        family = family_of(gamma_x='t^3', gamma_y='t^6', radius='1 + t^2', interval='-1 1')
        t = np.array([1.0])
        np.testing.assert_allclose(family.center(t), [[1.0, 1.0]])
        np.testing.assert_allclose(family.velocity(t), [[3.0, 6.0]])
        np.testing.assert_allclose(family.radius_values(t), [2.0])
        np.testing.assert_allclose(family.radius_rate(t), [2.0])

    def test_grid_is_cell_midpoints(self):
        family = family_of(samples=4, gamma_x='t', gamma_y='0', radius='1', interval='0 1')
        np.testing.assert_allclose(family.grid(), [0.125, 0.375, 0.625, 0.875])
        np.testing.assert_allclose(open_grid(-1, 1, 2), [-0.5, 0.5])

    def test_grid_never_samples_endpoints(self):
        t = family_of(gamma_x='t', gamma_y='0', radius='t', interval='0 2').grid()
        self.assertEqual(len(t), 2001)
        self.assertGreater(t[0], 0)
        self.assertLess(t[-1], 2)

    def test_with_samples(self):
        family = family_of(samples=11, gamma_x='t', gamma_y='0', radius='1', interval='0 1')
        self.assertEqual(len(family.with_samples(21).grid()), 21)

    def test_radius_must_be_positive(self):
        error = self.assert_code('non_positive_radius', gamma_x='t', gamma_y='0', radius='t', interval='-1 1')
        self.assertEqual(error.params['count'], 51)
        self.assertAlmostEqual(error.params['t'], -1 + 1 / 101.0)

    def test_gauss_map_must_be_orthogonal(self):
        self.assert_code('not_frontal', gamma_x='t', gamma_y='0', radius='1', nu_x='1', nu_y='0', interval='-1 1')

    def test_gauss_map_must_be_unit(self):
        self.assert_code('gauss_not_unit', gamma_x='t', gamma_y='0', radius='1', nu_x='0', nu_y='2',
                         interval='-1 1')

    def test_supplied_gauss_map(self):
        family = family_of(samples=101, gamma_x='t', gamma_y='0', radius='1', nu_x='0', nu_y='-1',
                           interval='-1 1')
        self.assertTrue(family.has_gauss)
        np.testing.assert_allclose(family.gauss(np.array([0.5])), [[0.0, -1.0]])
        np.testing.assert_allclose(family.gauss_rate(np.array([0.5])), [[0.0, 0.0]])

    def test_nu_components_go_together(self):
        self.assert_code('malformed', gamma_x='t', gamma_y='0', radius='1', nu_x='0', interval='-1 1')

    def test_missing_key(self):
        error = self.assert_code('missing_key', gamma_x='t', gamma_y='0', interval='-1 1')
        self.assertEqual(error.params['key'], 'lambda')

    def test_unknown_key(self):
        error = self.assert_code('unknown_key', gamma_x='t', gamma_y='0', radius='1', interval='-1 1', colour='red')
        self.assertEqual(error.params['key'], 'colour')

    def test_empty_interval(self):
        self.assert_code('malformed', gamma_x='t', gamma_y='0', radius='1', interval='1 -1')

    def test_unreadable_interval(self):
        self.assert_code('malformed', gamma_x='t', gamma_y='0', radius='1', interval='0')

    def test_too_few_samples(self):
        with self.assertRaises(ValidationError):
            family_of(samples=1, gamma_x='t', gamma_y='0', radius='1', interval='0 1')

    def test_expression_errors(self):
        self.assert_code('expression', gamma_x='tan(t)', gamma_y='0', radius='1', interval='0 1')
        self.assert_code('expression', gamma_x='t', gamma_y='0', radius='1 +', interval='0 1')

    def test_domain_errors_on_the_grid(self):
        error = self.assert_code('expression', gamma_x='t', gamma_y='sqrt(t)', radius='1', interval='-1 1')
        self.assertEqual(error.params['key'], 'gamma.y')
        self.assertEqual(error.params['count'], 50)

