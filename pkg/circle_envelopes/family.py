"""
Circle families C(gamma, lambda): circles centred at gamma(t) with radius
lambda(t) > 0 for t in an open interval, given by closed-form expressions.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from django.core.exceptions import ValidationError

from circle_envelopes import app_settings
from circle_envelopes.expressions import ExpressionError, diff_expr, evaluate, parse_expr
from circle_envelopes.helpers import open_grid
from circle_envelopes.validators import (validate_frontal, validate_interval, validate_positive_radius,
                                         validate_unit_gauss)

EXPRESSION_KEYS = ('gamma.x', 'gamma.y', 'lambda', 'nu.x', 'nu.y')
FAMILY_KEYS = EXPRESSION_KEYS + ('interval', 'samples')
REQUIRED_KEYS = ('gamma.x', 'gamma.y', 'lambda', 'interval')


def parse_config(text):
    """
    Parses "key = value" lines. Blank lines and '#' comments are skipped.
    """
    config = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ValidationError('Line %(line)d: expected "key = value", got %(text)r.', code='malformed',
                                  params={'line': number, 'text': line})
        key, value = (part.strip() for part in line.split('=', 1))
        if not key or not value:
            raise ValidationError('Line %(line)d: empty key or value.', code='malformed', params={'line': number})
        if key in config:
            raise ValidationError('Line %(line)d: duplicate key %(key)r.', code='malformed',
                                  params={'line': number, 'key': key})
        config[key] = value
    return config


@dataclass(frozen=True)
class CircleFamilySpec(object):
    gamma_x: object
    gamma_y: object
    radius: object
    nu_x: object = None
    nu_y: object = None
    interval: tuple = (-1.0, 1.0)
    samples: int = 2001

    @property
    def has_gauss(self):
        return self.nu_x is not None

    @cached_property
    def derivatives(self):
        expressions = {'gamma_x': self.gamma_x, 'gamma_y': self.gamma_y, 'radius': self.radius}
        if self.has_gauss:
            expressions.update(nu_x=self.nu_x, nu_y=self.nu_y)
        return {name: diff_expr(expr) for name, expr in expressions.items()}

    def grid(self, samples=None):
        a, b = self.interval
        return open_grid(a, b, samples or self.samples)

    def center(self, t):
        return np.stack((evaluate(self.gamma_x, t), evaluate(self.gamma_y, t)), axis=-1)

    def velocity(self, t):
        d = self.derivatives
        return np.stack((evaluate(d['gamma_x'], t), evaluate(d['gamma_y'], t)), axis=-1)

    def radius_values(self, t):
        return evaluate(self.radius, t)

    def radius_rate(self, t):
        return evaluate(self.derivatives['radius'], t)

    def gauss(self, t):
        return np.stack((evaluate(self.nu_x, t), evaluate(self.nu_y, t)), axis=-1)

    def gauss_rate(self, t):
        d = self.derivatives
        return np.stack((evaluate(d['nu_x'], t), evaluate(d['nu_y'], t)), axis=-1)

    def with_samples(self, samples):
        return CircleFamilySpec(self.gamma_x, self.gamma_y, self.radius, self.nu_x, self.nu_y,
                                self.interval, samples)

    def without_gauss(self):
        """
        The same circles with the Gauss map left to continuity tracking.
        """
        return CircleFamilySpec(self.gamma_x, self.gamma_y, self.radius, interval=self.interval, samples=self.samples)


def parse_interval(value):
    parts = value.split()
    try:
        a, b = (float(part) for part in parts)
    except ValueError:
        raise ValidationError('interval must be "a b", got %(value)r.', code='malformed', params={'value': value})
    return a, b


def parse_samples(value):
    try:
        return int(value)
    except ValueError:
        raise ValidationError('samples must be an integer, got %(value)r.', code='malformed',
                              params={'value': value})


def parse_expressions(config, keys=EXPRESSION_KEYS):
    expressions = {}
    for key in keys:
        if key not in config:
            continue
        try:
            expressions[key] = parse_expr(config[key])
        except ExpressionError as e:
            raise ValidationError('%(key)s: %(error)s', code='expression', params={'key': key, 'error': e})
    return expressions


def check_domain(expr, t, key):
    values, errors = evaluate(expr, t, strict=False)
    if errors:
        raise ValidationError('%(key)s: %(error)s (%(count)d samples affected).', code='expression',
                              params={'key': key, 'error': errors[0], 'count': len(errors)})
    return values.data


def build_family(config, extra_keys=()):
    """
    Builds and validates a circle family from scenario text or an already
    parsed key/value mapping. Every invariant is checked on the sample grid.
    """
    if isinstance(config, str):
        config = parse_config(config)
    unknown = [key for key in config if key not in FAMILY_KEYS and key not in extra_keys]
    if unknown:
        raise ValidationError('Unknown key %(key)r.', code='unknown_key', params={'key': unknown[0]})
    missing = [key for key in REQUIRED_KEYS if key not in config]
    if missing:
        raise ValidationError('Missing required key %(key)r.', code='missing_key', params={'key': missing[0]})
    if ('nu.x' in config) != ('nu.y' in config):
        raise ValidationError('nu.x and nu.y must be given together.', code='malformed')

    a, b = parse_interval(config['interval'])
    samples = parse_samples(config.get('samples', str(app_settings.SAMPLES)))
    validate_interval(a, b, samples)
    expressions = parse_expressions(config)
    spec = CircleFamilySpec(expressions['gamma.x'], expressions['gamma.y'], expressions['lambda'],
                            expressions.get('nu.x'), expressions.get('nu.y'), (a, b), samples)

    t = spec.grid()
    derivatives = spec.derivatives
    check_domain(spec.gamma_x, t, 'gamma.x')
    check_domain(spec.gamma_y, t, 'gamma.y')
    velocity = np.stack((check_domain(derivatives['gamma_x'], t, 'gamma.x'),
                         check_domain(derivatives['gamma_y'], t, 'gamma.y')), axis=-1)
    validate_positive_radius(t, check_domain(spec.radius, t, 'lambda'))
    check_domain(derivatives['radius'], t, 'lambda')
    if spec.has_gauss:
        nu = np.stack((check_domain(spec.nu_x, t, 'nu.x'), check_domain(spec.nu_y, t, 'nu.y')), axis=-1)
        check_domain(derivatives['nu_x'], t, 'nu.x')
        check_domain(derivatives['nu_y'], t, 'nu.y')
        validate_unit_gauss(t, nu)
        validate_frontal(t, velocity, nu)
    return spec
