import numpy as np
from django.core.exceptions import ValidationError

from circle_envelopes import app_settings
from circle_envelopes.helpers import dot, norm


def first_offender(t, bad):
    return float(np.asarray(t)[np.flatnonzero(bad)[0]])


def validate_positive_radius(t, radius):
    bad = ~(radius > 0)
    if bad.any():
        raise ValidationError('Radius must be positive on the interval: lambda <= 0 at %(count)d samples, '
                              'first at t=%(t)r.', code='non_positive_radius',
                              params={'count': int(bad.sum()), 't': first_offender(t, bad)})


def validate_unit_gauss(t, nu):
    bad = np.abs(norm(nu) - 1.0) > app_settings.TOL_UNIT
    if bad.any():
        raise ValidationError('Gauss map must have unit length: |nu| != 1 at %(count)d samples, first at t=%(t)r.',
                              code='gauss_not_unit', params={'count': int(bad.sum()), 't': first_offender(t, bad)})


def validate_frontal(t, velocity, nu):
    """
    The frontal condition gamma'(t).nu(t) = 0, relative to the local speed.
    """
    bad = np.abs(dot(velocity, nu)) > app_settings.TOL_ORTH * (1.0 + norm(velocity))
    if bad.any():
        raise ValidationError('Gauss map is not orthogonal to the curve: gamma\'.nu != 0 at %(count)d samples, '
                              'first at t=%(t)r.', code='not_frontal',
                              params={'count': int(bad.sum()), 't': first_offender(t, bad)})


def validate_interval(a, b, samples):
    if not a < b:
        raise ValidationError('Interval must satisfy a < b, got (%(a)r, %(b)r).', code='malformed',
                              params={'a': a, 'b': b})
    if samples < 2:
        raise ValidationError('At least 2 samples are required, got %(samples)r.', code='malformed',
                              params={'samples': samples})
