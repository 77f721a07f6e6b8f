import importlib
import os
import sys

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured
from django.dispatch import receiver
from django.test.signals import setting_changed

BASE_DIR = os.path.dirname(os.path.abspath(__file__))
user_settings = getattr(settings, 'CIRCLE_ENVELOPES', {})

BRANCH_SIDES = ('upper', 'lower')


def positive(user_settings, name, default):
    value = user_settings.get(name, default)
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ImproperlyConfigured('CIRCLE_ENVELOPES[{!r}] must be a number, got {!r}.'.format(name, value))
    if not value > 0:
        raise ImproperlyConfigured('CIRCLE_ENVELOPES[{!r}] must be positive, got {!r}.'.format(name, value))
    return value


def at_least(user_settings, name, default, minimum):
    value = user_settings.get(name, default)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ImproperlyConfigured('CIRCLE_ENVELOPES[{!r}] must be an integer >= {}, got {!r}.'.format(
            name, minimum, value))
    return value


def get_output_dir(user_settings):
    """
    Explicit OUTPUT_DIR wins; otherwise the CIRCLE_ENVELOPES_OUTPUT_DIR environment
    variable, otherwise a directory in the current working directory.
    """
    if user_settings.get('OUTPUT_DIR'):
        return user_settings['OUTPUT_DIR']
    return os.environ.get('CIRCLE_ENVELOPES_OUTPUT_DIR', os.path.join(os.getcwd(), 'envelope-output'))


def get_branch_side(user_settings):
    side = user_settings.get('BRANCH_SIDE', 'lower')
    if side not in BRANCH_SIDES:
        raise ImproperlyConfigured('CIRCLE_ENVELOPES["BRANCH_SIDE"] must be one of {}, got {!r}.'.format(
            ', '.join(BRANCH_SIDES), side))
    return side


SAMPLES = at_least(user_settings, 'SAMPLES', 2001, 2)
WINDOWS = at_least(user_settings, 'WINDOWS', 64, 1)

EPS_SING_FACTOR = positive(user_settings, 'EPS_SING_FACTOR', 1e-8)
TOL_ORTH = positive(user_settings, 'TOL_ORTH', 1e-9)
TOL_UNIT = positive(user_settings, 'TOL_UNIT', 1e-9)
CONTINUITY_DOT = positive(user_settings, 'CONTINUITY_DOT', 0.9)

EPS_TAN = positive(user_settings, 'EPS_TAN', 1e-6)
DELTA_STRICT = positive(user_settings, 'DELTA_STRICT', 1e-6)
CLAMP_BAND = positive(user_settings, 'CLAMP_BAND', 1e-9)

TOL_TANGENCY = positive(user_settings, 'TOL_TANGENCY', 1e-6)
TOL_RADIUS = positive(user_settings, 'TOL_RADIUS', 1e-9)
MATCH_TOL = positive(user_settings, 'MATCH_TOL', 1e-6)
TANGENT_TOL = positive(user_settings, 'TANGENT_TOL', 1e-12)

E1_EPSILONS = tuple(user_settings.get('E1_EPSILONS', (1e-2, 1e-3, 1e-4, 1e-5)))

BRANCH_SIDE = get_branch_side(user_settings)

CSV_DIGITS = at_least(user_settings, 'CSV_DIGITS', 9, 1)
SVG_MARGIN = positive(user_settings, 'SVG_MARGIN', 0.05)
SVG_CIRCLE_STRIDE = at_least(user_settings, 'SVG_CIRCLE_STRIDE', 50, 1)
SVG_SIZE = at_least(user_settings, 'SVG_SIZE', 800, 16)

OUTPUT_DIR = get_output_dir(user_settings)
SCENARIOS_DIR = user_settings.get('SCENARIOS_DIR', os.path.join(BASE_DIR, 'scenarios'))


@receiver(setting_changed)
def reload_settings(*args, **kwargs):
    setting_name = kwargs['setting']
    if setting_name == 'CIRCLE_ENVELOPES':
        importlib.reload(sys.modules[__name__])
