"""
Scenario files: a circle family in "key = value" form plus analysis,
output and rendering options, and optionally the results a run is
expected to reproduce.
"""
import os
from dataclasses import dataclass, field

from django.core.exceptions import ValidationError

from circle_envelopes import app_settings
from circle_envelopes.creativity import Classification
from circle_envelopes.family import build_family, parse_config, parse_expressions, parse_interval
from circle_envelopes.seismic import SYNTHETIC_REFLECTORS, parse_point

SCENARIO_SUFFIX = '.scn'
ANALYSES = ('analyze', 'envelope', 'discriminant', 'e1')
BRANCH_KEYS = ('expect.plus.x', 'expect.plus.y', 'expect.minus.x', 'expect.minus.y')
SCENARIO_KEYS = ('name', 'analysis', 'output', 'circle_stride', 'margin', 'expect.class', 'expect.witness') + \
    BRANCH_KEYS
SURVEY_SCENARIO_KEYS = ('name', 'analysis', 'survey', 'synthetic', 'sensors', 'source', 'speed', 'side', 'noise',
                        'samples', 'output')


@dataclass(frozen=True)
class Scenario(object):
    name: str
    family: object
    analysis: str = 'analyze'
    output: str = None
    circle_stride: int = None
    margin: float = None
    expected_class: Classification = None
    expected_witness: tuple = None
    closed_forms: dict = field(default_factory=dict)

    @property
    def samples(self):
        return self.family.samples


def scenario_path(name_or_path):
    """
    A path, or the name of a bundled scenario.
    """
    if os.path.exists(name_or_path):
        return name_or_path
    name = name_or_path if name_or_path.endswith(SCENARIO_SUFFIX) else name_or_path + SCENARIO_SUFFIX
    bundled = os.path.join(app_settings.SCENARIOS_DIR, name)
    if os.path.exists(bundled):
        return bundled
    raise FileNotFoundError('No scenario file {!r}.'.format(name_or_path))


def bundled_scenarios():
    return sorted(os.path.splitext(name)[0] for name in os.listdir(app_settings.SCENARIOS_DIR)
                  if name.endswith(SCENARIO_SUFFIX))


def parse_positive_int(config, key):
    if key not in config:
        return None
    try:
        value = int(config[key])
    except ValueError:
        value = 0
    if value < 1:
        raise ValidationError('%(key)s must be a positive integer, got %(value)r.', code='malformed',
                              params={'key': key, 'value': config[key]})
    return value


def parse_margin(config):
    if 'margin' not in config:
        return None
    try:
        value = float(config['margin'])
    except ValueError:
        value = -1.0
    if value < 0:
        raise ValidationError('margin must be a non-negative number, got %(value)r.', code='malformed',
                              params={'value': config['margin']})
    return value


def parse_expected(config):
    expected_class = None
    if 'expect.class' in config:
        try:
            expected_class = Classification(config['expect.class'])
        except ValueError:
            raise ValidationError('expect.class must be one of %(choices)s, got %(value)r.', code='malformed',
                                  params={'choices': ', '.join(c.value for c in Classification),
                                          'value': config['expect.class']})
    witness = parse_interval(config['expect.witness']) if 'expect.witness' in config else None
    expressions = parse_expressions(config, keys=BRANCH_KEYS)
    closed = {}
    for label in ('plus', 'minus'):
        x, y = 'expect.{}.x'.format(label), 'expect.{}.y'.format(label)
        if (x in expressions) != (y in expressions):
            raise ValidationError('%(x)s and %(y)s must be given together.', code='malformed',
                                  params={'x': x, 'y': y})
        if x in expressions:
            closed[label] = (expressions[x], expressions[y])
    return expected_class, witness, closed


def load_scenario(path, samples=None):
    """
    Reads and validates a scenario; the family itself is validated by
    build_family. samples overrides the file's grid size.
    """
    path = scenario_path(path)
    with open(path, encoding='utf-8') as scenario_file:
        config = parse_config(scenario_file.read())
    if samples is not None:
        config['samples'] = str(samples)
    family = build_family(config, extra_keys=SCENARIO_KEYS)

    analysis = config.get('analysis', 'analyze')
    if analysis not in ANALYSES:
        raise ValidationError('analysis must be one of %(choices)s, got %(value)r.', code='malformed',
                              params={'choices': ', '.join(ANALYSES), 'value': analysis})
    expected_class, witness, closed = parse_expected(config)
    name = config.get('name', os.path.splitext(os.path.basename(path))[0])
    return Scenario(name=name, family=family, analysis=analysis, output=config.get('output'),
                    circle_stride=parse_positive_int(config, 'circle_stride'), margin=parse_margin(config),
                    expected_class=expected_class, expected_witness=witness, closed_forms=closed)


@dataclass(frozen=True)
class SurveyScenario(object):
    name: str
    survey: str = None
    synthetic: str = None
    sensors: int = None
    source: object = None
    speed: float = None
    side: str = None
    noise: float = None
    samples: int = None
    output: str = None


def parse_number(config, key, code='malformed', positive=False):
    if key not in config:
        return None
    try:
        value = float(config[key])
    except ValueError:
        raise ValidationError('%(key)s must be a number, got %(value)r.', code='malformed',
                              params={'key': key, 'value': config[key]})
    if value < 0 or (positive and value == 0):
        raise ValidationError('%(key)s must be %(bound)s, got %(value)r.', code=code,
                              params={'key': key, 'bound': 'positive' if positive else 'non-negative',
                                      'value': config[key]})
    return value


def load_survey_scenario(path):
    """
    Reads a survey scenario: where the records come from (a survey CSV,
    relative to the scenario file, or a bundled synthetic reflector) and
    the source, wave speed, branch side and arrival noise to recover with.
    """
    path = scenario_path(path)
    with open(path, encoding='utf-8') as scenario_file:
        config = parse_config(scenario_file.read())
    unknown = [key for key in config if key not in SURVEY_SCENARIO_KEYS]
    if unknown:
        raise ValidationError('Unknown key %(key)r.', code='unknown_key', params={'key': unknown[0]})
    if config.get('analysis', 'seismic') != 'seismic':
        raise ValidationError('A survey scenario runs the seismic analysis, got %(value)r.', code='malformed',
                              params={'value': config['analysis']})
    if 'survey' in config and 'synthetic' in config:
        raise ValidationError('Give either survey or synthetic, not both.', code='malformed')
    if config.get('synthetic', 'flat') not in SYNTHETIC_REFLECTORS:
        raise ValidationError('synthetic must be one of %(choices)s, got %(value)r.', code='malformed',
                              params={'choices': ', '.join(sorted(SYNTHETIC_REFLECTORS)),
                                      'value': config['synthetic']})
    if config.get('side', app_settings.BRANCH_SIDES[0]) not in app_settings.BRANCH_SIDES:
        raise ValidationError('side must be one of %(choices)s, got %(value)r.', code='malformed',
                              params={'choices': ', '.join(app_settings.BRANCH_SIDES), 'value': config['side']})

    survey = None
    if 'survey' in config:
        survey = os.path.join(os.path.dirname(os.path.abspath(path)), config['survey'])
    source = parse_point(config['source']) if 'source' in config else None
    name = config.get('name', os.path.splitext(os.path.basename(path))[0])
    return SurveyScenario(name=name, survey=survey, synthetic=config.get('synthetic'),
                          sensors=parse_positive_int(config, 'sensors'), source=source,
                          speed=parse_number(config, 'speed', code='non_positive', positive=True),
                          side=config.get('side'), noise=parse_number(config, 'noise'),
                          samples=parse_positive_int(config, 'samples'), output=config.get('output'))
