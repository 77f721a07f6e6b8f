import numpy as np
from django.core.management.base import BaseCommand, CommandError

from circle_envelopes import app_settings
from circle_envelopes.expressions import parse_expr
from circle_envelopes.render import ORTHOTOMIC_HEADER, REFLECTOR_HEADER, Figure, emit_csv, emit_svg, orthotomic_rows
from circle_envelopes.scenarios import SurveyScenario, load_survey_scenario
from circle_envelopes.seismic import (SYNTHETIC_REFLECTORS, ingest_survey, parse_point, reconstruct_reflector,
                                      recover_orthotomic, survey_csv, synthesize_survey)
from circle_envelopes.storage import ArtifactStorage
from .analyze import FAILURES, FORMATS, describe

DEFAULT_SENSORS = 101
DEFAULT_SOURCE = '0 0'
DEFAULT_SPEED = 1.0


def pick(*values):
    """
    The first value that is not None.
    """
    return next((value for value in values if value is not None), None)


class Command(BaseCommand):
    help = 'Recovers the orthotomic of a reflector from survey arrival times'

    def add_arguments(self, parser):
        parser.add_argument('--scenario', dest='scenario',
                            help='Survey scenario file; flags given on the command line override its keys.')
        parser.add_argument('--survey', dest='survey', help='CSV with header t,sensor_x,sensor_y,arrival_s.')
        parser.add_argument('--synthetic', choices=sorted(SYNTHETIC_REFLECTORS), dest='synthetic',
                            help='Generate exact records for a bundled reflector instead of reading --survey.')
        parser.add_argument('--sensors', type=int, dest='sensors',
                            help='Number of synthetic sensors on [-0.5, 0.5] (default {}).'.format(DEFAULT_SENSORS))
        parser.add_argument('--source', dest='source', help='Source position "x y" (default "{}").'.format(
            DEFAULT_SOURCE))
        parser.add_argument('--speed', type=float, dest='speed',
                            help='Wave speed in m/s (default {}).'.format(DEFAULT_SPEED))
        parser.add_argument('--side', choices=app_settings.BRANCH_SIDES, dest='side',
                            help='Half-plane of the reflector relative to the sensor line '
                                 '(default {}).'.format(app_settings.BRANCH_SIDE))
        parser.add_argument('--noise', type=float, dest='noise',
                            help='Standard deviation of the arrival times in seconds; the radii are then '
                                 'smoothed instead of interpolated.')
        parser.add_argument('--samples', type=int, dest='samples', help='Analysis grid size.')
        parser.add_argument('--out', dest='out', help='Output directory.')
        parser.add_argument('--format', choices=FORMATS, default='csv', dest='format', help='Artifacts to write.')
        parser.add_argument('--eps-beta', type=float, dest='eps_beta', help='Threshold below which beta counts as zero.')
        parser.add_argument('--windows', type=int, dest='windows', help='Windows for the density tests.')
        parser.add_argument('--reflector', action='store_true', dest='reflector',
                            help='Also reconstruct the reflector from the recovered orthotomic.')

    def set_options(self, scenario, /, **options):
        if options['survey'] or options['synthetic']:
            self.survey, self.synthetic = options['survey'], options['synthetic']
        else:
            self.survey, self.synthetic = scenario.survey, scenario.synthetic
        self.sensors = pick(options['sensors'], scenario.sensors, DEFAULT_SENSORS)
        self.source = parse_point(options['source']) if options['source'] else pick(scenario.source,
                                                                                    parse_point(DEFAULT_SOURCE))
        self.speed = pick(options['speed'], scenario.speed, DEFAULT_SPEED)
        self.side = pick(options['side'], scenario.side)
        self.noise = pick(options['noise'], scenario.noise, 0.0)
        self.samples = pick(options['samples'], scenario.samples)
        self.out = options['out'] or scenario.output or app_settings.OUTPUT_DIR
        self.format = options['format']
        self.eps_beta = options['eps_beta']
        self.windows = options['windows']
        self.reflector = options['reflector']
        if bool(self.survey) == bool(self.synthetic):
            raise CommandError('Give exactly one of --survey and --synthetic, on the command line or in the '
                               'scenario.')
        if self.sensors < 2:
            raise CommandError('--sensors must be at least 2.')
        if self.noise < 0:
            raise CommandError('--noise must not be negative.')

    def load(self, storage):
        if self.synthetic:
            reflector = parse_expr(SYNTHETIC_REFLECTORS[self.synthetic])
            data = synthesize_survey(reflector, self.source, np.linspace(-0.5, 0.5, self.sensors), self.speed)
            self.stdout.write('Wrote {}.'.format(storage.write_text('synthetic-{}.csv'.format(self.synthetic),
                                                                   survey_csv(data))))
            return data
        with open(self.survey, encoding='utf-8', newline='') as survey:
            return ingest_survey(survey, self.source, self.speed)

    def handle(self, *args, **options):
        try:
            scenario = load_survey_scenario(options['scenario']) if options['scenario'] else SurveyScenario('survey')
            self.set_options(scenario, **options)
        except FAILURES as e:
            raise CommandError(describe(e))
        storage = ArtifactStorage(self.out)
        try:
            data = self.load(storage)
            result = recover_orthotomic(data, self.side, self.samples, self.eps_beta, self.windows, self.noise)
            self.stdout.write('{}: {} records, {}'.format(scenario.name, len(data), result.report.status_line()))
            if result.selected is None:
                self.stdout.write('No canonical orthotomic: the circles create uncountably many envelopes.')
                return
            self.stdout.write('selected {} branch of {}'.format(result.selected.label, len(result.branches)))
            reflector = None
            if self.reflector:
                reflector = reconstruct_reflector(result.selected, data.source,
                                                  result.family.center(result.selected.t))
                self.stdout.write('reflector: {} samples, {} flagged'.format(len(reflector.t),
                                                                             int(reflector.flagged.sum())))
            if self.format in ('csv', 'both'):
                self.stdout.write('Wrote {}.'.format(emit_csv(ORTHOTOMIC_HEADER, orthotomic_rows(result.selected),
                                                              storage, 'orthotomic.csv')))
                if reflector is not None:
                    self.stdout.write('Wrote {}.'.format(emit_csv(REFLECTOR_HEADER, reflector.as_rows(),
                                                                  storage, 'reflector.csv')))
            if self.format in ('svg', 'both'):
                figure = Figure(title=scenario.name)
                figure.add_family(result.frames.center, result.family.radius_values(result.frames.t))
                figure.curve = result.frames.center
                for branch in result.branches:
                    figure.add_branch(branch.label, branch.points)
                if reflector is not None:
                    figure.add_branch('reflector', reflector.points)
                figure.add_marker('source', data.source)
                self.stdout.write('Wrote {}.'.format(emit_svg(figure, storage, 'orthotomic.svg')))
        except FAILURES as e:
            raise CommandError(describe(e))
