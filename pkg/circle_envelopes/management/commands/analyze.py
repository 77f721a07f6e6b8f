from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from circle_envelopes import app_settings
from circle_envelopes.creativity import classify_family
from circle_envelopes.discriminant import CoincidentCirclesError
from circle_envelopes.expressions import DomainError, ExpressionError
from circle_envelopes.frames import build_frames
from circle_envelopes.render import CREATIVITY_HEADER, FRAMES_HEADER, EmptyFigureError, Figure, emit_csv, emit_svg
from circle_envelopes.scenarios import load_scenario
from circle_envelopes.storage import ArtifactStorage

FORMATS = ('csv', 'svg', 'both')
FAILURES = (ValidationError, ExpressionError, DomainError, CoincidentCirclesError, EmptyFigureError, OSError)


def describe(error):
    if isinstance(error, ValidationError):
        return '; '.join(error.messages)
    return str(error)


class Command(BaseCommand):
    help = 'Decides whether a circle family creates envelopes and how many'
    artifact = 'analyze'

    def add_arguments(self, parser):
        parser.add_argument('--scenario', required=True,
                            help='Scenario file, or the name of a bundled scenario such as example9.')
        parser.add_argument('--samples', type=int, dest='samples',
                            help='Grid size; overrides the scenario (default {}).'.format(app_settings.SAMPLES))
        parser.add_argument('--out', dest='out',
                            help='Output directory; defaults to the scenario output or OUTPUT_DIR.')
        parser.add_argument('--format', choices=FORMATS, default='csv', dest='format',
                            help='Artifacts to write.')
        parser.add_argument('--eps-beta', type=float, dest='eps_beta',
                            help='Threshold below which beta counts as zero; scale-aware by default.')
        parser.add_argument('--windows', type=int, dest='windows',
                            help='Number of windows for the density tests (default {}).'.format(app_settings.WINDOWS))
        parser.add_argument('--frames', action='store_true', dest='frames',
                            help='Also write the Gauss map and curvature pair per sample.')

    def set_options(self, **options):
        self.scenario_name = options['scenario']
        self.samples = options['samples']
        self.out = options['out']
        self.format = options['format']
        self.eps_beta = options['eps_beta']
        self.windows = options['windows']
        self.frames = options['frames']
        if self.samples is not None and self.samples < 2:
            raise CommandError('--samples must be at least 2.')
        if self.windows is not None and self.windows < 1:
            raise CommandError('--windows must be at least 1.')
        if self.eps_beta is not None and not self.eps_beta > 0:
            raise CommandError('--eps-beta must be positive.')

    @property
    def csv(self):
        return self.format in ('csv', 'both')

    @property
    def svg(self):
        return self.format in ('svg', 'both')

    def get_storage(self, scenario):
        return ArtifactStorage(self.out or scenario.output or app_settings.OUTPUT_DIR)

    def artifact_name(self, scenario, suffix):
        return '{}-{}'.format(scenario.name, suffix)

    def written(self, path):
        self.stdout.write('Wrote {}.'.format(path))

    def base_figure(self, scenario, frames):
        figure = Figure(title=scenario.name)
        figure.add_family(frames.center, scenario.family.radius_values(frames.t), scenario.circle_stride)
        figure.curve = frames.center
        return figure

    def write_figure(self, scenario, figure, storage):
        self.written(emit_svg(figure, storage, self.artifact_name(scenario, self.artifact + '.svg'),
                              margin=scenario.margin))

    def write_windows(self, report):
        for window in report.windows:
            self.stdout.write('window {}: [{:.6g}, {:.6g}] {} samples, {} regular, {} tangent, {} strict'.format(
                window.index, window.lo, window.hi, window.samples, window.regular, window.tangent, window.strict))

    def classify(self, scenario):
        family = scenario.family
        frames = build_frames(family, eps_sing=self.eps_beta)
        report = classify_family(frames, family.radius_rate(frames.t), family.interval, eps_beta=self.eps_beta,
                                 windows=self.windows)
        return frames, report

    def process(self, scenario, frames, report, storage):
        if self.csv:
            self.written(emit_csv(CREATIVITY_HEADER, report.as_rows(), storage,
                                  self.artifact_name(scenario, 'creativity.csv')))
        if self.frames:
            self.written(emit_csv(FRAMES_HEADER, frames.as_rows(), storage,
                                  self.artifact_name(scenario, 'frames.csv')))
        if self.svg and self.artifact == 'analyze':
            self.write_figure(scenario, self.base_figure(scenario, frames), storage)

    def handle(self, *args, **options):
        self.set_options(**options)
        try:
            scenario = load_scenario(self.scenario_name, self.samples)
            frames, report = self.classify(scenario)
            self.stdout.write('{}: {}'.format(scenario.name, report.status_line()))
            for moment in frames.continuity_warnings[:1]:
                self.stdout.write('Gauss map continuity break at t={!r}.'.format(moment))
            if options['verbosity'] > 1:
                self.write_windows(report)
            self.process(scenario, frames, report, self.get_storage(scenario))
        except FAILURES as e:
            raise CommandError(describe(e))
