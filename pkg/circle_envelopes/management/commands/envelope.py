from django.core.management import CommandError

from circle_envelopes.envelopes import build_envelope, construct_envelopes, random_creators, verify_envelope
from circle_envelopes.render import ENVELOPE_HEADER, emit_csv, envelope_rows
from . import analyze


class Command(analyze.Command):
    help = 'Constructs and verifies the envelopes a circle family creates'
    artifact = 'envelope'

    def add_arguments(self, parser):
        super(Command, self).add_arguments(parser)
        parser.add_argument('--random-creators', type=int, default=0, dest='random_creators',
                            help='Also build this many randomised creators; they differ from the canonical one '
                                 'only where beta and lambda\' both vanish.')
        parser.add_argument('--seed', type=int, default=0, dest='seed', help='Seed for --random-creators.')

    def set_options(self, **options):
        super(Command, self).set_options(**options)
        self.random_creators = options['random_creators']
        self.seed = options['seed']
        if self.random_creators < 0:
            raise CommandError('--random-creators must not be negative.')

    def build_branches(self, scenario, frames, report):
        family = scenario.family
        branches = construct_envelopes(report, frames, family)
        if self.random_creators:
            creators = random_creators(report, frames, self.random_creators, self.seed, family.interval, family)
            branches += [build_envelope(creator, family) for creator in creators]
        return branches

    def process(self, scenario, frames, report, storage):
        super(Command, self).process(scenario, frames, report, storage)
        branches = self.build_branches(scenario, frames, report)
        for branch in branches:
            residuals = verify_envelope(branch, scenario.family)
            self.stdout.write('{} branch: r1={:.3g}, r2={:.3g}, {}'.format(
                branch.label, residuals.r1, residuals.r2, 'pass' if residuals.passed else 'FAIL'))
            if branch.contacts and len(branches) > 1:
                self.stdout.write('{} branch touches another at {} samples, first at t={!r}.'.format(
                    branch.label, len(branch.contacts), branch.contacts[0]))
        if self.csv:
            self.written(emit_csv(ENVELOPE_HEADER, envelope_rows(branches), storage,
                                  self.artifact_name(scenario, 'envelope.csv')))
        if self.svg:
            figure = self.base_figure(scenario, frames)
            for branch in branches:
                figure.add_branch(branch.label, branch.points)
            self.write_figure(scenario, figure, storage)
