import numpy as np

from circle_envelopes.discriminant import e1_limit
from circle_envelopes.render import E1_HEADER, emit_csv
from . import analyze

TRACK_LINE = 'track {}: limit ({}), discriminant point ({}), distance {:.3g}, order {:.3g}, {}'


def format_point(point):
    """
    Nine decimals; round-off below them prints as 0.
    """
    x, y = np.round(point, 9) + 0.0
    return '{:.9g}, {:.9g}'.format(x, y)


class Command(analyze.Command):
    help = 'Intersects a circle of the family with its neighbours and tracks the limit points'
    artifact = 'e1'

    def add_arguments(self, parser):
        super(Command, self).add_arguments(parser)
        parser.add_argument('--t0', type=float, required=True, dest='t0', help='Parameter of the base circle.')
        parser.add_argument('--epsilon', type=float, action='append', dest='epsilons',
                            help='Offset magnitude; repeatable. Both signs are used.')

    def set_options(self, **options):
        super(Command, self).set_options(**options)
        self.t0 = options['t0']
        self.epsilons = options['epsilons']

    def process(self, scenario, frames, report, storage):
        result = e1_limit(scenario.family, self.t0, self.epsilons, eps_beta=self.eps_beta)
        self.stdout.write('Discriminant slice at t0={!r}: {}'.format(result.t0, result.reference_kind))
        if result.degenerate:
            self.stdout.write('Nearby circles coincide; the intersection limit is degenerate.')
        for number, track in enumerate(result.tracks, start=1):
            self.stdout.write(TRACK_LINE.format(
                number, format_point(track.limit), format_point(track.reference), track.distances[-1], track.order,
                'converged' if track.converged else 'not converged'))
            if not np.isfinite(track.points[-1]).all():
                self.stdout.write('track {}: nearby circles do not meet at the smallest offset.'.format(number))
        if self.csv:
            self.written(emit_csv(E1_HEADER, result.as_rows(), storage, self.artifact_name(scenario, 'e1.csv')))
