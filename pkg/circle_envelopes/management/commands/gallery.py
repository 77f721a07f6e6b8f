from django.core.management.base import BaseCommand, CommandError

from circle_envelopes.gallery import GALLERY_HEADER, run_gallery
from circle_envelopes.render import emit_csv, format_value
from circle_envelopes.storage import ArtifactStorage
from .analyze import FAILURES, describe


class Command(BaseCommand):
    help = 'Runs the bundled example gallery against its expected results'

    def add_arguments(self, parser):
        parser.add_argument('names', nargs='*', help='Scenarios to run; all bundled ones by default.')
        parser.add_argument('--samples', type=int, dest='samples', help='Grid size for every scenario.')
        parser.add_argument('--out', dest='out', help='Directory for gallery.csv; nothing is written without it.')

    def handle(self, *args, **options):
        try:
            results = run_gallery(options['names'] or None, options['samples'])
        except FAILURES as e:
            raise CommandError(describe(e))
        for result in results:
            line = '{:<12} {:<16} {}'.format(result.name, result.classification, 'pass' if result.passed else 'FAIL')
            if result.closed_form_error is not None:
                line += '  closed form error {}'.format(format_value(result.closed_form_error, 3))
            if result.auto_frame_error is not None:
                line += ', tracked frame {}'.format(format_value(result.auto_frame_error, 3))
            self.stdout.write(line)
            for failure in result.failures:
                self.stdout.write('    {}'.format(failure))
        if options['out']:
            storage = ArtifactStorage(options['out'])
            self.stdout.write('Wrote {}.'.format(emit_csv(GALLERY_HEADER, [r.as_row() for r in results], storage,
                                                          'gallery.csv')))
        failed = [result.name for result in results if not result.passed]
        if failed:
            raise CommandError('{} of {} examples failed: {}.'.format(len(failed), len(results), ', '.join(failed)))
        self.stdout.write('All {} examples passed.'.format(len(results)))
