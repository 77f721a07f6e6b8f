from circle_envelopes.discriminant import FULL_CIRCLE, discriminant_set
from circle_envelopes.render import DISCRIMINANT_HEADER, discriminant_rows, emit_csv
from . import envelope


class Command(envelope.Command):
    help = 'Computes the discriminant set of a circle family and its decomposition'
    artifact = 'discriminant'

    def process(self, scenario, frames, report, storage):
        branches = self.build_branches(scenario, frames, report)
        decomposition = discriminant_set(scenario.family, frames, report, branches, eps_beta=self.eps_beta)
        self.stdout.write(decomposition.summary())
        for t, point in decomposition.unmatched[:5]:
            self.stdout.write('Unmatched point ({:.9g}, {:.9g}) at t={!r}.'.format(point[0], point[1], t))
        for t in decomposition.full_circles:
            self.stdout.write('Full circle over the singular parameter t={!r}.'.format(t))
        if self.csv:
            self.written(emit_csv(DISCRIMINANT_HEADER, discriminant_rows(decomposition.slices), storage,
                                  self.artifact_name(scenario, 'discriminant.csv')))
        if self.svg:
            figure = self.base_figure(scenario, frames)
            stride = scenario.circle_stride or 1
            for k, item in enumerate(decomposition.slices):
                if item.kind == FULL_CIRCLE:
                    figure.circles.append((float(item.center[0]), float(item.center[1]), item.radius))
                elif k % stride == 0:
                    for point in item.points:
                        figure.add_marker(item.kind, point)
            for branch in branches:
                figure.add_branch(branch.label, branch.points)
            self.write_figure(scenario, figure, storage)
