"""
CSV and SVG artifacts.
"""
import csv
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np
from django.template import Context, Engine

from circle_envelopes import app_settings

TEMPLATES_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'templates')
PALETTE = ('#d62728', '#1f77b4', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b', '#e377c2', '#17becf')
MARKER_COLOR = '#000000'

CREATIVITY_HEADER = ('t', 'status', 'cos_theta', 'margin')
FRAMES_HEADER = ('t', 'nu_x', 'nu_y', 'ell', 'beta', 'singular')
ENVELOPE_HEADER = ('t', 'x', 'y', 'branch')
DISCRIMINANT_HEADER = ('t', 'kind', 'x1', 'y1', 'x2', 'y2', 'radius')
E1_HEADER = ('epsilon', 'kind', 'track', 'x', 'y', 'distance')
ORTHOTOMIC_HEADER = ('t', 'wx', 'wy')
REFLECTOR_HEADER = ('t', 'mx', 'my', 'flagged')


class EmptyFigureError(ValueError):
    pass


def format_value(value, digits=None):
    """
    Floats with a fixed number of significant digits, NaN and None as an
    empty field, everything else as text.
    """
    digits = digits or app_settings.CSV_DIGITS
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return ''
        text = '{:.{}g}'.format(value, digits)
        return '0' if text == '-0' else text
    return str(value)


def render_csv(header, rows):
    output = io.StringIO()
    writer = csv.writer(output, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(value) for value in row])
    return output.getvalue()


def emit_csv(header, rows, storage, name):
    """
    Writes a header row and the rows, UTF-8, '.' as decimal separator.
    Returns the path written.
    """
    return storage.write_text(name, render_csv(header, rows))


def envelope_rows(branches):
    rows = [row for branch in branches for row in branch.as_rows()]
    return sorted(rows, key=lambda row: row[0])


def discriminant_rows(slices):
    return [item.as_row() for item in slices]


def orthotomic_rows(branch):
    return [(branch.t[k], branch.points[k, 0], branch.points[k, 1]) for k in range(len(branch.t))]


@dataclass
class Figure(object):
    """
    Layers of one SVG: background circles (cx, cy, r), the centre curve,
    labelled branches and labelled point markers.
    """
    title: str = ''
    circles: list = field(default_factory=list)
    curve: np.ndarray = None
    branches: list = field(default_factory=list)
    markers: list = field(default_factory=list)

    def add_family(self, family_centers, radii, stride=None):
        stride = stride or app_settings.SVG_CIRCLE_STRIDE
        for k in range(0, len(radii), stride):
            self.circles.append((float(family_centers[k, 0]), float(family_centers[k, 1]), float(radii[k])))

    def add_branch(self, label, points):
        """
        A branch that collapses to a single point is drawn as a marker.
        """
        points = np.asarray(points, dtype=float)
        finite = points[np.isfinite(points).all(axis=1)]
        if not len(finite):
            return
        if float(np.ptp(finite, axis=0).max()) <= 1e-9 * (1.0 + float(np.abs(finite).max())):
            self.add_marker(label, finite[0])
        else:
            self.branches.append((label, points))

    def add_marker(self, label, point):
        self.markers.append((label, float(point[0]), float(point[1])))

    @property
    def empty(self):
        return not (self.circles or self.branches or self.markers or
                    (self.curve is not None and len(self.curve)))

    def bounds(self):
        xs, ys = [], []
        for cx, cy, r in self.circles:
            xs += [cx - r, cx + r]
            ys += [cy - r, cy + r]
        for points in [self.curve] + [points for _, points in self.branches]:
            if points is not None and len(points):
                finite = points[np.isfinite(points).all(axis=1)]
                xs += list(finite[:, 0])
                ys += list(finite[:, 1])
        for _, x, y in self.markers:
            xs.append(x)
            ys.append(y)
        return min(xs), min(ys), max(xs), max(ys)


def segments(points):
    """
    Splits a polyline at non-finite samples.
    """
    points = np.asarray(points, dtype=float)
    good = np.isfinite(points).all(axis=1)
    pieces, current = [], []
    for k in range(len(points)):
        if good[k]:
            current.append((float(points[k, 0]), float(points[k, 1])))
        elif current:
            pieces.append(current)
            current = []
    if current:
        pieces.append(current)
    return [piece for piece in pieces if len(piece) > 1]


def render_svg(figure, margin=None, size=None):
    if figure.empty:
        raise EmptyFigureError('Nothing to draw: the figure has no layers.')
    margin = app_settings.SVG_MARGIN if margin is None else margin
    size = size or app_settings.SVG_SIZE
    xmin, ymin, xmax, ymax = figure.bounds()
    span = max(xmax - xmin, ymax - ymin) or 1.0
    pad = margin * span
    bounds = (xmin - pad, ymin - pad, xmax + pad, ymax + pad)
    width, height = bounds[2] - bounds[0], bounds[3] - bounds[1]
    scale = size / max(width, height)

    engine = Engine(dirs=[TEMPLATES_DIR], libraries={'envelope_svg': 'circle_envelopes.templatetags.envelope_svg'})
    context = {
        'title': figure.title,
        'width': int(round(width * scale)),
        'height': int(round(height * scale)),
        'bounds': bounds,
        'stroke': span / 400,
        'dash': span / 100,
        'radius': span / 150,
        'circles': figure.circles,
        'curve': segments(figure.curve) if figure.curve is not None else [],
        'branches': [{'label': label, 'color': PALETTE[k % len(PALETTE)], 'segments': segments(points)}
                     for k, (label, points) in enumerate(figure.branches)],
        'markers': [{'label': label, 'x': x, 'y': y, 'color': MARKER_COLOR} for label, x, y in figure.markers],
    }
    return engine.get_template('circle_envelopes/figure.svg').render(Context(context))


def emit_svg(figure, storage, name, margin=None, size=None):
    return storage.write_text(name, render_svg(figure, margin, size))
