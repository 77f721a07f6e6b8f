"""
Orthotomic recovery from a seismic survey.

A source A fires, the wave reflects off a mirror curve M and arrives at
sensors gamma(t) after tau(t) seconds. Unfolding every reflected ray into
a straight segment of the same length, normal to the orthotomic W of M
relative to A, makes W the envelope of the circles C(gamma(t), c tau(t)).
"""
import csv
import io
import logging
from dataclasses import dataclass, field

import numpy as np
from django.core.exceptions import ValidationError
from scipy.interpolate import CubicSpline, UnivariateSpline
from scipy.optimize import brentq

from circle_envelopes import app_settings
from circle_envelopes.creativity import Classification, classify_family
from circle_envelopes.envelopes import construct_envelopes
from circle_envelopes.expressions import diff_expr, eval_expr
from circle_envelopes.frames import build_frames
from circle_envelopes.helpers import dot, norm, open_grid, rotate

logger = logging.getLogger(__name__)

SURVEY_HEADER = ('t', 'sensor_x', 'sensor_y', 'arrival_s')
SYNTHETIC_REFLECTORS = {
    'flat': '-1',
    'parabola': '-1 - t^2/8',
}


@dataclass(frozen=True)
class SurveyData(object):
    t: np.ndarray
    sensors: np.ndarray
    arrivals: np.ndarray
    source: np.ndarray
    speed: float

    def __len__(self):
        return len(self.t)


def parse_point(value, name='source'):
    try:
        x, y = (float(part) for part in str(value).strip().strip('"\'').replace(',', ' ').split())
    except ValueError:
        raise ValidationError('%(name)s must be "x y", got %(value)r.', code='malformed',
                              params={'name': name, 'value': value})
    return np.array([x, y])


def ingest_survey(survey, source, speed):
    """
    Reads survey records from a CSV file object or text with the header
    t,sensor_x,sensor_y,arrival_s. Rows must be strictly increasing in t and
    every arrival time positive.
    """
    if isinstance(survey, str):
        survey = io.StringIO(survey)
    speed = float(speed)
    if not speed > 0:
        raise ValidationError('Wave speed must be positive, got %(speed)r.', code='non_positive',
                              params={'speed': speed})
    source = parse_point(source) if isinstance(source, str) else np.asarray(source, dtype=float)

    reader = csv.reader(survey)
    header = next(reader, None)
    if header is None or tuple(cell.strip() for cell in header) != SURVEY_HEADER:
        raise ValidationError('Line 1: expected header %(header)r, got %(got)r.', code='bad_row',
                              params={'header': ','.join(SURVEY_HEADER), 'got': header})
    rows = []
    for number, row in enumerate(reader, start=2):
        if not row or not ''.join(row).strip():
            continue
        if len(row) != len(SURVEY_HEADER):
            raise ValidationError('Line %(line)d: expected %(count)d fields, got %(got)d.', code='bad_row',
                                  params={'line': number, 'count': len(SURVEY_HEADER), 'got': len(row)})
        try:
            values = [float(cell) for cell in row]
        except ValueError:
            raise ValidationError('Line %(line)d: non-numeric field in %(row)r.', code='bad_row',
                                  params={'line': number, 'row': ','.join(row)})
        if not np.isfinite(values).all():
            raise ValidationError('Line %(line)d: non-finite field.', code='bad_row', params={'line': number})
        if values[3] <= 0:
            raise ValidationError('Line %(line)d: arrival time must be positive, got %(value)r.',
                                  code='non_positive', params={'line': number, 'value': values[3]})
        if rows and values[0] == rows[-1][1][0]:
            raise ValidationError('Line %(line)d: duplicate t=%(t)r.', code='duplicate',
                                  params={'line': number, 't': values[0]})
        if rows and values[0] < rows[-1][1][0]:
            raise ValidationError('Line %(line)d: t=%(t)r is not increasing.', code='unsorted',
                                  params={'line': number, 't': values[0]})
        rows.append((number, values))
    if len(rows) < 2:
        raise ValidationError('A survey needs at least two records, got %(count)d.', code='bad_row',
                              params={'count': len(rows)})

    table = np.array([values for _, values in rows])
    return SurveyData(t=table[:, 0], sensors=table[:, 1:3], arrivals=table[:, 3], source=source, speed=speed)


def radii_from_times(data, t=None):
    """
    lambda = c tau at the records, or at t through the cubic spline of the
    records.
    """
    radii = data.speed * data.arrivals
    if t is None:
        return radii
    return CubicSpline(data.t, radii)(t)


class SurveyFamily(object):
    """
    The circle family of a survey: sensors and radii are cubic splines
    through the records, evaluated on a midpoint grid of (t_first, t_last).

    With a declared arrival noise (standard deviation in seconds) the radii
    follow a smoothing spline instead, whose squared residuals sum to at
    most records * (speed * noise)^2.
    """

    def __init__(self, data, samples=None, noise=0.0):
        noise = float(noise or 0.0)
        if not noise >= 0:
            raise ValidationError('Arrival noise must not be negative, got %(noise)r.', code='malformed',
                                  params={'noise': noise})
        self.data = data
        self.noise = noise
        self.interval = (float(data.t[0]), float(data.t[-1]))
        self.samples = samples or app_settings.SAMPLES
        self.sensor_spline = CubicSpline(data.t, data.sensors, axis=0)
        radii = radii_from_times(data)
        if noise > 0:
            self.radius_spline = UnivariateSpline(data.t, radii, k=min(3, len(data) - 1),
                                                  s=len(data) * (data.speed * noise) ** 2)
        else:
            self.radius_spline = CubicSpline(data.t, radii)
        spread = norm(data.sensors - data.sensors[0]).max()
        self.stationary = bool(spread <= app_settings.EPS_SING_FACTOR * (1.0 + norm(data.sensors).max()))

    @property
    def has_gauss(self):
        return self.stationary

    def grid(self, samples=None):
        a, b = self.interval
        return open_grid(a, b, samples or self.samples)

    def center(self, t):
        return self.sensor_spline(t)

    def velocity(self, t):
        if self.stationary:
            return np.zeros((len(np.atleast_1d(t)), 2))
        return self.sensor_spline(t, 1)

    def radius_values(self, t):
        return self.radius_spline(t)

    def radius_rate(self, t):
        return self.radius_spline(t, 1)

    def gauss(self, t):
        """
        Any constant unit field is a Gauss map of a stationary sensor.
        """
        return np.tile([1.0, 0.0], (len(np.atleast_1d(t)), 1))

    def gauss_rate(self, t):
        return np.zeros((len(np.atleast_1d(t)), 2))


@dataclass(frozen=True)
class OrthotomicResult(object):
    family: SurveyFamily
    frames: object
    report: object
    branches: list = field(default_factory=list)
    selected: object = None


def signed_offsets(points, sensors):
    """
    Signed distances from the line through the first and last sensor,
    positive on the left of the survey direction.
    """
    start, end = sensors[0], sensors[-1]
    direction = end - start
    length = float(np.hypot(*direction))
    if length == 0:
        return np.zeros(len(points))
    return dot(points - start, rotate(direction / length))


def select_branch(branches, sensors, side=None):
    side = side or app_settings.BRANCH_SIDE
    if len(branches) == 1:
        return branches[0]
    means = [float(np.mean(signed_offsets(branch.points, sensors))) for branch in branches]
    index = int(np.argmin(means)) if side == 'lower' else int(np.argmax(means))
    return branches[index]


def recover_orthotomic(data, side=None, samples=None, eps_beta=None, windows=None, noise=0.0):
    family = SurveyFamily(data, samples, noise)
    frames = build_frames(family, eps_sing=eps_beta)
    report = classify_family(frames, family.radius_rate(frames.t), family.interval, eps_beta=eps_beta,
                             windows=windows)
    if not report.creative:
        k = int(np.searchsorted(report.t, report.witness))
        raise ValidationError('Survey circles create no envelope: |lambda\'| exceeds |beta| at t=%(t)r '
                              '(margin %(margin).3g); check times and speed.', code='not_creative',
                              params={'t': report.witness, 'margin': float(report.margin[k])})
    if report.classification is Classification.UNCOUNTABLY_MANY:
        logger.warning('Survey circles create uncountably many envelopes; there is no canonical orthotomic.')
        return OrthotomicResult(family, frames, report)

    branches = construct_envelopes(report, frames, family)
    selected = select_branch(branches, family.center(frames.t), side)
    logger.info('Recovered orthotomic from %d records on %d samples (%s branch %r).',
                len(data), len(frames), report.classification.label, selected.label)
    return OrthotomicResult(family, frames, report, branches, selected)


@dataclass(frozen=True)
class ReflectorSamples(object):
    t: np.ndarray
    points: np.ndarray
    flagged: np.ndarray

    def as_rows(self):
        for k in range(len(self.t)):
            yield (self.t[k], self.points[k, 0], self.points[k, 1], int(self.flagged[k]))


def reconstruct_reflector(branch, source, sensors):
    """
    m(t) on the segment from f(t) to gamma(t) equidistant from A and f(t):
    m = f + s (gamma - f) with s = -|f - A|^2 / (2 (gamma - f).(f - A)).
    Samples with s outside [0, 1] are flagged.
    """
    f = branch.points
    source = np.asarray(source, dtype=float)
    gap = f - source
    spread = norm(gap)
    degenerate = spread <= app_settings.TANGENT_TOL * (1.0 + norm(f))
    if degenerate.any():
        k = int(np.flatnonzero(degenerate)[0])
        raise ValidationError('The orthotomic passes through the source at t=%(t)r; the bisector is undefined.',
                              code='degenerate_bisector', params={'t': float(branch.t[k])})
    toward = sensors - f
    denominator = dot(toward, gap)
    with np.errstate(divide='ignore', invalid='ignore'):
        s = -0.5 * spread ** 2 / denominator
    flagged = ~np.isfinite(s) | (s < 0) | (s > 1)
    points = f + np.where(np.isfinite(s), s, np.nan)[:, None] * toward
    if flagged.any():
        logger.warning('Reflector point off the ray segment at %d samples, first at t=%r.',
                       int(flagged.sum()), float(branch.t[np.flatnonzero(flagged)[0]]))
    return ReflectorSamples(branch.t, points, flagged)


def reflection_point(reflector, source, sensor):
    """
    The point (x, g(x)) of the mirror y = g(x) where a ray from the source
    reflects into the sensor: the stationary point of the path length.
    """
    slope = diff_expr(reflector)

    def path_rate(x):
        m = np.array([x, eval_expr(reflector, x)])
        tangent = np.array([1.0, eval_expr(slope, x)])
        return float(np.dot((m - source) / np.hypot(*(m - source)) + (m - sensor) / np.hypot(*(m - sensor)),
                            tangent))

    lo, hi = min(source[0], sensor[0]), max(source[0], sensor[0])
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0
    width = hi - lo
    while path_rate(lo) > 0:
        lo -= width
    while path_rate(hi) < 0:
        hi += width
    x = brentq(path_rate, lo, hi, xtol=1e-15)
    return np.array([x, eval_expr(reflector, x)])


def orthotomic_point(reflector, source, x):
    """
    The mirror image of the source in the tangent line of y = g(x) at x.
    """
    m = np.array([x, eval_expr(reflector, x)])
    tangent = np.array([1.0, eval_expr(diff_expr(reflector), x)])
    tangent /= np.hypot(*tangent)
    foot = m + np.dot(source - m, tangent) * tangent
    return 2 * foot - source


def synthesize_survey(reflector, source, sensor_ts, speed=1.0):
    """
    Exact records for sensors at (t, 0) above the mirror y = g(x): the
    arrival is the reflected path length over the speed.
    """
    source = np.asarray(source, dtype=float)
    t = np.asarray(sensor_ts, dtype=float)
    sensors = np.stack((t, np.zeros_like(t)), axis=-1)
    arrivals = np.empty(len(t))
    for k, sensor in enumerate(sensors):
        m = reflection_point(reflector, source, sensor)
        arrivals[k] = (np.hypot(*(m - source)) + np.hypot(*(sensor - m))) / speed
    return SurveyData(t=t, sensors=sensors, arrivals=arrivals, source=source, speed=float(speed))


def survey_csv(data):
    output = io.StringIO()
    writer = csv.writer(output, lineterminator='\n')
    writer.writerow(SURVEY_HEADER)
    for k in range(len(data)):
        writer.writerow([repr(float(value)) for value in
                         (data.t[k], data.sensors[k, 0], data.sensors[k, 1], data.arrivals[k])])
    return output.getvalue()
