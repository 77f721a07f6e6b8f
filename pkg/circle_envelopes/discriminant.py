"""
The discriminant set of a circle family, F = dF/dt = 0 for
F(p, t) = |p - gamma(t)|^2 - lambda(t)^2, solved slice by slice in the
moving frame, its decomposition into envelope points and full circles over
singular parameters, and the limit of intersections of nearby circles.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from django.core.exceptions import ValidationError

from circle_envelopes import app_settings
from circle_envelopes.creativity import classify_family
from circle_envelopes.envelopes import construct_envelopes
from circle_envelopes.frames import point_frame, singular_threshold
from circle_envelopes.helpers import fit_order, norm, rotate

logger = logging.getLogger(__name__)

EMPTY = 'Empty'
TANGENT = 'Tangent'
PAIR = 'Pair'
FULL_CIRCLE = 'FullCircle'
COINCIDENT = 'Coincident'
EXTRAPOLATED = 'Extrapolated'
# offsets nearest zero used to extrapolate an intersection track
LIMIT_FIT_POINTS = 4


class CoincidentCirclesError(ValueError):
    def __init__(self, center, radius):
        self.center = center
        self.radius = radius
        super().__init__('Circles coincide (centre {}, radius {!r}); the intersection is the whole circle.'.format(
            tuple(float(c) for c in center), float(radius)))


@dataclass(frozen=True)
class Intersection(object):
    kind: str
    points: np.ndarray


def circle_circle_intersect(center1, radius1, center2, radius2, tol=None):
    """
    Intersection of two circles by the radical line: the chord's foot lies
    at distance a = (r1^2 - r2^2 + d^2) / 2d from the first centre along the
    centre line, its half-length is h = sqrt(r1^2 - a^2).
    """
    if not (radius1 > 0 and radius2 > 0):
        raise ValueError('Radii must be positive, got {!r} and {!r}.'.format(radius1, radius2))
    center1 = np.asarray(center1, dtype=float)
    center2 = np.asarray(center2, dtype=float)
    offset = center2 - center1
    d = float(np.hypot(offset[0], offset[1]))
    tol = app_settings.TANGENT_TOL * max(1.0, radius1, radius2) if tol is None else tol

    if d <= tol:
        if abs(radius1 - radius2) <= tol:
            raise CoincidentCirclesError(center1, radius1)
        return Intersection(EMPTY, np.empty((0, 2)))

    along = offset / d
    a = ((radius1 - radius2) * (radius1 + radius2) + d * d) / (2 * d)
    if abs(d - (radius1 + radius2)) <= tol or abs(d - abs(radius1 - radius2)) <= tol:
        a = min(max(a, -radius1), radius1)
        return Intersection(TANGENT, (center1 + a * along)[None, :])
    if d > radius1 + radius2 or d < abs(radius1 - radius2):
        return Intersection(EMPTY, np.empty((0, 2)))
    h = np.sqrt(max(0.0, radius1 * radius1 - a * a))
    foot = center1 + a * along
    across = rotate(along)
    return Intersection(PAIR, np.stack((foot + h * across, foot - h * across)))


@dataclass(frozen=True)
class DiscriminantSlice(object):
    t: float
    kind: str
    points: np.ndarray
    center: np.ndarray
    radius: float

    def as_row(self):
        """
        (t, kind, x1, y1, x2, y2, radius). A full circle puts its centre in
        (x1, y1) and its radius last; missing values are None.
        """
        row = [self.t, self.kind, None, None, None, None, None]
        if self.kind == FULL_CIRCLE:
            row[2:4] = self.center
            row[6] = self.radius
        for k, point in enumerate(self.points):
            row[2 + 2 * k:4 + 2 * k] = point
        return tuple(row)


def solve_slices(t, center, radius, radius_rate, beta, mu, nu, eps_beta, clamp_band=None):
    """
    With p = gamma + lambda u, |u| = 1, the system reduces to
    beta (u.mu) = -lambda'. Every sample is solved independently.
    """
    clamp_band = app_settings.CLAMP_BAND if clamp_band is None else clamp_band
    flat = np.abs(beta) <= eps_beta
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(flat, np.nan, radius_rate / np.where(flat, 1.0, beta))

    slices = []
    for k in range(len(t)):
        c, r = center[k], float(radius[k])
        if flat[k]:
            if abs(radius_rate[k]) <= eps_beta:
                slices.append(DiscriminantSlice(float(t[k]), FULL_CIRCLE, np.empty((0, 2)), c, r))
            else:
                slices.append(DiscriminantSlice(float(t[k]), EMPTY, np.empty((0, 2)), c, r))
            continue
        q = ratio[k]
        if abs(abs(q) - 1.0) <= clamp_band:
            points = (c - r * np.sign(q) * mu[k])[None, :]
            kind = TANGENT
        elif abs(q) > 1.0:
            points = np.empty((0, 2))
            kind = EMPTY
        else:
            s = np.sqrt(1.0 - q * q)
            points = np.stack((c + r * (-q * mu[k] + s * nu[k]), c + r * (-q * mu[k] - s * nu[k])))
            kind = PAIR
        slices.append(DiscriminantSlice(float(t[k]), kind, points, c, r))
    return slices


def discriminant_slice(family, t, eps_beta=None):
    t = float(t)
    a, b = family.interval
    if not a < t < b:
        raise ValidationError('t=%(t)r lies outside the interval (%(a)r, %(b)r).', code='malformed',
                              params={'t': t, 'a': a, 'b': b})
    if eps_beta is None:
        eps_beta = singular_threshold(family.velocity(family.grid()))
    frame = point_frame(family, t, eps_beta)
    return solve_slices(frame.t, frame.center, family.radius_values(frame.t), family.radius_rate(frame.t),
                        frame.beta, frame.mu, frame.nu, eps_beta)[0]


def frame_slices(family, frames, eps_beta=None):
    eps_beta = frames.eps_sing if eps_beta is None else eps_beta
    return solve_slices(frames.t, frames.center, family.radius_values(frames.t), family.radius_rate(frames.t),
                        frames.beta, frames.mu, frames.nu, eps_beta)


@dataclass(frozen=True)
class Decomposition(object):
    slices: list
    branches: list
    matched: int
    unmatched: list = field(default_factory=list)
    full_circles: list = field(default_factory=list)
    unattributed: list = field(default_factory=list)
    uncovered: list = field(default_factory=list)

    @property
    def complete(self):
        return not (self.unmatched or self.unattributed or self.uncovered)

    def summary(self):
        kinds = {}
        for item in self.slices:
            kinds[item.kind] = kinds.get(item.kind, 0) + 1
        counts = ', '.join('{} {}'.format(kinds[kind], kind) for kind in sorted(kinds))
        return '{} slices ({}); {} points matched to {} envelope branches, {} unmatched; {} full circles'.format(
            len(self.slices), counts, self.matched, len(self.branches), len(self.unmatched), len(self.full_circles))


def covers(item, point, tol):
    if item.kind == FULL_CIRCLE:
        return abs(float(np.hypot(*(point - item.center))) - item.radius) <= tol
    return bool(len(item.points)) and float(norm(item.points - point).min()) <= tol


def discriminant_set(family, frames, report=None, branches=None, eps_beta=None):
    """
    All slices over the grid and their decomposition: every Tangent or Pair
    point must coincide with an envelope point at the same t, every full
    circle must sit over a singular parameter, and every envelope point must
    lie in its slice.
    """
    eps_beta = frames.eps_sing if eps_beta is None else eps_beta
    if report is None:
        report = classify_family(frames, family.radius_rate(frames.t), family.interval, eps_beta=eps_beta)
    if not report.creative:
        raise ValidationError('The discriminant decomposition needs a creative family; the creative condition '
                              'fails at t=%(t)r.', code='not_creative', params={'t': report.witness})
    if branches is None:
        branches = construct_envelopes(report, frames, family)

    slices = frame_slices(family, frames, eps_beta)
    tol = app_settings.MATCH_TOL
    matched = 0
    unmatched, full_circles, unattributed, uncovered = [], [], [], []
    for k, item in enumerate(slices):
        if item.kind == FULL_CIRCLE:
            full_circles.append(item.t)
            if not frames.singular[k]:
                unattributed.append(item.t)
        for point in item.points:
            if any(float(np.hypot(*(branch.points[k] - point))) <= tol for branch in branches):
                matched += 1
            else:
                unmatched.append((item.t, tuple(float(c) for c in point)))
        for branch in branches:
            if not covers(item, branch.points[k], tol):
                uncovered.append((item.t, branch.label))

    if unmatched:
        logger.warning('%d discriminant points match no envelope branch, first at t=%r.',
                       len(unmatched), unmatched[0][0])
    if unattributed:
        logger.warning('%d full-circle slices lie over regular parameters, first at t=%r.',
                       len(unattributed), unattributed[0])
    return Decomposition(slices, branches, matched, unmatched, full_circles, unattributed, uncovered)


@dataclass(frozen=True)
class E1Track(object):
    reference: np.ndarray
    points: np.ndarray
    distances: np.ndarray
    order: float
    converged: bool
    limit: np.ndarray = None


@dataclass(frozen=True)
class E1Result(object):
    t0: float
    epsilons: np.ndarray
    kinds: list
    reference_kind: str
    tracks: list
    degenerate: bool = False

    @property
    def converged(self):
        return not self.degenerate and bool(self.tracks) and all(track.converged for track in self.tracks)

    def as_rows(self):
        """
        (epsilon, kind, track, x, y, distance) per epsilon and track, then
        one row per track at epsilon 0 with the extrapolated limit and its
        distance to the discriminant point.
        """
        for j, epsilon in enumerate(self.epsilons):
            if not self.tracks:
                yield (epsilon, self.kinds[j], None, None, None, None)
            for number, track in enumerate(self.tracks, start=1):
                yield (epsilon, self.kinds[j], number, track.points[j, 0], track.points[j, 1], track.distances[j])
        for number, track in enumerate(self.tracks, start=1):
            yield (0.0, EXTRAPOLATED, number, track.limit[0], track.limit[1],
                   float(np.hypot(*(track.limit - track.reference))))


def extrapolate_limit(epsilons, points):
    """
    Value at epsilon = 0 of a polynomial fit, quadratic when enough points
    remain, through the points of the smallest offsets.
    """
    usable = np.isfinite(points).all(axis=1)
    if not usable.any():
        return np.full(2, np.nan)
    epsilons, points = epsilons[usable], points[usable]
    nearest = np.argsort(np.abs(epsilons), kind='stable')[:LIMIT_FIT_POINTS]
    epsilons, points = epsilons[nearest], points[nearest]
    if len(epsilons) == 1:
        return points[0].copy()
    coefficients = np.polyfit(epsilons / np.abs(epsilons).max(), points, min(2, len(epsilons) - 1))
    return coefficients[-1]


def signed_epsilons(magnitudes):
    magnitudes = sorted({abs(float(value)) for value in magnitudes}, reverse=True)
    return np.array([sign * value for sign in (1.0, -1.0) for value in magnitudes])


def chord_side(start, end, point):
    chord = end - start
    rel = point - start
    return np.sign(chord[0] * rel[1] - chord[1] * rel[0])


def assign(previous, candidates, start, end, tol):
    """
    Index of the candidate continuing each track: nearest neighbour, ties
    broken by keeping each track on its side of the chord.
    """
    if len(candidates) == 1:
        return [0] * len(previous)
    if len(previous) == 1:
        return [int(np.argmin(norm(candidates - previous[0])))]
    straight = norm(candidates[0] - previous[0]) + norm(candidates[1] - previous[1])
    crossed = norm(candidates[1] - previous[0]) + norm(candidates[0] - previous[1])
    if abs(straight - crossed) <= tol:
        same = chord_side(start, end, candidates[0]) == chord_side(start, end, previous[0])
        return [0, 1] if same else [1, 0]
    return [0, 1] if straight <= crossed else [1, 0]


def e1_limit(family, t0, epsilons=None, eps_beta=None):
    """
    Intersections of C(t0) with C(t0 + epsilon) for a shrinking epsilon
    sequence of both signs, continued by nearest neighbour from the
    discriminant points at t0, with each track's distance to its point, the
    fitted order of convergence and the limit extrapolated to epsilon = 0.
    """
    epsilons = signed_epsilons(app_settings.E1_EPSILONS if epsilons is None else epsilons)
    a, b = family.interval
    inside = (t0 + epsilons > a) & (t0 + epsilons < b)
    if not inside.all():
        logger.warning('Dropping %d epsilons that leave the interval at t0=%r.', int((~inside).sum()), t0)
        epsilons = epsilons[inside]
    reference = discriminant_slice(family, t0, eps_beta)
    references = reference.points
    r0 = float(family.radius_values(np.array([t0]))[0])
    c0 = family.center(np.array([t0]))[0]
    centers = family.center(t0 + epsilons)
    radii = family.radius_values(t0 + epsilons)

    kinds = []
    points = np.full((len(references), len(epsilons), 2), np.nan)
    degenerate = False
    for sign in (1.0, -1.0):
        previous = references
        side = np.flatnonzero(np.sign(epsilons) == sign)
        # continue outwards from the discriminant point, smallest offset first
        for j in side[np.argsort(np.abs(epsilons[side]), kind='stable')]:
            try:
                hit = circle_circle_intersect(c0, r0, centers[j], float(radii[j]))
            except CoincidentCirclesError:
                kinds.append((j, COINCIDENT))
                degenerate = True
                continue
            kinds.append((j, hit.kind))
            if not len(hit.points) or not len(previous):
                continue
            tol = app_settings.TANGENT_TOL * (1.0 + r0)
            for track, index in enumerate(assign(previous, hit.points, c0, centers[j], tol)):
                points[track, j] = hit.points[index]
            previous = points[:, j]
    kinds = [kind for _, kind in sorted(kinds)]

    tracks = []
    magnitudes = np.abs(epsilons)
    for track, point in enumerate(references):
        distances = norm(points[track] - point)
        floor = 1e-12 * (1.0 + float(np.hypot(*point)))
        usable = np.isfinite(distances)
        order = fit_order(magnitudes[usable], distances[usable], floor=floor)
        final = distances[np.argmin(np.where(usable, magnitudes, np.inf))] if usable.any() else np.nan
        if usable.any() and (distances[usable] <= floor).all():
            converged = True
        else:
            converged = bool(order >= 0.9 and final <= 1e-4 * (1.0 + float(np.hypot(*point))))
        tracks.append(E1Track(point, points[track], distances, order, converged,
                              extrapolate_limit(epsilons, points[track])))
    if degenerate:
        logger.warning('Nearby circles coincide at t0=%r; the intersection limit is degenerate.', t0)
    return E1Result(float(t0), epsilons, kinds, reference.kind, tracks, degenerate)
