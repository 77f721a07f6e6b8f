"""
Creators and envelopes f = gamma + lambda * creator of a creative circle
family, and the residual check of the envelope definition.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from django.core.exceptions import ValidationError

from circle_envelopes import app_settings
from circle_envelopes.creativity import Classification, Status, infer_interval
from circle_envelopes.frames import gauss_near
from circle_envelopes.helpers import derivative, dot, norm, rotate, true_runs

logger = logging.getLogger(__name__)

PLUS = 'plus'
MINUS = 'minus'
FORCED = 'forced'
# shorter runs of unconstrained samples are isolated zeros, where continuity fixes the creator
MIN_FREE_RUN = 3
# difference step as a fraction of the grid spacing
STENCIL_FRACTION = 0.125


@dataclass(frozen=True)
class Creator(object):
    label: str
    t: np.ndarray
    nu_tilde: np.ndarray
    contacts: list = field(default_factory=list)
    # nu_tilde at any parameter of the interval, when known between samples
    trace: object = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class EnvelopeBranch(object):
    label: str
    t: np.ndarray
    creator: np.ndarray
    points: np.ndarray
    contacts: list = field(default_factory=list)
    trace: object = field(default=None, compare=False, repr=False)

    def as_rows(self):
        for k in range(len(self.t)):
            yield (self.t[k], self.points[k, 0], self.points[k, 1], self.label)


@dataclass(frozen=True)
class Residuals(object):
    r1: float
    r2: float
    frontal: float
    scale: float
    tol1: float
    tol2: float

    @property
    def passed(self):
        return self.r1 <= self.tol1 * self.scale and self.r2 <= self.tol2


def filled_cos_theta(report):
    """
    cos(theta) on every sample: unconstrained samples are linearly
    interpolated from the solvable ones, 0 when there are none.
    """
    cos_theta = np.array(report.cos_theta, dtype=float)
    solvable = report.status == Status.SOLVABLE
    gaps = report.status == Status.UNCONSTRAINED
    if not solvable.any():
        cos_theta[gaps] = 0.0
    elif gaps.any():
        cos_theta[gaps] = np.interp(report.t[gaps], report.t[solvable], cos_theta[solvable])
    return cos_theta


def creator_trace(report, frames, family, sign, cos_theta):
    """
    nu_tilde between samples: cos(theta) = lambda'/beta where beta is
    regular, else interpolated from the sampled cos(theta).
    """
    def trace(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        nu = gauss_near(family, frames, t)
        mu = rotate(nu)
        beta = dot(family.velocity(t), mu)
        cos = np.interp(t, report.t, cos_theta)
        regular = np.abs(beta) > report.eps_beta
        cos[regular] = np.clip(family.radius_rate(t)[regular] / beta[regular], -1.0, 1.0)
        touching = np.abs(cos) >= 1.0 - app_settings.CLAMP_BAND
        cos[touching] = np.sign(cos[touching])
        sin = np.sqrt(np.clip(1.0 - cos ** 2, 0.0, None))
        return -cos[:, None] * mu + sign * sin[:, None] * nu
    return trace


def creator_branches(report, frames, family=None):
    """
    nu_tilde = -cos(theta) mu +- sin(theta) nu, with the sign of sin(theta)
    fixed per branch. A unique family yields a single forced branch. Given
    the family, each creator also carries its trace between samples.
    """
    if not report.creative:
        raise ValidationError('The family is not creative (witness t=%(t)r); it creates no envelope.',
                              code='not_creative', params={'t': report.witness})
    filled = filled_cos_theta(report)
    cos_theta = filled.copy()
    touching = np.abs(cos_theta) >= 1.0 - app_settings.CLAMP_BAND
    cos_theta[touching] = np.sign(cos_theta[touching])
    sin_theta = np.sqrt(np.clip(1.0 - cos_theta ** 2, 0.0, None))
    along = -cos_theta[:, None] * frames.mu
    across = sin_theta[:, None] * frames.nu

    def trace(sign):
        return None if family is None else creator_trace(report, frames, family, sign, filled)

    contacts = [float(value) for value in report.t[touching]]
    if report.classification is Classification.UNIQUE:
        return [Creator(FORCED, report.t, along + across, contacts, trace(1.0))]
    if contacts:
        logger.warning('Envelope branches touch at %d samples, first at t=%r.', len(contacts), contacts[0])
    return [Creator(PLUS, report.t, along + across, contacts, trace(1.0)),
            Creator(MINUS, report.t, along - across, contacts, trace(-1.0))]


def bump(s):
    """
    exp(1 - 1/(1 - s^2)) on (-1, 1), 0 elsewhere: smooth, flat at both ends.
    """
    s = np.asarray(s, dtype=float)
    inside = np.abs(s) < 1
    values = np.zeros_like(s)
    values[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
    return values


def rotated_trace(trace, turns):
    def rotated(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        nu_tilde = trace(t)
        angle = np.arctan2(nu_tilde[:, 1], nu_tilde[:, 0])
        for mid, half, amplitude in turns:
            angle += amplitude * bump((t - mid) / half)
        return np.stack((np.cos(angle), np.sin(angle)), axis=-1)
    return rotated


def random_creators(report, frames, count, seed=0, interval=None, family=None):
    """
    Creators that differ from the canonical plus creator only on runs of
    unconstrained samples (beta = lambda' = 0), by a bump-shaped rotation that
    vanishes at the ends of each run. Any of them creates an envelope.
    """
    canonical = creator_branches(report, frames, family)[0]
    t = report.t
    a, b = infer_interval(t) if interval is None else interval
    angle = np.arctan2(canonical.nu_tilde[:, 1], canonical.nu_tilde[:, 0])
    runs = [(start, stop) for start, stop in true_runs(report.status == Status.UNCONSTRAINED)
            if stop - start >= MIN_FREE_RUN]
    rng = np.random.default_rng(seed)

    creators = []
    for number in range(count):
        shifted = angle.copy()
        turns = []
        for start, stop in runs:
            lo = t[start - 1] if start > 0 else a
            hi = t[stop] if stop < len(t) else b
            turns.append(((lo + hi) / 2, (hi - lo) / 2, rng.uniform(-np.pi, np.pi)))
            mid, half, amplitude = turns[-1]
            shifted[start:stop] += amplitude * bump((t[start:stop] - mid) / half)
        nu_tilde = np.stack((np.cos(shifted), np.sin(shifted)), axis=-1)
        trace = None if canonical.trace is None else rotated_trace(canonical.trace, turns)
        creators.append(Creator('random-{}'.format(number + 1), t, nu_tilde, trace=trace))
    return creators


def build_envelope(creator, family):
    t = creator.t
    points = family.center(t) + family.radius_values(t)[:, None] * creator.nu_tilde
    return EnvelopeBranch(creator.label, t, creator.nu_tilde, points, creator.contacts, creator.trace)


def envelope_gauss_map(branch, family):
    """
    (f - gamma)/|f - gamma|: the Gauss map making the envelope a frontal.
    """
    radial = branch.points - family.center(branch.t)
    return radial / norm(radial)[:, None]


def envelope_velocity(branch, family):
    """
    f' at the samples. With a creator trace, central differences of f taken
    at t +- h, h a fraction of the grid spacing that shrinks towards the
    ends of the interval; otherwise central differences along the grid.
    """
    t = branch.t
    if branch.trace is None:
        return derivative(branch.points, t)
    a, b = family.interval
    length = b - a
    spacing = np.gradient(t) if len(t) > 1 else np.full(1, length / family.samples)
    distance = np.minimum(t - a, b - t)
    step = STENCIL_FRACTION * spacing * np.minimum(1.0, 4.0 * distance / length)

    def envelope(s):
        return family.center(s) + family.radius_values(s)[:, None] * branch.trace(s)

    return (envelope(t + step) - envelope(t - step)) / (2.0 * step)[:, None]


def verify_envelope(branch, family):
    """
    Residuals of the envelope definition on every sample: r1 = |f'.(f - gamma)|
    and r2 = ||f - gamma| - lambda|.
    """
    t = branch.t
    radial = branch.points - family.center(t)
    radius = family.radius_values(t)
    velocity = envelope_velocity(branch, family)
    tangency = np.abs(dot(velocity, radial))
    r2 = float(np.max(np.abs(norm(radial) - radius)))
    scale = (1.0 + float(norm(velocity).max())) * (1.0 + float(radius.max()))
    return Residuals(r1=float(tangency.max()), r2=r2, frontal=float((tangency / radius).max()), scale=scale,
                     tol1=app_settings.TOL_TANGENCY, tol2=app_settings.TOL_RADIUS * (1.0 + float(radius.max())))


def construct_envelopes(report, frames, family):
    return [build_envelope(creator, family) for creator in creator_branches(report, frames, family)]
