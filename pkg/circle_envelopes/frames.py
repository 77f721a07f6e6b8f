"""
Gauss map, moving frame and curvature pair of a frontal centre curve.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from django.core.exceptions import ValidationError

from circle_envelopes import app_settings
from circle_envelopes.helpers import derivative, dot, norm, rotate, true_runs

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FrontalData(object):
    t: np.ndarray
    center: np.ndarray
    velocity: np.ndarray
    nu: np.ndarray
    mu: np.ndarray
    ell: np.ndarray
    beta: np.ndarray
    singular: np.ndarray
    eps_sing: float
    symbolic: bool = False
    continuity_warnings: list = field(default_factory=list)

    def __len__(self):
        return len(self.t)

    def as_rows(self):
        """
        Rows (t, nu_x, nu_y, ell, beta, singular) for the curvature CSV.
        """
        for k in range(len(self.t)):
            yield (self.t[k], self.nu[k, 0], self.nu[k, 1], self.ell[k], self.beta[k], int(self.singular[k]))


def singular_threshold(velocity):
    return app_settings.EPS_SING_FACTOR * (1.0 + float(norm(velocity).max(initial=0.0)))


def auto_gauss(velocity, t, eps_sing):
    """
    Gauss map of a curve from its velocity by continuity tracking.

    The first regular sample gets -J(gamma'/|gamma'|); every later regular
    sample takes the sign of +-J(gamma'/|gamma'|) closest to its predecessor.
    Singular samples between regular ones are interpolated from both sides
    and renormalised; at the ends of the grid they carry the nearest value.
    Returns (nu, warnings) where warnings lists the t of consecutive pairs
    with nu_k.nu_{k+1} below the continuity threshold.
    """
    speed = norm(velocity)
    singular = speed <= eps_sing
    if singular.all():
        raise ValidationError('The centre curve is constant on the grid; supply nu explicitly '
                              '(any unit field is a Gauss map of a constant curve).', code='constant_curve')
    candidates = np.zeros_like(velocity)
    regular = ~singular
    candidates[regular] = rotate(velocity[regular] / speed[regular, None])

    first = int(np.flatnonzero(regular)[0])
    nu = np.empty_like(velocity)
    nu[:first + 1] = -candidates[first]
    for k in range(first + 1, len(t)):
        if singular[k]:
            nu[k] = nu[k - 1]
        elif dot(candidates[k], nu[k - 1]) >= 0:
            nu[k] = candidates[k]
        else:
            nu[k] = -candidates[k]
    fill_singular_runs(nu, t, singular)

    jumps = dot(nu[:-1], nu[1:]) < app_settings.CONTINUITY_DOT
    warnings = [float(value) for value in t[:-1][jumps]]
    if warnings:
        logger.warning('Gauss map continuity break at %d sample pairs, first at t=%r.', len(warnings), warnings[0])
    return nu, warnings


def fill_singular_runs(nu, t, singular):
    for start, stop in true_runs(singular):
        if start == 0 or stop == len(t):
            continue
        weight = ((t[start:stop] - t[start - 1]) / (t[stop] - t[start - 1]))[:, None]
        between = (1.0 - weight) * nu[start - 1] + weight * nu[stop]
        length = norm(between)
        # opposite neighbours leave no direction to interpolate
        if (length > 0.5).all():
            nu[start:stop] = between / length[:, None]


def moving_frame(nu):
    """
    mu = J(nu), J the anti-clockwise quarter turn.
    """
    return rotate(nu)


def curvature_pair(velocity, nu, mu, t, nu_rate=None):
    """
    (ell, beta) = (nu'.mu, gamma'.mu). nu' is the symbolic derivative when the
    Gauss map was supplied as expressions, else central differences of the
    tracked samples.
    """
    if nu_rate is None:
        nu_rate = derivative(nu, t) if len(t) > 1 else np.zeros_like(nu)
    return dot(nu_rate, mu), dot(velocity, mu)


def build_frames(family, t=None, eps_sing=None):
    t = family.grid() if t is None else np.atleast_1d(np.asarray(t, dtype=float))
    center = family.center(t)
    velocity = family.velocity(t)
    if eps_sing is None:
        eps_sing = singular_threshold(velocity)
    singular = norm(velocity) <= eps_sing

    warnings = []
    nu_rate = None
    if family.has_gauss:
        nu = family.gauss(t)
        nu_rate = family.gauss_rate(t)
    else:
        nu, warnings = auto_gauss(velocity, t, eps_sing)
    mu = moving_frame(nu)
    ell, beta = curvature_pair(velocity, nu, mu, t, nu_rate)
    return FrontalData(t=t, center=center, velocity=velocity, nu=nu, mu=mu, ell=ell, beta=beta,
                       singular=singular, eps_sing=eps_sing, symbolic=family.has_gauss,
                       continuity_warnings=warnings)


def point_frame(family, t, eps_sing):
    """
    Frame at a single parameter value. Without a supplied Gauss map the
    normal is -J(gamma'/|gamma'|), or any unit vector at a singular point:
    only the pair {nu, -nu} matters for what is computed from a single sample.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    velocity = family.velocity(t)
    speed = norm(velocity)
    if family.has_gauss:
        nu = family.gauss(t)
    elif speed[0] > eps_sing:
        nu = -rotate(velocity / speed[:, None])
    else:
        nu = np.array([[1.0, 0.0]])
    mu = moving_frame(nu)
    return FrontalData(t=t, center=family.center(t), velocity=velocity, nu=nu, mu=mu,
                       ell=np.full(1, np.nan), beta=dot(velocity, mu), singular=speed <= eps_sing,
                       eps_sing=eps_sing, symbolic=family.has_gauss)


def gauss_near(family, frames, t):
    """
    Gauss map at parameters between grid samples, consistent with the
    sampled frames: the supplied map when there is one, else
    +-J(gamma'/|gamma'|) signed like the nearest sample, which is also
    used where the curve is singular.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if family.has_gauss:
        return family.gauss(t)
    index = np.zeros(len(t), dtype=int)
    if len(frames.t) > 1:
        index = np.searchsorted(frames.t, t).clip(1, len(frames.t) - 1)
        index -= (t - frames.t[index - 1] < frames.t[index] - t).astype(int)
    nearest = frames.nu[index]
    velocity = family.velocity(t)
    speed = norm(velocity)
    regular = speed > frames.eps_sing
    nu = nearest.copy()
    candidates = rotate(velocity[regular] / speed[regular, None])
    flip = np.where(dot(candidates, nearest[regular]) >= 0, 1.0, -1.0)
    nu[regular] = flip[:, None] * candidates
    return nu
