"""
The creative condition lambda'(t) = beta(t) cos(theta(t)) and the
classification of a circle family by the number of envelopes it creates.
"""
import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from circle_envelopes import app_settings
from circle_envelopes.helpers import window_index

logger = logging.getLogger(__name__)


class Status(enum.IntEnum):
    SOLVABLE = 0
    UNCONSTRAINED = 1
    NO_SOLUTION = 2


class Classification(enum.Enum):
    NOT_CREATIVE = 'not_creative'
    UNIQUE = 'unique'
    EXACTLY_TWO = 'exactly_two'
    UNCOUNTABLY_MANY = 'uncountably_many'
    AMBIGUOUS = 'ambiguous'

    @property
    def label(self):
        return ''.join(part.capitalize() for part in self.value.split('_'))


@dataclass(frozen=True)
class WindowDiagnostic(object):
    index: int
    lo: float
    hi: float
    samples: int
    regular: int
    tangent: int
    strict: int


@dataclass(frozen=True)
class CreativityReport(object):
    t: np.ndarray
    status: np.ndarray
    cos_theta: np.ndarray
    margin: np.ndarray
    classification: Classification
    witness: float = None
    windows: list = field(default_factory=list)
    eps_beta: float = 0.0

    @property
    def creative(self):
        return self.classification is not Classification.NOT_CREATIVE

    def status_line(self):
        line = 'classification: {}'.format(self.classification.label)
        if self.witness is not None:
            line += ' (witness t={:.9g}, margin {:.9g})'.format(
                self.witness, float(self.margin[np.searchsorted(self.t, self.witness)]))
        return line

    def as_rows(self):
        """
        Rows (t, status, cos_theta, margin); cos_theta is empty unless solvable.
        """
        for k in range(len(self.t)):
            yield (self.t[k], Status(int(self.status[k])).name.lower(), self.cos_theta[k], self.margin[k])


def pointwise_creative(radius_rate, beta, eps_beta, clamp_band=None):
    """
    Solves lambda' = beta cos(theta) at one sample. Returns (status, cos_theta),
    cos_theta being None unless the status is SOLVABLE.
    """
    status, cos_theta = pointwise_statuses(np.array([radius_rate], dtype=float), np.array([beta], dtype=float),
                                           eps_beta, clamp_band)
    status = Status(int(status[0]))
    return status, (float(cos_theta[0]) if status is Status.SOLVABLE else None)


def pointwise_statuses(radius_rate, beta, eps_beta, clamp_band=None):
    clamp_band = app_settings.CLAMP_BAND if clamp_band is None else clamp_band
    radius_rate = np.asarray(radius_rate, dtype=float)
    beta = np.asarray(beta, dtype=float)
    flat = np.abs(beta) <= eps_beta

    status = np.full(beta.shape, Status.SOLVABLE, dtype=int)
    cos_theta = np.full(beta.shape, np.nan)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(flat, np.nan, radius_rate / np.where(flat, 1.0, beta))
    status[flat & (np.abs(radius_rate) <= eps_beta)] = Status.UNCONSTRAINED
    status[flat & (np.abs(radius_rate) > eps_beta)] = Status.NO_SOLUTION
    status[~flat & (np.abs(ratio) > 1.0 + clamp_band)] = Status.NO_SOLUTION
    solvable = status == Status.SOLVABLE
    cos_theta[solvable] = np.clip(ratio[solvable], -1.0, 1.0)
    return status, cos_theta


def window_diagnostics(t, interval, windows, regular, tangent, strict):
    a, b = interval
    index = window_index(t, a, b, windows)
    width = (b - a) / windows
    diagnostics = []
    for w in range(windows):
        members = index == w
        diagnostics.append(WindowDiagnostic(w, a + w * width, a + (w + 1) * width, int(members.sum()),
                                            int((members & regular).sum()), int((members & tangent).sum()),
                                            int((members & strict).sum())))
    return diagnostics


def infer_interval(t):
    if len(t) < 2:
        return float(t[0]) - 0.5, float(t[0]) + 0.5
    h = (t[-1] - t[0]) / (len(t) - 1)
    return float(t[0] - h / 2), float(t[-1] + h / 2)


def classify_family(frames, radius_rate, interval=None, eps_beta=None, windows=None):
    """
    Pointwise creativity on the grid followed by the family classification.

    Density over the open interval is judged on windows: the regular set
    (beta != 0) must meet every window for at most two envelopes, and the
    tangency set (|lambda'| = |beta|) must meet every window for a unique one.
    """
    t = frames.t
    beta = frames.beta
    radius_rate = np.asarray(radius_rate, dtype=float)
    eps_beta = frames.eps_sing if eps_beta is None else eps_beta
    interval = infer_interval(t) if interval is None else interval
    windows = min(windows or app_settings.WINDOWS, len(t))

    status, cos_theta = pointwise_statuses(radius_rate, beta, eps_beta)
    margin = np.abs(beta) - np.abs(radius_rate)
    regular = np.abs(beta) > eps_beta
    tangent = regular & (np.abs(np.abs(radius_rate) - np.abs(beta)) <= app_settings.EPS_TAN * np.abs(beta))
    strict = np.abs(radius_rate) < (1.0 - app_settings.DELTA_STRICT) * np.abs(beta)
    diagnostics = window_diagnostics(t, interval, windows, regular, tangent, strict)

    witness = None
    failing = np.flatnonzero(status == Status.NO_SOLUTION)
    if len(failing):
        classification = Classification.NOT_CREATIVE
        witness = float(t[failing[0]])
    elif any(window.regular == 0 for window in diagnostics):
        classification = Classification.UNCOUNTABLY_MANY
    elif all(window.tangent > 0 for window in diagnostics):
        classification = Classification.UNIQUE
    elif strict.any():
        classification = Classification.EXACTLY_TWO
    else:
        classification = Classification.AMBIGUOUS
        logger.warning('Classification is ambiguous: beta is dense but neither tangency nor strict '
                       'inequality is resolved on %d windows.', windows)
    return CreativityReport(t=t, status=status, cos_theta=cos_theta, margin=margin,
                            classification=classification, witness=witness, windows=diagnostics,
                            eps_beta=eps_beta)
