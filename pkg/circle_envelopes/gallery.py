"""
The bundled gallery: every scenario carrying expected results is run
through classification, envelope construction and residual checks and
compared with its closed forms.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from circle_envelopes.creativity import classify_family
from circle_envelopes.discriminant import discriminant_set
from circle_envelopes.envelopes import construct_envelopes, verify_envelope
from circle_envelopes.expressions import evaluate
from circle_envelopes.frames import build_frames
from circle_envelopes.scenarios import bundled_scenarios, load_scenario

logger = logging.getLogger(__name__)

SYMBOLIC_TOL = 1e-9
AUTO_FRAME_TOL = 1e-6


@dataclass
class GalleryResult(object):
    name: str
    classification: str
    expected: str = None
    closed_form_error: float = None
    auto_frame_error: float = None
    residuals_passed: bool = True
    decomposition_complete: bool = True
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def as_row(self):
        return (self.name, self.classification, self.expected or '', self.closed_form_error, self.auto_frame_error,
                int(self.residuals_passed), int(self.decomposition_complete), 'pass' if self.passed else 'FAIL')


GALLERY_HEADER = ('example', 'classification', 'expected', 'closed_form_error', 'auto_frame_error', 'residuals',
                  'decomposition', 'result')


def closed_form_points(closed, t):
    x, y = closed
    return np.stack((evaluate(x, t), evaluate(y, t)), axis=-1)


def closed_form_error(branches, closed_forms, t, by_label):
    """
    Largest distance between computed branches and closed forms. With a
    supplied Gauss map the labels must agree (a forced branch answers to
    'plus'); otherwise the best pairing of the two sets is taken.
    """
    expected = {label: closed_form_points(closed, t) for label, closed in closed_forms.items()}
    computed = {('plus' if branch.label == 'forced' else branch.label): branch.points for branch in branches}
    if by_label:
        if set(expected) != set(computed):
            return float('inf')
        return max(float(np.max(np.hypot(*(computed[label] - expected[label]).T))) for label in expected)
    if len(expected) != len(computed):
        return float('inf')
    pairings = [list(zip(computed, expected)), list(zip(computed, reversed(list(expected))))]
    errors = [max(float(np.max(np.hypot(*(computed[c] - expected[e]).T))) for c, e in pairing)
              for pairing in pairings]
    return min(errors)


def auto_frame_error(family, closed_forms):
    """
    Closed-form error of the envelopes built with the Gauss map tracked
    from the centre curve instead of supplied. Labels may swap with the
    orientation of the tracked map, so the best pairing is scored.
    """
    auto = family.without_gauss()
    frames = build_frames(auto)
    report = classify_family(frames, auto.radius_rate(frames.t), auto.interval)
    if not report.creative:
        return float('inf')
    branches = construct_envelopes(report, frames, auto)
    return closed_form_error(branches, closed_forms, frames.t, by_label=False)


def check_scenario(scenario):
    family = scenario.family
    frames = build_frames(family)
    report = classify_family(frames, family.radius_rate(frames.t), family.interval)
    result = GalleryResult(scenario.name, report.classification.label,
                           scenario.expected_class.label if scenario.expected_class else None)

    if scenario.expected_class is not None and report.classification is not scenario.expected_class:
        result.failures.append('classified {}, expected {}'.format(report.classification.label,
                                                                   scenario.expected_class.label))
    if scenario.expected_witness is not None:
        lo, hi = scenario.expected_witness
        if report.witness is None or not lo < report.witness <= hi:
            result.failures.append('witness {!r} outside ({}, {}]'.format(report.witness, lo, hi))
    if not report.creative:
        return result

    branches = construct_envelopes(report, frames, family)
    for branch in branches:
        residuals = verify_envelope(branch, family)
        if not residuals.passed:
            result.residuals_passed = False
            result.failures.append('{} branch residuals r1={:.3g} r2={:.3g}'.format(
                branch.label, residuals.r1, residuals.r2))
    if scenario.closed_forms:
        tol = SYMBOLIC_TOL if family.has_gauss else AUTO_FRAME_TOL
        result.closed_form_error = closed_form_error(branches, scenario.closed_forms, frames.t, family.has_gauss)
        if not result.closed_form_error <= tol:
            result.failures.append('closed form error {:.3g} > {:.0e}'.format(result.closed_form_error, tol))
        if family.has_gauss and not frames.singular.all():
            result.auto_frame_error = auto_frame_error(family, scenario.closed_forms)
            if not result.auto_frame_error <= AUTO_FRAME_TOL:
                result.failures.append('closed form error {:.3g} > {:.0e} with a tracked Gauss map'.format(
                    result.auto_frame_error, AUTO_FRAME_TOL))

    decomposition = discriminant_set(family, frames, report, branches)
    if not decomposition.complete:
        result.decomposition_complete = False
        result.failures.append('discriminant decomposition incomplete: {}'.format(decomposition.summary()))
    return result


def run_gallery(names=None, samples=None):
    """
    Runs the named bundled scenarios, all of them by default, and returns
    one GalleryResult per scenario.
    """
    results = []
    for name in names or bundled_scenarios():
        scenario = load_scenario(name, samples)
        result = check_scenario(scenario)
        logger.info('Gallery %s: %s (%s).', name, 'pass' if result.passed else 'FAIL', result.classification)
        results.append(result)
    return results
