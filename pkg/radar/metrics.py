"""
Figures of merit read off ambiguity slices, and Monte-Carlo detection.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import optimize, stats

from radar.ambiguity import chi
from radar.domain import AmbiguityQuery
from radar.exceptions import CalibrationError, GridMismatch, NullNotFound

logger = logging.getLogger(__name__)

# A null must drop below this fraction of the peak magnitude
NULL_THRESHOLD = 0.05

# Slice values more than this below the bound count as violations
BOUND_VIOLATION_TOL = 1e-6

# Confidence level of the Wilson intervals on detection rates
CONFIDENCE = 0.95


@dataclass(frozen=True)
class LobeReport:
    axis: str
    peak: float
    width: float
    left_null: float
    right_null: float
    psl_db: float

    def to_dict(self):
        return {
            'axis': self.axis,
            'peak': self.peak,
            'main_lobe_width': self.width,
            'left_null': self.left_null,
            'right_null': self.right_null,
            'psl_db': self.psl_db,
        }


@dataclass(frozen=True)
class BoundGap:
    min_gap: float
    violation_count: int


@dataclass(eq=False)
class DetectionCurve:
    snr_db: np.ndarray
    p_d: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    threshold: float
    p_fa_measured: float
    p_fa_ci_low: float = None
    p_fa_ci_high: float = None
    gain: float = None


def _peak_index(slc):
    if slc.matched is not None:
        return int(np.argmin(np.abs(slc.coords - slc.matched)))
    return int(np.argmax(slc.values))


def _refine(coords, power, i):
    """
    Vertex of the parabola through three samples of |chi|^2 around index i
    """
    x0, x1, x2 = coords[i - 1:i + 2]
    y0, y1, y2 = power[i - 1:i + 2]
    denominator = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denominator
    if a <= 0:
        return float(x1)
    b = (x2 ** 2 * (y0 - y1) + x1 ** 2 * (y2 - y0) + x0 ** 2 * (y1 - y2)) / denominator
    return float(np.clip(-b / (2 * a), x0, x2))


def _find_null(slc, peak, step):
    values = slc.values
    limit = NULL_THRESHOLD * values[peak]
    i = peak + step
    while 0 < i < values.size - 1:
        if values[i] <= values[i - 1] and values[i] <= values[i + 1] and values[i] <= limit:
            return i
        i += step
    side = 'right' if step > 0 else 'left'
    raise NullNotFound('no %s null below %.2f of the peak on the %s slice' % (side, NULL_THRESHOLD, slc.axis))


def locate_nulls(slc):
    """
    Indices and refined coordinates of the first nulls on both sides of the
    peak. Returns (peak_index, left_index, right_index, left, right).
    """
    peak = _peak_index(slc)
    left = _find_null(slc, peak, -1)
    right = _find_null(slc, peak, 1)
    power = slc.values ** 2
    return peak, left, right, _refine(slc.coords, power, left), _refine(slc.coords, power, right)


def main_lobe_width(slc):
    _, _, _, left, right = locate_nulls(slc)
    return right - left


def peak_sidelobe_level(slc):
    """
    Largest magnitude outside the main lobe relative to the peak, in dB.
    -inf when the slice holds nothing beyond the two nulls.
    """
    peak, left, right, _, _ = locate_nulls(slc)
    outside = np.concatenate((slc.values[:left], slc.values[right + 1:]))
    if outside.size == 0 or outside.max() == 0:
        return -np.inf
    return float(20 * np.log10(outside.max() / slc.values[peak]))


def lobe_report(slc):
    peak, _, _, left, right = locate_nulls(slc)
    return LobeReport(axis=slc.axis, peak=float(slc.values[peak]), width=right - left,
                      left_null=left, right_null=right, psl_db=peak_sidelobe_level(slc))


def bound_gap(slc, bound):
    """
    How far a measured slice sits above a theoretical lower bound
    """
    if slc.coords.shape != bound.coords.shape or not np.allclose(slc.coords, bound.coords, rtol=1e-12, atol=0):
        raise GridMismatch('slice and bound were sampled on different %s grids' % slc.axis)
    gap = slc.values - bound.lower
    violations = int(np.count_nonzero(gap < -BOUND_VIOLATION_TOL))
    if violations:
        logger.warning('%d samples of the %s slice fall below the bound', violations, slc.axis)
    return BoundGap(min_gap=float(gap.min()), violation_count=violations)


def _streams(seed, count):
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def _noise(rng, variance, trials):
    scale = np.sqrt(variance / 2)
    return rng.normal(scale=scale, size=trials) + 1j * rng.normal(scale=scale, size=trials)


def detection_probability(layout, code, cfg, det, seed, theta=0.0, theta_p=None):
    """
    Monte-Carlo detection rate of a matched filter steered to theta_p for a
    target at theta, over det.snr_grid. The threshold is the empirical
    (1 - P_fa) quantile of the noise-only statistic; false alarms are then
    re-measured on an independent noise stream.
    """
    needed = int(np.ceil(10 / det.P_fa))
    if det.trials < needed:
        raise CalibrationError('calibrating P_fa=%g needs at least %d trials, got %d' % (det.P_fa, needed, det.trials))
    theta_p = theta if theta_p is None else theta_p
    variance = layout.M_t * code.Q
    streams = _streams(seed, len(det.snr_grid) + 2)

    calibration = np.abs(_noise(streams[0], variance, det.trials)) ** 2
    threshold = float(np.quantile(calibration, 1 - det.P_fa, method='higher'))
    false_alarms = int(np.count_nonzero(np.abs(_noise(streams[1], variance, det.trials)) ** 2 > threshold))
    p_fa_measured = false_alarms / det.trials
    p_fa_ci = stats.binomtest(false_alarms, det.trials).proportion_ci(confidence_level=CONFIDENCE, method='wilson')

    gain = code.Q * chi(AmbiguityQuery(tau=0.0, v=0.0, theta=theta, theta_p=theta_p), layout, code, cfg)
    snr_db = np.asarray(det.snr_grid, dtype=float)
    p_d = np.empty(snr_db.size)
    low = np.empty(snr_db.size)
    high = np.empty(snr_db.size)
    for i, (snr, rng) in enumerate(zip(snr_db, streams[2:])):
        amplitude = np.sqrt(10 ** (snr / 10) * det.M_r)
        statistic = np.abs(amplitude * gain + _noise(rng, variance, det.trials)) ** 2
        hits = int(np.count_nonzero(statistic > threshold))
        interval = stats.binomtest(hits, det.trials).proportion_ci(confidence_level=CONFIDENCE, method='wilson')
        p_d[i] = hits / det.trials
        low[i], high[i] = interval.low, interval.high
        logger.debug('SNR %.1f dB: P_d=%.4f', snr, p_d[i])

    return DetectionCurve(snr_db=snr_db, p_d=p_d, ci_low=low, ci_high=high,
                          threshold=threshold, p_fa_measured=p_fa_measured, p_fa_ci_low=p_fa_ci.low,
                          p_fa_ci_high=p_fa_ci.high, gain=float(abs(gain)))


def monotone_within_ci(curve):
    """
    True when the isotonic (non-decreasing) fit of P_d stays inside every
    point's confidence interval
    """
    fitted = optimize.isotonic_regression(curve.p_d).x
    return bool(np.all(fitted >= curve.ci_low - 1e-12) and np.all(fitted <= curve.ci_high + 1e-12))


def plateau_start(coords, values, rel_tol=0.02):
    """
    First coordinate from which the spread (max - min) of the remaining
    values stays within rel_tol of the final value. None when only the
    last point qualifies.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return None
    limit = rel_tol * max(abs(values[-1]), 1e-300)
    start = None
    for i in range(values.size - 2, -1, -1):
        tail = values[i:]
        if tail.max() - tail.min() > limit:
            break
        start = i
    return None if start is None else float(coords[start])
