"""
Closed-form layout results: the minimum main-lobe-width layout, its lobe
width, and lower bounds on the Doppler and delay cuts that hold for any
antenna positions.
"""
import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from radar.ambiguity import chi_r, kernel_terms
from radar.domain import MIN_SPACING, AntennaLayout, check_array_size
from radar.exceptions import CodeError, VisibleRegionError

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class TheoryBound:
    """
    Lower bound on |chi| along the Doppler or delay axis. informative is
    False at broadside, where the layout drops out of both cuts.
    """
    axis: str
    coords: np.ndarray
    lower: np.ndarray
    informative: bool = True
    meta: dict = field(default_factory=dict)


def mmlwd_layout(M_t, L):
    """
    Layout with the narrowest angular main lobe under budget L: two tight
    half-wavelength clusters pushed to the ends of the aperture, with all
    remaining length in the centre gap.
    """
    check_array_size(M_t, L)
    d = np.full(M_t - 1, MIN_SPACING)
    centre = int(np.ceil(M_t / 2)) - 1
    d[centre] = L - MIN_SPACING * (M_t - 2)
    return AntennaLayout(d=d, L=L)


def b_min(M_t, L, theta):
    """
    Main lobe width of the minimum-width layout looking at theta, in radians
    """
    half = 2.0 / (4 * L - M_t + 2)
    s = np.sin(theta)
    if s + half > 1 or s - half < -1:
        raise VisibleRegionError('main lobe at theta=%.6g leaves the visible region for M_t=%d, L=%.6g'
                                 % (theta, M_t, L))
    return float(np.arcsin(s + half) - np.arcsin(s - half))


def _check_code(code, M_t):
    if M_t is not None and M_t != code.M_t:
        raise CodeError('code has %d rows but M_t=%d' % (code.M_t, M_t))


def _informative(theta):
    return theta is None or abs(np.sin(theta)) > 1e-12


def doppler_lower_bound(v_grid, code, cfg, M_t=None, theta=None):
    """
    Lower bound on |chi(0, v, theta, theta)| valid for every layout. The
    antenna-diagonal terms add up coherently to M_t |sinc(v T_w)| whatever
    the positions, the cross terms can at most cancel their total
    magnitude.
    """
    _check_code(code, M_t)
    v = np.atleast_1d(np.asarray(v_grid, dtype=float))
    dt, df, Q = cfg.delta_t, cfg.delta_f, code.Q
    q = np.arange(Q)
    coherent = chi_r(0.0, v[:, None], dt) * np.exp(2j * np.pi * v[:, None] * q * dt)
    self_term = code.M_t * np.abs(coherent.sum(axis=1)) / Q

    c = code.c.astype(float)
    differences = c[:, None, :] - c[None, :, :]
    cross = ~np.eye(code.M_t, dtype=bool)
    cross_sinc = np.abs(np.sinc(v[:, None, None, None] * dt - differences[None] * df * dt))
    cross_total = cross_sinc[:, cross, :].sum(axis=(1, 2)) / Q

    lower = np.maximum(self_term - cross_total, 0.0)
    return TheoryBound(axis='doppler', coords=v, lower=lower, informative=_informative(theta),
                       meta={'M_t': code.M_t, 'theta': theta})


def delay_lower_bound(tau_grid, code, cfg, M_t=None, theta=None):
    """
    Lower bound on |chi(tau, 0, theta, theta)| valid for every layout, built
    the same way as the Doppler bound from the zero-Doppler kernel terms.
    """
    _check_code(code, M_t)
    tau = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    terms = kernel_terms(tau, np.zeros_like(tau), code, cfg)
    diagonal = np.arange(code.M_t)
    self_term = np.abs(terms[:, diagonal, diagonal].sum(axis=(1, 2, 3))) / code.Q
    cross = ~np.eye(code.M_t, dtype=bool)
    cross_total = np.abs(terms[:, cross]).sum(axis=(1, 2, 3)) / code.Q
    lower = np.maximum(self_term - cross_total, 0.0)
    return TheoryBound(axis='delay', coords=tau, lower=lower, informative=_informative(theta),
                       meta={'M_t': code.M_t, 'theta': theta})


def layout_grid_sweep(M_t, lo=0.5, hi=1.5, step=0.2):
    """
    Every layout whose spacings take values on lo, lo + step, ..., hi.
    The budget is set to the largest aperture on the grid.
    """
    values = np.arange(lo, hi + step / 2, step)
    L = values[-1] * (M_t - 1)
    for spacings in itertools.product(values, repeat=M_t - 1):
        yield AntennaLayout(d=spacings, L=L)
