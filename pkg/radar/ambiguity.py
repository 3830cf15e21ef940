"""
Ambiguity function of a movable-antenna FH-MIMO transmit array.

chi(tau, v, theta, theta') correlates the array's composite transmit signal
towards theta with a delayed, Doppler shifted copy steered to theta'. It is
normalized by Q so that the matched peak chi(0, 0, theta, theta) equals M_t.

The closed form splits into a layout independent waveform kernel
K[m, m'](tau, v) and the two steering vectors:

    chi = a(theta)^T K(tau, v) conj(a(theta'))

which is what the objective and the slice routines rely on. chi_oracle
integrates the defining expression numerically and is only used to check
the closed form.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings
from scipy import integrate

from radar.exceptions import OrthogonalityError, QueryError

logger = logging.getLogger(__name__)

# Kernel samples evaluated per block, bounds the (block, M, M, Q, Q) temporaries
KERNEL_BLOCK = 128

AXES = ('angular', 'doppler', 'delay')


def chi_r(tau, v, delta_t):
    """
    Ambiguity function of a single rectangular subpulse of length delta_t.
    Zero for |tau| >= delta_t. Accepts scalars or broadcastable arrays.
    """
    tau = np.asarray(tau, dtype=float)
    v = np.asarray(v, dtype=float)
    abs_tau = np.abs(tau)
    inside = abs_tau < delta_t
    overlap = np.where(inside, delta_t - abs_tau, 0.0)
    value = (overlap / delta_t) * np.exp(1j * np.pi * v * (delta_t - tau)) * np.sinc(v * overlap)
    value = np.where(inside, value, 0.0)
    if value.ndim == 0:
        return complex(value)
    return value


def _code_axes(code):
    """
    Code entries and subpulse indices laid out on (m, m', q, q') axes
    """
    c = code.c.astype(float)
    c_mq = c[:, None, :, None]
    c_mq2 = c[None, :, None, :]
    q = np.arange(code.Q, dtype=float)
    return c_mq, c_mq2, q[None, None, :, None], q[None, None, None, :]


def kernel_terms(taus, vs, code, cfg):
    """
    Individual terms of the quadruple sum over (m, m', q, q'), without the
    steering phases. taus and vs are 1-D arrays of equal length N, the
    result has shape (N, M_t, M_t, Q, Q).
    """
    taus = np.asarray(taus, dtype=float).reshape(-1, 1, 1, 1, 1)
    vs = np.asarray(vs, dtype=float).reshape(-1, 1, 1, 1, 1)
    dt, df = cfg.delta_t, cfg.delta_f
    c_mq, c_mq2, q, q2 = (axis[None] for axis in _code_axes(code))
    beat = vs + (c_mq - c_mq2) * df
    shifted = taus - (q2 - q) * dt
    terms = chi_r(shifted, beat, dt)
    terms = np.asarray(terms) * np.exp(2j * np.pi * beat * q * dt)
    return terms * np.exp(-2j * np.pi * df * c_mq2 * taus)


def waveform_kernel(taus, vs, code, cfg):
    """
    Layout independent kernel K[m, m'](tau, v), shape (N, M_t, M_t)
    """
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    vs = np.atleast_1d(np.asarray(vs, dtype=float))
    taus, vs = np.broadcast_arrays(taus, vs)
    blocks = []
    for start in range(0, taus.size, KERNEL_BLOCK):
        stop = start + KERNEL_BLOCK
        terms = kernel_terms(taus[start:stop], vs[start:stop], code, cfg)
        blocks.append(terms.sum(axis=(3, 4)) / code.Q)
    return np.concatenate(blocks, axis=0)


def steering_vector(layout, theta):
    """
    a_m(theta) = exp(j 2 pi x_m sin(theta)), x in wavelengths.
    Scalar theta gives shape (M_t,), an array of T angles gives (T, M_t).
    """
    theta = np.asarray(theta, dtype=float)
    return np.exp(2j * np.pi * np.multiply.outer(np.sin(theta), layout.x))


def _steering_phase(query, layout):
    a = steering_vector(layout, query.theta)
    b = steering_vector(layout, query.theta_p)
    return np.outer(a, b.conj())


def chi(query, layout, code, cfg):
    """
    Closed form ambiguity function at one query point
    """
    terms = kernel_terms([query.tau], [query.v], code, cfg)[0]
    phase = _steering_phase(query, layout)[:, :, None, None]
    return complex(np.sum(terms * phase) / code.Q)


def chi_components(query, layout, code, cfg):
    """
    Real and imaginary parts of chi written as sums of eps*cos(zeta) and
    eps*sin(zeta), eps being the real envelope of each term
    """
    dt, df = cfg.delta_t, cfg.delta_f
    c_mq, c_mq2, q, q2 = _code_axes(code)
    x = layout.x
    beat = query.v + (c_mq - c_mq2) * df
    shifted = query.tau - (q2 - q) * dt
    overlap = dt - np.abs(shifted)
    eps = np.where(overlap > 0, overlap / dt * np.sinc(beat * np.clip(overlap, 0.0, None)), 0.0)
    spatial = x[:, None] * np.sin(query.theta) - x[None, :] * np.sin(query.theta_p)
    zeta = (np.pi * beat * (dt - shifted)
            + 2 * np.pi * beat * q * dt
            - 2 * np.pi * df * c_mq2 * query.tau
            + 2 * np.pi * spatial[:, :, None, None])
    chi_x = np.sum(eps * np.cos(zeta)) / code.Q
    chi_y = np.sum(eps * np.sin(zeta)) / code.Q
    return float(chi_x), float(chi_y)


def chi_mag_sq(query, layout, code, cfg):
    chi_x, chi_y = chi_components(query, layout, code, cfg)
    return chi_x ** 2 + chi_y ** 2


def chi_angular(theta, theta_p, layout, cfg=None):
    """
    Zero-delay, zero-Doppler cut sum_m exp(j 2 pi (sin theta - sin theta') x_m).
    Only equal to chi(0, 0, theta, theta') for orthogonal hopping, so a
    configuration passed in is checked for that first.
    """
    if cfg is not None and not cfg.is_orthogonal:
        raise OrthogonalityError('delta_f*delta_t=%.6g is not a positive integer' % cfg.hop_product)
    offset = np.sin(np.asarray(theta, dtype=float)) - np.sin(np.asarray(theta_p, dtype=float))
    value = np.exp(2j * np.pi * np.multiply.outer(offset, layout.x)).sum(axis=-1)
    if np.ndim(value) == 0:
        return complex(value)
    return value


def _segment_edges(tau, cfg, code):
    lo = max(0.0, -tau)
    hi = min(cfg.T_w, cfg.T_w - tau)
    if hi <= lo:
        return []
    steps = np.arange(code.Q + 1) * cfg.delta_t
    edges = np.concatenate(([lo, hi], steps, steps - tau))
    edges = np.unique(edges[(edges >= lo) & (edges <= hi)])
    return list(zip(edges[:-1], edges[1:]))


def chi_oracle(query, layout, code, cfg, rule=None, oversample=None):
    """
    Brute force chi: samples the hopped waveforms and integrates
    phi_m(t) conj(phi_m'(t + tau)) exp(j 2 pi v t) over the overlap window.

    The window is cut at every subpulse boundary of both copies so each
    piece carries a single pair of tones. Pieces are sampled at
    oversample * f_s and integrated with Simpson's rule (or trapezoid).
    """
    rule = rule or settings.ORACLE['RULE']
    oversample = oversample or settings.ORACLE['OVERSAMPLE']
    if rule not in ('simpson', 'trapezoid'):
        raise QueryError('unknown integration rule %r' % rule)
    dt, df = cfg.delta_t, cfg.delta_f
    tau, v = query.tau, query.v
    rate = cfg.f_s * oversample
    freqs = code.c.astype(float) * df
    total = np.zeros((code.M_t, code.M_t), dtype=complex)

    for start, stop in _segment_edges(tau, cfg, code):
        if stop - start <= 1e-9 * dt:
            continue
        middle = 0.5 * (start + stop)
        q = min(int(middle // dt), code.Q - 1)
        q_shifted = min(int((middle + tau) // dt), code.Q - 1)
        count = max(int(np.ceil((stop - start) * rate)), 2)
        count += count % 2
        t = np.linspace(start, stop, count + 1)
        tone = np.exp(2j * np.pi * np.multiply.outer(freqs[:, q], t))
        echo = np.exp(2j * np.pi * np.multiply.outer(freqs[:, q_shifted], t + tau))
        integrand = tone[:, None, :] * echo.conj()[None, :, :] * np.exp(2j * np.pi * v * t)
        if rule == 'simpson':
            total += integrate.simpson(integrand, x=t, axis=-1)
        else:
            total += integrate.trapezoid(integrand, x=t, axis=-1)

    return complex(np.sum(total * _steering_phase(query, layout)) / (dt * code.Q))


@dataclass(eq=False)
class AmbiguitySlice:
    """
    |chi| sampled along one axis with the other three coordinates fixed.
    matched is the coordinate of the matched point on this axis, when it
    falls inside the sampled range.
    """
    axis: str
    coords: np.ndarray
    values: np.ndarray
    matched: float = None
    meta: dict = field(default_factory=dict)

    @property
    def peak(self):
        return float(self.values.max())

    @property
    def magnitude_db(self):
        peak = self.peak
        if peak == 0:
            return np.full(self.values.shape, -np.inf)
        with np.errstate(divide='ignore'):
            return 20 * np.log10(self.values / peak)


def _axis_range(axis, cfg):
    if axis == 'angular':
        return -np.pi / 2, np.pi / 2
    if axis == 'doppler':
        return -cfg.f_max, cfg.f_max
    return -cfg.Q * cfg.delta_t, cfg.Q * cfg.delta_t


def _coordinates(lo, hi, n_points, matched):
    coords = np.linspace(lo, hi, n_points)
    if lo <= matched <= hi and np.min(np.abs(coords - matched)) > 1e-12 * (hi - lo):
        coords = np.sort(np.append(coords, matched))
    return coords


def compute_slice(axis, fixed, rng, n_points, layout, code, cfg):
    """
    Sample |chi| along axis ('angular' sweeps theta', 'doppler' sweeps v,
    'delay' sweeps tau). The fixed query supplies the other coordinates;
    for the Doppler and delay cuts theta' is taken from fixed.theta_p.
    rng=None uses the full axis range. The matched coordinate is added to
    the samples when it falls inside the range.
    """
    if axis not in AXES:
        raise QueryError('unknown axis %r, expected one of %s' % (axis, ', '.join(AXES)))
    lo, hi = rng if rng is not None else _axis_range(axis, cfg)
    if not hi > lo:
        raise QueryError('empty %s range [%g, %g]' % (axis, lo, hi))
    if n_points < 2:
        raise QueryError('a slice needs at least two points')
    a = steering_vector(layout, fixed.theta)

    if axis == 'angular':
        if lo < -np.pi / 2 - 1e-12 or hi > np.pi / 2 + 1e-12:
            raise QueryError('angular range must lie in [-pi/2, pi/2]')
        matched = fixed.theta
        coords = _coordinates(lo, hi, n_points, matched)
        kernel = waveform_kernel([fixed.tau], [fixed.v], code, cfg)[0]
        steered = steering_vector(layout, coords)
        chi_values = (a @ kernel) @ steered.conj().T
    else:
        matched = 0.0
        coords = _coordinates(lo, hi, n_points, matched)
        if axis == 'doppler':
            kernel = waveform_kernel(np.full(coords.size, fixed.tau), coords, code, cfg)
        else:
            kernel = waveform_kernel(coords, np.full(coords.size, fixed.v), code, cfg)
        b = steering_vector(layout, fixed.theta_p)
        chi_values = np.einsum('m,imn,n->i', a, kernel, b.conj())

    logger.debug('%s slice: %d samples over [%g, %g]', axis, coords.size, lo, hi)
    meta = {
        'axis': axis,
        'fixed': {'tau': fixed.tau, 'v': fixed.v, 'theta': fixed.theta, 'theta_p': fixed.theta_p},
        'layout': layout.to_dict(),
        'code': code.to_dict(),
        'config': cfg.to_dict(),
        'normalization': settings.NORMALIZATION,
    }
    in_range = lo <= matched <= hi
    return AmbiguitySlice(axis=axis, coords=coords, values=np.abs(chi_values),
                          matched=matched if in_range else None, meta=meta)


def angular_cut(layout, theta, n_points, cfg=None):
    """
    Zero-delay, zero-Doppler slice over theta' in [-pi/2, pi/2] from the
    code-free angular form
    """
    coords = _coordinates(-np.pi / 2, np.pi / 2, n_points, theta)
    values = np.abs(chi_angular(theta, coords, layout, cfg))
    meta = {'axis': 'angular', 'fixed': {'tau': 0.0, 'v': 0.0, 'theta': theta}, 'layout': layout.to_dict()}
    return AmbiguitySlice(axis='angular', coords=coords, values=values, matched=theta, meta=meta)
