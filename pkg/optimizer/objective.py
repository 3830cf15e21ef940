"""
Riemann-sum objective over the angular, Doppler and delay cuts of the
ambiguity function, and its analytic gradient with respect to the spacings.

    f1 = sum over (theta, theta')    |chi(0, 0, theta, theta')|^2  dtheta dtheta'
    f2 = sum over (theta, v)         |chi(0, v, theta, theta)|^2   dtheta dv
    f3 = sum over (theta, tau)       |chi(tau, 0, theta, theta)|^2 dtheta dtau

f = alpha_1 f1 + alpha_2 f2 + alpha_3 f3. With theta_eval set, f2 and f3
are evaluated at that single look direction and the theta sum is replaced
by a factor pi.
"""
import json
import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from radar.ambiguity import steering_vector, waveform_kernel
from radar.domain import AntennaLayout, LAYOUT_TOL, MIN_SPACING
from radar.exceptions import RadarError
from radar.serializers import WeightsSerializer
from radar.theory import b_min

logger = logging.getLogger(__name__)

# Slack subtracted before rounding grid sizes up, so 240.00000000000003 stays 240
CEIL_FUZZ = 1e-9


def _ceil(value):
    return int(math.ceil(value - CEIL_FUZZ))


@dataclass(frozen=True, eq=False)
class ObjectiveGrid:
    n1: int
    n2: int
    n3: int
    theta: np.ndarray
    v: np.ndarray
    tau: np.ndarray
    alpha: tuple
    theta_eval: float = None

    @property
    def d_theta(self):
        return math.pi / self.n1

    @property
    def d_v(self):
        return (self.v[-1] - self.v[0]) / self.n2

    @property
    def d_tau(self):
        return (self.tau[-1] - self.tau[0]) / self.n3

    def to_dict(self):
        return {'n1': self.n1, 'n2': self.n2, 'n3': self.n3,
                'alpha': list(self.alpha), 'theta_eval': self.theta_eval}


def check_weights(alpha, theta_eval=None):
    serializer = WeightsSerializer(data={'alpha': list(alpha), 'theta_eval': theta_eval})
    serializer.is_valid(raise_exception=True)
    return tuple(serializer.validated_data['alpha']), serializer.validated_data['theta_eval']


def build_grid(cfg, layout, alpha, theta_eval=None, refine=1):
    """
    Smallest sample counts meeting the sampling conditions of each cut:
    the angle step resolves the narrowest possible main lobe, the Doppler
    step resolves 1/T_w and the delay step resolves 1/(K delta_f).
    refine multiplies every count, for convergence checks.
    """
    alpha, theta_eval = check_weights(alpha, theta_eval)
    M_t, L = layout.M_t, layout.L
    n1 = _ceil(2 * math.pi / b_min(M_t, L, 0.0))
    if L > 1:
        n1 = max(n1, _ceil(math.pi / math.asin(1.0 / L)))
    n2 = max(_ceil(4 * cfg.f_max * cfg.T_w), 1)
    n3 = max(_ceil(4 * cfg.Q * cfg.delta_t * cfg.K * cfg.delta_f), 1)
    n1, n2, n3 = n1 * refine, n2 * refine, n3 * refine
    span = cfg.Q * cfg.delta_t
    grid = ObjectiveGrid(
        n1=n1, n2=n2, n3=n3,
        theta=np.linspace(-math.pi / 2, math.pi / 2, n1 + 1),
        v=np.linspace(-cfg.f_max, cfg.f_max, n2 + 1),
        tau=np.linspace(-span, span, n3 + 1),
        alpha=alpha,
        theta_eval=theta_eval,
    )
    logger.debug('objective grid n1=%d n2=%d n3=%d', n1, n2, n3)
    return grid


def _spacing_gradient(position_gradient):
    """
    Positions are cumulative sums of the spacings, so d x_p / d d_i = 1 for
    every p > i and the spacing gradient is a reversed cumulative sum.
    """
    return np.cumsum(position_gradient[::-1])[::-1][1:]


class WeightedObjective:
    """
    Objective bound to one grid, code and configuration. The waveform
    kernels do not depend on the layout and are computed once.
    """

    def __init__(self, grid, code, cfg):
        self.grid = grid
        self.code = code
        self.cfg = cfg

    @cached_property
    def angular_kernel(self):
        return waveform_kernel([0.0], [0.0], self.code, self.cfg)[0]

    @cached_property
    def doppler_kernel(self):
        return waveform_kernel(np.zeros_like(self.grid.v), self.grid.v, self.code, self.cfg)

    @cached_property
    def delay_kernel(self):
        return waveform_kernel(self.grid.tau, np.zeros_like(self.grid.tau), self.code, self.cfg)

    def warm(self):
        """
        Fill the kernel caches for every term with a nonzero weight
        """
        alpha = self.grid.alpha
        if alpha[0]:
            self.angular_kernel
        if alpha[1]:
            self.doppler_kernel
        if alpha[2]:
            self.delay_kernel
        return self

    def _look_angles(self):
        if self.grid.theta_eval is None:
            return self.grid.theta, self.grid.d_theta
        return np.array([self.grid.theta_eval]), math.pi

    def _layout(self, d):
        if isinstance(d, AntennaLayout):
            return d
        return _Positions(np.asarray(d, dtype=float))

    def f1(self, d):
        layout = self._layout(d)
        a = steering_vector(layout, self.grid.theta)
        chi = (a @ self.angular_kernel) @ a.conj().T
        return float(np.sum(np.abs(chi) ** 2) * self.grid.d_theta ** 2)

    def _cut(self, d, kernel, step):
        layout = self._layout(d)
        angles, weight = self._look_angles()
        a = steering_vector(layout, angles)
        chi = np.einsum('tm,imn,tn->ti', a, kernel, a.conj())
        return float(np.sum(np.abs(chi) ** 2) * step * weight)

    def f2(self, d):
        return self._cut(d, self.doppler_kernel, self.grid.d_v)

    def f3(self, d):
        return self._cut(d, self.delay_kernel, self.grid.d_tau)

    def terms(self, d):
        """
        (f1, f2, f3), zero-weight terms skipped and reported as None
        """
        alpha = self.grid.alpha
        return (self.f1(d) if alpha[0] else None,
                self.f2(d) if alpha[1] else None,
                self.f3(d) if alpha[2] else None)

    def value(self, d):
        return float(sum(weight * term for weight, term in zip(self.grid.alpha, self.terms(d)) if weight))

    __call__ = value

    def _f1_position_gradient(self, layout):
        sines = np.sin(self.grid.theta)
        a = steering_vector(layout, self.grid.theta)
        kernel = self.angular_kernel
        chi = (a @ kernel) @ a.conj().T
        weights = np.conj(chi)
        right = kernel @ a.conj().T
        left = a @ kernel
        outgoing = np.sum(sines[:, None] * a * (weights @ right.T), axis=0)
        incoming = np.sum(sines[:, None] * a.conj() * (weights.T @ left), axis=0)
        gradient = -4 * np.pi * np.imag(outgoing - incoming)
        return gradient * self.grid.d_theta ** 2

    def _cut_position_gradient(self, layout, kernel, step):
        angles, weight = self._look_angles()
        sines = np.sin(angles)
        a = steering_vector(layout, angles)
        chi = np.einsum('tm,imn,tn->ti', a, kernel, a.conj())
        right = np.einsum('ipn,tn->tip', kernel, a.conj())
        left = np.einsum('tm,imp->tip', a, kernel)
        dchi = 2j * np.pi * sines[:, None, None] * (a[:, None, :] * right - left * a.conj()[:, None, :])
        gradient = 2 * (chi.real[..., None] * dchi.real + chi.imag[..., None] * dchi.imag)
        return gradient.sum(axis=(0, 1)) * step * weight

    def gradient(self, d):
        """
        Analytic gradient of the weighted objective with respect to the
        M_t - 1 spacings
        """
        layout = self._layout(d)
        alpha = self.grid.alpha
        position_gradient = np.zeros(layout.x.size)
        if alpha[0]:
            position_gradient += alpha[0] * self._f1_position_gradient(layout)
        if alpha[1]:
            position_gradient += alpha[1] * self._cut_position_gradient(layout, self.doppler_kernel, self.grid.d_v)
        if alpha[2]:
            position_gradient += alpha[2] * self._cut_position_gradient(layout, self.delay_kernel, self.grid.d_tau)
        return _spacing_gradient(position_gradient)

    def record(self, d):
        """
        Structured log line for one evaluation
        """
        layout = self._layout(d)
        f1, f2, f3 = self.terms(layout)
        entry = {'alpha': list(self.grid.alpha), 'd': layout.d.tolist(), 'f1': f1, 'f2': f2, 'f3': f3,
                 'f': self.value(layout), 'grid': self.grid.to_dict()}
        logger.debug(json.dumps(entry))
        return entry


class _Positions:
    """
    Bare spacing vector for evaluations that may step outside the feasible
    set, such as finite differences next to a constraint
    """

    def __init__(self, d):
        self.d = d
        self.x = np.concatenate(([0.0], np.cumsum(d)))


def f1_bar(layout, grid, code, cfg):
    return WeightedObjective(grid, code, cfg).f1(layout)


def f2_bar(layout, grid, code, cfg):
    return WeightedObjective(grid, code, cfg).f2(layout)


def f3_bar(layout, grid, code, cfg):
    return WeightedObjective(grid, code, cfg).f3(layout)


def f_weighted(layout, grid, code, cfg):
    return WeightedObjective(grid, code, cfg).value(layout)


def grad_f_weighted(layout, grid, code, cfg):
    return WeightedObjective(grid, code, cfg).gradient(layout)


def finite_diff_grad(layout, grid, code, cfg, h, objective=None):
    """
    Central difference gradient with step h (wavelengths). Points outside
    the feasible set are evaluated as is and logged.
    """
    if h <= 0:
        raise RadarError('finite difference step must be positive, got %g' % h)
    objective = objective or WeightedObjective(grid, code, cfg)
    d = np.asarray(layout.d, dtype=float)
    result = np.empty(d.size)
    for i in range(d.size):
        step = np.zeros(d.size)
        step[i] = h
        lower = d - step
        if lower.min() < MIN_SPACING - LAYOUT_TOL or (d + step).sum() > layout.L + LAYOUT_TOL:
            logger.info('finite difference point %d leaves the feasible set', i)
        result[i] = (objective.value(d + step) - objective.value(lower)) / (2 * h)
    return result
