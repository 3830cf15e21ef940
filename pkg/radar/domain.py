"""
Radar configuration, transmit array geometry and frequency hopping codes.

All array lengths (spacings, positions, the aperture budget L) are kept in
multiples of the carrier wavelength. Conversion to meters only happens at
the edges, via RadarConfig.wavelength.
"""
import json
import logging
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.constants import speed_of_light

from radar.exceptions import CodeError, InfeasibleLayout, OrthogonalityError, QueryError

logger = logging.getLogger(__name__)

# Minimum element spacing, in wavelengths
MIN_SPACING = 0.5

# Slack allowed on the spacing and aperture constraints, in wavelengths
LAYOUT_TOL = 1e-9

# Tolerance used when checking that delta_f * delta_t is an integer
ORTHOGONALITY_TOL = 1e-9


@dataclass(frozen=True)
class RadarConfig:
    """
    Waveform and receiver parameters. Frequencies in Hz, times in seconds.
    """
    f_c: float
    bandwidth: float
    delta_f: float
    delta_t: float
    Q: int
    K: int
    T_w: float
    T_P: float
    f_s: float
    f_max: float

    @property
    def wavelength(self):
        return speed_of_light / self.f_c

    @property
    def hop_product(self):
        return self.delta_f * self.delta_t

    @property
    def is_orthogonal(self):
        """
        True when delta_f * delta_t is a positive integer, which makes
        different frequencies within a subpulse orthogonal
        """
        product = self.hop_product
        return product >= 1 - ORTHOGONALITY_TOL and abs(product - round(product)) <= ORTHOGONALITY_TOL

    def to_dict(self):
        data = asdict(self)
        data['lambda'] = self.wavelength
        return data


@dataclass(frozen=True, eq=False)
class AntennaLayout:
    """
    Transmit array on a line. d holds the M_t - 1 spacings between
    neighbouring elements and L the aperture budget, both in wavelengths.
    The first element sits at the origin.
    """
    d: np.ndarray
    L: float

    def __post_init__(self):
        d = np.array(self.d, dtype=float).reshape(-1)
        d.setflags(write=False)
        object.__setattr__(self, 'd', d)
        object.__setattr__(self, 'L', float(self.L))
        if d.size and d.min() < MIN_SPACING - LAYOUT_TOL:
            raise InfeasibleLayout('spacing %.6g is below the %.1f wavelength minimum' % (d.min(), MIN_SPACING))
        if d.sum() > self.L + LAYOUT_TOL:
            raise InfeasibleLayout('aperture %.6g exceeds the budget L=%.6g' % (d.sum(), self.L))

    @property
    def M_t(self):
        return self.d.size + 1

    @property
    def x(self):
        """
        Element positions, x_1 = 0 and x_m = d_1 + ... + d_{m-1}
        """
        return np.concatenate(([0.0], np.cumsum(self.d)))

    @property
    def aperture(self):
        return float(self.d.sum())

    def positions_m(self, wavelength):
        return self.x * wavelength

    def to_dict(self):
        return {'M_t': self.M_t, 'd': self.d.tolist(), 'L': self.L, 'x': self.x.tolist()}

    def __eq__(self, other):
        if not isinstance(other, AntennaLayout):
            return NotImplemented
        return self.L == other.L and np.array_equal(self.d, other.d)

    def __hash__(self):
        return hash((self.L, self.d.tobytes()))


@dataclass(frozen=True, eq=False)
class FhCode:
    """
    Frequency code c, an M_t x Q integer matrix with entries in 1..K.
    Within each subpulse (column) the entries must be distinct.
    """
    c: np.ndarray
    K: int

    def __post_init__(self):
        c = np.array(self.c)
        if c.ndim != 2 or c.size == 0:
            raise CodeError('code must be a non-empty M_t x Q matrix')
        if not np.issubdtype(c.dtype, np.integer):
            if not np.array_equal(c, np.round(c)):
                raise CodeError('code entries must be integers')
            c = c.astype(int)
        if c.min() < 1 or c.max() > self.K:
            raise CodeError('code entries must lie in 1..%d' % self.K)
        for q in range(c.shape[1]):
            if np.unique(c[:, q]).size != c.shape[0]:
                raise OrthogonalityError('subpulse %d repeats a frequency across antennas' % q)
        c.setflags(write=False)
        object.__setattr__(self, 'c', c)

    @property
    def M_t(self):
        return self.c.shape[0]

    @property
    def Q(self):
        return self.c.shape[1]

    def to_dict(self):
        return {'K': self.K, 'c': self.c.tolist()}

    def to_file(self, path):
        with open(path, 'w', encoding='utf-8', newline='\n') as handle:
            json.dump(self.to_dict(), handle, indent=2)

    @classmethod
    def from_file(cls, path):
        with open(path, encoding='utf-8') as handle:
            try:
                data = json.load(handle)
            except ValueError as exc:
                raise CodeError('%s is not valid JSON: %s' % (path, exc))
        if not isinstance(data, dict) or 'c' not in data or 'K' not in data:
            raise CodeError('%s must hold an object with "c" and "K"' % path)
        return cls(c=data['c'], K=data['K'])


@dataclass(frozen=True)
class DetectionParams:
    M_r: int
    P_fa: float
    snr_grid: tuple
    trials: int


@dataclass(frozen=True)
class AmbiguityQuery:
    """
    A single point of the ambiguity function: delay tau (s), Doppler v (Hz)
    and the look/steering angle pair in radians.
    """
    tau: float
    v: float
    theta: float
    theta_p: float = field(default=None)

    def __post_init__(self):
        if self.theta_p is None:
            object.__setattr__(self, 'theta_p', self.theta)
        for name in ('theta', 'theta_p'):
            if abs(getattr(self, name)) > np.pi / 2 + 1e-12:
                raise QueryError('%s=%.6g lies outside [-pi/2, pi/2]' % (name, getattr(self, name)))


def generate_fh_code(cfg, M_t, seed):
    """
    Draw a random orthogonal code: each subpulse assigns M_t distinct
    frequency indices out of 1..K without replacement.
    """
    if M_t > cfg.K:
        raise CodeError('M_t=%d antennas need at least as many frequencies, K=%d' % (M_t, cfg.K))
    if M_t < 1:
        raise CodeError('M_t must be positive')
    rng = np.random.default_rng(seed)
    columns = [rng.choice(cfg.K, size=M_t, replace=False) + 1 for _ in range(cfg.Q)]
    return FhCode(c=np.stack(columns, axis=1), K=cfg.K)


def check_array_size(M_t, L):
    if M_t < 2:
        raise InfeasibleLayout('an array needs at least two transmit elements, got M_t=%d' % M_t)
    floor = MIN_SPACING * (M_t - 1)
    if L < floor - LAYOUT_TOL:
        raise InfeasibleLayout('budget L=%.6g is below the minimum aperture %.6g for M_t=%d' % (L, floor, M_t))


def equidistant_layout(M_t, L=None):
    """
    Half-wavelength uniform array. L defaults to the array's own aperture.
    """
    if L is None:
        L = MIN_SPACING * (M_t - 1)
    check_array_size(M_t, L)
    return AntennaLayout(d=np.full(M_t - 1, MIN_SPACING), L=L)


def random_feasible_layout(M_t, L, seed):
    """
    Uniform sample from the feasible spacing polytope: the slack above the
    minimum spacings is split by a Dirichlet draw, one share left unused.
    """
    check_array_size(M_t, L)
    slack = max(L - MIN_SPACING * (M_t - 1), 0.0)
    rng = np.random.default_rng(seed)
    shares = rng.dirichlet(np.ones(M_t))[:M_t - 1]
    return AntennaLayout(d=MIN_SPACING + slack * shares, L=L)
