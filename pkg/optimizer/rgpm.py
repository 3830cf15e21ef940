"""
Gradient projection over the spacing polytope

    d_i >= 1/2            (i = 1 .. M_t - 1)
    d_1 + ... + d_{M_t-1} <= L

written as A d >= b with A = [I; -1^T] and b = [1/2 ... 1/2, -L].

Each iteration projects the gradient onto the face spanned by the active
constraints. When the projection vanishes, the Lagrange multipliers of the
active rows decide between stopping at a KKT point and releasing the row
with the most negative multiplier. Steps come from Armijo backtracking,
capped so the iterate never leaves the polytope.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings
from scipy import linalg

from optimizer.objective import WeightedObjective
from radar.ambiguity import angular_cut
from radar.domain import MIN_SPACING, AntennaLayout, equidistant_layout, random_feasible_layout
from radar.exceptions import InfeasibleLayout, NullNotFound, RadarError, RankDeficient, StepSizeError
from radar.metrics import main_lobe_width
from radar.theory import mmlwd_layout

logger = logging.getLogger(__name__)

# Multipliers above -MULTIPLIER_TOL count as non-negative
MULTIPLIER_TOL = 1e-9

# Projector identities (P^2 = P, P = P^T, M P = 0) must hold to this accuracy
PROJECTOR_TOL = 1e-10

# Broadside cut used to measure the main lobe of a trial layout
LOBE_POINTS = 4001


@dataclass(frozen=True)
class RgpmParams:
    T: float = 1e-2
    K_max: int = 150
    sigma: float = 1e-4
    rho: float = 0.5
    omega0: float = 1.0
    omega_min: float = 1e-12
    active_tol: float = 1e-9
    starts: int = 4
    max_lobe_width: float = None

    @classmethod
    def from_settings(cls, **overrides):
        values = dict(settings.RGPM_DEFAULTS)
        values.update(overrides)
        return cls(**values)


@dataclass(frozen=True, eq=False)
class FeasiblePolytope:
    A: np.ndarray
    b: np.ndarray
    M_t: int
    L: float

    @property
    def dimension(self):
        return self.M_t - 1

    def slack(self, d):
        return self.A @ np.asarray(d, dtype=float) - self.b

    def contains(self, d, tol=1e-12):
        return bool(np.all(self.slack(d) >= -tol))


def feasible_polytope(M_t, L):
    if M_t < 2:
        raise InfeasibleLayout('an array needs at least two transmit elements, got M_t=%d' % M_t)
    n = M_t - 1
    A = np.vstack((np.eye(n), -np.ones((1, n))))
    b = np.concatenate((np.full(n, MIN_SPACING), [-L]))
    return FeasiblePolytope(A=A, b=b, M_t=M_t, L=float(L))


def active_set(d, poly, tol=1e-9):
    """
    Indices of the constraint rows satisfied with equality (within tol)
    """
    slack = poly.slack(d)
    if slack.min() < -tol:
        raise InfeasibleLayout('layout violates constraint %d by %.3g' % (int(slack.argmin()), -slack.min()))
    return np.flatnonzero(slack <= tol)


def _gram_factor(M_active):
    gram = M_active @ M_active.T
    if np.linalg.matrix_rank(M_active) < M_active.shape[0]:
        raise RankDeficient('%d active rows are linearly dependent' % M_active.shape[0])
    return gram


def projection_matrix(M_active, n=None):
    """
    Orthogonal projector onto the null space of the active rows,
    P = I - M^T (M M^T)^-1 M. An empty row set gives the identity.
    """
    M_active = np.atleast_2d(np.asarray(M_active, dtype=float))
    n = M_active.shape[1] if n is None else n
    if M_active.size == 0:
        return np.eye(n)
    gram = _gram_factor(M_active)
    P = np.eye(n) - M_active.T @ linalg.solve(gram, M_active, assume_a='pos')
    if (not np.allclose(P @ P, P, atol=PROJECTOR_TOL) or not np.allclose(P, P.T, atol=PROJECTOR_TOL)
            or not np.allclose(M_active @ P, 0.0, atol=PROJECTOR_TOL)):
        raise RankDeficient('projector lost accuracy on %d active rows' % M_active.shape[0])
    return P


def multipliers(M_active, g):
    """
    Least-squares multipliers u of grad f = M^T u on the active rows
    """
    gram = _gram_factor(M_active)
    return linalg.solve(gram, M_active @ g, assume_a='pos')


def max_step(d, direction, poly, tol=1e-9):
    """
    Largest omega keeping d - omega * direction inside the polytope
    """
    rates = poly.A @ direction
    slack = poly.slack(d)
    moving = rates > 1e-12 * max(np.linalg.norm(direction), 1e-300)
    if not np.any(moving):
        return np.inf
    if np.any(slack[moving] <= tol):
        return 0.0
    return float(np.min(slack[moving] / rates[moving]))


def armijo_step(d, direction, poly, func, params, f0=None, accept=None):
    """
    Backtracking along -direction from omega0 (or the boundary, if nearer)
    until f(d - omega p) <= f(d) - sigma omega |p|^2 and accept(d - omega p)
    holds. Returns (omega, f_new); raises StepSizeError once omega drops
    below omega_min.
    """
    d = np.asarray(d, dtype=float)
    direction = np.asarray(direction, dtype=float)
    decrease = float(direction @ direction)
    if decrease == 0:
        raise RadarError('line search needs a nonzero direction')
    f0 = func(d) if f0 is None else f0
    omega = min(params.omega0, max_step(d, direction, poly, params.active_tol))
    while omega >= params.omega_min:
        trial = d - omega * direction
        f_new = func(trial)
        if f_new <= f0 - params.sigma * omega * decrease and (accept is None or accept(trial)):
            return omega, f_new
        omega *= params.rho
    raise StepSizeError('no sufficient decrease above omega=%g' % params.omega_min)


def lobe_width_guard(max_width, L):
    """
    Predicate on spacings: True when the broadside main lobe is no wider
    than max_width. None when there is no limit.
    """
    if max_width is None:
        return None

    def accept(d):
        try:
            width = main_lobe_width(angular_cut(AntennaLayout(d=d, L=L), 0.0, LOBE_POINTS))
        except NullNotFound:
            return False
        return width <= max_width

    return accept


def snap(d, poly, tol=1e-9):
    """
    Put coordinates that ended within tol of a face exactly on it
    """
    d = np.array(d, dtype=float)
    near = np.abs(d - MIN_SPACING) <= tol
    d[near] = MIN_SPACING
    d = np.maximum(d, MIN_SPACING)
    excess = d.sum() - poly.L
    if excess > 0:
        free = d > MIN_SPACING + tol
        if excess > tol or not np.any(free):
            raise InfeasibleLayout('iterate overshoots the aperture budget by %.3g' % excess)
        d[free] -= excess / np.count_nonzero(free)
    return d


@dataclass(frozen=True)
class TraceRow:
    k: int
    f: float
    grad_norm: float
    active_count: int
    omega: float

    def as_row(self):
        return (self.k, self.f, self.grad_norm, self.active_count, self.omega)


TRACE_COLUMNS = ('k', 'f', 'grad_norm', 'active_count', 'omega')


@dataclass(eq=False)
class RgpmResult:
    layout: AntennaLayout
    f: float
    trace: list = field(default_factory=list)
    converged: bool = False
    stalled: bool = False
    certificate: str = None
    start: str = None
    multipliers: list = None

    def to_dict(self):
        return {'start': self.start, 'f': self.f, 'layout': self.layout.to_dict(), 'converged': self.converged,
                'stalled': self.stalled, 'certificate': self.certificate, 'iterations': len(self.trace),
                'multipliers': self.multipliers}


def _projected_gradient(d, g, poly, params):
    """
    Releases active rows with negative multipliers until the projected
    gradient is large enough to move along, or a KKT point is certified.
    Returns (rows, projected_gradient, certificate).
    """
    rows = active_set(d, poly, params.active_tol)
    while True:
        M_active = poly.A[rows]
        P = projection_matrix(M_active, poly.dimension)
        projected = P @ g
        if np.linalg.norm(projected) >= params.T:
            return rows, projected, None
        if rows.size == 0:
            return rows, projected, 'stationary'
        u = multipliers(M_active, g)
        j = int(np.argmin(u))
        if u[j] >= -MULTIPLIER_TOL:
            return rows, projected, 'kkt'
        logger.debug('releasing constraint %d (multiplier %.3g)', rows[j], u[j])
        rows = np.delete(rows, j)


def rgpm_optimize(d0, poly, grid, code, cfg, params=None, objective=None, start=None):
    """
    Runs gradient projection from the feasible layout d0 for at most
    params.K_max iterations. The trace holds one row per iteration plus the
    final state.

    The search runs on f / f(d0), which keeps T and omega0 dimensionless.
    Trace values of f are unscaled; grad_norm is the scaled projected
    gradient that is compared with T.
    """
    params = params or RgpmParams.from_settings()
    objective = objective or WeightedObjective(grid, code, cfg)
    d = np.array(d0.d, dtype=float)
    if not poly.contains(d, params.active_tol):
        raise InfeasibleLayout('start layout lies outside the feasible polytope')
    f = objective.value(d)
    scale = f if f > 0 else 1.0
    trace = []
    accept = lobe_width_guard(params.max_lobe_width, poly.L)
    if accept is not None and not accept(d):
        raise InfeasibleLayout('start layout has a main lobe wider than %.6g' % params.max_lobe_width)

    def scaled(point):
        return objective.value(point) / scale

    if active_set(d, poly, params.active_tol).size >= poly.dimension + 1:
        logger.info('polytope is a single point, nothing to optimise')
        trace.append(TraceRow(0, f, 0.0, poly.dimension + 1, float('nan')))
        return RgpmResult(layout=AntennaLayout(d=d, L=poly.L), f=f, trace=trace, converged=True,
                          certificate='single-point', start=start)

    converged = stalled = False
    certificate = None
    u = None
    for k in range(params.K_max + 1):
        g = objective.gradient(d) / scale
        rows, projected, certificate = _projected_gradient(d, g, poly, params)
        norm = float(np.linalg.norm(projected))
        if certificate is not None or k == params.K_max:
            trace.append(TraceRow(k, f, norm, rows.size, float('nan')))
            converged = certificate is not None
            if certificate == 'kkt' and rows.size:
                u = multipliers(poly.A[rows], g).tolist()
            break
        try:
            omega, _ = armijo_step(d, projected, poly, scaled, params, f0=f / scale, accept=accept)
        except StepSizeError:
            logger.warning('line search stalled at iteration %d, f=%.6g', k, f)
            trace.append(TraceRow(k, f, norm, rows.size, float('nan')))
            stalled = True
            break
        trace.append(TraceRow(k, f, norm, rows.size, omega))
        d = snap(d - omega * projected, poly, params.active_tol)
        f = objective.value(d)

    logger.info('rgpm from %s: f=%.6g after %d iterations (%s)', start or 'given start', f, len(trace),
                certificate or ('stalled' if stalled else 'iteration limit'))
    return RgpmResult(layout=AntennaLayout(d=d, L=poly.L), f=f, trace=trace, converged=converged,
                      stalled=stalled, certificate=certificate, start=start, multipliers=u)


def worker_count(limit=None):
    workers = settings.MAFH_THREADS or None
    if limit is not None:
        workers = min(workers or limit, limit)
    return workers


def default_starts(M_t, L, seed, count):
    starts = [('equidistant', equidistant_layout(M_t, L)), ('mmlwd', mmlwd_layout(M_t, L))]
    index = 0
    while len(starts) < count:
        starts.append(('random-%d' % index, random_feasible_layout(M_t, L, seed + index)))
        index += 1
    return starts[:count]


def multistart_optimize(poly, grid, code, cfg, params=None, seed=0, starts=None, objective=None):
    """
    Runs gradient projection from several starts (equidistant, the minimum
    lobe width layout, then random feasible layouts) in a thread pool and
    returns (best, all_results). Ties go to the earlier start.
    With a main lobe width limit, starts that already break it are skipped.
    """
    params = params or RgpmParams.from_settings()
    starts = starts or default_starts(poly.M_t, poly.L, seed, params.starts)
    accept = lobe_width_guard(params.max_lobe_width, poly.L)
    if accept is not None:
        kept = []
        for label, layout in starts:
            if accept(layout.d):
                kept.append((label, layout))
                continue
            logger.info('skipping start %s: main lobe wider than %.6g', label, params.max_lobe_width)
        if not kept:
            raise InfeasibleLayout('no start layout meets the main lobe width limit %.6g' % params.max_lobe_width)
        starts = kept
    objective = (objective or WeightedObjective(grid, code, cfg)).warm()

    def run(item):
        label, layout = item
        return rgpm_optimize(layout, poly, grid, code, cfg, params=params, objective=objective, start=label)

    with ThreadPoolExecutor(max_workers=worker_count(len(starts))) as pool:
        results = list(pool.map(run, starts))
    best = min(range(len(results)), key=lambda i: (results[i].f, i))
    return results[best], results
