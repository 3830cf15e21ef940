"""
Real-coded genetic algorithm over the spacing polytope, the baseline the
gradient projection results are compared against.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from optimizer.objective import WeightedObjective
from optimizer.rgpm import worker_count
from radar.domain import MIN_SPACING, AntennaLayout

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaParams:
    G: int = 100
    N: int = 16
    p_cross: float = 0.9
    p_mut: float = 0.2
    mutation_scale: float = 0.1
    seed: int = 0

    @classmethod
    def from_settings(cls, **overrides):
        values = dict(settings.GA_DEFAULTS)
        values.update(overrides)
        return cls(**values)


@dataclass(eq=False)
class GaResult:
    layout: AntennaLayout
    f: float
    best_trace: list = field(default_factory=list)

    def to_dict(self):
        return {'f': self.f, 'layout': self.layout.to_dict(), 'generations': len(self.best_trace)}


def repair(d, L):
    """
    Clamp spacings to the half-wavelength minimum, then shrink the excess
    above the minimum uniformly until the aperture fits L.
    """
    d = np.maximum(np.asarray(d, dtype=float), MIN_SPACING)
    excess = d - MIN_SPACING
    slack = L - MIN_SPACING * d.size
    total = excess.sum()
    if total > slack:
        excess *= max(slack, 0.0) / total
    return MIN_SPACING + excess


def initial_population(rng, M_t, L, N):
    slack = L - MIN_SPACING * (M_t - 1)
    shares = rng.dirichlet(np.ones(M_t), size=N)[:, :M_t - 1]
    return MIN_SPACING + slack * shares


def _evaluate(objective, population, pool):
    return np.array(list(pool.map(objective.value, population)))


def _tournament(rng, population, fitness):
    i, j = rng.integers(len(population), size=2)
    return population[i] if fitness[i] <= fitness[j] else population[j]


def ga_optimize(poly, grid, code, cfg, params=None, objective=None):
    """
    Tournament selection, blend crossover, Gaussian mutation and one
    elite per generation. The initial population counts as generation 1.
    """
    params = params or GaParams.from_settings()
    objective = (objective or WeightedObjective(grid, code, cfg)).warm()
    rng = np.random.default_rng(params.seed)
    M_t, L = poly.M_t, poly.L
    n = M_t - 1

    with ThreadPoolExecutor(max_workers=worker_count(params.N)) as pool:
        population = initial_population(rng, M_t, L, params.N)
        fitness = _evaluate(objective, population, pool)
        best_trace = [float(fitness.min())]
        for generation in range(1, params.G):
            elite = int(np.argmin(fitness))
            children = [population[elite]]
            while len(children) < params.N:
                first = _tournament(rng, population, fitness)
                second = _tournament(rng, population, fitness)
                if rng.random() < params.p_cross:
                    weights = rng.random(n)
                    child = weights * first + (1 - weights) * second
                else:
                    child = first.copy()
                mutate = rng.random(n) < params.p_mut
                child = child + mutate * rng.normal(0.0, params.mutation_scale, n)
                children.append(repair(child, L))
            offspring = np.array(children[1:])
            fitness = np.concatenate(([fitness[elite]], _evaluate(objective, offspring, pool)))
            population = np.vstack((population[elite][None, :], offspring))
            best_trace.append(float(fitness.min()))
            logger.debug('generation %d: best f=%.6g', generation + 1, best_trace[-1])

    best = int(np.argmin(fitness))
    logger.info('ga: f=%.6g after %d generations', fitness[best], params.G)
    return GaResult(layout=AntennaLayout(d=population[best], L=L), f=float(fitness[best]), best_trace=best_trace)
