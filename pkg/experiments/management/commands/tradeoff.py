import logging

import numpy as np
from scipy import stats

from experiments.config import ConfigError
from experiments.runner import ExperimentCommand
from optimizer.objective import WeightedObjective, build_grid
from optimizer.rgpm import feasible_polytope, multistart_optimize
from radar.domain import equidistant_layout

logger = logging.getLogger(__name__)

TERMS = ('f1', 'f2', 'f3')


def simplex_weights(resolution):
    """
    All weight triples on the simplex with steps of 1/resolution
    """
    for i in range(resolution + 1):
        for j in range(resolution + 1 - i):
            k = resolution - i - j
            yield (i / resolution, j / resolution, k / resolution)


# Objective pairs whose rank correlation across the sweep shows the trade-off
PAIRS = (('f1', 'f3'), ('f2', 'f1'), ('f2', 'f3'))


def tradeoff_correlations(f1, f2, f3):
    """
    Spearman rank correlation of the achieved objectives across a weight
    sweep, for each pair in PAIRS. nan when a term is constant.
    """
    values = {'f1': f1, 'f2': f2, 'f3': f3}
    correlations = {}
    for first, second in PAIRS:
        a, b = np.asarray(values[first], dtype=float), np.asarray(values[second], dtype=float)
        if np.ptp(a) == 0 or np.ptp(b) == 0:
            correlations['%s_%s' % (first, second)] = float('nan')
            continue
        correlations['%s_%s' % (first, second)] = float(stats.spearmanr(a, b).statistic)
    return correlations


class Command(ExperimentCommand):
    help = 'Sweep objective weights over the simplex and record the three domain objectives'
    name = 'tradeoff'

    def add_command_arguments(self, parser):
        parser.add_argument('--resolution', type=int, default=10, help='simplex steps per weight')
        parser.add_argument('--theta-eval', type=float, default=None)

    def run(self, ctx, output, options):
        resolution = options['resolution']
        if resolution < 1:
            raise ConfigError('--resolution must be at least 1')
        theta_eval = options['theta_eval'] if options['theta_eval'] is not None else ctx.theta_eval
        baseline = equidistant_layout(ctx.M_t, ctx.L)
        poly = feasible_polytope(ctx.M_t, ctx.L)
        reference = WeightedObjective(build_grid(ctx.cfg, baseline, (1 / 3, 1 / 3, 1 / 3), theta_eval),
                                      ctx.code, ctx.cfg)

        rows = []
        stalled = False
        for alpha in simplex_weights(resolution):
            grid = build_grid(ctx.cfg, baseline, alpha, theta_eval)
            best, _ = multistart_optimize(poly, grid, ctx.code, ctx.cfg, params=ctx.rgpm, seed=ctx.seed)
            stalled = stalled or best.stalled
            layout = best.layout
            rows.append(alpha + (reference.f1(layout), reference.f2(layout), reference.f3(layout), best.f)
                        + tuple(layout.d))
            logger.info('alpha=(%.2f, %.2f, %.2f): f=%.6g', alpha[0], alpha[1], alpha[2], best.f)

        columns = ('alpha1', 'alpha2', 'alpha3') + TERMS + ('f',) + tuple('d%d' % (i + 1) for i in range(ctx.M_t - 1))
        output.write_csv('tradeoff.csv', columns, rows)

        correlations = tradeoff_correlations(*([row[3 + index] for row in rows] for index in range(3)))
        logger.info('rank correlations: %s', correlations)
        summary = {'resolution': resolution, 'points': len(rows), 'theta_eval': theta_eval,
                   'rank_correlation': correlations}
        output.write_json('tradeoff_summary.json', summary)
        return summary, 'stall' if stalled else 'ok'
