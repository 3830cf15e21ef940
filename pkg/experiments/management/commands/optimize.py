import dataclasses
import logging

from experiments.config import parse_floats, parse_range
from experiments.runner import ExperimentCommand
from optimizer.ga import ga_optimize
from optimizer.objective import WeightedObjective, build_grid, check_weights
from optimizer.rgpm import LOBE_POINTS, TRACE_COLUMNS, feasible_polytope, multistart_optimize
from radar.ambiguity import angular_cut
from radar.domain import equidistant_layout
from radar.exceptions import NullNotFound
from radar.metrics import lobe_report, plateau_start
from radar.theory import b_min, mmlwd_layout

logger = logging.getLogger(__name__)

APERTURE_COLUMNS = ('L', 'f', 'f1', 'f2', 'f3', 'd')


def broadside_lobe(layout):
    try:
        return lobe_report(angular_cut(layout, 0.0, LOBE_POINTS)).to_dict()
    except NullNotFound as exc:
        logger.warning('no broadside main lobe for d=%s: %s', layout.d.tolist(), exc)
        return None


class Command(ExperimentCommand):
    help = 'Optimise antenna spacings with gradient projection and/or the genetic baseline'
    name = 'optimize'

    def add_command_arguments(self, parser):
        parser.add_argument('--method', choices=('rgpm', 'ga', 'both'), default='rgpm')
        parser.add_argument('--alpha', default=None, help='comma separated weights, e.g. 1,0,0')
        parser.add_argument('--theta-eval', type=float, default=None,
                            help='evaluate the Doppler and delay terms at this single look direction')
        parser.add_argument('--refine', type=int, default=1, help='grid refinement factor')
        parser.add_argument('--lobe-limit', type=float, default=None,
                            help='keep the broadside main lobe within this multiple of the minimum width')
        parser.add_argument('--apertures', default=None,
                            help='also sweep the aperture budget over from:to:step wavelengths')

    def rgpm_params(self, ctx, M_t, L, factor):
        if factor is None:
            return ctx.rgpm
        return dataclasses.replace(ctx.rgpm, max_lobe_width=factor * b_min(M_t, L, 0.0))

    def aperture_sweep(self, ctx, output, alpha, theta_eval, options):
        """
        Gradient projection at every budget of the sweep, with the
        aperture at which f2 and f3 stop moving
        """
        budgets = parse_range(options['apertures'])
        rows = []
        for L in budgets:
            grid = build_grid(ctx.cfg, equidistant_layout(ctx.M_t, L), alpha, theta_eval, refine=options['refine'])
            objective = WeightedObjective(grid, ctx.code, ctx.cfg).warm()
            params = self.rgpm_params(ctx, ctx.M_t, L, options['lobe_limit'])
            best, _ = multistart_optimize(feasible_polytope(ctx.M_t, L), grid, ctx.code, ctx.cfg, params=params,
                                          seed=ctx.seed, objective=objective)
            terms = objective.record(best.layout)
            spacings = ' '.join('%.9g' % x for x in best.layout.d)
            rows.append((L, best.f, terms['f1'], terms['f2'], terms['f3'], spacings))
            logger.info('aperture %.3g: f=%.6g f2=%.6g f3=%.6g', L, best.f, terms['f2'], terms['f3'])
        output.write_csv('aperture_sweep.csv', APERTURE_COLUMNS, rows)
        return {
            'L': budgets,
            'f2': [row[3] for row in rows],
            'f3': [row[4] for row in rows],
            'plateau': {'f2': plateau_start(budgets, [row[3] for row in rows]),
                        'f3': plateau_start(budgets, [row[4] for row in rows])},
        }

    def run(self, ctx, output, options):
        alpha = parse_floats(options['alpha']) if options['alpha'] else ctx.alpha
        theta_eval = options['theta_eval'] if options['theta_eval'] is not None else ctx.theta_eval
        alpha, theta_eval = check_weights(alpha, theta_eval)
        baseline = equidistant_layout(ctx.M_t, ctx.L)
        narrowest = mmlwd_layout(ctx.M_t, ctx.L)
        grid = build_grid(ctx.cfg, baseline, alpha, theta_eval, refine=options['refine'])
        poly = feasible_polytope(ctx.M_t, ctx.L)
        objective = WeightedObjective(grid, ctx.code, ctx.cfg).warm()
        params = self.rgpm_params(ctx, ctx.M_t, ctx.L, options['lobe_limit'])

        summary = {
            'method': options['method'],
            'alpha': list(alpha),
            'theta_eval': theta_eval,
            'grid': grid.to_dict(),
            'f_equidistant': objective.value(baseline),
            'f_mmlwd': objective.value(narrowest),
            'lobe': {'b_min': b_min(ctx.M_t, ctx.L, 0.0), 'limit': params.max_lobe_width,
                     'equidistant': broadside_lobe(baseline), 'mmlwd': broadside_lobe(narrowest)},
        }
        status = 'ok'

        if options['method'] in ('rgpm', 'both'):
            best, results = multistart_optimize(poly, grid, ctx.code, ctx.cfg, params=params, seed=ctx.seed,
                                                objective=objective)
            rows = [(result.start,) + row.as_row() for result in results for row in result.trace]
            output.write_csv('rgpm_trace.csv', ('start',) + TRACE_COLUMNS, rows)
            output.write_json('layout.json', best.layout.to_dict())
            summary['rgpm'] = dict(best.to_dict(), starts=[result.to_dict() for result in results],
                                   terms=objective.record(best.layout))
            summary['lobe']['rgpm'] = broadside_lobe(best.layout)
            if best.stalled:
                status = 'stall'

        if options['method'] in ('ga', 'both'):
            result = ga_optimize(poly, grid, ctx.code, ctx.cfg, params=ctx.ga, objective=objective)
            output.write_csv('ga_trace.csv', ('generation', 'best_f'),
                             ((i + 1, f) for i, f in enumerate(result.best_trace)))
            output.write_json('ga_layout.json', result.layout.to_dict())
            summary['ga'] = dict(result.to_dict(), terms=objective.record(result.layout))
            summary['lobe']['ga'] = broadside_lobe(result.layout)
            if 'rgpm' in summary:
                summary['ga_gap'] = (result.f - summary['rgpm']['f']) / summary['rgpm']['f']

        if options['apertures']:
            summary['apertures'] = self.aperture_sweep(ctx, output, alpha, theta_eval, options)

        output.write_json('summary.json', summary)
        return summary, status
