import logging

from experiments.runner import ExperimentCommand
from radar.ambiguity import AXES, compute_slice
from radar.domain import AmbiguityQuery
from radar.exceptions import NullNotFound
from radar.metrics import lobe_report
from radar.serializers import AmbiguitySliceSerializer

logger = logging.getLogger(__name__)


class Command(ExperimentCommand):
    help = 'Sample one cut of the ambiguity function and report its main lobe'
    name = 'af'

    def add_command_arguments(self, parser):
        parser.add_argument('--axis', required=True, choices=AXES)
        parser.add_argument('--layout', default='equidistant',
                            help='equidistant, mmlwd, random or file:PATH')
        parser.add_argument('--theta', type=float, default=0.0, help='look direction in radians')
        parser.add_argument('--theta-p', type=float, default=None,
                            help='receiver steering direction for the Doppler and delay cuts, defaults to --theta')
        parser.add_argument('--tau', type=float, default=0.0, help='fixed delay for the angular and Doppler cuts')
        parser.add_argument('--v', type=float, default=0.0, help='fixed Doppler for the angular and delay cuts')
        parser.add_argument('--points', type=int, default=2001)
        parser.add_argument('--range', type=float, nargs=2, default=None, metavar=('LO', 'HI'))

    def run(self, ctx, output, options):
        axis = options['axis']
        layout = ctx.layout(options['layout'])
        fixed = AmbiguityQuery(tau=options['tau'], v=options['v'], theta=options['theta'], theta_p=options['theta_p'])
        slc = compute_slice(axis, fixed, options['range'], options['points'], layout, ctx.code, ctx.cfg)

        try:
            lobe = lobe_report(slc).to_dict()
        except NullNotFound as exc:
            logger.warning('main lobe not measurable: %s', exc)
            lobe = None

        rows = zip(slc.coords, slc.values, slc.magnitude_db)
        output.write_csv('af_%s.csv' % axis, ('coord', 'magnitude', 'magnitude_db'), rows,
                         extra={'axis': axis, 'layout': options['layout']})
        summary = {'axis': axis, 'peak': slc.peak, 'lobe': lobe}
        output.write_json('af_%s.json' % axis, dict(AmbiguitySliceSerializer(slc).data, lobe=lobe))
        return summary, 'ok'
