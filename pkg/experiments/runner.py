import logging

from django.core.management.base import BaseCommand, CommandError
from django.db import DatabaseError
from rest_framework.exceptions import ValidationError

from experiments.config import build_context, load_document
from experiments.output import OutputDir, plain
from experiments.serializers import RunManifestSerializer, RunRecordSerializer
from radar.exceptions import RadarError

logger = logging.getLogger(__name__)


def describe(exc):
    """
    One line message for a validation or domain error
    """
    if isinstance(exc, ValidationError):
        detail = exc.detail
        if isinstance(detail, dict):
            field, messages = next(iter(detail.items()))
            if isinstance(messages, dict):
                return '%s.%s' % (field, describe(ValidationError(messages)))
            message = messages[0] if isinstance(messages, list) else messages
            return '%s: %s' % (field, message)
        if isinstance(detail, list) and detail:
            return str(detail[0])
        return str(detail)
    return str(exc)


class ExperimentCommand(BaseCommand):
    """
    Shared plumbing for the experiment commands: --config, --output-dir,
    --seed and --set handling, error translation and the run ledger.
    Subclasses implement add_command_arguments() and run(), which returns
    (summary, status).
    """
    name = None

    def add_arguments(self, parser):
        parser.add_argument('--config', default=None, help='JSON configuration file')
        parser.add_argument('--output-dir', default='results', help='directory for CSV and JSON outputs')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--set', action='append', default=[], dest='overrides', metavar='SECTION.KEY=VALUE',
                            help='override one configuration value, may repeat')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def run(self, ctx, output, options):
        raise NotImplementedError

    def handle(self, *args, **options):
        manifest = RunManifestSerializer(data={
            'command': self.name,
            'config_path': options['config'],
            'output_dir': options['output_dir'],
            'seed': options['seed'],
            'overrides': options['overrides'],
        })
        try:
            manifest.is_valid(raise_exception=True)
            run = manifest.validated_data
            document = load_document(run['config_path'], run['overrides'])
            ctx = build_context(document, run['seed'])
            output = OutputDir(run['output_dir'], ctx.config_hash, run['seed'])
            summary, status = self.run(ctx, output, options)
        except (ValidationError, RadarError, OSError) as exc:
            logger.error('%s failed: %s', self.name, describe(exc))
            raise CommandError(describe(exc))

        record = RunRecordSerializer(data={
            'command': self.name,
            'config_hash': ctx.config_hash,
            'seed': run['seed'],
            'output_dir': run['output_dir'],
            'overrides': run['overrides'],
            'status': status,
            'summary': plain(summary),
        })
        record.is_valid(raise_exception=True)
        output.write_json('run.json', record.validated_data)
        try:
            record.save()
        except DatabaseError as exc:
            logger.warning('run ledger unavailable (%s), run "manage.py migrate" to enable it', exc)

        if status == 'stall':
            self.stdout.write(self.style.WARNING('%s finished with a stalled line search' % self.name))
        else:
            self.stdout.write(self.style.SUCCESS('%s finished, outputs in %s' % (self.name, run['output_dir'])))
