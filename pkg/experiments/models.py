from django.db import models


class RunRecord(models.Model):

    """
    One invocation of an experiment command: what ran, with which merged
    configuration (by hash) and seed, where it wrote, and how it ended
    """
    COMMANDS = [(name, name) for name in ('af', 'theory', 'optimize', 'tradeoff', 'detect')]
    STATUSES = [('ok', 'ok'), ('stall', 'stall')]

    command = models.CharField(max_length=16, choices=COMMANDS)
    config_hash = models.CharField(max_length=64)
    seed = models.IntegerField(default=0)
    output_dir = models.CharField(max_length=255)
    overrides = models.JSONField(default=list)
    status = models.CharField(max_length=8, choices=STATUSES, default='ok')
    summary = models.JSONField(default=dict)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ('created_at',)

    def __str__(self):
        return '%s %s (%s)' % (self.command, self.config_hash[:12], self.status)
