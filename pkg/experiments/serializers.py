import os

from rest_framework import serializers

from experiments.models import RunRecord
from radar.domain import LAYOUT_TOL, MIN_SPACING


class ArraySettingsSerializer(serializers.Serializer):
    M_t = serializers.IntegerField(min_value=2)
    L = serializers.FloatField()

    def validate(self, attrs):
        floor = MIN_SPACING * (attrs['M_t'] - 1)
        if attrs['L'] < floor - LAYOUT_TOL:
            raise serializers.ValidationError({'L': 'budget must be at least %.6g wavelengths for M_t=%d' % (floor, attrs['M_t'])})
        return attrs


class RunManifestSerializer(serializers.Serializer):
    """
    Arguments shared by every experiment command
    """
    command = serializers.ChoiceField(choices=[name for name, _ in RunRecord.COMMANDS])
    config_path = serializers.CharField(allow_null=True, required=False, default=None)
    output_dir = serializers.CharField()
    seed = serializers.IntegerField(min_value=0)
    overrides = serializers.ListField(child=serializers.CharField(), default=list)

    def validate_config_path(self, value):
        if value is not None and not os.path.isfile(value):
            raise serializers.ValidationError('config file %s does not exist' % value)
        return value

    def validate_output_dir(self, value):
        try:
            os.makedirs(value, exist_ok=True)
        except OSError as exc:
            raise serializers.ValidationError('cannot create %s: %s' % (value, exc))
        if not os.access(value, os.W_OK):
            raise serializers.ValidationError('%s is not writable' % value)
        return value

    def validate_overrides(self, value):
        for item in value:
            key, separator, _ = item.partition('=')
            if not separator or '.' not in key:
                raise serializers.ValidationError('override %r is not of the form section.key=value' % item)
        return value


class RunRecordSerializer(serializers.ModelSerializer):

    class Meta:
        model = RunRecord
        fields = ('command', 'config_hash', 'seed', 'output_dir', 'overrides', 'status', 'summary')
