from rest_framework import serializers

from optimizer.ga import GaParams
from optimizer.rgpm import RgpmParams


class RgpmParamsSerializer(serializers.Serializer):
    T = serializers.FloatField(min_value=0.0)
    K_max = serializers.IntegerField(min_value=0)
    sigma = serializers.FloatField(min_value=0.0, max_value=1.0)
    rho = serializers.FloatField(min_value=0.0, max_value=1.0)
    omega0 = serializers.FloatField()
    omega_min = serializers.FloatField()
    active_tol = serializers.FloatField(min_value=0.0)
    starts = serializers.IntegerField(min_value=1)
    max_lobe_width = serializers.FloatField(min_value=0.0, allow_null=True, default=None)

    def validate(self, attrs):
        if not 0 < attrs['rho'] < 1:
            raise serializers.ValidationError({'rho': 'backtracking ratio must lie strictly between 0 and 1'})
        if not 0 < attrs['omega_min'] <= attrs['omega0']:
            raise serializers.ValidationError({'omega_min': 'need 0 < omega_min <= omega0'})
        return attrs

    def create(self, validated_data):
        return RgpmParams(**validated_data)


class GaParamsSerializer(serializers.Serializer):
    G = serializers.IntegerField(min_value=1)
    N = serializers.IntegerField(min_value=2)
    p_cross = serializers.FloatField(min_value=0.0, max_value=1.0)
    p_mut = serializers.FloatField(min_value=0.0, max_value=1.0)
    mutation_scale = serializers.FloatField(min_value=0.0)
    seed = serializers.IntegerField(min_value=0)

    def create(self, validated_data):
        return GaParams(**validated_data)
