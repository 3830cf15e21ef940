import math

from rest_framework import serializers

from radar.domain import (LAYOUT_TOL, MIN_SPACING, AntennaLayout, DetectionParams, FhCode,
                          RadarConfig)

# Relative tolerance for T_w == Q * delta_t
DURATION_RTOL = 1e-9


class RadarConfigSerializer(serializers.Serializer):
    """
    Validates a radar configuration. Cross-field invariants are checked in a
    fixed order and the first violation is reported under its field name.
    """
    f_c = serializers.FloatField(min_value=0.0)
    bandwidth = serializers.FloatField(min_value=0.0)
    delta_f = serializers.FloatField()
    delta_t = serializers.FloatField()
    Q = serializers.IntegerField()
    K = serializers.IntegerField()
    T_w = serializers.FloatField()
    T_P = serializers.FloatField()
    f_s = serializers.FloatField()
    f_max = serializers.FloatField(min_value=0.0)

    def validate(self, attrs):
        if attrs['Q'] < 1:
            raise serializers.ValidationError({'Q': 'Q must be at least 1'})
        if attrs['K'] < 1:
            raise serializers.ValidationError({'K': 'K must be at least 1'})
        if attrs['delta_t'] <= 0:
            raise serializers.ValidationError({'delta_t': 'delta_t must be positive'})
        if attrs['delta_f'] <= 0:
            raise serializers.ValidationError({'delta_f': 'delta_f must be positive'})
        expected = attrs['Q'] * attrs['delta_t']
        if not math.isclose(attrs['T_w'], expected, rel_tol=DURATION_RTOL):
            raise serializers.ValidationError({'T_w': 'T_w must equal Q*delta_t=%.9g' % expected})
        if attrs['f_s'] < 2 * attrs['K'] * attrs['delta_f']:
            raise serializers.ValidationError({'f_s': 'f_s must be at least 2*K*delta_f'})
        if attrs['T_P'] < attrs['T_w']:
            raise serializers.ValidationError({'T_P': 'T_P must not be shorter than T_w'})
        return attrs

    def create(self, validated_data):
        return RadarConfig(**validated_data)


def validate_config(cfg):
    """
    Re-checks an already built RadarConfig and returns it unchanged.
    Raises rest_framework.exceptions.ValidationError on the first violation.
    """
    data = cfg.to_dict()
    data.pop('lambda')
    serializer = RadarConfigSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    return cfg


class AntennaLayoutSerializer(serializers.Serializer):
    M_t = serializers.IntegerField(min_value=2)
    d = serializers.ListField(child=serializers.FloatField())
    L = serializers.FloatField()
    x = serializers.ListField(child=serializers.FloatField(), read_only=True)

    def validate(self, attrs):
        d = attrs['d']
        if len(d) != attrs['M_t'] - 1:
            raise serializers.ValidationError({'d': 'expected %d spacings for M_t=%d' % (attrs['M_t'] - 1, attrs['M_t'])})
        if min(d) < MIN_SPACING - LAYOUT_TOL:
            raise serializers.ValidationError({'d': 'spacings must be at least %.1f wavelength' % MIN_SPACING})
        if sum(d) > attrs['L'] + LAYOUT_TOL:
            raise serializers.ValidationError({'L': 'aperture %.6g exceeds the budget' % sum(d)})
        return attrs

    def create(self, validated_data):
        return AntennaLayout(d=validated_data['d'], L=validated_data['L'])


class FhCodeSerializer(serializers.Serializer):
    K = serializers.IntegerField(min_value=1)
    c = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField(min_value=1)))

    def validate(self, attrs):
        rows = attrs['c']
        if not rows or not rows[0]:
            raise serializers.ValidationError({'c': 'code must not be empty'})
        if any(len(row) != len(rows[0]) for row in rows):
            raise serializers.ValidationError({'c': 'all antennas need the same number of subpulses'})
        if max(max(row) for row in rows) > attrs['K']:
            raise serializers.ValidationError({'c': 'code entries must not exceed K=%d' % attrs['K']})
        for q in range(len(rows[0])):
            column = [row[q] for row in rows]
            if len(set(column)) != len(column):
                raise serializers.ValidationError({'c': 'subpulse %d repeats a frequency' % q})
        return attrs

    def create(self, validated_data):
        return FhCode(c=validated_data['c'], K=validated_data['K'])


class DetectionParamsSerializer(serializers.Serializer):
    M_r = serializers.IntegerField(min_value=1)
    P_fa = serializers.FloatField()
    snr_grid = serializers.ListField(child=serializers.FloatField(), allow_empty=False)
    trials = serializers.IntegerField(min_value=1)

    def validate_P_fa(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError('P_fa must lie strictly between 0 and 1')
        return value

    def validate(self, attrs):
        needed = math.ceil(10 / attrs['P_fa'])
        if attrs['trials'] < needed:
            raise serializers.ValidationError({'trials': 'calibrating P_fa=%g needs at least %d trials' % (attrs['P_fa'], needed)})
        return attrs

    def create(self, validated_data):
        validated_data['snr_grid'] = tuple(validated_data['snr_grid'])
        return DetectionParams(**validated_data)


class WeightsSerializer(serializers.Serializer):
    """
    Objective weights (alpha_1, alpha_2, alpha_3): non-negative, summing to one
    """
    alpha = serializers.ListField(child=serializers.FloatField(min_value=0.0), min_length=3, max_length=3)
    theta_eval = serializers.FloatField(allow_null=True, required=False, default=None)

    def validate_alpha(self, value):
        if not math.isclose(sum(value), 1.0, abs_tol=1e-9):
            raise serializers.ValidationError('weights must sum to 1, got %.6g' % sum(value))
        return value

    def validate_theta_eval(self, value):
        if value is not None and abs(value) > math.pi / 2:
            raise serializers.ValidationError('theta_eval must lie in [-pi/2, pi/2]')
        return value


class AmbiguitySliceSerializer(serializers.Serializer):
    """
    Read-only representation of an AmbiguitySlice
    """
    axis = serializers.CharField(read_only=True)
    coords = serializers.ListField(child=serializers.FloatField(), read_only=True)
    values = serializers.ListField(child=serializers.FloatField(), read_only=True)
    matched = serializers.FloatField(read_only=True, allow_null=True)
    peak = serializers.FloatField(read_only=True)
    meta = serializers.DictField(read_only=True)
