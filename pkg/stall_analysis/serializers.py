from rest_framework import serializers

from .domain import InterconnectKind
from .models import StallProfile
from .utils.sim_constants import DEFAULT_TOTAL_SAMPLES, DEFAULT_BATCH_SIZE, SCALE_N_LIMIT


def positive(value):
    if not value > 0:
        raise serializers.ValidationError('Ensure this value is greater than 0.')


def flatten_errors(errors, prefix: str = ''):
    """Turn nested serializer errors into ``(field_path, message)`` pairs, e.g. ``instances[1].price_per_hour_usd``"""
    if isinstance(errors, dict):
        for key, value in errors.items():
            if key == 'non_field_errors':
                path = prefix
            else:
                path = f'{prefix}.{key}' if prefix else str(key)
            yield from flatten_errors(value, path)
    elif isinstance(errors, list):
        if errors and all(isinstance(item, str) for item in errors):
            yield prefix, str(errors[0])
            return
        for index, item in enumerate(errors):
            if item:
                yield from flatten_errors(item, f'{prefix}[{index}]')
    else:
        yield prefix, str(errors)


# ---- catalog file schema ----

class InterconnectFileSerializer(serializers.Serializer):
    kind = serializers.ChoiceField(choices=[kind.value for kind in InterconnectKind])
    aggregate_bandwidth_gbps = serializers.FloatField(validators=[positive])
    latency_us = serializers.FloatField(min_value=0)
    slicing_penalty = serializers.FloatField(required=False, default=1.0)

    def validate_slicing_penalty(self, value):
        if not 0 < value <= 1:
            raise serializers.ValidationError('Ensure this value is in (0, 1].')
        return value


class InstanceFileSerializer(serializers.Serializer):
    """One catalog entry in file units (GB, Gbps, us, MB/s, USD/hour)"""
    name = serializers.CharField()
    gpu_count = serializers.IntegerField(min_value=1)
    vcpus = serializers.IntegerField(validators=[positive])
    gpu_memory_gb = serializers.FloatField(validators=[positive])
    main_memory_gb = serializers.FloatField(validators=[positive])
    interconnect = InterconnectFileSerializer()
    network_bandwidth_gbps = serializers.FloatField(validators=[positive])
    network_latency_us = serializers.FloatField(min_value=0)
    disk_throughput_mbps = serializers.FloatField(validators=[positive])
    cpu_prep_throughput_sps = serializers.FloatField(validators=[positive])
    price_per_hour_usd = serializers.FloatField(validators=[positive])
    gpu_relative_speed = serializers.FloatField(required=False, default=1.0, validators=[positive])


class CatalogFileSerializer(serializers.Serializer):
    instances = InstanceFileSerializer(many=True, allow_empty=False)


# ---- model file schema ----

class LayerFileSerializer(serializers.Serializer):
    gradient_bytes = serializers.IntegerField(min_value=0)
    backward_s_per_sample = serializers.FloatField(min_value=0)
    forward_s_per_sample = serializers.FloatField(min_value=0, required=False, default=0.0)
    batch_norm = serializers.BooleanField(required=False, default=False)
    residual_join = serializers.BooleanField(required=False, default=False)

    def validate(self, attrs):
        if attrs['residual_join'] and attrs['gradient_bytes'] != 0:
            raise serializers.ValidationError({'gradient_bytes': 'Residual joins must carry 0 gradient bytes.'})
        return attrs


class ModelFileSerializer(serializers.Serializer):
    name = serializers.CharField()
    sample_bytes = serializers.IntegerField(min_value=0)
    layers = LayerFileSerializer(many=True, allow_empty=False)


# ---- API requests ----

class WorkloadRequestSerializer(serializers.Serializer):
    model = serializers.CharField()
    samples = serializers.IntegerField(min_value=1, default=DEFAULT_TOTAL_SAMPLES)
    batch = serializers.IntegerField(min_value=1, default=DEFAULT_BATCH_SIZE)


class StashRequestSerializer(WorkloadRequestSerializer):
    instance = serializers.CharField()
    batches = serializers.ListField(child=serializers.IntegerField(min_value=1), required=False, allow_empty=False)
    multi_node = serializers.RegexField(r'^\d+[xX]\d+$', required=False, allow_null=True, default=None)
    skip_multi_node = serializers.BooleanField(default=False)
    save = serializers.BooleanField(default=False)


class ScaleRequestSerializer(WorkloadRequestSerializer):
    instance = serializers.CharField()
    n_min = serializers.IntegerField(min_value=1, max_value=SCALE_N_LIMIT, default=1)
    n_max = serializers.IntegerField(min_value=1, max_value=SCALE_N_LIMIT, default=8)
    full_simulation = serializers.BooleanField(default=False)

    def validate(self, attrs):
        if attrs['n_min'] > attrs['n_max']:
            raise serializers.ValidationError({'n_min': 'Must not exceed n_max.'})
        return attrs


class RecommendRequestSerializer(WorkloadRequestSerializer):
    epochs = serializers.IntegerField(min_value=1)
    budget = serializers.FloatField(validators=[positive])
    n_max = serializers.IntegerField(min_value=1, max_value=SCALE_N_LIMIT, default=8)
    full_simulation = serializers.BooleanField(default=False)


class StallProfileSerializer(serializers.ModelSerializer):
    class Meta:
        model = StallProfile
        fields = [
            'id', 'instance_name', 'model_name', 'batch_size', 'total_samples', 'multi_node_split',
            'single_gpu_time', 'single_instance_time', 'cold_cache_time', 'warm_cache_time', 'multi_node_time',
            'interconnect_stall_pct', 'network_stall_pct', 'epoch_cost', 'report', 'created_at',
        ]
        read_only_fields = fields
