from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Any, Tuple

from ..utils.error_handler import ValidationError


class InterconnectKind(str, Enum):
    """How GPUs of one instance share the intra-node links"""
    SHARED_BUS = 'SharedBus'   # PCIe: aggregate bandwidth split across active GPUs
    CROSSBAR = 'Crossbar'      # NVLink: full bandwidth unless the crossbar is sliced
    SWITCH = 'Switch'          # NVSwitch: no sharing


@dataclass(frozen=True)
class InterconnectSpec:
    kind: InterconnectKind
    aggregate_bandwidth: float  # bytes/s
    per_link_latency: float     # s
    slicing_penalty: float = 1.0

    def __post_init__(self):
        if not self.aggregate_bandwidth > 0:
            raise ValidationError('must be > 0', field='interconnect.aggregate_bandwidth')
        if not self.per_link_latency >= 0:
            raise ValidationError('must be >= 0', field='interconnect.latency')
        if not 0 < self.slicing_penalty <= 1:
            raise ValidationError('must be in (0, 1]', field='interconnect.slicing_penalty')

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'aggregate_bandwidth': self.aggregate_bandwidth,
            'per_link_latency': self.per_link_latency,
            'slicing_penalty': self.slicing_penalty,
        }


@dataclass(frozen=True)
class InstanceSpec:
    """One cloud GPU instance type. Rates are bytes/s, times seconds, prices USD/hour."""
    name: str
    gpu_count: int
    vcpus: int
    gpu_memory: int
    main_memory: int
    interconnect: InterconnectSpec
    network_bandwidth: float
    network_latency: float
    disk_throughput: float
    cpu_prep_throughput: float  # samples/s per vCPU
    price_per_hour: float
    gpu_relative_speed: float = 1.0  # compute speed relative to the preset calibration GPU

    def __post_init__(self):
        if not self.name:
            raise ValidationError('must not be empty', field='name')
        if self.gpu_count < 1:
            raise ValidationError('must be >= 1', field='gpu_count')
        positive = ('vcpus', 'gpu_memory', 'main_memory', 'network_bandwidth', 'disk_throughput',
                    'cpu_prep_throughput', 'price_per_hour', 'gpu_relative_speed')
        for name in positive:
            if not getattr(self, name) > 0:
                raise ValidationError('must be > 0', field=name)
        if not self.network_latency >= 0:
            raise ValidationError('must be >= 0', field='network_latency')

    @property
    def gpu_memory_per_gpu(self) -> float:
        return self.gpu_memory / self.gpu_count

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'gpu_count': self.gpu_count,
            'vcpus': self.vcpus,
            'gpu_memory': self.gpu_memory,
            'main_memory': self.main_memory,
            'interconnect': self.interconnect.to_dict(),
            'network_bandwidth': self.network_bandwidth,
            'network_latency': self.network_latency,
            'disk_throughput': self.disk_throughput,
            'cpu_prep_throughput': self.cpu_prep_throughput,
            'price_per_hour': self.price_per_hour,
            'gpu_relative_speed': self.gpu_relative_speed,
        }


@dataclass(frozen=True)
class Catalog:
    instances: Tuple[InstanceSpec, ...]
    _by_name: Dict[str, InstanceSpec] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'instances', tuple(self.instances))
        if not self.instances:
            raise ValidationError('catalog must contain at least one instance', field='instances')
        by_name: Dict[str, InstanceSpec] = {}
        for index, inst in enumerate(self.instances):
            if inst.name in by_name:
                raise ValidationError(f'duplicate instance name "{inst.name}"', field=f'instances[{index}].name')
            by_name[inst.name] = inst
        object.__setattr__(self, '_by_name', by_name)

    def __iter__(self):
        return iter(self.instances)

    def __len__(self) -> int:
        return len(self.instances)

    def names(self) -> Tuple[str, ...]:
        return tuple(inst.name for inst in self.instances)

    def get(self, name: str) -> InstanceSpec:
        try:
            return self._by_name[name]
        except KeyError:
            raise ValidationError(f'unknown instance "{name}" (known: {", ".join(self.names())})',
                                  field='instance') from None
