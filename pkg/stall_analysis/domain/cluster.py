from dataclasses import dataclass
from enum import Enum
from typing import Dict, Any, Tuple

from ..utils.error_handler import DomainError
from .instance import InstanceSpec


class Topology(str, Enum):
    SINGLE_NODE = 'SingleNode'
    RING = 'Ring'


class CommMode(str, Enum):
    PAPER_SIMPLE = 'PaperSimple'  # tau + g/B per layer
    RING = 'Ring'                 # 2(n-1) tau + 2(g/n)(n-1)/B per layer


@dataclass(frozen=True)
class ClusterConfig:
    nodes: Tuple[Tuple[InstanceSpec, int], ...]
    gpus_per_node_used: int
    topology: Topology

    def __post_init__(self):
        object.__setattr__(self, 'nodes', tuple((inst, int(count)) for inst, count in self.nodes))
        if not self.nodes or any(count < 1 for _, count in self.nodes):
            raise DomainError('cluster needs at least one instance and positive counts')
        if self.gpus_per_node_used < 1:
            raise DomainError('gpus_per_node_used must be >= 1')
        for inst, _ in self.nodes:
            if self.gpus_per_node_used > inst.gpu_count:
                raise DomainError(
                    f'gpus_per_node_used={self.gpus_per_node_used} exceeds {inst.name} gpu_count={inst.gpu_count}'
                )
        if self.instance_count > 1 and self.topology != Topology.RING:
            raise DomainError('multi-instance clusters require Ring topology')

    @classmethod
    def single_node(cls, inst: InstanceSpec, gpus: int = None) -> 'ClusterConfig':
        return cls(((inst, 1),), gpus or inst.gpu_count, Topology.SINGLE_NODE)

    @classmethod
    def homogeneous(cls, inst: InstanceSpec, count: int, gpus_per_node: int = None) -> 'ClusterConfig':
        topology = Topology.SINGLE_NODE if count == 1 else Topology.RING
        return cls(((inst, count),), gpus_per_node or inst.gpu_count, topology)

    @property
    def instance_count(self) -> int:
        return sum(count for _, count in self.nodes)

    @property
    def total_gpus(self) -> int:
        return self.instance_count * self.gpus_per_node_used

    @property
    def primary_instance(self) -> InstanceSpec:
        return self.nodes[0][0]

    @property
    def hourly_price(self) -> float:
        return sum(inst.price_per_hour * count for inst, count in self.nodes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'nodes': [{'instance': inst.name, 'count': count} for inst, count in self.nodes],
            'gpus_per_node_used': self.gpus_per_node_used,
            'topology': self.topology.value,
        }


@dataclass(frozen=True)
class DataConfig:
    total_samples: int
    per_gpu_batch_size: int
    cached_fraction: float = 0.0

    def __post_init__(self):
        if self.total_samples < 1:
            raise DomainError('total_samples must be >= 1')
        if self.per_gpu_batch_size < 1:
            raise DomainError('per_gpu_batch_size must be >= 1')
        if not 0.0 <= self.cached_fraction <= 1.0:
            raise DomainError('cached_fraction must be in [0, 1]')

    def to_dict(self) -> Dict[str, Any]:
        return {
            'total_samples': self.total_samples,
            'per_gpu_batch_size': self.per_gpu_batch_size,
            'cached_fraction': self.cached_fraction,
        }


@dataclass(frozen=True)
class RunFlags:
    synthetic_data: bool = False
    single_gpu_baseline: bool = False
    cold_cache: bool = False
    comm_mode: CommMode = CommMode.PAPER_SIMPLE

    def __post_init__(self):
        # The single-GPU baseline always trains on pre-populated synthetic data
        if self.single_gpu_baseline and not self.synthetic_data:
            raise DomainError('single_gpu_baseline requires synthetic_data')
