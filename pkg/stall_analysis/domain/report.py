from dataclasses import dataclass
from enum import Enum
from typing import Dict, Any, Optional

from ..utils.error_handler import DomainError
from .cluster import ClusterConfig
from .timing import EpochTiming


@dataclass(frozen=True)
class MultiNodeSplit:
    """Layout of the multi-node run, e.g. ``2x4`` = two instances using four GPUs each"""
    node_count: int
    gpus_per_node: int

    def __post_init__(self):
        if self.node_count < 2 or self.gpus_per_node < 1:
            raise DomainError('multi-node split needs >= 2 nodes and >= 1 GPU per node')

    @classmethod
    def parse(cls, text: str) -> 'MultiNodeSplit':
        try:
            nodes, gpus = text.lower().split('x')
            return cls(int(nodes), int(gpus))
        except ValueError:
            raise DomainError(f'invalid multi-node split "{text}", expected NODESxGPUS such as 2x4') from None

    @property
    def total_gpus(self) -> int:
        return self.node_count * self.gpus_per_node

    def __str__(self) -> str:
        return f'{self.node_count}x{self.gpus_per_node}'


@dataclass(frozen=True)
class StallReport:
    instance: str
    model: str
    batch: int
    total_samples: int
    single_gpu_time: float        # run 1
    single_instance_time: float   # run 2
    cold_cache_time: float        # run 3
    warm_cache_time: float        # run 4
    multi_node_time: Optional[float]  # run 5
    interconnect_stall: float
    network_stall: Optional[float]
    prep_stall: float
    fetch_stall: float
    interconnect_stall_pct: Optional[float]
    network_stall_pct: Optional[float]
    epoch_cost: float
    timings: Dict[str, EpochTiming]
    multi_node_split: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'instance': self.instance,
            'model': self.model,
            'batch': self.batch,
            'total_samples': self.total_samples,
            'multi_node_split': self.multi_node_split,
            'single_gpu_time': self.single_gpu_time,
            'single_instance_time': self.single_instance_time,
            'cold_cache_time': self.cold_cache_time,
            'warm_cache_time': self.warm_cache_time,
            'multi_node_time': self.multi_node_time,
            'interconnect_stall': self.interconnect_stall,
            'network_stall': self.network_stall,
            'prep_stall': self.prep_stall,
            'fetch_stall': self.fetch_stall,
            'interconnect_stall_pct': self.interconnect_stall_pct,
            'network_stall_pct': self.network_stall_pct,
            'epoch_cost': self.epoch_cost,
            'timings': {name: timing.to_dict() for name, timing in self.timings.items()},
        }

    def to_row(self) -> Dict[str, Any]:
        """Flat row for CSV sweeps"""
        return {
            'instance': self.instance,
            'model': self.model,
            'batch': self.batch,
            't1': self.single_gpu_time,
            't2': self.single_instance_time,
            't3': self.cold_cache_time,
            't4': self.warm_cache_time,
            't5': self.multi_node_time,
            'ic_stall_s': self.interconnect_stall,
            'nw_stall_s': self.network_stall,
            'prep_s': self.prep_stall,
            'fetch_s': self.fetch_stall,
            'ic_pct': self.interconnect_stall_pct,
            'nw_pct': self.network_stall_pct,
            'cost_usd': self.epoch_cost,
        }


class Regime(str, Enum):
    LATENCY_DOMINATED = 'LatencyDominated'
    BANDWIDTH_DOMINATED = 'BandwidthDominated'
    MIXED = 'Mixed'


@dataclass(frozen=True)
class ScalingParams:
    t1: float               # single-instance epoch time, s
    tau: float              # average pairwise inter-instance latency, s
    bandwidth: float        # bytes/s
    gradient_bytes: float   # G

    def __post_init__(self):
        if not self.t1 > 0:
            raise DomainError('t1 must be > 0')
        if not self.tau >= 0:
            raise DomainError('tau must be >= 0')
        if not self.bandwidth > 0:
            raise DomainError('bandwidth must be > 0')
        if not self.gradient_bytes >= 0:
            raise DomainError('gradient_bytes must be >= 0')

    def to_dict(self) -> Dict[str, Any]:
        return {
            't1': self.t1,
            'tau': self.tau,
            'bandwidth': self.bandwidth,
            'gradient_bytes': self.gradient_bytes,
        }


@dataclass(frozen=True)
class Recommendation:
    config: ClusterConfig
    predicted_epoch_time: float
    predicted_training_time: float
    predicted_cost: float
    epochs: int
    budget: float
    feasible: bool
    candidates_considered: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'config': self.config.to_dict(),
            'predicted_epoch_time': self.predicted_epoch_time,
            'predicted_training_time': self.predicted_training_time,
            'predicted_cost': self.predicted_cost,
            'epochs': self.epochs,
            'budget': self.budget,
            'feasible': self.feasible,
            'candidates_considered': self.candidates_considered,
        }


@dataclass(frozen=True)
class SweepRow:
    n: int
    epoch_time_s: float
    total_time_s: float
    network_stall_s: float
    network_stall_pct: float
    cost_usd: float
    optimal: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'epoch_time_s': self.epoch_time_s,
            'total_time_s': self.total_time_s,
            'network_stall_s': self.network_stall_s,
            'network_stall_pct': self.network_stall_pct,
            'cost_usd': self.cost_usd,
            'optimal': '*' if self.optimal else '',
        }
