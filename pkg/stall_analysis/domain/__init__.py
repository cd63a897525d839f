from .instance import InterconnectKind, InterconnectSpec, InstanceSpec, Catalog
from .workload import LayerSpec, ModelDescriptor
from .cluster import Topology, CommMode, ClusterConfig, DataConfig, RunFlags
from .timing import EpochTiming, TrainingTiming
from .report import MultiNodeSplit, StallReport, Regime, ScalingParams, Recommendation, SweepRow

__all__ = [
    'InterconnectKind',
    'InterconnectSpec',
    'InstanceSpec',
    'Catalog',
    'LayerSpec',
    'ModelDescriptor',
    'Topology',
    'CommMode',
    'ClusterConfig',
    'DataConfig',
    'RunFlags',
    'EpochTiming',
    'TrainingTiming',
    'MultiNodeSplit',
    'StallReport',
    'Regime',
    'ScalingParams',
    'Recommendation',
    'SweepRow',
]
