"""
STASH stall attribution.

Five simulator runs are differenced to attribute epoch time:
  single_gpu      1 GPU, synthetic data, total_samples / gpu_count samples
  single_instance all GPUs, synthetic data
  cold_cache      all GPUs, real data, nothing cached
  warm_cache      all GPUs, real data, dataset cached in DRAM
  multi_node      optional, same GPU total spread over several instances

interconnect = single_instance - single_gpu; prep = warm_cache - single_instance;
fetch = cold_cache - warm_cache; network = multi_node - single_instance.
"""

from dataclasses import replace
from typing import Optional, Sequence, List, Union

from ..domain import (
    ClusterConfig, DataConfig, InstanceSpec, ModelDescriptor, MultiNodeSplit, RunFlags,
    StallReport, Topology,
)
from ..utils.error_handler import ConfigError, DomainError, InfeasibleConfigurationError
from ..utils.production_logger import stash_logger
from ..utils.sim_constants import DEFAULT_MULTI_NODE_COUNT, MEMORY_MODEL_MULTIPLIER, SECONDS_PER_HOUR
from .dnn_model_service import DnnModelService
from .simulation_service import SimulationService


class StashService:

    def __init__(self, simulation_service: SimulationService = None, model_service: DnnModelService = None):
        self.simulation_service = simulation_service or SimulationService()
        self.model_service = model_service or DnnModelService()

    @staticmethod
    def default_split(inst: InstanceSpec) -> Optional[MultiNodeSplit]:
        """Two nodes with half the GPUs each; None when the instance cannot be split evenly"""
        nodes = DEFAULT_MULTI_NODE_COUNT
        if inst.gpu_count < nodes or inst.gpu_count % nodes:
            return None
        return MultiNodeSplit(nodes, inst.gpu_count // nodes)

    def run_stash(self, inst: InstanceSpec, model: ModelDescriptor, data: DataConfig,
                  multi_node: Union[MultiNodeSplit, str, None] = None, flags: RunFlags = RunFlags()) -> StallReport:
        if data.total_samples % inst.gpu_count:
            raise ConfigError(
                f'total_samples={data.total_samples} must be divisible by gpu_count={inst.gpu_count} '
                'so the single-GPU run processes the same samples per GPU'
            )
        if isinstance(multi_node, str):
            multi_node = MultiNodeSplit.parse(multi_node)
        if multi_node is not None:
            if multi_node.total_gpus != inst.gpu_count:
                raise ConfigError(
                    f'multi-node split {multi_node} uses {multi_node.total_gpus} GPUs, '
                    f'single instance uses {inst.gpu_count}'
                )
            if multi_node.gpus_per_node > inst.gpu_count:
                raise ConfigError(f'{inst.name} has only {inst.gpu_count} GPUs per node')

        sim = self.simulation_service.simulate_epoch
        single = ClusterConfig.single_node(inst)
        synthetic = replace(flags, synthetic_data=True, single_gpu_baseline=False, cold_cache=False)
        real = replace(flags, synthetic_data=False, single_gpu_baseline=False, cold_cache=False)

        timings = {
            'single_gpu': sim(single, model, replace(data, total_samples=data.total_samples // inst.gpu_count),
                              replace(synthetic, single_gpu_baseline=True)),
            'single_instance': sim(single, model, data, synthetic),
            'cold_cache': sim(single, model, replace(data, cached_fraction=0.0), replace(real, cold_cache=True)),
            'warm_cache': sim(single, model, replace(data, cached_fraction=1.0), real),
        }
        if multi_node is not None:
            cluster = ClusterConfig(((inst, multi_node.node_count),), multi_node.gpus_per_node, Topology.RING)
            timings['multi_node'] = sim(cluster, model, data, synthetic)

        t1 = timings['single_gpu'].total
        t2 = timings['single_instance'].total
        t3 = timings['cold_cache'].total
        t4 = timings['warm_cache'].total
        t5 = timings['multi_node'].total if multi_node is not None else None

        interconnect_stall = t2 - t1
        network_stall = t5 - t2 if t5 is not None else None
        report = StallReport(
            instance=inst.name,
            model=model.name,
            batch=data.per_gpu_batch_size,
            total_samples=data.total_samples,
            single_gpu_time=t1,
            single_instance_time=t2,
            cold_cache_time=t3,
            warm_cache_time=t4,
            multi_node_time=t5,
            interconnect_stall=interconnect_stall,
            network_stall=network_stall,
            prep_stall=t4 - t2,
            fetch_stall=t3 - t4,
            interconnect_stall_pct=self._percentage_or_none(interconnect_stall, t1),
            network_stall_pct=self._percentage_or_none(network_stall, t2),
            epoch_cost=t4 * inst.price_per_hour / SECONDS_PER_HOUR,
            timings=timings,
            multi_node_split=str(multi_node) if multi_node is not None else None,
        )
        stash_logger.log_stall_report(report.to_dict())
        return report

    @staticmethod
    def stall_percentage(stall: float, baseline: float) -> float:
        """Interconnect stalls are relative to the single-GPU time, network stalls to the single-instance time"""
        if not baseline > 0:
            raise DomainError('stall percentage needs a positive baseline time; does the model have compute?')
        return stall / baseline * 100.0

    @classmethod
    def _percentage_or_none(cls, stall: Optional[float], baseline: float) -> Optional[float]:
        # A model without compute has a zero baseline; its percentage is reported as null
        if stall is None or baseline == 0:
            return None
        return cls.stall_percentage(stall, baseline)

    def run_batches(self, inst: InstanceSpec, model: ModelDescriptor, total_samples: int, batches: Sequence[int],
                    multi_node: Union[MultiNodeSplit, str, None] = None,
                    flags: RunFlags = RunFlags()) -> List[StallReport]:
        """One report per mini-batch size, in the order given"""
        return [
            self.run_stash(inst, model, DataConfig(total_samples, batch), multi_node, flags)
            for batch in batches
        ]

    def check_memory_feasibility(self, inst: InstanceSpec, model: ModelDescriptor, batch: int) -> None:
        """Coarse per-GPU footprint: multiplier x model bytes for weights, gradients and optimizer state, plus the batch"""
        needed = (MEMORY_MODEL_MULTIPLIER * self.model_service.total_gradient_bytes(model)
                  + batch * model.sample_bytes)
        available = inst.gpu_memory_per_gpu
        if needed > available:
            raise InfeasibleConfigurationError(
                f'batch {batch} of {model.name} needs ~{needed / 1e9:.2f} GB per GPU, '
                f'{inst.name} has {available / 1e9:.2f} GB'
            )
