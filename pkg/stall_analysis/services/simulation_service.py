"""
Deterministic epoch simulator for data-parallel training.

One iteration is modelled as two concurrent stages: the data stage (disk fetch, then CPU prep)
and the GPU path (forward + backward compute, plus whatever gradient communication is not hidden
under the backward pass). Stage times are snapped to a dyadic time grid so that the epoch
decomposition and every difference of epochs are exact in floating point.
"""

import math
from dataclasses import dataclass, replace
from typing import Tuple, Union

import numpy as np

from ..domain import (
    ClusterConfig, CommMode, DataConfig, EpochTiming, InstanceSpec, ModelDescriptor,
    RunFlags, Topology, TrainingTiming,
)
from ..utils.error_handler import DomainError
from ..utils.production_logger import simulation_logger
from ..utils.sim_constants import EXACT_TIME_LIMIT_S, TIME_QUANTUM_BITS
from .catalog_service import CatalogService


def quantize(seconds: float) -> float:
    """Snap to the 2^-TIME_QUANTUM_BITS second grid"""
    return math.ldexp(round(math.ldexp(seconds, TIME_QUANTUM_BITS)), -TIME_QUANTUM_BITS)


@dataclass(frozen=True)
class _Iteration:
    fetch: float
    prep: float
    compute: float
    interconnect: float
    network: float

    def times(self, count: int) -> '_Iteration':
        return _Iteration(self.fetch * count, self.prep * count, self.compute * count,
                          self.interconnect * count, self.network * count)

    def __add__(self, other: '_Iteration') -> '_Iteration':
        return _Iteration(self.fetch + other.fetch, self.prep + other.prep, self.compute + other.compute,
                          self.interconnect + other.interconnect, self.network + other.network)


@dataclass(frozen=True)
class CommLink:
    """Latency/bandwidth pair used for gradient synchronization"""
    tau: float
    bandwidth: float
    workers: int


class SimulationService:

    def __init__(self, catalog_service: CatalogService = None):
        self.catalog_service = catalog_service or CatalogService()

    # ---- communication model ----

    @staticmethod
    def allreduce_per_worker_bytes(gradient_bytes: float, n: int) -> float:
        """Bytes each worker sends in an idealized ring all-reduce"""
        if n < 1:
            raise DomainError('n must be >= 1')
        if gradient_bytes < 0:
            raise DomainError('gradient_bytes must be >= 0')
        return 2 * (gradient_bytes / n) * (n - 1)

    def layer_comm_time(self, gradient_bytes: float, tau: float, bandwidth: float, n: int,
                        mode: Union[CommMode, str] = CommMode.PAPER_SIMPLE) -> float:
        if not bandwidth > 0:
            raise DomainError(f'bandwidth must be > 0, got {bandwidth}')
        if CommMode(mode) == CommMode.RING:
            return 2 * (n - 1) * tau + self.allreduce_per_worker_bytes(gradient_bytes, n) / bandwidth
        return tau + gradient_bytes / bandwidth

    @staticmethod
    def model_comm_time(model: ModelDescriptor, tau: float, bandwidth: float, n: int,
                        mode: Union[CommMode, str] = CommMode.PAPER_SIMPLE) -> float:
        """Sum of per-layer synchronization times over the gradient-carrying layers"""
        if not bandwidth > 0:
            raise DomainError(f'bandwidth must be > 0, got {bandwidth}')
        if n < 1:
            raise DomainError('n must be >= 1')
        grads = np.array([layer.gradient_bytes for layer in model.sync_layers], dtype=np.float64)
        if CommMode(mode) == CommMode.RING:
            per_layer = 2 * (n - 1) * tau + 2 * (grads / n) * (n - 1) / bandwidth
        else:
            per_layer = tau + grads / bandwidth
        return math.fsum(per_layer)

    def interconnect_link(self, cluster: ClusterConfig) -> CommLink:
        gpus = cluster.gpus_per_node_used
        bandwidth = min(self.catalog_service.effective_per_gpu_bandwidth(inst, gpus) for inst, _ in cluster.nodes)
        tau = max(inst.interconnect.per_link_latency for inst, _ in cluster.nodes)
        return CommLink(tau, bandwidth, cluster.total_gpus)

    def bottleneck_link(self, cluster: ClusterConfig) -> CommLink:
        """The slowest link of the cluster: interconnect alone on one node, else min bandwidth / max latency"""
        link = self.interconnect_link(cluster)
        if cluster.topology == Topology.SINGLE_NODE:
            return link
        network_bw = min(inst.network_bandwidth for inst, _ in cluster.nodes)
        network_tau = max(inst.network_latency for inst, _ in cluster.nodes)
        return CommLink(max(link.tau, network_tau), min(link.bandwidth, network_bw), link.workers)

    # ---- epoch simulation ----

    def simulate_epoch(self, cluster: ClusterConfig, model: ModelDescriptor, data: DataConfig,
                       flags: RunFlags = RunFlags()) -> EpochTiming:
        workers = 1 if flags.single_gpu_baseline else cluster.total_gpus
        if data.per_gpu_batch_size * workers > data.total_samples:
            raise DomainError(
                f'per_gpu_batch_size x GPUs = {data.per_gpu_batch_size * workers} exceeds '
                f'total_samples={data.total_samples}'
            )

        samples_per_step = data.per_gpu_batch_size * workers
        iterations = -(-data.total_samples // samples_per_step)
        last_batch = (data.total_samples - (iterations - 1) * samples_per_step) / workers

        if flags.single_gpu_baseline:
            # One GPU of the first node; nothing to synchronize and no data stage
            cluster = ClusterConfig.single_node(cluster.primary_instance, 1)

        full = self._iteration(cluster, model, data, flags, data.per_gpu_batch_size)
        if last_batch == data.per_gpu_batch_size:
            parts = full.times(iterations)
        else:
            last = self._iteration(cluster, model, data, flags, last_batch)
            parts = full.times(iterations - 1) + last

        timing = EpochTiming(
            total=parts.fetch + parts.prep + parts.compute + parts.interconnect + parts.network,
            fetch=parts.fetch,
            prep=parts.prep,
            compute=parts.compute,
            comm_interconnect_exposed=parts.interconnect,
            comm_network_exposed=parts.network,
            iterations=iterations,
        )
        simulation_logger.log_simulation(cluster.to_dict(), model.name, timing.to_dict())
        self._check_exact(timing.total, model.name)
        return timing

    def _iteration(self, cluster: ClusterConfig, model: ModelDescriptor, data: DataConfig,
                   flags: RunFlags, batch: float) -> _Iteration:
        speed = min(inst.gpu_relative_speed for inst, _ in cluster.nodes)
        # compute + exposed == forward + max(backward, comm), nondecreasing in batch
        forward = quantize(batch * model.forward_per_sample / speed)
        backward = quantize(batch * model.backward_per_sample / speed)
        compute = forward + backward

        interconnect = network = 0.0
        if cluster.total_gpus > 1:
            link = self.bottleneck_link(cluster)
            comm = quantize(self.model_comm_time(model, link.tau, link.bandwidth, link.workers, flags.comm_mode))
            exposed = max(0.0, comm - backward)
            if cluster.topology == Topology.SINGLE_NODE:
                interconnect = exposed
            else:
                ic = self.interconnect_link(cluster)
                ic_only = quantize(self.model_comm_time(model, ic.tau, ic.bandwidth, ic.workers, flags.comm_mode))
                interconnect = min(exposed, max(0.0, ic_only - backward))
                network = exposed - interconnect

        gpu_path = compute + interconnect + network
        if flags.synthetic_data:
            return _Iteration(0.0, 0.0, compute, interconnect, network)

        cached_fraction = 0.0 if flags.cold_cache else data.cached_fraction
        fetch_raw, prep_raw = max(
            (self._data_stage(inst, cluster.gpus_per_node_used, model, cached_fraction, batch)
             for inst, _ in cluster.nodes),
            key=sum,
        )
        prep = max(0.0, prep_raw - gpu_path)
        fetch = max(0.0, fetch_raw + prep_raw - gpu_path) - prep
        return _Iteration(fetch, prep, compute, interconnect, network)

    @staticmethod
    def _data_stage(inst: InstanceSpec, gpus_on_node: int, model: ModelDescriptor,
                    cached_fraction: float, batch: float) -> Tuple[float, float]:
        # One loader per GPU: they share the disk and split the vCPUs
        fetch = quantize((1.0 - cached_fraction) * batch * model.sample_bytes * gpus_on_node / inst.disk_throughput)
        prep = quantize(batch / (inst.cpu_prep_throughput * inst.vcpus / gpus_on_node))
        return fetch, prep

    # ---- multi-epoch ----

    def simulate_training(self, cluster: ClusterConfig, model: ModelDescriptor, data: DataConfig,
                          flags: RunFlags = RunFlags(), epochs: int = 1,
                          first_epoch_cold: bool = False) -> TrainingTiming:
        """
        Epoch-by-epoch training time. With ``first_epoch_cold`` the first pass reads from disk and
        later passes hit the DRAM page cache for the share of the node's shard that fits in memory.
        """
        if epochs < 1:
            raise DomainError('epochs must be >= 1')

        steady = self.simulate_epoch(cluster, model, data, flags)
        if not first_epoch_cold or flags.synthetic_data:
            timings = (steady,) * epochs
        else:
            cold = self.simulate_epoch(cluster, model, data, replace(flags, cold_cache=True))
            warm_data = replace(data, cached_fraction=self.cacheable_fraction(cluster, model, data))
            warm = self.simulate_epoch(cluster, model, warm_data, replace(flags, cold_cache=False))
            timings = (cold,) + (warm,) * (epochs - 1)

        total = 0.0
        for timing in timings:
            total += timing.total
        self._check_exact(total, model.name)
        return TrainingTiming(epochs=timings, total=total)

    @staticmethod
    def cacheable_fraction(cluster: ClusterConfig, model: ModelDescriptor, data: DataConfig) -> float:
        shard_bytes = data.total_samples * model.sample_bytes / cluster.instance_count
        if shard_bytes == 0:
            return 1.0
        memory = min(inst.main_memory for inst, _ in cluster.nodes)
        return max(data.cached_fraction, min(1.0, memory / shard_bytes))

    @staticmethod
    def _check_exact(total: float, model_name: str) -> None:
        if total >= EXACT_TIME_LIMIT_S:
            simulation_logger.log_structured('WARNING', 'TIME_GRID_INEXACT', {
                'model': model_name,
                'total_s': total,
                'exact_limit_s': EXACT_TIME_LIMIT_S,
            }, f'{model_name}: total {total} s is beyond {EXACT_TIME_LIMIT_S} s, '
               'stall differences may carry rounding error')
