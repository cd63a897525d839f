"""Training cost model, budget-constrained recommendation and instance-count sweeps."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar

from ..domain import (
    Catalog, ClusterConfig, DataConfig, InstanceSpec, ModelDescriptor, Recommendation, RunFlags,
    ScalingParams, SweepRow,
)
from ..utils.error_handler import DomainError, ValidationError
from ..utils.production_logger import advisor_logger
from ..utils.sim_constants import ADVISOR_WORKERS, SCALE_N_LIMIT, SECONDS_PER_HOUR
from .dnn_model_service import DnnModelService
from .scaling_service import ScalingService
from .simulation_service import SimulationService

T = TypeVar('T')
R = TypeVar('R')


@dataclass(frozen=True)
class Candidate:
    catalog_index: int
    instance: InstanceSpec
    count: int
    epoch_time: float
    training_time: float
    cost: float
    feasible: bool

    @property
    def config(self) -> ClusterConfig:
        return ClusterConfig.homogeneous(self.instance, self.count)


class AdvisorService:
    """
    Picks the cheapest homogeneous cluster that trains within a time budget.

    Single-instance epochs are simulated. Multi-instance epochs come from the analytic scaling
    model fed with the simulated single-instance time, the instance's network latency and
    bandwidth and the model's gradient bytes; ``full_simulation`` simulates them on a ring instead.
    """

    def __init__(self, simulation_service: SimulationService = None, scaling_service: ScalingService = None,
                 model_service: DnnModelService = None, workers: int = ADVISOR_WORKERS):
        self.simulation_service = simulation_service or SimulationService()
        self.scaling_service = scaling_service or ScalingService()
        self.model_service = model_service or DnnModelService()
        self.workers = workers

    @staticmethod
    def training_cost(config: ClusterConfig, epoch_time: float, epochs: int) -> float:
        """Per-second billing: wall-hours x summed hourly price"""
        if not epoch_time > 0:
            raise DomainError('epoch_time must be > 0')
        if epochs < 1:
            raise DomainError('epochs must be >= 1')
        training_time = epochs * epoch_time
        return training_time / SECONDS_PER_HOUR * config.hourly_price

    # ---- enumeration ----

    def _map(self, func: Callable[[T], R], items: Sequence[T], workers: Optional[int]) -> List[R]:
        workers = self.workers if workers is None else workers
        if workers <= 1 or len(items) <= 1:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(func, items))

    def _scaling_params(self, inst: InstanceSpec, model: ModelDescriptor, t1: float) -> ScalingParams:
        return ScalingParams(
            t1=t1,
            tau=inst.network_latency,
            bandwidth=inst.network_bandwidth,
            gradient_bytes=self.model_service.total_gradient_bytes(model),
        )

    def single_instance_params(self, inst: InstanceSpec, model: ModelDescriptor, data: DataConfig,
                               flags: RunFlags = RunFlags()) -> ScalingParams:
        """Scaling-model inputs with t1 simulated on one instance"""
        t1 = self.simulation_service.simulate_epoch(ClusterConfig.single_node(inst), model, data, flags).total
        return self._scaling_params(inst, model, t1)

    def _predict_epoch(self, inst: InstanceSpec, count: int, t1: float, model: ModelDescriptor,
                       data: DataConfig, flags: RunFlags, full_simulation: bool) -> float:
        if count == 1:
            return t1
        if full_simulation:
            return self.simulation_service.simulate_epoch(
                ClusterConfig.homogeneous(inst, count), model, data, flags).total
        return self.scaling_service.scaling_time(self._scaling_params(inst, model, t1), count)

    def evaluate_candidates(self, catalog: Catalog, model: ModelDescriptor, data: DataConfig, epochs: int,
                            budget: float, n_max: int, *, full_simulation: bool = False,
                            flags: RunFlags = RunFlags(), workers: Optional[int] = None) -> List[Candidate]:
        """Every (instance type, count) pair that can form at least one full step, in catalog order"""
        if not len(catalog):
            raise ValidationError('catalog must contain at least one instance', field='instances')
        if not budget > 0:
            raise DomainError('budget must be > 0')
        if n_max < 1:
            raise DomainError('n_max must be >= 1')
        if epochs < 1:
            raise DomainError('epochs must be >= 1')

        pairs: List[Tuple[int, InstanceSpec, int]] = [
            (index, inst, count)
            for index, inst in enumerate(catalog)
            for count in range(1, n_max + 1)
            if data.per_gpu_batch_size * inst.gpu_count * count <= data.total_samples
        ]
        if not pairs:
            raise DomainError(f'no instance can run per-GPU batch {data.per_gpu_batch_size} '
                              f'over {data.total_samples} samples')

        single_instances = sorted({index for index, _, _ in pairs})
        t1_values = self._map(
            lambda index: self.simulation_service.simulate_epoch(
                ClusterConfig.single_node(catalog.instances[index]), model, data, flags).total,
            single_instances, workers,
        )
        t1_by_index = dict(zip(single_instances, t1_values))

        def evaluate(pair: Tuple[int, InstanceSpec, int]) -> Candidate:
            index, inst, count = pair
            epoch_time = self._predict_epoch(inst, count, t1_by_index[index], model, data, flags, full_simulation)
            config = ClusterConfig.homogeneous(inst, count)
            training_time = epochs * epoch_time
            return Candidate(
                catalog_index=index,
                instance=inst,
                count=count,
                epoch_time=epoch_time,
                training_time=training_time,
                cost=self.training_cost(config, epoch_time, epochs),
                feasible=training_time < budget,
            )

        return self._map(evaluate, pairs, workers)

    @staticmethod
    def select(candidates: Iterable[Candidate]) -> Candidate:
        """Cheapest feasible candidate, else the fastest; ties by cost, count, catalog order"""
        candidates = list(candidates)
        feasible = [c for c in candidates if c.feasible]
        if feasible:
            return min(feasible, key=lambda c: (c.cost, c.count, c.catalog_index))
        return min(candidates, key=lambda c: (c.training_time, c.cost, c.count, c.catalog_index))

    def recommend(self, catalog: Catalog, model: ModelDescriptor, data: DataConfig, epochs: int,
                  budget: float, n_max: int, *, full_simulation: bool = False,
                  flags: RunFlags = RunFlags(), workers: Optional[int] = None) -> Recommendation:
        candidates = self.evaluate_candidates(catalog, model, data, epochs, budget, n_max,
                                              full_simulation=full_simulation, flags=flags, workers=workers)
        best = self.select(candidates)
        recommendation = Recommendation(
            config=best.config,
            predicted_epoch_time=best.epoch_time,
            predicted_training_time=best.training_time,
            predicted_cost=best.cost,
            epochs=epochs,
            budget=budget,
            feasible=best.feasible,
            candidates_considered=len(candidates),
        )
        advisor_logger.log_recommendation(recommendation.to_dict(), budget)
        return recommendation

    # ---- sweeps ----

    def sweep(self, catalog: Catalog, model: ModelDescriptor, data: DataConfig, n_range: Iterable[int],
              instance: Optional[str] = None, *, epochs: int = 1, full_simulation: bool = False,
              flags: RunFlags = RunFlags()) -> List[SweepRow]:
        """
        One row per instance count for a single instance type (the first catalog entry by default).
        network_stall_pct is relative to the single-instance epoch time. The fastest row is
        flagged ``optimal``.
        """
        counts = list(n_range)
        if not counts:
            raise DomainError('n_range is empty')
        if min(counts) < 1 or max(counts) > SCALE_N_LIMIT:
            raise DomainError(f'n_range must lie within [1, {SCALE_N_LIMIT}]')

        inst = catalog.get(instance) if instance else catalog.instances[0]
        params = self.single_instance_params(inst, model, data, flags)
        t1 = params.t1

        rows: List[SweepRow] = []
        for n in counts:
            config = ClusterConfig.homogeneous(inst, n)
            if full_simulation and n > 1:
                timing = self.simulation_service.simulate_epoch(config, model, data, flags)
                epoch_time = timing.total
                network_stall = timing.comm_network_exposed
            else:
                epoch_time = self.scaling_service.scaling_time(params, n)
                network_stall = self.scaling_service.network_stall_n(params, n)
            rows.append(SweepRow(
                n=n,
                epoch_time_s=epoch_time,
                total_time_s=epochs * epoch_time,
                network_stall_s=network_stall,
                network_stall_pct=network_stall / t1 * 100.0,
                cost_usd=self.training_cost(config, epoch_time, epochs),
            ))

        best = min(range(len(rows)), key=lambda i: (rows[i].epoch_time_s, rows[i].n))
        rows[best] = replace(rows[best], optimal=True)
        return rows
