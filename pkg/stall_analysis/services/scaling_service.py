"""
Closed-form scaling model for multi-instance training.

T_n = t1/n + N_n with N_n = (tau + 2G/(nB)) * (n - 1). The latency term grows linearly in n while
compute shrinks as 1/n, so T_n has an interior minimum near sqrt(t1/tau) when latency matters.
"""

import math
from typing import Set

from ..domain import ModelDescriptor, Regime, ScalingParams
from ..utils.error_handler import DomainError
from ..utils.production_logger import get_logger
from ..utils.sim_constants import REGIME_FACTOR

logger = get_logger('SCALING')


class ScalingService:

    def __init__(self, regime_factor: float = REGIME_FACTOR):
        self.regime_factor = regime_factor

    @staticmethod
    def network_stall_n(params: ScalingParams, n: int) -> float:
        if n < 1:
            raise DomainError('n must be >= 1')
        return (params.tau + 2 * params.gradient_bytes / (n * params.bandwidth)) * (n - 1)

    def scaling_time(self, params: ScalingParams, n: int) -> float:
        return params.t1 / n + self.network_stall_n(params, n)

    def optimal_instance_count(self, params: ScalingParams, n_max: int) -> int:
        """
        argmin of ``scaling_time`` over 1..n_max. The objective is evaluated at the integers around
        sqrt(t1/tau) and around the bandwidth-corrected root sqrt((t1 - 2G/B)/tau), plus both ends;
        ties go to the smaller count.
        """
        if n_max < 1:
            raise DomainError('n_max must be >= 1')

        bandwidth_term = 2 * params.gradient_bytes / params.bandwidth
        if params.tau == 0:
            # Without latency T_n = t1/n + 2G/B (1 - 1/n): monotone in n
            choice = n_max if params.t1 >= bandwidth_term else 1
            logger.log_structured('WARNING', 'ZERO_LATENCY', {
                **params.to_dict(), 'n_max': n_max, 'choice': choice,
            }, f'tau = 0: scaling time is monotone, returning n = {choice}')
            return choice

        candidates: Set[int] = {1, n_max}
        for root in (math.sqrt(params.t1 / params.tau),
                     math.sqrt(max(0.0, params.t1 - bandwidth_term) / params.tau)):
            candidates.update(self._clamp(value, n_max) for value in (math.floor(root), math.ceil(root)))

        best = min(sorted(candidates), key=lambda n: self.scaling_time(params, n))
        logger.log_scaling_decision('optimal_instance_count', best, {
            **params.to_dict(), 'n_max': n_max, 'candidates': sorted(candidates),
        })
        return best

    @staticmethod
    def _clamp(value: float, n_max: int) -> int:
        if not math.isfinite(value):
            return n_max
        return int(min(max(value, 1), n_max))

    @staticmethod
    def per_layer_transfer_time(model: ModelDescriptor, bandwidth: float) -> float:
        """G/(L*B): the bandwidth part of one layer's synchronization"""
        if not bandwidth > 0:
            raise DomainError(f'bandwidth must be > 0, got {bandwidth}')
        layers = model.sync_layers
        if not layers:
            return 0.0
        return sum(layer.gradient_bytes for layer in layers) / (len(layers) * bandwidth)

    def classify_regime(self, model: ModelDescriptor, tau: float, bandwidth: float) -> Regime:
        per_layer = self.per_layer_transfer_time(model, bandwidth)
        if per_layer == 0:
            return Regime.LATENCY_DOMINATED
        if per_layer < tau / self.regime_factor:
            return Regime.LATENCY_DOMINATED
        if per_layer > self.regime_factor * tau:
            return Regime.BANDWIDTH_DOMINATED
        return Regime.MIXED
