from dataclasses import dataclass
from typing import Dict, Any, Tuple

from ..utils.error_handler import ValidationError


@dataclass(frozen=True)
class LayerSpec:
    gradient_bytes: int
    backward_compute_per_sample: float
    forward_compute_per_sample: float
    is_batch_norm: bool = False
    is_residual_join: bool = False

    def __post_init__(self):
        if self.gradient_bytes < 0:
            raise ValidationError('must be >= 0', field='gradient_bytes')
        if self.backward_compute_per_sample < 0:
            raise ValidationError('must be >= 0', field='backward_s_per_sample')
        if self.forward_compute_per_sample < 0:
            raise ValidationError('must be >= 0', field='forward_s_per_sample')
        # Residual connections add no parameters
        if self.is_residual_join and self.gradient_bytes != 0:
            raise ValidationError('residual joins carry no gradients', field='gradient_bytes')

    @property
    def is_sync_point(self) -> bool:
        return self.gradient_bytes > 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'gradient_bytes': self.gradient_bytes,
            'backward_s_per_sample': self.backward_compute_per_sample,
            'forward_s_per_sample': self.forward_compute_per_sample,
            'batch_norm': self.is_batch_norm,
            'residual_join': self.is_residual_join,
        }


@dataclass(frozen=True)
class ModelDescriptor:
    """A DNN workload: ordered layers plus the on-disk size of one training sample"""
    name: str
    layers: Tuple[LayerSpec, ...]
    sample_bytes: int

    def __post_init__(self):
        if not self.name:
            raise ValidationError('must not be empty', field='name')
        if not self.layers:
            raise ValidationError('model must have at least one layer', field='layers')
        if self.sample_bytes < 0:
            raise ValidationError('must be >= 0', field='sample_bytes')
        object.__setattr__(self, 'layers', tuple(self.layers))

    @property
    def forward_per_sample(self) -> float:
        return sum(layer.forward_compute_per_sample for layer in self.layers)

    @property
    def backward_per_sample(self) -> float:
        return sum(layer.backward_compute_per_sample for layer in self.layers)

    @property
    def sync_layers(self) -> Tuple[LayerSpec, ...]:
        return tuple(layer for layer in self.layers if layer.is_sync_point)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'sample_bytes': self.sample_bytes,
            'layers': [layer.to_dict() for layer in self.layers],
        }
