"""DNN workload descriptors: presets, synthetic generators and architecture transforms."""

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Union

from ..domain import LayerSpec, ModelDescriptor
from ..serializers import ModelFileSerializer, flatten_errors
from ..utils.error_handler import DomainError, ParseError, ValidationError
from ..utils.production_logger import get_logger
from ..utils.sim_constants import BYTES_PER_PARAMETER, IMAGENET_SAMPLE_BYTES, SQUAD_SAMPLE_BYTES

logger = get_logger('MODELS')


@dataclass(frozen=True)
class PresetDefinition:
    parameters: int
    layers: int              # weight layers, each a synchronization point
    compute_ms: float        # forward + backward per sample on the reference GPU
    residual_joins: int = 0
    batch_norm_layers: int = 0
    batch_norm_parameters: int = 0   # part of parameters, spread over the BN layers
    sample_bytes: int = IMAGENET_SAMPLE_BYTES
    dataset: str = 'ImageNet-1k'


# Parameter counts are trainable parameters. compute_ms values are calibration constants for a
# V100-class GPU (gpu_relative_speed 1.0), chosen so compute dominates at batch 128.
PRESETS: Dict[str, PresetDefinition] = {
    'alexnet': PresetDefinition(9_630_000, 8, 0.25),
    'mobilenet_v2': PresetDefinition(3_400_000, 53, 0.35, residual_joins=10),
    'squeezenet': PresetDefinition(730_000, 18, 0.2),
    'shufflenet': PresetDefinition(1_800_000, 50, 0.2),
    'resnet18': PresetDefinition(11_180_000, 18, 0.5, residual_joins=8),
    'resnet50': PresetDefinition(23_590_000, 50, 1.2, residual_joins=16),
    # resnet50 with its 53 batch-norm layers (gamma and beta) as separate sync points
    'resnet50_bn': PresetDefinition(23_643_120, 50, 1.2, residual_joins=16,
                                    batch_norm_layers=53, batch_norm_parameters=53_120),
    'resnet152': PresetDefinition(58_500_000, 152, 3.0, residual_joins=50),
    'vgg11': PresetDefinition(132_800_000, 11, 2.0),
    'vgg16': PresetDefinition(134_700_000, 16, 3.5),
    'bert_large': PresetDefinition(345_000_000, 24, 30.0, sample_bytes=SQUAD_SAMPLE_BYTES, dataset='SQuAD2.0'),
}

FORWARD_SHARE = 1.0 / 3.0


class DnnModelService:
    """Builds and transforms ``ModelDescriptor`` values. Every method returns a new descriptor."""

    def __init__(self):
        self._preset_cache: Dict[str, ModelDescriptor] = {}

    # ---- queries ----

    @staticmethod
    def total_gradient_bytes(model: ModelDescriptor) -> int:
        return sum(layer.gradient_bytes for layer in model.layers)

    @staticmethod
    def sync_layer_count(model: ModelDescriptor) -> int:
        """Layers that synchronize gradients; 0 only for a model without any gradients"""
        return sum(1 for layer in model.layers if layer.is_sync_point)

    # ---- builders ----

    @staticmethod
    def make_synthetic(layer_count: int, total_gradient_bytes: Union[int, float], per_layer_backward: float, *,
                       per_layer_forward: Optional[float] = None, batch_norm_layers: int = 0,
                       residual_joins: int = 0, name: Optional[str] = None,
                       sample_bytes: int = IMAGENET_SAMPLE_BYTES) -> ModelDescriptor:
        """
        Uniform model of ``layer_count`` gradient-carrying layers sharing ``total_gradient_bytes``.

        Bytes are split with integer division, the remainder going one byte each to the first
        layers, so the total is exact. ``batch_norm_layers`` of the layers are marked as BN and
        spread evenly; ``residual_joins`` zero-byte joins are inserted between layers.
        Forward time defaults to half the backward time.
        """
        if layer_count < 1:
            raise DomainError('layer_count must be >= 1')
        if not math.isfinite(total_gradient_bytes) or total_gradient_bytes < 0:
            raise DomainError(f'total_gradient_bytes={total_gradient_bytes} is not a representable byte count')
        if not math.isfinite(per_layer_backward) or per_layer_backward < 0:
            raise DomainError('per_layer_backward must be a finite value >= 0')
        if per_layer_forward is None:
            per_layer_forward = per_layer_backward / 2
        if not math.isfinite(per_layer_forward) or per_layer_forward < 0:
            raise DomainError('per_layer_forward must be a finite value >= 0')
        if not 0 <= batch_norm_layers <= layer_count:
            raise DomainError(f'batch_norm_layers must be within 0..{layer_count}')
        if residual_joins < 0:
            raise DomainError('residual_joins must be >= 0')

        base, remainder = divmod(int(round(total_gradient_bytes)), layer_count)
        bn_positions = {((2 * j + 1) * layer_count) // (2 * batch_norm_layers) for j in range(batch_norm_layers)}
        joins_after = Counter(((j + 1) * layer_count) // (residual_joins + 1) - 1 for j in range(residual_joins))

        layers: List[LayerSpec] = []
        for index in range(layer_count):
            layers.append(LayerSpec(
                gradient_bytes=base + (1 if index < remainder else 0),
                backward_compute_per_sample=per_layer_backward,
                forward_compute_per_sample=per_layer_forward,
                is_batch_norm=index in bn_positions,
            ))
            layers.extend(LayerSpec(0, 0.0, 0.0, is_residual_join=True) for _ in range(joins_after[index]))

        return ModelDescriptor(
            name=name or f'synthetic_{layer_count}x{base}',
            layers=tuple(layers),
            sample_bytes=sample_bytes,
        )

    def get_preset(self, name: str) -> ModelDescriptor:
        key = name.lower()
        if key not in PRESETS:
            raise ValidationError(f'unknown preset "{name}" (known: {", ".join(PRESETS)})', field='model')
        if key not in self._preset_cache:
            definition = PRESETS[key]
            per_sample = definition.compute_ms / 1000.0
            model = self.make_synthetic(
                definition.layers,
                (definition.parameters - definition.batch_norm_parameters) * BYTES_PER_PARAMETER,
                per_sample * (1.0 - FORWARD_SHARE) / definition.layers,
                per_layer_forward=per_sample * FORWARD_SHARE / definition.layers,
                residual_joins=definition.residual_joins,
                name=key,
                sample_bytes=definition.sample_bytes,
            )
            if definition.batch_norm_layers:
                model = self._with_batch_norm(model, definition.batch_norm_layers,
                                              definition.batch_norm_parameters * BYTES_PER_PARAMETER)
            self._preset_cache[key] = model
        return self._preset_cache[key]

    @staticmethod
    def _with_batch_norm(model: ModelDescriptor, count: int, total_bytes: int) -> ModelDescriptor:
        """Insert ``count`` BN layers sharing ``total_bytes`` after the weight layers, spread evenly"""
        base, remainder = divmod(total_bytes, count)
        weights = [index for index, layer in enumerate(model.layers) if not layer.is_residual_join]
        after = Counter(weights[((2 * j + 1) * len(weights)) // (2 * count)] for j in range(count))

        layers: List[LayerSpec] = []
        inserted = 0
        for index, layer in enumerate(model.layers):
            layers.append(layer)
            for _ in range(after[index]):
                layers.append(LayerSpec(base + (1 if inserted < remainder else 0), 0.0, 0.0, is_batch_norm=True))
                inserted += 1
        return ModelDescriptor(model.name, tuple(layers), model.sample_bytes)

    @staticmethod
    def list_presets() -> List[Dict[str, object]]:
        return [
            {
                'name': name,
                'parameters': definition.parameters,
                'gradient_bytes': definition.parameters * BYTES_PER_PARAMETER,
                'layers': definition.layers,
                'residual_joins': definition.residual_joins,
                'batch_norm_layers': definition.batch_norm_layers,
                'compute_ms_per_sample': definition.compute_ms,
                'sample_bytes': definition.sample_bytes,
                'dataset': definition.dataset,
            }
            for name, definition in PRESETS.items()
        ]

    def load_model_file(self, path: Union[str, Path]) -> ModelDescriptor:
        path = Path(path)
        try:
            data = json.loads(path.read_bytes().decode('utf-8'))
        except FileNotFoundError:
            raise ParseError(f'file not found: {path}') from None
        except (OSError, UnicodeDecodeError, ValueError) as e:
            raise ParseError(f'{path}: malformed model JSON ({e})') from e
        if not isinstance(data, dict):
            raise ParseError(f'{path}: model file must be a JSON object')

        serializer = ModelFileSerializer(data=data)
        if not serializer.is_valid():
            field, message = next(flatten_errors(serializer.errors))
            raise ValidationError(message, field=field)

        valid = serializer.validated_data
        return ModelDescriptor(
            name=valid['name'],
            sample_bytes=valid['sample_bytes'],
            layers=tuple(
                LayerSpec(
                    gradient_bytes=layer['gradient_bytes'],
                    backward_compute_per_sample=layer['backward_s_per_sample'],
                    forward_compute_per_sample=layer['forward_s_per_sample'],
                    is_batch_norm=layer['batch_norm'],
                    is_residual_join=layer['residual_join'],
                )
                for layer in valid['layers']
            ),
        )

    def resolve_model(self, name_or_path: str) -> ModelDescriptor:
        """Preset name first, then a model file path"""
        if name_or_path.lower() in PRESETS:
            return self.get_preset(name_or_path)
        if name_or_path.endswith('.json') or Path(name_or_path).exists():
            model = self.load_model_file(name_or_path)
            logger.log_structured('DEBUG', 'MODEL_FILE_LOADED', {'path': name_or_path, 'name': model.name})
            return model
        return self.get_preset(name_or_path)

    # ---- transforms ----

    @staticmethod
    def remove_batch_norm(model: ModelDescriptor) -> ModelDescriptor:
        kept = tuple(layer for layer in model.layers if not layer.is_batch_norm)
        if len(kept) == len(model.layers):
            return model
        if not kept:
            raise DomainError(f'{model.name} consists only of batch-norm layers')
        return ModelDescriptor(f'{model.name}-nobn', kept, model.sample_bytes)

    @staticmethod
    def remove_residual(model: ModelDescriptor) -> ModelDescriptor:
        kept = tuple(layer for layer in model.layers if not layer.is_residual_join)
        if len(kept) == len(model.layers):
            return model
        if not kept:
            raise DomainError(f'{model.name} consists only of residual joins')
        return ModelDescriptor(f'{model.name}-nores', kept, model.sample_bytes)
