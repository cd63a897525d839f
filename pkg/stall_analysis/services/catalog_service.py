"""Instance catalog loading and interconnect bandwidth-sharing rules."""

import json
from pathlib import Path
from typing import Dict, Any, Union

from django.conf import settings

from ..domain import InterconnectKind, InterconnectSpec, InstanceSpec, Catalog
from ..serializers import CatalogFileSerializer, flatten_errors
from ..utils.error_handler import ParseError, ValidationError, DomainError
from ..utils.production_logger import get_logger
from ..utils.sim_constants import (
    GBPS_TO_BYTES_PER_SECOND, GB_TO_BYTES, MBPS_TO_BYTES_PER_SECOND, MICROSECOND,
)

logger = get_logger('CATALOG')


class CatalogService:
    """Reads catalog files into validated ``Catalog`` values"""

    @staticmethod
    def default_path() -> str:
        return str(settings.STALLSIM_CATALOG)

    def load_catalog(self, path: Union[str, Path, None] = None) -> Catalog:
        path = Path(path or self.default_path())
        try:
            raw = path.read_bytes()
        except FileNotFoundError:
            raise ParseError(f'file not found: {path}') from None
        except OSError as e:
            raise ParseError(f'cannot read {path}: {e}') from e

        try:
            data = json.loads(raw.decode('utf-8'))
        except (UnicodeDecodeError, ValueError) as e:
            raise ParseError(f'{path}: malformed catalog JSON ({e})') from e

        catalog = self.catalog_from_dict(data)
        logger.log_structured('DEBUG', 'CATALOG_LOADED', {
            'path': str(path),
            'instances': list(catalog.names()),
        })
        return catalog

    def catalog_from_dict(self, data: Any) -> Catalog:
        if not isinstance(data, dict):
            raise ParseError('catalog must be a JSON object with an "instances" list')

        serializer = CatalogFileSerializer(data=data)
        if not serializer.is_valid():
            field, message = next(flatten_errors(serializer.errors))
            raise ValidationError(message, field=field)

        return Catalog(tuple(self._instance_from_file(entry)
                             for entry in serializer.validated_data['instances']))

    @staticmethod
    def _instance_from_file(entry: Dict[str, Any]) -> InstanceSpec:
        ic = entry['interconnect']
        return InstanceSpec(
            name=entry['name'],
            gpu_count=entry['gpu_count'],
            vcpus=entry['vcpus'],
            gpu_memory=int(round(entry['gpu_memory_gb'] * GB_TO_BYTES)),
            main_memory=int(round(entry['main_memory_gb'] * GB_TO_BYTES)),
            interconnect=InterconnectSpec(
                kind=InterconnectKind(ic['kind']),
                aggregate_bandwidth=ic['aggregate_bandwidth_gbps'] * GBPS_TO_BYTES_PER_SECOND,
                per_link_latency=ic['latency_us'] * MICROSECOND,
                slicing_penalty=ic['slicing_penalty'],
            ),
            network_bandwidth=entry['network_bandwidth_gbps'] * GBPS_TO_BYTES_PER_SECOND,
            network_latency=entry['network_latency_us'] * MICROSECOND,
            disk_throughput=entry['disk_throughput_mbps'] * MBPS_TO_BYTES_PER_SECOND,
            cpu_prep_throughput=entry['cpu_prep_throughput_sps'],
            price_per_hour=entry['price_per_hour_usd'],
            gpu_relative_speed=entry['gpu_relative_speed'],
        )

    @staticmethod
    def effective_per_gpu_bandwidth(inst: InstanceSpec, active_gpus: int) -> float:
        """
        Per-GPU interconnect bandwidth when ``active_gpus`` GPUs of ``inst`` communicate at once.

        SharedBus (PCIe) divides the aggregate among active GPUs; a Crossbar (NVLink) keeps full
        bandwidth unless only part of it is allocated, then the slicing penalty applies; a Switch
        never shares.
        """
        if not 1 <= active_gpus <= inst.gpu_count:
            raise DomainError(f'active_gpus={active_gpus} outside 1..{inst.gpu_count} for {inst.name}')

        ic = inst.interconnect
        if ic.kind == InterconnectKind.SHARED_BUS:
            return ic.aggregate_bandwidth / active_gpus
        if ic.kind == InterconnectKind.CROSSBAR:
            if active_gpus < inst.gpu_count:
                return ic.aggregate_bandwidth * ic.slicing_penalty
            return ic.aggregate_bandwidth
        return ic.aggregate_bandwidth
