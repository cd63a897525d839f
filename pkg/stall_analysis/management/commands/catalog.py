"""
Validate or list an instance catalog.
Usage: python manage.py catalog validate [PATH]
       python manage.py catalog show [--catalog PATH]
"""

from ...services import catalog_service
from ...utils.error_handler import command_error
from ...utils.sim_constants import GBPS_TO_BYTES_PER_SECOND, GB_TO_BYTES, MICROSECOND
from ..base import StallsimCommand

COLUMNS = ['name', 'gpu_count', 'vcpus', 'gpu_memory_gb', 'interconnect', 'interconnect_gbps',
           'network_gbps', 'network_latency_us', 'price_per_hour_usd']


class Command(StallsimCommand):
    help = 'Validate a catalog file (exit 0 when valid, 2 with a field-level message otherwise) or list its instances'

    def add_command_arguments(self, parser):
        parser.add_argument('action', choices=['validate', 'show'])
        parser.add_argument('path', nargs='?', default=None, help='Catalog file (default: --catalog)')

    @command_error
    def handle(self, *args, **options):
        config = self.cli_config(options)
        path = options['path'] or config.catalog_path
        catalog = catalog_service.load_catalog(path)

        rows = [
            {
                'name': inst.name,
                'gpu_count': inst.gpu_count,
                'vcpus': inst.vcpus,
                'gpu_memory_gb': inst.gpu_memory / GB_TO_BYTES,
                'interconnect': inst.interconnect.kind.value,
                'interconnect_gbps': inst.interconnect.aggregate_bandwidth / GBPS_TO_BYTES_PER_SECOND,
                'network_gbps': inst.network_bandwidth / GBPS_TO_BYTES_PER_SECOND,
                'network_latency_us': inst.network_latency / MICROSECOND,
                'price_per_hour_usd': inst.price_per_hour,
            }
            for inst in catalog
        ]
        if options['action'] == 'validate':
            document = {'valid': True, 'path': str(path), 'instances': list(catalog.names())}
        else:
            document = {'path': str(path), 'instances': [inst.to_dict() for inst in catalog]}
        self.emit(config, document, rows, COLUMNS)
