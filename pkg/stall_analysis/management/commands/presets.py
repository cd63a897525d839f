"""
List the built-in model presets.
Usage: python manage.py presets list
"""

from ...services import dnn_model_service
from ...utils.error_handler import command_error
from ..base import StallsimCommand

COLUMNS = ['name', 'parameters', 'gradient_bytes', 'layers', 'residual_joins', 'batch_norm_layers',
           'compute_ms_per_sample', 'sample_bytes', 'dataset']


class Command(StallsimCommand):
    help = 'List DNN model presets with parameter counts and layer structure'

    def add_command_arguments(self, parser):
        parser.add_argument('action', nargs='?', choices=['list'], default='list')

    @command_error
    def handle(self, *args, **options):
        config = self.cli_config(options)
        presets = dnn_model_service.list_presets()
        self.emit(config, {'presets': presets}, presets, COLUMNS)
