"""
Shared plumbing for the simulator management commands.
Usage: python manage.py <command> [--catalog PATH] [--format json|csv|pretty] ...
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from django.core.management.base import BaseCommand

from ..domain import Catalog, CommMode, DataConfig, ModelDescriptor
from ..services import catalog_service, dnn_model_service
from ..utils.report_format import OutputFormat, render
from ..utils.sim_constants import DEFAULT_BATCH_SIZE, DEFAULT_TOTAL_SAMPLES


@dataclass(frozen=True)
class CliConfig:
    """Options every command shares. Runs are deterministic, so there is no seed."""
    catalog_path: str
    output_format: OutputFormat
    model: Optional[str] = None


class StallsimCommand(BaseCommand):
    """Base for commands that read the catalog and print json, csv or a pretty table"""

    def add_arguments(self, parser):
        parser.add_argument(
            '--catalog',
            default=None,
            help='Catalog JSON file (default: $STALLSIM_CATALOG or catalog/aws_p.json)'
        )
        parser.add_argument(
            '--format',
            choices=[fmt.value for fmt in OutputFormat],
            default=None,
            help='Output format (default: pretty on a terminal, json otherwise)'
        )
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    @staticmethod
    def add_workload_arguments(parser, batch_action: str = 'store'):
        parser.add_argument(
            '--batch',
            type=int,
            action=batch_action,
            default=None if batch_action == 'append' else DEFAULT_BATCH_SIZE,
            help=f'Per-GPU mini-batch size (default: {DEFAULT_BATCH_SIZE})'
        )
        parser.add_argument(
            '--samples',
            type=int,
            default=DEFAULT_TOTAL_SAMPLES,
            help=f'Samples per epoch (default: {DEFAULT_TOTAL_SAMPLES})'
        )
        parser.add_argument(
            '--comm-mode',
            choices=[mode.value for mode in CommMode],
            default=CommMode.PAPER_SIMPLE.value,
            help='Per-layer communication model (default: PaperSimple)'
        )

    def cli_config(self, options: Dict[str, Any]) -> CliConfig:
        fmt = options.get('format')
        if fmt is None:
            fmt = OutputFormat.PRETTY if self.stdout.isatty() else OutputFormat.JSON
        return CliConfig(
            catalog_path=options.get('catalog') or catalog_service.default_path(),
            output_format=OutputFormat(fmt),
            model=options.get('model'),
        )

    @staticmethod
    def load_catalog(config: CliConfig) -> Catalog:
        return catalog_service.load_catalog(config.catalog_path)

    @staticmethod
    def load_model(config: CliConfig) -> ModelDescriptor:
        return dnn_model_service.resolve_model(config.model)

    @staticmethod
    def data_config(options: Dict[str, Any], batch: Optional[int] = None) -> DataConfig:
        return DataConfig(
            total_samples=options['samples'],
            per_gpu_batch_size=batch if batch is not None else options['batch'],
            cached_fraction=options.get('cached_fraction') or 0.0,
        )

    def emit(self, config: CliConfig, document: Any, rows: List[Dict[str, Any]],
             columns: Optional[Sequence[str]] = None):
        self.stdout.write(render(config.output_format, document, rows, columns), ending='')

    def warn(self, message: str):
        self.stderr.write(f'warning: {message}')
