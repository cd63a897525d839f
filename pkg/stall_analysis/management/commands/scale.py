"""
Instance-count sweep of the scaling model.
Usage: python manage.py scale resnet50 p3.16xlarge --n 1..8 [--full-simulation]
"""

from typing import List

from ...domain import CommMode, RunFlags
from ...services import advisor_service, scaling_service
from ...utils.error_handler import ValidationError, command_error
from ...utils.sim_constants import SCALE_N_LIMIT
from ..base import StallsimCommand

COLUMNS = ['n', 'epoch_time_s', 'total_time_s', 'network_stall_s', 'network_stall_pct', 'cost_usd', 'optimal']


def parse_counts(text: str) -> List[int]:
    """``1..8``, ``4`` or ``1,2,4``"""
    try:
        if '..' in text:
            low, high = text.split('..')
            return list(range(int(low), int(high) + 1))
        return [int(part) for part in text.split(',')]
    except ValueError:
        raise ValidationError(f'invalid range "{text}", expected e.g. 1..8', field='n') from None


class Command(StallsimCommand):
    help = 'Predict epoch time, network stall and cost for 1..k instances of one type'

    def add_command_arguments(self, parser):
        parser.add_argument('model', help='Preset name or model JSON file')
        parser.add_argument('instance', help='Instance type from the catalog')
        parser.add_argument('--n', default='1..8', help=f'Instance counts, e.g. 1..8 (max {SCALE_N_LIMIT})')
        self.add_workload_arguments(parser)
        parser.add_argument('--epochs', type=int, default=1, help='Epochs priced in total_time_s/cost_usd')
        parser.add_argument('--full-simulation', action='store_true',
                            help='Simulate multi-instance rings instead of using the analytic model')

    @command_error
    def handle(self, *args, **options):
        config = self.cli_config(options)
        catalog = self.load_catalog(config)
        inst = catalog.get(options['instance'])
        model = self.load_model(config)
        data = self.data_config(options)
        flags = RunFlags(comm_mode=CommMode(options['comm_mode']))
        counts = parse_counts(options['n'])

        rows = advisor_service.sweep(catalog, model, data, counts, inst.name, epochs=options['epochs'],
                                     full_simulation=options['full_simulation'], flags=flags)

        params = advisor_service.single_instance_params(inst, model, data, flags)
        document = {
            'instance': inst.name,
            'model': model.name,
            'batch': data.per_gpu_batch_size,
            'samples': data.total_samples,
            'scaling': params.to_dict(),
            'optimal_instance_count': scaling_service.optimal_instance_count(params, max(counts)),
            'regime': scaling_service.classify_regime(model, params.tau, params.bandwidth).value,
            'assumptions': ['tau is a constant average pairwise latency; time-varying congestion is not modelled'],
            'rows': [row.to_dict() for row in rows],
        }
        self.emit(config, document, [row.to_dict() for row in rows], COLUMNS)
