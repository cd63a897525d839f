"""
Cheapest cluster that finishes training within a time budget.
Usage: python manage.py recommend resnet50 --epochs 90 --budget 86400 [--n-max 8]
"""

from ...domain import CommMode, RunFlags
from ...services import advisor_service
from ...utils.error_handler import command_error
from ...utils.sim_constants import ADVISOR_WORKERS, SCALE_N_LIMIT
from ..base import StallsimCommand

COLUMNS = ['instance', 'count', 'epoch_time_s', 'total_time_s', 'cost_usd', 'feasible']


class Command(StallsimCommand):
    help = 'Recommend the cheapest homogeneous cluster whose predicted training time is under the budget'

    def add_command_arguments(self, parser):
        parser.add_argument('model', help='Preset name or model JSON file')
        parser.add_argument('--epochs', type=int, required=True, help='Training epochs')
        parser.add_argument('--budget', type=float, required=True, help='Training time budget in seconds')
        parser.add_argument('--n-max', type=int, default=8, help=f'Largest instance count (max {SCALE_N_LIMIT})')
        self.add_workload_arguments(parser)
        parser.add_argument('--full-simulation', action='store_true',
                            help='Simulate multi-instance rings instead of using the analytic model')
        parser.add_argument('--workers', type=int, default=ADVISOR_WORKERS, help='Enumeration threads')

    @command_error
    def handle(self, *args, **options):
        config = self.cli_config(options)
        catalog = self.load_catalog(config)
        model = self.load_model(config)

        recommendation = advisor_service.recommend(
            catalog, model, self.data_config(options), options['epochs'], options['budget'], options['n_max'],
            full_simulation=options['full_simulation'],
            flags=RunFlags(comm_mode=CommMode(options['comm_mode'])),
            workers=options['workers'],
        )
        if not recommendation.feasible:
            self.warn(
                f'no configuration finishes {options["epochs"]} epochs within {options["budget"]} s; '
                f'returning the fastest ({recommendation.predicted_training_time:.1f} s)'
            )

        (inst, count), = recommendation.config.nodes
        row = {
            'instance': inst.name,
            'count': count,
            'epoch_time_s': recommendation.predicted_epoch_time,
            'total_time_s': recommendation.predicted_training_time,
            'cost_usd': recommendation.predicted_cost,
            'feasible': recommendation.feasible,
        }
        self.emit(config, {'model': model.name, **recommendation.to_dict()}, [row], COLUMNS)
