"""
STASH stall profile of one instance type.
Usage: python manage.py stash p3.16xlarge resnet50 --batch 32 --batch 64 [--multi-node 2x4] [--save]
"""

from ...domain import CommMode, MultiNodeSplit, RunFlags
from ...models import StallProfile
from ...services import stash_service
from ...utils.error_handler import command_error, log_and_continue
from ...utils.sim_constants import DEFAULT_BATCH_SIZE
from ..base import StallsimCommand

COLUMNS = ['instance', 'model', 'batch', 't1', 't2', 't3', 't4', 't5', 'ic_stall_s', 'nw_stall_s',
           'prep_s', 'fetch_s', 'ic_pct', 'nw_pct', 'cost_usd']


@log_and_continue('PROFILE_SAVE_FAILED')
def save_profiles(reports):
    return StallProfile.objects.bulk_create([StallProfile.from_report(report) for report in reports])


class Command(StallsimCommand):
    help = 'Attribute epoch time to interconnect, network, prep and fetch stalls by differencing five runs'

    def add_command_arguments(self, parser):
        parser.add_argument('instance', help='Instance type from the catalog')
        parser.add_argument('model', help='Preset name or model JSON file')
        self.add_workload_arguments(parser, batch_action='append')
        parser.add_argument('--multi-node', default=None,
                            help='Multi-node split NODESxGPUS (default: two nodes with half the GPUs)')
        parser.add_argument('--no-multi-node', action='store_true', help='Skip the multi-node run')
        parser.add_argument('--save', action='store_true', help='Store the reports as stall profiles')

    @command_error
    def handle(self, *args, **options):
        config = self.cli_config(options)
        inst = self.load_catalog(config).get(options['instance'])
        model = self.load_model(config)
        batches = options['batch'] or [DEFAULT_BATCH_SIZE]

        for batch in batches:
            stash_service.check_memory_feasibility(inst, model, batch)

        if options['no_multi_node']:
            split = None
        elif options['multi_node']:
            split = MultiNodeSplit.parse(options['multi_node'])
        else:
            split = stash_service.default_split(inst)

        flags = RunFlags(comm_mode=CommMode(options['comm_mode']))
        reports = stash_service.run_batches(inst, model, options['samples'], batches, split, flags)

        if options['save']:
            if save_profiles(reports) is None:
                self.warn('could not save stall profiles; see the error log')
            else:
                self.stderr.write(f'saved {len(reports)} stall profile(s)')

        self.emit(config, self._document(reports), [report.to_row() for report in reports], COLUMNS)

    @staticmethod
    def _document(reports: list):
        if len(reports) == 1:
            return reports[0].to_dict()
        return [report.to_dict() for report in reports]
