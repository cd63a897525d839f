"""
Simulate training epochs on one instance type.
Usage: python manage.py simulate p3.16xlarge resnet50 --batch 32 [--nodes 2] [--epochs 5]
"""

from ...domain import ClusterConfig, CommMode, RunFlags
from ...services import simulation_service
from ...utils.error_handler import command_error
from ..base import StallsimCommand

COLUMNS = ['epoch', 'total', 'fetch', 'prep', 'compute', 'comm_interconnect_exposed',
           'comm_network_exposed', 'iterations']


class Command(StallsimCommand):
    help = 'Simulate epoch time decomposed into fetch, prep, compute and exposed communication'

    def add_command_arguments(self, parser):
        parser.add_argument('instance', help='Instance type from the catalog')
        parser.add_argument('model', help='Preset name or model JSON file')
        self.add_workload_arguments(parser)
        parser.add_argument('--nodes', type=int, default=1, help='Instances joined in a ring (default: 1)')
        parser.add_argument('--gpus', type=int, default=None, help='GPUs used per instance (default: all)')
        parser.add_argument('--cached-fraction', type=float, default=0.0, help='Share of samples cached in DRAM')
        parser.add_argument('--synthetic', action='store_true', help='Synthetic data already in GPU memory')
        parser.add_argument('--cold-cache', action='store_true', help='Force every sample to be read from disk')
        parser.add_argument('--single-gpu', action='store_true', help='Single-GPU baseline (implies --synthetic)')
        parser.add_argument('--epochs', type=int, default=1, help='Number of epochs (default: 1)')
        parser.add_argument('--first-epoch-cold', action='store_true',
                            help='First epoch reads from disk, later ones from the DRAM cache')

    @command_error
    def handle(self, *args, **options):
        config = self.cli_config(options)
        inst = self.load_catalog(config).get(options['instance'])
        model = self.load_model(config)

        cluster = ClusterConfig.homogeneous(inst, options['nodes'], options['gpus'])
        flags = RunFlags(
            synthetic_data=options['synthetic'] or options['single_gpu'],
            single_gpu_baseline=options['single_gpu'],
            cold_cache=options['cold_cache'],
            comm_mode=CommMode(options['comm_mode']),
        )
        training = simulation_service.simulate_training(
            cluster, model, self.data_config(options), flags,
            epochs=options['epochs'], first_epoch_cold=options['first_epoch_cold'],
        )

        document = {
            'cluster': cluster.to_dict(),
            'model': model.name,
            'batch': options['batch'],
            'samples': options['samples'],
            **training.to_dict(),
        }
        rows = [{'epoch': index + 1, **timing.to_dict()} for index, timing in enumerate(training.epochs)]
        self.emit(config, document, rows, COLUMNS)
