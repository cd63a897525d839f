from .catalog_service import CatalogService
from .dnn_model_service import DnnModelService, PRESETS
from .simulation_service import SimulationService, quantize
from .scaling_service import ScalingService
from .stash_service import StashService
from .advisor_service import AdvisorService, Candidate

# Create shared instances
catalog_service = CatalogService()
dnn_model_service = DnnModelService()
simulation_service = SimulationService(catalog_service)
scaling_service = ScalingService()
stash_service = StashService(simulation_service, dnn_model_service)
advisor_service = AdvisorService(simulation_service, scaling_service, dnn_model_service)

__all__ = [
    'catalog_service',
    'dnn_model_service',
    'simulation_service',
    'scaling_service',
    'stash_service',
    'advisor_service',
    'CatalogService',
    'DnnModelService',
    'SimulationService',
    'ScalingService',
    'StashService',
    'AdvisorService',
    'Candidate',
    'PRESETS',
    'quantize',
]
