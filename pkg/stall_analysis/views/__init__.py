from .catalog_views import *
from .analysis_views import *

__all__ = [
    # Reference data
    'get_catalog',
    'get_presets',
    # Analyses
    'run_stash',
    'run_scale',
    'run_recommend',
    'list_profiles',
]
