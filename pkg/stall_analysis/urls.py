from django.urls import path
from .views import (
    get_catalog, get_presets, run_stash, run_scale, run_recommend, list_profiles
)

urlpatterns = [
    # Reference data
    path('catalog/', get_catalog, name='catalog'),
    path('presets/', get_presets, name='presets'),

    # Analyses
    path('stash/', run_stash, name='stash'),
    path('scale/', run_scale, name='scale'),
    path('recommend/', run_recommend, name='recommend'),
    path('profiles/', list_profiles, name='profiles'),
]
