"""
URL configuration for stallsim_project project.

The simulator API lives under /api/stallsim/; see stall_analysis/urls.py.
"""
from django.urls import path, include

urlpatterns = [
    path('api/stallsim/', include('stall_analysis.urls')),
]
