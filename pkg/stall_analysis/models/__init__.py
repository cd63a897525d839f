from .stall_profile import StallProfile

__all__ = [
    'StallProfile',
]
