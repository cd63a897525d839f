"""
Error handling for the simulator.
Domain exceptions are raised by services; the decorators below translate them at
the two outer surfaces (management commands and API views) into exit codes and
HTTP responses, logging each failure with its context.
"""

import functools
from typing import Callable, Any, Dict, Optional
from django.core.management.base import CommandError
from rest_framework.response import Response
from rest_framework import status
from .production_logger import system_logger

EXIT_INPUT_ERROR = 2
EXIT_INFEASIBLE = 3


class StallSimError(Exception):
    """Base class for every simulator error"""
    pass


class ParseError(StallSimError):
    """A catalog or model file could not be read or decoded"""
    pass


class ValidationError(StallSimError):
    """A parsed value violates an invariant; ``field`` names it"""

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(f'{field}: {message}' if field else message)


class DomainError(StallSimError):
    """An operation was called outside its domain"""
    pass


class ConfigError(DomainError):
    """A cluster or STASH configuration is internally inconsistent"""
    pass


class InfeasibleConfigurationError(StallSimError):
    """The requested run cannot fit on the hardware (e.g. GPU memory)"""
    pass


INPUT_ERRORS = (ParseError, ValidationError, DomainError)


class ProductionErrorHandler:
    """
    Maps simulator exceptions to outer-surface failures. Nothing is swallowed:
    every translated exception is logged with the callable and its arguments.
    """

    @staticmethod
    def _context(func: Callable, args: tuple, kwargs: Dict[str, Any]) -> Dict[str, Any]:
        return {
            'function': func.__name__,
            'args': str(args[1:])[:500],
            'kwargs': str(kwargs)[:500],
        }

    @staticmethod
    def handle_command_error(func: Callable) -> Callable:
        """Decorator for management command handlers - exit 2 on bad input, 3 on infeasible runs"""
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except InfeasibleConfigurationError as e:
                system_logger.log_error('INFEASIBLE_CONFIGURATION', str(e),
                                        ProductionErrorHandler._context(func, args, kwargs))
                raise CommandError(str(e), returncode=EXIT_INFEASIBLE) from e
            except INPUT_ERRORS as e:
                system_logger.log_error(type(e).__name__.upper(), str(e),
                                        ProductionErrorHandler._context(func, args, kwargs))
                raise CommandError(str(e), returncode=EXIT_INPUT_ERROR) from e
        return wrapper

    @staticmethod
    def handle_api_error(func: Callable) -> Callable:
        """Decorator for API endpoints - ensures proper error responses"""
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except InfeasibleConfigurationError as e:
                system_logger.log_error('INFEASIBLE_CONFIGURATION', str(e), {'endpoint': func.__name__})
                return Response({
                    'status': 'error',
                    'message': str(e),
                    'error_type': 'INFEASIBLE_CONFIGURATION',
                }, status=status.HTTP_422_UNPROCESSABLE_ENTITY)
            except INPUT_ERRORS as e:
                system_logger.log_error(type(e).__name__.upper(), str(e), {'endpoint': func.__name__})
                return Response({
                    'status': 'error',
                    'message': str(e),
                    'error_type': type(e).__name__,
                }, status=status.HTTP_400_BAD_REQUEST)
            except Exception as e:
                system_logger.log_error('API_ERROR', str(e), {'endpoint': func.__name__}, exception=e)
                return Response({
                    'status': 'error',
                    'message': f'API error: {str(e)}',
                    'error_type': 'API_ERROR',
                    'endpoint': func.__name__
                }, status=status.HTTP_500_INTERNAL_SERVER_ERROR)
        return wrapper

    @staticmethod
    def log_and_continue(error_type: str, context: Dict[str, Any] = None):
        """Log error and continue execution - for non-critical errors"""
        def decorator(func: Callable) -> Callable:
            @functools.wraps(func)
            def wrapper(*args, **kwargs):
                try:
                    return func(*args, **kwargs)
                except Exception as e:
                    system_logger.log_error(
                        error_type=error_type,
                        error_message=str(e),
                        context={
                            'function': func.__name__,
                            'context': context or {},
                        },
                        exception=e
                    )
                    return None
            return wrapper
        return decorator


# Global error handler instance
error_handler = ProductionErrorHandler()

# Convenience decorators
command_error = error_handler.handle_command_error
api_error = error_handler.handle_api_error
log_and_continue = error_handler.log_and_continue
