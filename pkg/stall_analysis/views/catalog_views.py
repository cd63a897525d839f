from rest_framework.decorators import api_view
from rest_framework.response import Response

from ..services import catalog_service, dnn_model_service
from ..utils.error_handler import api_error
from ..utils.production_logger import api_logger


@api_view(['GET'])
@api_error
def get_catalog(request):
    """Instance types of the configured catalog"""
    catalog = catalog_service.load_catalog()
    response = {
        'status': 'success',
        'instances': [inst.to_dict() for inst in catalog],
    }
    api_logger.log_structured('DEBUG', 'CATALOG_REQUEST', {'instances': len(catalog)})
    return Response(response)


@api_view(['GET'])
@api_error
def get_presets(request):
    """Built-in model presets"""
    return Response({
        'status': 'success',
        'presets': dnn_model_service.list_presets(),
    })
