from rest_framework.decorators import api_view
from rest_framework.response import Response

from ..domain import DataConfig, MultiNodeSplit
from ..models import StallProfile
from ..serializers import (
    RecommendRequestSerializer, ScaleRequestSerializer, StallProfileSerializer, StashRequestSerializer,
    flatten_errors,
)
from ..services import (
    advisor_service, catalog_service, dnn_model_service, scaling_service, stash_service,
)
from ..utils.error_handler import ValidationError, api_error
from ..utils.production_logger import api_logger


def validated(serializer_class, request) -> dict:
    serializer = serializer_class(data=request.data)
    if not serializer.is_valid():
        field, message = next(flatten_errors(serializer.errors))
        raise ValidationError(message, field=field)
    return serializer.validated_data


@api_view(['POST'])
@api_error
def run_stash(request):
    """STASH reports for one instance type, one per batch size"""
    params = validated(StashRequestSerializer, request)
    inst = catalog_service.load_catalog().get(params['instance'])
    model = dnn_model_service.get_preset(params['model'])
    batches = params.get('batches') or [params['batch']]
    for batch in batches:
        stash_service.check_memory_feasibility(inst, model, batch)

    if params['skip_multi_node']:
        split = None
    elif params['multi_node']:
        split = MultiNodeSplit.parse(params['multi_node'])
    else:
        split = stash_service.default_split(inst)

    reports = stash_service.run_batches(inst, model, params['samples'], batches, split)
    if params['save']:
        StallProfile.objects.bulk_create([StallProfile.from_report(report) for report in reports])

    api_logger.log_structured('INFO', 'STASH_REQUEST', {
        'instance': inst.name, 'model': model.name, 'batches': batches, 'saved': params['save'],
    })
    return Response({
        'status': 'success',
        'reports': [report.to_dict() for report in reports],
    })


@api_view(['POST'])
@api_error
def run_scale(request):
    """Instance-count sweep for one instance type"""
    params = validated(ScaleRequestSerializer, request)
    catalog = catalog_service.load_catalog()
    inst = catalog.get(params['instance'])
    model = dnn_model_service.get_preset(params['model'])
    data = DataConfig(params['samples'], params['batch'])

    rows = advisor_service.sweep(catalog, model, data, range(params['n_min'], params['n_max'] + 1), inst.name,
                                 full_simulation=params['full_simulation'])
    scaling = advisor_service.single_instance_params(inst, model, data)
    return Response({
        'status': 'success',
        'scaling': scaling.to_dict(),
        'optimal_instance_count': scaling_service.optimal_instance_count(scaling, params['n_max']),
        'regime': scaling_service.classify_regime(model, scaling.tau, scaling.bandwidth).value,
        'rows': [row.to_dict() for row in rows],
    })


@api_view(['POST'])
@api_error
def run_recommend(request):
    """Cheapest cluster under a training-time budget"""
    params = validated(RecommendRequestSerializer, request)
    recommendation = advisor_service.recommend(
        catalog_service.load_catalog(),
        dnn_model_service.get_preset(params['model']),
        DataConfig(params['samples'], params['batch']),
        params['epochs'], params['budget'], params['n_max'],
        full_simulation=params['full_simulation'],
    )
    return Response({
        'status': 'success',
        'recommendation': recommendation.to_dict(),
    })


@api_view(['GET'])
@api_error
def list_profiles(request):
    """Saved stall profiles, newest first; filter with ?instance= and ?model="""
    profiles = StallProfile.objects.all()
    if request.GET.get('instance'):
        profiles = profiles.filter(instance_name=request.GET['instance'])
    if request.GET.get('model'):
        profiles = profiles.filter(model_name=request.GET['model'])
    return Response({
        'status': 'success',
        'profiles': StallProfileSerializer(profiles[:100], many=True).data,
    })
