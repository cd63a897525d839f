"""Builders shared by the simulator tests."""

import os
from pathlib import Path

from stall_analysis.domain import ClusterConfig, InstanceSpec, InterconnectKind, InterconnectSpec, ScalingParams
from stall_analysis.services import DnnModelService

FIXTURES = Path(__file__).resolve().parent / 'fixtures'


def fixture(name: str) -> str:
    return str(FIXTURES / name)


def make_instance(name='toy.4x', gpu_count=4, kind=InterconnectKind.SHARED_BUS, ic_bandwidth=16e9,
                  ic_latency=5e-6, slicing_penalty=1.0, network_bandwidth=1.25e9, network_latency=30e-6,
                  disk_throughput=250e6, cpu_prep_throughput=100.0, vcpus=None, price_per_hour=4.0,
                  gpu_relative_speed=1.0, gpu_memory=None, main_memory=64 * 10 ** 9) -> InstanceSpec:
    return InstanceSpec(
        name=name,
        gpu_count=gpu_count,
        vcpus=vcpus or 4 * gpu_count,
        gpu_memory=gpu_memory or 16 * 10 ** 9 * gpu_count,
        main_memory=main_memory,
        interconnect=InterconnectSpec(InterconnectKind(kind), ic_bandwidth, ic_latency, slicing_penalty),
        network_bandwidth=network_bandwidth,
        network_latency=network_latency,
        disk_throughput=disk_throughput,
        cpu_prep_throughput=cpu_prep_throughput,
        price_per_hour=price_per_hour,
        gpu_relative_speed=gpu_relative_speed,
    )


def random_instance(rng, name: str, gpu_count=None) -> InstanceSpec:
    """A plausible instance type drawn from ``rng`` (a numpy Generator)"""
    kind = list(InterconnectKind)[int(rng.integers(0, 3))]
    return make_instance(
        name=name,
        gpu_count=gpu_count or int(rng.choice([1, 2, 4, 8])),
        kind=kind,
        ic_bandwidth=float(rng.uniform(4e9, 300e9)),
        ic_latency=float(rng.uniform(0, 1e-5)),
        slicing_penalty=float(rng.uniform(0.25, 1.0)),
        network_bandwidth=float(rng.uniform(0.5e9, 12.5e9)),
        network_latency=float(rng.uniform(1e-6, 1e-3)),
        disk_throughput=float(rng.uniform(50e6, 2e9)),
        cpu_prep_throughput=float(rng.uniform(20, 300)),
        price_per_hour=float(rng.uniform(0.5, 40)),
        gpu_relative_speed=float(rng.uniform(0.25, 2.0)),
    )


def brute_force(simulation, scaling, catalog, model, data, epochs, budget, n_max):
    """Enumerate every (type, count) pair and pick by the advisor's rules"""
    gradient_bytes = DnnModelService.total_gradient_bytes(model)
    candidates = []
    for index, inst in enumerate(catalog):
        t1 = None
        for count in range(1, n_max + 1):
            if data.per_gpu_batch_size * inst.gpu_count * count > data.total_samples:
                continue
            if t1 is None:
                t1 = simulation.simulate_epoch(ClusterConfig.single_node(inst), model, data).total
            if count == 1:
                epoch = t1
            else:
                params = ScalingParams(t1, inst.network_latency, inst.network_bandwidth, gradient_bytes)
                epoch = scaling.scaling_time(params, count)
            total = epochs * epoch
            cost = total / 3600.0 * (inst.price_per_hour * count)
            candidates.append((index, inst, count, total, cost, total < budget))
    feasible = [c for c in candidates if c[5]]
    if feasible:
        best = min(feasible, key=lambda c: (c[4], c[2], c[0]))
    else:
        best = min(candidates, key=lambda c: (c[3], c[4], c[2], c[0]))
    return best, len(candidates)


def simulate_every_pair(simulation, catalog, model, data, epochs, budget, n_max):
    """Simulate each (type, count) cluster directly and pick by cost, count and catalog order"""
    candidates = []
    for index, inst in enumerate(catalog):
        for count in range(1, n_max + 1):
            if data.per_gpu_batch_size * inst.gpu_count * count > data.total_samples:
                continue
            epoch = simulation.simulate_epoch(ClusterConfig.homogeneous(inst, count), model, data).total
            total = epochs * epoch
            cost = total / 3600.0 * (inst.price_per_hour * count)
            candidates.append((index, inst, count, total, cost, total < budget))
    feasible = [c for c in candidates if c[5]]
    if feasible:
        best = min(feasible, key=lambda c: (c[4], c[2], c[0]))
    else:
        best = min(candidates, key=lambda c: (c[3], c[4], c[2], c[0]))
    return best, len(candidates)


def assert_matches_frozen(test, name: str, text: str):
    """
    Compare ``text`` with the frozen output ``fixtures/<name>``. A missing file is recorded from
    this run; set STALLSIM_REFREEZE=1 to record it again after an intended change.
    """
    path = FIXTURES / name
    if os.getenv('STALLSIM_REFREEZE') == '1' or not path.exists():
        path.write_text(text, encoding='utf-8')
    test.assertEqual(text, path.read_text(encoding='utf-8'))
