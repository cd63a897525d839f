import numpy as np
from django.test import SimpleTestCase

from stall_analysis.domain import ClusterConfig, DataConfig, Regime, RunFlags, ScalingParams
from stall_analysis.services import DnnModelService, ScalingService, SimulationService
from stall_analysis.utils.error_handler import DomainError

from .helpers import make_instance


def brute_force_optimum(service, params, n_max):
    return min(range(1, n_max + 1), key=lambda n: service.scaling_time(params, n))


class ScalingModelTest(SimpleTestCase):
    def setUp(self):
        self.service = ScalingService()

    def test_single_instance_has_no_network_stall(self):
        params = ScalingParams(t1=100.0, tau=4.0, bandwidth=1e9, gradient_bytes=1e9)
        self.assertEqual(self.service.network_stall_n(params, 1), 0.0)
        self.assertEqual(self.service.scaling_time(params, 1), 100.0)

    def test_network_stall_examples(self):
        self.assertEqual(self.service.network_stall_n(ScalingParams(100.0, 4.0, 1e9, 0.0), 5), 16.0)
        self.assertEqual(self.service.network_stall_n(ScalingParams(100.0, 0.0, 1e9, 1e9), 4), 1.5)
        with self.assertRaises(DomainError):
            self.service.network_stall_n(ScalingParams(100.0, 4.0, 1e9, 0.0), 0)

    def test_interior_optimum(self):
        params = ScalingParams(t1=100.0, tau=4.0, bandwidth=1e9, gradient_bytes=0.0)
        self.assertAlmostEqual(self.service.scaling_time(params, 4), 37.0)
        self.assertAlmostEqual(self.service.scaling_time(params, 5), 36.0)
        self.assertAlmostEqual(self.service.scaling_time(params, 6), 100 / 6 + 20)
        self.assertEqual(self.service.optimal_instance_count(params, 20), 5)
        self.assertEqual(brute_force_optimum(self.service, params, 20), 5)
        self.assertEqual(self.service.optimal_instance_count(params, 3), 3)

    def test_expensive_latency_keeps_one_instance(self):
        params = ScalingParams(t1=1.0, tau=4.0, bandwidth=1e9, gradient_bytes=0.0)
        self.assertEqual(self.service.optimal_instance_count(params, 16), 1)

    def test_matches_exhaustive_search(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            params = ScalingParams(
                t1=float(rng.uniform(1, 1000)),
                tau=float(10 ** rng.uniform(-3, 1)),
                bandwidth=float(10 ** rng.uniform(8, 11)),
                gradient_bytes=float(10 ** rng.uniform(3, 10)),
            )
            n_max = int(rng.integers(1, 51))
            self.assertEqual(self.service.optimal_instance_count(params, n_max),
                             brute_force_optimum(self.service, params, n_max))

    def test_convex_when_compute_dominates_bandwidth(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            t1 = float(rng.uniform(1, 1000))
            bandwidth = float(10 ** rng.uniform(8, 11))
            params = ScalingParams(t1, float(rng.uniform(1e-3, 10)), bandwidth,
                                   float(rng.uniform(0, 1)) * t1 * bandwidth / 2)
            times = [self.service.scaling_time(params, n) for n in range(1, 40)]
            for left, mid, right in zip(times, times[1:], times[2:]):
                self.assertGreaterEqual(left - 2 * mid + right, -1e-9 * mid)

    def test_stall_is_nondecreasing_in_n(self):
        params = ScalingParams(t1=50.0, tau=0.01, bandwidth=1e9, gradient_bytes=4e8)
        stalls = [self.service.network_stall_n(params, n) for n in range(1, 65)]
        self.assertEqual(stalls, sorted(stalls))

    def test_scale_invariance(self):
        base = ScalingParams(t1=100.0, tau=4.0, bandwidth=1e9, gradient_bytes=0.0)
        for factor in (1e-3, 0.5, 7.0, 1e4):
            scaled = ScalingParams(100.0 * factor, 4.0 * factor, 1e9, 0.0)
            self.assertEqual(self.service.optimal_instance_count(scaled, 30),
                             self.service.optimal_instance_count(base, 30))

    def test_latency_term_dominates_at_scale(self):
        params = ScalingParams(t1=100.0, tau=0.01, bandwidth=1e9, gradient_bytes=1e8)
        n = 10 ** 6
        self.assertAlmostEqual(self.service.scaling_time(params, n) / (n * params.tau), 1.0, places=3)

    def test_zero_latency_warns_and_picks_an_end(self):
        with self.assertLogs('stall_analysis.scaling', level='WARNING'):
            self.assertEqual(self.service.optimal_instance_count(ScalingParams(100.0, 0.0, 1e9, 1e9), 12), 12)
        with self.assertLogs('stall_analysis.scaling', level='WARNING'):
            self.assertEqual(self.service.optimal_instance_count(ScalingParams(1.0, 0.0, 1e9, 1e9), 12), 1)

    def test_invalid_inputs(self):
        with self.assertRaises(DomainError):
            self.service.optimal_instance_count(ScalingParams(100.0, 4.0, 1e9, 0.0), 0)
        with self.assertRaises(DomainError):
            ScalingParams(t1=0.0, tau=1.0, bandwidth=1e9, gradient_bytes=0.0)
        with self.assertRaises(DomainError):
            ScalingParams(t1=1.0, tau=-1.0, bandwidth=1e9, gradient_bytes=0.0)
        with self.assertRaises(DomainError):
            ScalingParams(t1=1.0, tau=1.0, bandwidth=0.0, gradient_bytes=0.0)


class RegimeTest(SimpleTestCase):
    def setUp(self):
        self.service = ScalingService()
        self.models = DnnModelService()

    def test_regimes(self):
        resnet152 = self.models.get_preset('resnet152')
        # 234e6 / 152 / 12.5e9 ~ 0.12 ms per layer
        self.assertEqual(self.service.classify_regime(resnet152, 1e-3, 12.5e9), Regime.MIXED)
        self.assertEqual(self.service.classify_regime(resnet152, 1e-2, 12.5e9), Regime.LATENCY_DOMINATED)
        self.assertEqual(self.service.classify_regime(resnet152, 0.0, 12.5e9), Regime.BANDWIDTH_DOMINATED)

    def test_model_without_gradients_is_latency_dominated(self):
        model = self.models.make_synthetic(4, 0, 1e-4)
        self.assertEqual(self.service.classify_regime(model, 0.0, 1e9), Regime.LATENCY_DOMINATED)

    def test_custom_factor(self):
        resnet152 = self.models.get_preset('resnet152')
        self.assertEqual(ScalingService(regime_factor=2).classify_regime(resnet152, 1e-3, 12.5e9),
                         Regime.LATENCY_DOMINATED)


class SimulatorAgreementTest(SimpleTestCase):
    """Two-node simulation and the closed form agree when backward hides nothing"""

    def test_two_nodes_within_five_percent(self):
        simulation = SimulationService()
        scaling = ScalingService()
        models = DnnModelService()
        inst = make_instance(gpu_count=1, ic_bandwidth=1e12, ic_latency=0.0,
                             network_bandwidth=1.25e9, network_latency=1e-3)
        model = models.make_synthetic(1, 2.5e8, 0.0, per_layer_forward=2e-3)
        flags = RunFlags(synthetic_data=True)
        for batch in (8, 32, 128):
            t1 = simulation.simulate_epoch(ClusterConfig.single_node(inst), model,
                                           DataConfig(2 * batch, batch), flags).total
            simulated = simulation.simulate_epoch(ClusterConfig.homogeneous(inst, 2), model,
                                                  DataConfig(2 * batch, batch), flags)
            self.assertEqual(simulated.iterations, 1)
            predicted = scaling.scaling_time(ScalingParams(t1, inst.network_latency, inst.network_bandwidth,
                                                           2.5e8), 2)
            self.assertLess(abs(simulated.total - predicted) / predicted, 0.05)
