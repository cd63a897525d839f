from django.db import models
from django.utils import timezone


class StallProfile(models.Model):
    """A saved STASH report; ``report`` holds the full JSON including the raw run timings"""
    instance_name = models.CharField(max_length=64)
    model_name = models.CharField(max_length=64)
    batch_size = models.PositiveIntegerField()
    total_samples = models.PositiveIntegerField()
    multi_node_split = models.CharField(max_length=16, null=True, blank=True)

    single_gpu_time = models.FloatField()
    single_instance_time = models.FloatField()
    cold_cache_time = models.FloatField()
    warm_cache_time = models.FloatField()
    multi_node_time = models.FloatField(null=True, blank=True)

    interconnect_stall_pct = models.FloatField(null=True, blank=True)
    network_stall_pct = models.FloatField(null=True, blank=True)
    epoch_cost = models.FloatField()
    report = models.JSONField()
    created_at = models.DateTimeField(default=timezone.now)

    class Meta:
        db_table = 'stall_profile'
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['instance_name', 'model_name'], name='stall_prof_inst_model_idx'),
        ]

    @classmethod
    def from_report(cls, report) -> 'StallProfile':
        return cls(
            instance_name=report.instance,
            model_name=report.model,
            batch_size=report.batch,
            total_samples=report.total_samples,
            multi_node_split=report.multi_node_split,
            single_gpu_time=report.single_gpu_time,
            single_instance_time=report.single_instance_time,
            cold_cache_time=report.cold_cache_time,
            warm_cache_time=report.warm_cache_time,
            multi_node_time=report.multi_node_time,
            interconnect_stall_pct=report.interconnect_stall_pct,
            network_stall_pct=report.network_stall_pct,
            epoch_cost=report.epoch_cost,
            report=report.to_dict(),
        )

    def __str__(self):
        return f"{self.instance_name}/{self.model_name} batch {self.batch_size}"
