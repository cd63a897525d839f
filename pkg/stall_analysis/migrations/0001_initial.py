# Generated by Django 5.2.5 on 2026-10-17 09:12

import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='StallProfile',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('instance_name', models.CharField(max_length=64)),
                ('model_name', models.CharField(max_length=64)),
                ('batch_size', models.PositiveIntegerField()),
                ('total_samples', models.PositiveIntegerField()),
                ('multi_node_split', models.CharField(blank=True, max_length=16, null=True)),
                ('single_gpu_time', models.FloatField()),
                ('single_instance_time', models.FloatField()),
                ('cold_cache_time', models.FloatField()),
                ('warm_cache_time', models.FloatField()),
                ('multi_node_time', models.FloatField(blank=True, null=True)),
                ('interconnect_stall_pct', models.FloatField(blank=True, null=True)),
                ('network_stall_pct', models.FloatField(blank=True, null=True)),
                ('epoch_cost', models.FloatField()),
                ('report', models.JSONField()),
                ('created_at', models.DateTimeField(default=django.utils.timezone.now)),
            ],
            options={
                'db_table': 'stall_profile',
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['instance_name', 'model_name'], name='stall_prof_inst_model_idx')],
            },
        ),
    ]
