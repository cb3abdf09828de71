# Generated by Django 5.2.7 on 2026-10-19 10:12

import django.core.validators
import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='Experiment',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('name', models.CharField(help_text="Experiment name (e.g., 'reference', 'heo-vs-pso-dim10')", max_length=100, unique=True)),
                ('source', models.CharField(choices=[('run', 'Benchmark Run'), ('reference', 'Published Reference'), ('import', 'Imported Table')], default='run', max_length=20)),
                ('notes', models.TextField(blank=True)),
                ('repetitions', models.PositiveIntegerField(blank=True, null=True, validators=[django.core.validators.MinValueValidator(1)])),
                ('base_seed', models.BigIntegerField(blank=True, null=True)),
                ('iterations', models.PositiveIntegerField(blank=True, null=True, validators=[django.core.validators.MinValueValidator(1)])),
                ('population', models.PositiveIntegerField(blank=True, null=True, validators=[django.core.validators.MinValueValidator(2)])),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at', 'name'],
            },
        ),
        migrations.CreateModel(
            name='CellResult',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('problem', models.CharField(db_index=True, help_text="Row label, e.g. 'sphere@30'", max_length=60)),
                ('algorithm', models.CharField(db_index=True, max_length=20)),
                ('dimension', models.PositiveIntegerField(blank=True, null=True)),
                ('mean_cost', models.FloatField()),
                ('std_cost', models.FloatField(default=0.0)),
                ('mean_time_seconds', models.FloatField(default=0.0, help_text='Seconds per 1000 iterations')),
                ('costs', models.JSONField(blank=True, default=list, help_text='Best cost of every repetition')),
                ('position', models.PositiveIntegerField(default=0, help_text='Insertion order inside the table')),
                ('experiment', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='cells', to='swarm_lab.experiment')),
            ],
            options={
                'ordering': ['experiment', 'position'],
                'constraints': [models.UniqueConstraint(fields=('experiment', 'problem', 'algorithm'), name='unique_cell')],
            },
        ),
    ]
