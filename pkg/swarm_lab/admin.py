from django.contrib import admin
from .models import CellResult, Experiment


class CellResultInline(admin.TabularInline):
    model = CellResult
    extra = 0
    fields = ['problem', 'algorithm', 'dimension', 'mean_cost', 'std_cost', 'mean_time_seconds']


@admin.register(Experiment)
class ExperimentAdmin(admin.ModelAdmin):
    list_display = ['name', 'source', 'repetitions', 'iterations', 'population', 'created_at']
    list_filter = ['source', 'created_at']
    search_fields = ['name', 'notes']
    readonly_fields = ['created_at']
    inlines = [CellResultInline]

    fieldsets = (
        ('Basic Information', {
            'fields': ('name', 'source', 'notes')
        }),
        ('Protocol', {
            'fields': ('repetitions', 'base_seed', 'iterations', 'population'),
            'classes': ('collapse',)
        }),
        ('Metadata', {
            'fields': ('created_at',),
            'classes': ('collapse',)
        }),
    )


@admin.register(CellResult)
class CellResultAdmin(admin.ModelAdmin):
    list_display = ['problem', 'algorithm', 'experiment', 'mean_cost', 'std_cost', 'mean_time_seconds']
    list_filter = ['algorithm', 'experiment']
    search_fields = ['problem', 'algorithm']

    fieldsets = (
        ('Cell', {
            'fields': ('experiment', 'problem', 'algorithm', 'dimension', 'position')
        }),
        ('Statistics', {
            'fields': ('mean_cost', 'std_cost', 'mean_time_seconds', 'costs')
        }),
    )
