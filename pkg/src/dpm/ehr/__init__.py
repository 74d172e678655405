"""Longitudinal clinical data substrate: tables, loading, synthetic generation."""

from .store import (
    Concept,
    DeathRecord,
    EhrStore,
    MeasurementEvent,
    Person,
    VisitOccurrence,
    events_in_window,
    load_store,
    save_store,
)
from .synthetic import GeneratorSpec, generate_synthetic, signal_concept_ids

__all__ = [
    "Concept",
    "DeathRecord",
    "EhrStore",
    "GeneratorSpec",
    "MeasurementEvent",
    "Person",
    "VisitOccurrence",
    "events_in_window",
    "generate_synthetic",
    "load_store",
    "save_store",
    "signal_concept_ids",
]
