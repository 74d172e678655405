"""Disease progression modeling workbench.

End-to-end lifecycle tooling at desk scale: a CSV-backed longitudinal
clinical store with a synthetic generator, cohort and outcome evaluation,
windowed time-series feature extraction, a tracked training framework with
a small model library, a durable model registry service, and an
event-driven builder that deploys promoted models as local prediction
microservices.
"""

__version__ = "0.1.0"
