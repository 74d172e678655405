"""Deterministic synthetic clinical data with a recoverable mortality signal.

A designated subset of concepts (the first ``concept_count // 4``, at least
one) is steered by a per-person severity: the further severity pushes those
measurements outside their normal range within the first 48 hours of the
first inpatient admission, the higher the person's death risk. Death
probability is ``logistic(base + signal_strength * mean_abnormality)`` where
abnormality of a value is its distance outside the normal range in units of
the range width. The intercept ``base`` is solved by bisection so that the
mean risk over admission-eligible persons equals the target mortality rate,
and deaths are drawn by systematic sampling with exactly those inclusion
probabilities, which pins the empirical rate to the target up to rounding.

Deaths are placed 48h-30d after admission so the 48-hour observation window
is never truncated by the outcome (no label leakage through missingness).
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import timedelta

import numpy as np

from ..errors import InvalidSpec
from ..timeutil import floor_years_between, from_epoch_s, utc
from .store import (
    Concept,
    DeathRecord,
    EhrStore,
    MeasurementEvent,
    Person,
    VisitOccurrence,
)

HOUR = 3600
DAY = 24 * HOUR

# Admission-eligibility mirrored by the generator when calibrating mortality:
# adults, first inpatient stay of >= 48h, >= 1 measurement in the first 48h.
ELIGIBLE_MIN_AGE_YEARS = 18
ELIGIBLE_MIN_STAY_H = 48
OBSERVATION_H = 48

# Plausible measurement concepts cycled to fill the dictionary.
_CONCEPT_POOL = [
    ("heart_rate", "bpm", 60.0, 100.0),
    ("systolic_bp", "mmHg", 90.0, 140.0),
    ("respiratory_rate", "breaths/min", 12.0, 20.0),
    ("temperature", "degC", 36.1, 37.8),
    ("oxygen_saturation", "%", 94.0, 100.0),
    ("glucose", "mg/dL", 70.0, 140.0),
    ("lactate", "mmol/L", 0.5, 2.0),
    ("creatinine", "mg/dL", 0.6, 1.3),
    ("blood_urea_nitrogen", "mg/dL", 7.0, 20.0),
    ("sodium", "mEq/L", 135.0, 145.0),
    ("potassium", "mEq/L", 3.5, 5.0),
    ("hemoglobin", "g/dL", 12.0, 17.0),
    ("white_cell_count", "10^9/L", 4.0, 11.0),
    ("platelets", "10^9/L", 150.0, 400.0),
    ("ph", "", 7.35, 7.45),
    ("bicarbonate", "mEq/L", 22.0, 28.0),
    ("bilirubin", "mg/dL", 0.2, 1.2),
    ("albumin", "g/dL", 3.5, 5.0),
    ("diastolic_bp", "mmHg", 60.0, 90.0),
    ("mean_arterial_pressure", "mmHg", 70.0, 105.0),
]

_FIRST_CONCEPT_ID = 1001

# Severity-to-value steering. Direction per concept (above vs below range)
# alternates; noise keeps zero-severity values inside range ~95% of the time.
_SEVERITY_SCALE = 1.1
_VALUE_NOISE = 0.16
_EVENTS_PER_CONCEPT_48H = 2.2


@dataclass(frozen=True)
class GeneratorSpec:
    n_persons: int
    concept_count: int = 8
    target_mortality_rate: float = 0.15
    signal_strength: float = 1.0
    seed: int = 0

    def validate(self) -> None:
        if self.n_persons <= 0:
            raise InvalidSpec(f"n_persons must be positive, got {self.n_persons}")
        if self.concept_count <= 0:
            raise InvalidSpec(f"concept_count must be positive, got {self.concept_count}")
        if not 0.0 < self.target_mortality_rate < 1.0:
            raise InvalidSpec("target_mortality_rate must be in (0,1), "
                              f"got {self.target_mortality_rate}")
        if self.signal_strength < 0.0:
            raise InvalidSpec(f"signal_strength must be >= 0, got {self.signal_strength}")
        if not -(2 ** 63) <= self.seed < 2 ** 63:
            raise InvalidSpec(f"seed must fit in 64 bits, got {self.seed}")


def make_concepts(concept_count: int) -> list[Concept]:
    concepts = []
    for i in range(concept_count):
        name, unit, low, high = _CONCEPT_POOL[i % len(_CONCEPT_POOL)]
        if i >= len(_CONCEPT_POOL):
            name = f"{name}_{i // len(_CONCEPT_POOL)}"
        concepts.append(Concept(_FIRST_CONCEPT_ID + i, name, unit, low, high))
    return concepts


def signal_concept_ids(spec: GeneratorSpec) -> list[int]:
    """Concept ids carrying the planted mortality signal."""
    k = max(1, spec.concept_count // 4)
    return [_FIRST_CONCEPT_ID + i for i in range(k)]


def abnormality(value: float, low: float, high: float) -> float:
    """Distance outside [low, high] in units of the range width; 0 inside."""
    width = high - low
    if value < low:
        return (low - value) / width
    if value > high:
        return (value - high) / width
    return 0.0


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def _solve_base(abnormalities: np.ndarray, signal_strength: float,
                target: float) -> float:
    """Bisection on b so mean(sigmoid(b + s*a)) == target over eligibles."""
    lo, hi = -30.0, 30.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(np.mean(_sigmoid(mid + signal_strength * abnormalities))) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _systematic_sample(probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Boolean draw with inclusion probability exactly probs[i].

    Systematic probability-proportional sampling: one uniform start, unit
    strides across the cumulative sum. Keeps the realized count within 1 of
    sum(probs), unlike independent Bernoulli draws.
    """
    picked = np.zeros(len(probs), dtype=bool)
    if len(probs) == 0:
        return picked
    cum = np.cumsum(probs)
    u = rng.uniform(0.0, 1.0)
    points = np.arange(u, cum[-1], 1.0)
    idx = np.searchsorted(cum, points, side="right")
    picked[idx[idx < len(probs)]] = True
    return picked


def generate_synthetic(spec: GeneratorSpec) -> EhrStore:
    """Generate a store; a pure, bit-reproducible function of the spec."""
    spec.validate()
    rng = np.random.default_rng(np.random.PCG64(spec.seed))

    concepts = make_concepts(spec.concept_count)
    risk_ids = set(signal_concept_ids(spec))
    directions = {c.concept_id: (1.0 if rng.random() < 0.5 else -1.0) for c in concepts}

    year_start = utc(2019, 1, 1)
    persons: list[Person] = []
    visits: list[VisitOccurrence] = []
    measurements: list[MeasurementEvent] = []
    deaths: list[DeathRecord] = []

    next_visit_id = 1
    admissions: list[dict] = []

    for person_id in range(1, spec.n_persons + 1):
        admit_s = int(rng.integers(0, 365 * DAY))
        admit = year_start + timedelta(seconds=admit_s)

        target_age = int(rng.integers(5, 91))
        birth = admit - timedelta(days=float(target_age) * 365.25 + float(rng.uniform(0, 365)))
        birth = birth.replace(microsecond=0)
        gender = "female" if rng.random() < 0.5 else "male"
        persons.append(Person(person_id, birth, gender))

        duration_h = 24.0 + float(rng.exponential(120.0))
        duration_h = min(duration_h, 40.0 * 24.0)
        end = admit + timedelta(seconds=int(duration_h * HOUR))

        severity = float(np.clip(rng.exponential(1.0), 0.0, 4.0))
        has_first48_measurements = rng.random() < 0.97

        visit_id = next_visit_id
        next_visit_id += 1

        events: list[MeasurementEvent] = []
        window_h = min(OBSERVATION_H, duration_h)
        for concept in concepts:
            n48 = int(rng.poisson(_EVENTS_PER_CONCEPT_48H)) if has_first48_measurements else 0
            offsets = sorted(int(s) for s in rng.uniform(0, window_h * HOUR, size=n48))
            rest_h = duration_h - window_h
            n_rest = int(rng.poisson(rest_h / 24.0)) if rest_h > 1.0 else 0
            offsets += sorted(int(s) for s in
                              rng.uniform(window_h * HOUR, duration_h * HOUR, size=n_rest))
            for off in offsets:
                events.append(MeasurementEvent(
                    person_id, visit_id, concept.concept_id,
                    _draw_value(rng, concept, severity if concept.concept_id in risk_ids else 0.0,
                                directions[concept.concept_id]),
                    admit + timedelta(seconds=off)))
        if has_first48_measurements and not any(
                (e.at - admit).total_seconds() < window_h * HOUR for e in events):
            concept = concepts[int(rng.integers(0, len(concepts)))]
            events.append(MeasurementEvent(
                person_id, visit_id, concept.concept_id,
                _draw_value(rng, concept,
                            severity if concept.concept_id in risk_ids else 0.0,
                            directions[concept.concept_id]),
                admit + timedelta(seconds=int(rng.uniform(0, window_h * HOUR)))))

        # Prior outpatient contact and the occasional unattributed event add
        # realistic clutter outside the observation window.
        if rng.random() < 0.30:
            out_start = admit - timedelta(days=float(rng.uniform(10, 400)))
            out_start = out_start.replace(microsecond=0)
            if out_start > birth + timedelta(days=30):
                out_id = next_visit_id
                next_visit_id += 1
                out_end = out_start + timedelta(seconds=int(rng.uniform(1, 8) * HOUR))
                visits.append(VisitOccurrence(out_id, person_id, out_start, out_end,
                                              "outpatient"))
                for _ in range(int(rng.integers(1, 4))):
                    concept = concepts[int(rng.integers(0, len(concepts)))]
                    events.append(MeasurementEvent(
                        person_id, out_id, concept.concept_id,
                        _draw_value(rng, concept, 0.0, directions[concept.concept_id]),
                        out_start + timedelta(
                            seconds=int(rng.uniform(0, (out_end - out_start).total_seconds())))))
        if rng.random() < 0.05:
            ambient_at = admit - timedelta(days=float(rng.uniform(30, 600)))
            ambient_at = ambient_at.replace(microsecond=0)
            if ambient_at > birth + timedelta(days=30):
                concept = concepts[int(rng.integers(0, len(concepts)))]
                events.append(MeasurementEvent(
                    person_id, None, concept.concept_id,
                    _draw_value(rng, concept, 0.0, directions[concept.concept_id]),
                    ambient_at))

        age = floor_years_between(birth, admit)
        observed = [e for e in events
                    if e.visit_id == visit_id
                    and 0 <= (e.at - admit).total_seconds() < OBSERVATION_H * HOUR]
        by_id = {c.concept_id: c for c in concepts}
        abnormalities = [
            abnormality(e.value, by_id[e.concept_id].normal_low,
                        by_id[e.concept_id].normal_high)
            for e in observed if e.concept_id in risk_ids
        ]
        mean_abn = float(np.mean(abnormalities)) if abnormalities else 0.0
        eligible = (age >= ELIGIBLE_MIN_AGE_YEARS
                    and duration_h >= ELIGIBLE_MIN_STAY_H
                    and len(observed) > 0)

        visits.append(VisitOccurrence(visit_id, person_id, admit, end, "inpatient"))
        measurements.extend(events)
        admissions.append({
            "person_id": person_id, "visit_id": visit_id, "admit": admit,
            "end": end, "duration_h": duration_h, "eligible": eligible,
            "mean_abnormality": mean_abn, "severity": severity,
        })

    # Mortality: calibrate the intercept on eligible persons, then sample.
    abn = np.array([a["mean_abnormality"] for a in admissions])
    eligible_mask = np.array([a["eligible"] for a in admissions])
    if eligible_mask.any():
        base = _solve_base(abn[eligible_mask], spec.signal_strength,
                           spec.target_mortality_rate)
    else:
        base = float(np.log(spec.target_mortality_rate / (1 - spec.target_mortality_rate)))
    probs = _sigmoid(base + spec.signal_strength * abn)

    dies = np.zeros(len(admissions), dtype=bool)
    dies[eligible_mask] = _systematic_sample(probs[eligible_mask], rng)
    ineligible = ~eligible_mask
    dies[ineligible] = rng.uniform(size=int(ineligible.sum())) < probs[ineligible]

    dead_ids = set()
    truncated_ends: dict[int, object] = {}
    for flag, adm in zip(dies, admissions):
        if not flag:
            continue
        death_at = adm["admit"] + timedelta(
            seconds=int(rng.uniform(ELIGIBLE_MIN_STAY_H * HOUR, 30 * DAY - HOUR)))
        deaths.append(DeathRecord(adm["person_id"], death_at))
        dead_ids.add(adm["person_id"])
        if death_at < adm["end"]:
            truncated_ends[adm["visit_id"]] = death_at

    death_times = {d.person_id: d.death_datetime for d in deaths}
    if truncated_ends:
        visits = [
            VisitOccurrence(v.visit_id, v.person_id, v.start,
                            truncated_ends.get(v.visit_id, v.end), v.visit_kind)
            for v in visits
        ]
    measurements = [m for m in measurements
                    if m.person_id not in death_times or m.at <= death_times[m.person_id]]

    # Survivors occasionally come back for a second inpatient stay.
    for adm in admissions:
        if adm["person_id"] in dead_ids or rng.random() >= 0.25:
            continue
        start = adm["end"] + timedelta(days=float(rng.uniform(5, 200)))
        start = start.replace(microsecond=0)
        dur_h = float(rng.uniform(24, 200))
        visit_id = next_visit_id
        next_visit_id += 1
        visits.append(VisitOccurrence(visit_id, adm["person_id"], start,
                                      start + timedelta(seconds=int(dur_h * HOUR)),
                                      "inpatient"))
        for _ in range(int(rng.integers(1, 6))):
            concept = concepts[int(rng.integers(0, len(concepts)))]
            measurements.append(MeasurementEvent(
                adm["person_id"], visit_id, concept.concept_id,
                _draw_value(rng, concept, 0.0, directions[concept.concept_id]),
                start + timedelta(seconds=int(rng.uniform(0, dur_h * HOUR)))))

    return EhrStore(persons, visits, measurements, deaths, concepts)


def _draw_value(rng: np.random.Generator, concept: Concept, severity: float,
                direction: float) -> float:
    mid = 0.5 * (concept.normal_low + concept.normal_high)
    width = concept.normal_high - concept.normal_low
    offset = _SEVERITY_SCALE * severity * direction if severity > 0 else 0.0
    return float(mid + width * (offset + _VALUE_NOISE * rng.standard_normal()))
