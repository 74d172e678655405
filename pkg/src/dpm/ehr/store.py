"""CSV-backed clinical tables with referential integrity checks.

The store is immutable after construction and indexes events per person for
half-open window queries. On-disk layout is five CSV files (person,
visit_occurrence, measurement, death, concept) with RFC-4180 quoting and the
exact column sets below.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

import numpy as np

from ..errors import (
    MissingTable,
    ReferentialIntegrityViolation,
    SchemaMismatch,
    UnknownPerson,
)
from ..timeutil import epoch_s, parse_iso, to_iso

GENDERS = ("female", "male")
VISIT_KINDS = ("inpatient", "outpatient")

TABLE_COLUMNS = {
    "person": ["person_id", "birth_datetime", "gender"],
    "visit_occurrence": ["visit_id", "person_id", "start", "end", "visit_kind"],
    "measurement": ["person_id", "visit_id", "concept_id", "value", "at"],
    "death": ["person_id", "death_datetime"],
    "concept": ["concept_id", "name", "unit", "normal_low", "normal_high"],
}


@dataclass(frozen=True)
class Person:
    person_id: int
    birth_datetime: datetime
    gender: str


@dataclass(frozen=True)
class VisitOccurrence:
    visit_id: int
    person_id: int
    start: datetime
    end: datetime
    visit_kind: str


@dataclass(frozen=True)
class MeasurementEvent:
    person_id: int
    visit_id: int | None
    concept_id: int
    value: float
    at: datetime


@dataclass(frozen=True)
class DeathRecord:
    person_id: int
    death_datetime: datetime


@dataclass(frozen=True)
class Concept:
    concept_id: int
    name: str
    unit: str
    normal_low: float
    normal_high: float


class EhrStore:
    """Immutable collection of persons, visits, measurements, deaths, concepts.

    Construction canonicalizes row order (persons and concepts by id, visits
    by id, measurements by (person, at, concept)), validates every
    referential and temporal invariant, and builds per-person indexes. Safe
    for concurrent readers.
    """

    def __init__(self, persons, visits, measurements, deaths, concepts):
        self.persons: list[Person] = sorted(persons, key=lambda p: p.person_id)
        self.visits: list[VisitOccurrence] = sorted(visits, key=lambda v: v.visit_id)
        self.measurements: list[MeasurementEvent] = sorted(
            measurements, key=lambda m: (m.person_id, epoch_s(m.at), m.concept_id))
        self.deaths: list[DeathRecord] = sorted(deaths, key=lambda d: d.person_id)
        self.concepts: list[Concept] = sorted(concepts, key=lambda c: c.concept_id)

        self.persons_by_id: dict[int, Person] = {}
        self.visits_by_id: dict[int, VisitOccurrence] = {}
        self.concepts_by_id: dict[int, Concept] = {c.concept_id: c for c in self.concepts}
        self.death_by_person: dict[int, DeathRecord] = {}
        self.visits_by_person: dict[int, list[VisitOccurrence]] = {}
        self.events_by_person: dict[int, list[MeasurementEvent]] = {}
        self._event_times: dict[int, np.ndarray] = {}

        self._validate_and_index()

    def __eq__(self, other: object):
        if not isinstance(other, EhrStore):
            return NotImplemented
        return (self.persons == other.persons and self.visits == other.visits
                and self.measurements == other.measurements
                and self.deaths == other.deaths and self.concepts == other.concepts)

    # -- validation ------------------------------------------------------

    def _fail(self, table: str, row: int, message: str):
        raise ReferentialIntegrityViolation(f"{table} row {row}: {message}")

    def _validate_and_index(self) -> None:
        for i, person in enumerate(self.persons):
            if person.person_id in self.persons_by_id:
                self._fail("person", i, f"duplicate person_id {person.person_id}")
            if person.gender not in GENDERS:
                self._fail("person", i, f"gender {person.gender!r} not in {GENDERS}")
            self.persons_by_id[person.person_id] = person
            self.visits_by_person[person.person_id] = []
            self.events_by_person[person.person_id] = []

        for i, death in enumerate(self.deaths):
            person = self.persons_by_id.get(death.person_id)
            if person is None:
                self._fail("death", i, f"unknown person_id {death.person_id}")
            if death.person_id in self.death_by_person:
                self._fail("death", i, f"duplicate death for person_id {death.person_id}")
            if death.death_datetime < person.birth_datetime:
                self._fail("death", i, "death_datetime before birth_datetime")
            self.death_by_person[death.person_id] = death

        for i, visit in enumerate(self.visits):
            person = self.persons_by_id.get(visit.person_id)
            if person is None:
                self._fail("visit_occurrence", i, f"unknown person_id {visit.person_id}")
            if visit.visit_id in self.visits_by_id:
                self._fail("visit_occurrence", i, f"duplicate visit_id {visit.visit_id}")
            if visit.visit_kind not in VISIT_KINDS:
                self._fail("visit_occurrence", i,
                           f"visit_kind {visit.visit_kind!r} not in {VISIT_KINDS}")
            if visit.end < visit.start:
                self._fail("visit_occurrence", i, "end before start")
            if visit.start <= person.birth_datetime:
                self._fail("visit_occurrence", i, "visit starts before birth")
            death = self.death_by_person.get(visit.person_id)
            if death is not None and visit.end > death.death_datetime:
                self._fail("visit_occurrence", i, "visit extends past death_datetime")
            self.visits_by_id[visit.visit_id] = visit
            self.visits_by_person[visit.person_id].append(visit)

        # Same-kind visits of one person must not overlap (half-open spans).
        for person_id, visits in self.visits_by_person.items():
            for kind in VISIT_KINDS:
                spans = sorted((v for v in visits if v.visit_kind == kind),
                               key=lambda v: (v.start, v.visit_id))
                for a, b in zip(spans, spans[1:]):
                    if b.start < a.end:
                        self._fail("visit_occurrence", self.visits.index(b),
                                   f"overlapping {kind} visits {a.visit_id} and "
                                   f"{b.visit_id} for person {person_id}")

        for i, event in enumerate(self.measurements):
            person = self.persons_by_id.get(event.person_id)
            if person is None:
                self._fail("measurement", i, f"unknown person_id {event.person_id}")
            if event.concept_id not in self.concepts_by_id:
                self._fail("measurement", i, f"unknown concept_id {event.concept_id}")
            if event.visit_id is not None:
                visit = self.visits_by_id.get(event.visit_id)
                if visit is None:
                    self._fail("measurement", i, f"unknown visit_id {event.visit_id}")
                if visit.person_id != event.person_id:
                    self._fail("measurement", i,
                               f"visit {event.visit_id} belongs to person {visit.person_id}")
            if event.at <= person.birth_datetime:
                self._fail("measurement", i, "measurement at or before birth")
            death = self.death_by_person.get(event.person_id)
            if death is not None and event.at > death.death_datetime:
                self._fail("measurement", i, "measurement after death_datetime")
            self.events_by_person[event.person_id].append(event)

        # measurements are already globally sorted by (person, at, concept),
        # so the per-person lists inherit (at, concept) order.
        for person_id, events in self.events_by_person.items():
            self._event_times[person_id] = np.array(
                [epoch_s(e.at) for e in events], dtype=np.int64)

    # -- queries ---------------------------------------------------------

    def person(self, person_id: int) -> Person:
        try:
            return self.persons_by_id[person_id]
        except KeyError:
            raise UnknownPerson(f"person_id {person_id} not in store") from None

    def visit(self, visit_id: int) -> VisitOccurrence | None:
        return self.visits_by_id.get(visit_id)

    def inpatient_visits(self, person_id: int) -> list[VisitOccurrence]:
        """Inpatient visits of a person, chronological, visit_id breaking ties."""
        visits = [v for v in self.visits_by_person.get(person_id, ())
                  if v.visit_kind == "inpatient"]
        return sorted(visits, key=lambda v: (v.start, v.visit_id))


def events_in_window(store: EhrStore, person_id: int, start: datetime,
                     end: datetime) -> list[MeasurementEvent]:
    """Measurements of one person with start <= at < end, by (at, concept_id)."""
    store.person(person_id)
    if end < start:
        raise ValueError(f"window end {end} before start {start}")
    times = store._event_times[person_id]
    lo = int(np.searchsorted(times, epoch_s(start), side="left"))
    hi = int(np.searchsorted(times, epoch_s(end), side="left"))
    return store.events_by_person[person_id][lo:hi]


# -- CSV I/O ------------------------------------------------------------------


def _parse_int(table: str, column: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise SchemaMismatch(f"{table}.{column}: not an integer: {raw!r}") from None


def _parse_float(table: str, column: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise SchemaMismatch(f"{table}.{column}: not a number: {raw!r}") from None


def _parse_ts(table: str, column: str, raw: str) -> datetime:
    try:
        return parse_iso(raw)
    except ValueError:
        raise SchemaMismatch(f"{table}.{column}: not an ISO-8601 timestamp: {raw!r}") from None


def _read_table(root: Path, table: str) -> list[dict[str, str]]:
    path = root / f"{table}.csv"
    if not path.exists():
        raise MissingTable(f"missing table file {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        expected = TABLE_COLUMNS[table]
        if sorted(header) != sorted(expected):
            missing = set(expected) - set(header)
            extra = set(header) - set(expected)
            offending = ",".join(sorted(missing | extra))
            raise SchemaMismatch(f"{table}.csv columns {offending!r}: "
                                 f"expected exactly {expected}, got {header}")
        return list(reader)


def load_store(root_path: str | Path) -> EhrStore:
    """Load and fully validate a store from its five-file CSV directory."""
    root = Path(root_path)

    persons = [
        Person(person_id=_parse_int("person", "person_id", row["person_id"]),
               birth_datetime=_parse_ts("person", "birth_datetime", row["birth_datetime"]),
               gender=row["gender"])
        for row in _read_table(root, "person")
    ]
    visits = [
        VisitOccurrence(
            visit_id=_parse_int("visit_occurrence", "visit_id", row["visit_id"]),
            person_id=_parse_int("visit_occurrence", "person_id", row["person_id"]),
            start=_parse_ts("visit_occurrence", "start", row["start"]),
            end=_parse_ts("visit_occurrence", "end", row["end"]),
            visit_kind=row["visit_kind"])
        for row in _read_table(root, "visit_occurrence")
    ]
    measurements = [
        MeasurementEvent(
            person_id=_parse_int("measurement", "person_id", row["person_id"]),
            visit_id=(None if row["visit_id"] == ""
                      else _parse_int("measurement", "visit_id", row["visit_id"])),
            concept_id=_parse_int("measurement", "concept_id", row["concept_id"]),
            value=_parse_float("measurement", "value", row["value"]),
            at=_parse_ts("measurement", "at", row["at"]))
        for row in _read_table(root, "measurement")
    ]
    deaths = [
        DeathRecord(person_id=_parse_int("death", "person_id", row["person_id"]),
                    death_datetime=_parse_ts("death", "death_datetime", row["death_datetime"]))
        for row in _read_table(root, "death")
    ]
    concepts = [
        Concept(concept_id=_parse_int("concept", "concept_id", row["concept_id"]),
                name=row["name"], unit=row["unit"],
                normal_low=_parse_float("concept", "normal_low", row["normal_low"]),
                normal_high=_parse_float("concept", "normal_high", row["normal_high"]))
        for row in _read_table(root, "concept")
    ]
    return EhrStore(persons, visits, measurements, deaths, concepts)


def save_store(store: EhrStore, root_path: str | Path) -> None:
    """Write the five CSV tables; save/load round-trips to an equal store."""
    root = Path(root_path)
    root.mkdir(parents=True, exist_ok=True)

    def _write(table: str, rows):
        with (root / f"{table}.csv").open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(TABLE_COLUMNS[table])
            writer.writerows(rows)

    _write("person", ((p.person_id, to_iso(p.birth_datetime), p.gender)
                      for p in store.persons))
    _write("visit_occurrence", ((v.visit_id, v.person_id, to_iso(v.start),
                                 to_iso(v.end), v.visit_kind)
                                for v in store.visits))
    _write("measurement", ((m.person_id, "" if m.visit_id is None else m.visit_id,
                            m.concept_id, repr(m.value), to_iso(m.at))
                           for m in store.measurements))
    _write("death", ((d.person_id, to_iso(d.death_datetime)) for d in store.deaths))
    _write("concept", ((c.concept_id, c.name, c.unit, repr(c.normal_low),
                        repr(c.normal_high)) for c in store.concepts))
