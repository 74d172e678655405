"""UTC timestamp helpers.

All timestamps in the workbench are timezone-aware UTC datetimes with whole
second precision; they serialize as ISO-8601 (``2019-03-01T12:00:00+00:00``)
and convert losslessly to integer epoch seconds for window arithmetic.
"""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def utc(year: int, month: int, day: int, hour: int = 0, minute: int = 0,
        second: int = 0) -> datetime:
    return datetime(year, month, day, hour, minute, second, tzinfo=timezone.utc)


def to_iso(dt: datetime) -> str:
    """Serialize to ISO-8601 with second precision; rejects sub-second parts."""
    if dt.tzinfo is None:
        raise ValueError(f"naive datetime not allowed: {dt!r}")
    dt = dt.astimezone(timezone.utc)
    if dt.microsecond != 0:
        raise ValueError(f"timestamps must have whole-second precision: {dt!r}")
    return dt.isoformat()


def parse_iso(text: str) -> datetime:
    dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    dt = dt.astimezone(timezone.utc)
    return dt.replace(microsecond=0)


def now_utc() -> datetime:
    return datetime.now(tz=timezone.utc).replace(microsecond=0)


def epoch_s(dt: datetime) -> int:
    return int((dt - _EPOCH).total_seconds())


def from_epoch_s(seconds: int) -> datetime:
    return _EPOCH + timedelta(seconds=int(seconds))


def hours_between(start: datetime, end: datetime) -> float:
    return (end - start).total_seconds() / 3600.0


def floor_years_between(birth: datetime, at: datetime) -> int:
    """Whole calendar years elapsed at `at` for someone born at `birth`."""
    years = at.year - birth.year
    if (at.month, at.day, at.hour, at.minute, at.second) < (
            birth.month, birth.day, birth.hour, birth.minute, birth.second):
        years -= 1
    return years
