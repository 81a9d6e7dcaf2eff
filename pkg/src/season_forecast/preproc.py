"""Linear MWh scaling and fuzzy month -> (winter, summer) encoding."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DomainError

DEFAULT_FACTOR = 5e5
BASE_YEAR = 2002


class ScaleRangeWarning(UserWarning):
    """A scaled value fell outside [0, 1]."""


@dataclass(frozen=True)
class ScalerConfig:
    factor: float = DEFAULT_FACTOR

    def __post_init__(self):
        if not (math.isfinite(self.factor) and self.factor > 0):
            raise DomainError(f"scale factor must be positive and finite, got {self.factor}")


def scale(value: float, cfg: ScalerConfig = ScalerConfig()) -> float:
    if value < 0:
        raise DomainError(f"energy values must be non-negative, got {value}")
    x = value / cfg.factor
    if x > 1.0:
        warnings.warn(f"scaled value {x:.4f} exceeds 1 (factor {cfg.factor:g})",
                      ScaleRangeWarning, stacklevel=2)
    return x


def unscale(x: float, cfg: ScalerConfig = ScalerConfig()) -> float:
    return x * cfg.factor


@dataclass(frozen=True, order=True)
class MonthIndex:
    """Months counted from January of BASE_YEAR (absolute_month 1).

    Months before the base year get absolute_month <= 0; the calendar
    derivation uses floor modulo so it stays valid there.
    """

    absolute_month: int

    @classmethod
    def from_year_month(cls, year: int, month: int) -> "MonthIndex":
        if not 1 <= month <= 12:
            raise DomainError(f"calendar month must be in 1..12, got {month}")
        return cls((year - BASE_YEAR) * 12 + month)

    @property
    def calendar_month(self) -> int:
        return (self.absolute_month - 1) % 12 + 1

    @property
    def year(self) -> int:
        return BASE_YEAR + (self.absolute_month - 1) // 12

    def __add__(self, months: int) -> "MonthIndex":
        return MonthIndex(self.absolute_month + int(months))

    def __str__(self):
        return f"{self.year:04d}-{self.calendar_month:02d}"


@dataclass(frozen=True)
class SeasonEncoding:
    winter: float
    summer: float

    def as_tuple(self):
        return (self.winter, self.summer)


def _calendar(m) -> int:
    c = m.calendar_month if isinstance(m, MonthIndex) else int(m)
    if not 1 <= c <= 12:
        raise DomainError(f"calendar month must be in 1..12, got {m}")
    return c


def default_winter(c: int) -> float:
    # triangle: 1 in January, 0 in July, linear in the circular month distance
    d = abs(c - 1)
    d = min(d, 12 - d)
    return 1.0 - d / 6.0


DEFAULT_MEMBERSHIP = tuple(default_winter(c) for c in range(1, 13))


def season_membership(m) -> SeasonEncoding:
    """Default winter/summer membership for a MonthIndex (or calendar month 1..12)."""
    w = default_winter(_calendar(m))
    return SeasonEncoding(w, 1.0 - w)


def validate_membership(table: Sequence[float]) -> tuple:
    table = tuple(float(v) for v in table)
    if len(table) != 12:
        raise DomainError(f"membership table needs 12 entries, got {len(table)}")
    for i, v in enumerate(table, 1):
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"membership for month {i} is {v}, outside [0, 1]")
    return table


def season_membership_custom(m, table: Sequence[float]) -> SeasonEncoding:
    """Winter degree read from a 12-entry table (January first); summer is the complement."""
    table = validate_membership(table)
    w = table[_calendar(m) - 1]
    return SeasonEncoding(w, 1.0 - w)


def shift_membership(table: Sequence[float], months: int) -> tuple:
    """Delay the seasonal shape by ``months`` (positive = later winter)."""
    table = validate_membership(table)
    k = months % 12
    return table[-k:] + table[:-k] if k else table


def encode_season(m, table: Optional[Sequence[float]] = None) -> SeasonEncoding:
    if table is None:
        return season_membership(m)
    return season_membership_custom(m, table)
