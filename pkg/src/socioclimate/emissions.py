"""Anthropogenic emission rate: historical record up to the pivot year, saturating projection after."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .config import EmissionProjectionParams

HEADER = ("year", "emission_gtc_per_year")


class EmissionDataError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EmissionSeries:
    years: np.ndarray
    values: np.ndarray  # GtC/yr

    def __post_init__(self):
        for arr in (self.years, self.values):
            arr.setflags(write=False)

    @property
    def first_year(self) -> float:
        return float(self.years[0])

    @property
    def last_year(self) -> float:
        return float(self.years[-1])

    def at(self, t: float) -> float:
        """Linear interpolation inside the record."""
        if not self.first_year <= t <= self.last_year:
            raise EmissionDataError(f"year {t} outside the historical record")
        return float(np.interp(t, self.years, self.values))

    def anchor(self, t_pivot: float) -> float:
        return self.at(t_pivot)


def ingest_historical(text: str, t_start: float = 1800.0, t_pivot: float = 2017.0) -> EmissionSeries:
    """Parse ``year,emission_gtc_per_year`` CSV text and check it spans ``[t_start, t_pivot]``."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmissionDataError("empty emission table") from None
    if tuple(h.strip() for h in header) != HEADER:
        raise EmissionDataError(f"row 1: expected header {','.join(HEADER)!r}")

    years: list[float] = []
    values: list[float] = []
    for rowno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise EmissionDataError(f"row {rowno}: expected 2 columns, got {len(row)}")
        try:
            year, value = float(row[0]), float(row[1])
        except ValueError:
            raise EmissionDataError(f"row {rowno}: non-numeric entry {row!r}") from None
        if not (np.isfinite(year) and np.isfinite(value)):
            raise EmissionDataError(f"row {rowno}: non-finite entry")
        if value < 0:
            raise EmissionDataError(f"row {rowno}: negative emission rate {value}")
        if years and year == years[-1]:
            raise EmissionDataError(f"row {rowno}: duplicate year {year:g}")
        if years and year < years[-1]:
            if year in years:
                raise EmissionDataError(f"row {rowno}: duplicate year {year:g}")
            raise EmissionDataError(f"row {rowno}: years must be ascending ({year:g} after {years[-1]:g})")
        years.append(year)
        values.append(value)

    if not years or years[0] > t_start or years[-1] < t_pivot:
        span = f"[{years[0]:g}, {years[-1]:g}]" if years else "nothing"
        raise EmissionDataError(
            f"coverage gap: record spans {span}, need [{t_start:g}, {t_pivot:g}]"
        )
    return EmissionSeries(np.array(years, dtype=float), np.array(values, dtype=float))


def bundled_text() -> str:
    return resources.files("socioclimate.data").joinpath("historical_emissions.csv").read_text("utf-8")


def load_bundled(t_start: float = 1800.0, t_pivot: float = 2017.0) -> EmissionSeries:
    return ingest_historical(bundled_text(), t_start, t_pivot)


def epsilon(
    t: float,
    series: EmissionSeries,
    proj: EmissionProjectionParams,
    t_range: tuple[float, float] | None = None,
) -> float:
    """Baseline emission rate (GtC/yr) before any mitigation."""
    if t_range is not None and not t_range[0] <= t <= t_range[1]:
        raise EmissionDataError(f"year {t} outside run range {t_range}")
    if t <= proj.t_pivot:
        return series.at(t)
    elapsed = t - proj.t_pivot
    return series.anchor(proj.t_pivot) + elapsed * proj.eps_max / (elapsed + proj.s_half)
