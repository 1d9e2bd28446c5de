"""Two-parameter grids, risk presets and one-at-a-time sensitivity runs."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage

from .config import ConfigError, ModelParams, TippingParams, numeric_paths
from .emissions import EmissionSeries
from .metrics import DEFAULT_D_VALUES, DEFAULT_THRESHOLD, MetricRecord, compare, format_d
from .simulation import run_pair

PRESETS = {"high_risk": 2.0, "low_risk": 3.0}

# Default grid ranges (41 points per axis).
DEFAULT_AXES = {
    "social.kappa": (0.001, 0.2),
    "tipping.R_max": (0.0, 5.0),
    "social.beta": (0.0, 2.0),
    "social.delta": (0.0, 2.0),
}

# Parameters perturbed by the tornado analysis.  Schedule/numerical settings,
# unit conversions and the unused freezing-point constant are left out.
SENSITIVITY_EXCLUDED = {
    "climate.T_R",
    "climate.f_gtm",
    "climate.seconds_per_year",
    "emission.t_pivot",
}


def sensitivity_whitelist() -> list[str]:
    return [
        p for p in numeric_paths()
        if not p.startswith("schedule.") and p not in SENSITIVITY_EXCLUDED
    ]


@dataclass(frozen=True)
class AxisSpec:
    path: str
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if self.path not in numeric_paths():
            raise ConfigError(f"{self.path!r} is not a numeric parameter", field=self.path)
        if self.n < 2:
            raise ValueError(f"axis {self.path}: need at least 2 points")
        if not self.lo < self.hi:
            raise ValueError(f"axis {self.path}: need lo < hi")

    @classmethod
    def parse(cls, text: str) -> "AxisSpec":
        """Parse ``path:lo:hi:n``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"axis {text!r}: expected path:lo:hi:n")
        path, lo, hi, n = parts
        try:
            return cls(path, float(lo), float(hi), int(n))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ValueError(f"axis {text!r}: {exc}") from None

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)

    def to_dict(self) -> dict:
        return {"path": self.path, "lo": self.lo, "hi": self.hi, "n": self.n, "spacing": "linear"}


@dataclass
class SweepRecord:
    i: int
    j: int
    x_path: str
    x_value: float
    y_path: str
    y_value: float
    scenario: str
    metrics: MetricRecord | None
    error: str | None = None

    def to_dict(self, d_values=DEFAULT_D_VALUES) -> dict:
        row = {
            "i": self.i, "j": self.j,
            "x_path": self.x_path, "x_value": self.x_value,
            "y_path": self.y_path, "y_value": self.y_value,
            "scenario": self.scenario,
        }
        m = self.metrics
        row.update({
            "auc_diff": m.auc_diff if m else None,
            "peak_T": m.peak_T if m else None,
            "peak_T_year": m.peak_T_year if m else None,
            "peak_T_base": m.peak_T_base if m else None,
            "tipped": m.tipped if m else None,
        })
        for d in d_values:
            row[f"time_to_tip_d{format_d(d)}"] = m.time_to_tip.get(float(d)) if m else None
        row["fingerprint"] = m.fingerprint if m else None
        row["error"] = self.error
        return row

    @property
    def tipped(self) -> bool:
        return bool(self.metrics and self.metrics.tipped)


def scenario_preset(name: str, tipping: TippingParams | None = None) -> TippingParams:
    if name not in PRESETS:
        raise ValueError(f"unknown scenario preset {name!r}; choose from {sorted(PRESETS)}")
    return replace(tipping or TippingParams(), T_c=PRESETS[name])


def apply_preset(params: ModelParams, name: str | None) -> ModelParams:
    if name is None:
        return params
    return replace(params, tipping=scenario_preset(name, params.tipping))


def _evaluate_point(task) -> SweepRecord:
    params, series, i, j, x_path, xv, y_path, yv, scenario, d_values, threshold = task
    try:
        point = params.with_values({x_path: xv, y_path: yv})
        base, mod = run_pair(point, series)
        metrics = compare(base, mod, d_values, threshold, point.schedule.t_social_on)
        return SweepRecord(i, j, x_path, xv, y_path, yv, scenario, metrics)
    except (ValueError, RuntimeError, ArithmeticError) as exc:
        return SweepRecord(i, j, x_path, xv, y_path, yv, scenario, None,
                           f"{type(exc).__name__}: {exc}")


def _map(fn, tasks: list, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    chunk = max(1, math.ceil(len(tasks) / (4 * workers)))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


def run_sweep(
    params: ModelParams,
    series: EmissionSeries,
    x_axis: AxisSpec,
    y_axis: AxisSpec,
    d_values=DEFAULT_D_VALUES,
    threshold: float = DEFAULT_THRESHOLD,
    scenario: str = "custom",
    workers: int = 1,
) -> list[SweepRecord]:
    """Evaluate every grid point; records come back row-major in (i, j)."""
    if x_axis.path == y_axis.path:
        raise ValueError("sweep axes must reference distinct parameters")
    d_values = tuple(float(d) for d in d_values)
    tasks = [
        (params, series, i, j, x_axis.path, float(xv), y_axis.path, float(yv),
         scenario, d_values, threshold)
        for i, xv in enumerate(x_axis.values())
        for j, yv in enumerate(y_axis.values())
    ]
    return _map(_evaluate_point, tasks, workers)


def tipped_grid(records: list[SweepRecord], nx: int, ny: int) -> np.ndarray:
    grid = np.zeros((nx, ny), dtype=bool)
    for r in records:
        grid[r.i, r.j] = r.tipped
    return grid


def region_count(grid: np.ndarray) -> tuple[int, int]:
    """Number of 4-connected (tipped, untipped) regions in a boolean grid."""
    _, n_tipped = ndimage.label(grid)
    _, n_clear = ndimage.label(~grid)
    return n_tipped, n_clear


def tc_kappa_scan(
    params: ModelParams,
    series: EmissionSeries,
    tc_axis: AxisSpec,
    kappa_axis: AxisSpec,
    d_values=DEFAULT_D_VALUES,
    threshold: float = DEFAULT_THRESHOLD,
    workers: int = 1,
) -> list[SweepRecord]:
    """AUC difference over the critical-temperature x learning-rate plane at fixed R_max."""
    if tc_axis.path != "tipping.T_c" or kappa_axis.path != "social.kappa":
        raise ValueError("tc_kappa_scan needs a tipping.T_c axis and a social.kappa axis")
    if tc_axis.lo > 1.5 or tc_axis.hi < 5.0:
        raise ValueError("critical-temperature axis must span at least [1.5, 5]")
    return run_sweep(params, series, tc_axis, kappa_axis, d_values, threshold, "custom", workers)


@dataclass
class SensitivityRecord:
    path: str
    bound: str  # "upper" or "lower"
    value: float
    delta_auc_diff: float
    delta_peak_T: float
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "path": self.path,
            "bound": self.bound,
            "value": self.value,
            "delta_auc_diff": self.delta_auc_diff,
            "delta_peak_T": self.delta_peak_T,
            "error": self.error,
        }


def _perturbed(task) -> SensitivityRecord:
    params, series, path, bound, value, ref_auc, ref_peak, t_on = task
    try:
        base, mod = run_pair(params.with_values({path: value}), series)
        m = compare(base, mod, (), DEFAULT_THRESHOLD, t_on)
        return SensitivityRecord(path, bound, value, m.auc_diff - ref_auc, m.peak_T - ref_peak)
    except (ValueError, RuntimeError, ArithmeticError) as exc:
        return SensitivityRecord(path, bound, value, math.nan, math.nan,
                                 f"{type(exc).__name__}: {exc}")


def _tornado_key(group: list[SensitivityRecord], sort_by: str):
    def mag(r: SensitivityRecord, attr: str) -> float:
        v = abs(getattr(r, attr))
        return -1.0 if math.isnan(v) else v

    primary = "delta_peak_T" if sort_by == "peak_T" else "delta_auc_diff"
    secondary = "delta_auc_diff" if sort_by == "peak_T" else "delta_peak_T"
    return (-max(mag(r, primary) for r in group), -max(mag(r, secondary) for r in group), group[0].path)


def sensitivity_tornado(
    params: ModelParams,
    series: EmissionSeries,
    fraction: float = 0.05,
    sort_by: str = "peak_T",
    paths: list[str] | None = None,
    workers: int = 1,
) -> list[SensitivityRecord]:
    """Perturb each whitelisted parameter to ``(1 +/- fraction)`` times its value.

    Deltas are taken against the unperturbed pair.  Output is grouped per
    parameter (upper then lower) and ordered by the largest absolute change.
    """
    if not 0 < fraction < 1:
        raise ValueError("fraction must lie in (0, 1)")
    if sort_by not in ("peak_T", "auc_diff"):
        raise ValueError("sort_by must be 'peak_T' or 'auc_diff'")
    whitelist = sensitivity_whitelist()
    paths = whitelist if paths is None else paths
    for p in paths:
        if p not in whitelist:
            raise ValueError(f"{p!r} is not in the sensitivity whitelist")

    t_on = params.schedule.t_social_on
    ref = compare(*run_pair(params, series), (), DEFAULT_THRESHOLD, t_on)
    tasks = []
    for path in paths:
        v = params.get(path)
        tasks.append((params, series, path, "upper", v * (1 + fraction), ref.auc_diff, ref.peak_T, t_on))
        tasks.append((params, series, path, "lower", v * (1 - fraction), ref.auc_diff, ref.peak_T, t_on))
    records = _map(_perturbed, tasks, workers)

    groups = [records[k:k + 2] for k in range(0, len(records), 2)]
    groups.sort(key=lambda g: _tornado_key(g, sort_by))
    return [r for g in groups for r in g]
