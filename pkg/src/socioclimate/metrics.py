"""Scalar diagnostics comparing a modified trajectory against its baseline."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .simulation import Trajectory

T_FLOOR = 0.1  # K; ratio test is ignored while the baseline anomaly is below this
DEFAULT_THRESHOLD = 20.0  # K*yr
DEFAULT_D_VALUES = (1.1, 1.25, 1.5)


class GridMismatchError(ValueError):
    pass


@dataclass
class MetricRecord:
    auc_diff: float
    time_to_tip: dict[float, float | None]
    peak_T: float
    peak_T_year: float
    peak_T_base: float
    peak_T_base_year: float
    tipped: bool
    threshold: float
    fingerprint: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "auc_diff": self.auc_diff,
            "peak_T": self.peak_T,
            "peak_T_year": self.peak_T_year,
            "peak_T_base": self.peak_T_base,
            "peak_T_base_year": self.peak_T_base_year,
            "tipped": self.tipped,
            "threshold": self.threshold,
            "time_to_tip": {format_d(d): t for d, t in self.time_to_tip.items()},
            "fingerprint": self.fingerprint,
        }
        out.update(self.extra)
        return out


def format_d(d: float) -> str:
    return repr(float(d))


def _check_grids(a: Trajectory, b: Trajectory) -> np.ndarray:
    if a.times.shape != b.times.shape or not np.array_equal(a.times, b.times):
        raise GridMismatchError("trajectories are sampled on different time grids")
    return a.times


def auc_difference(mod: Trajectory, base: Trajectory) -> float:
    """Trapezoidal integral of ``T_mod - T_base`` over the whole run (K*yr)."""
    times = _check_grids(mod, base)
    return float(np.trapezoid(mod.T - base.T, times))


def time_to_tipping(
    mod: Trajectory, base: Trajectory, d: float, t_social_on: float = 2017.0, t_floor: float = T_FLOOR
) -> float | None:
    """First time after ``t_social_on`` at which ``T_mod >= d * T_base``.

    Samples where the baseline anomaly is below ``t_floor`` are never eligible.
    The crossing is linearly interpolated between the last failing and the
    first passing sample when both are eligible.
    """
    if not d > 1:
        raise ValueError(f"d must exceed 1, got {d}")
    times = _check_grids(mod, base)
    gap = mod.T - d * base.T
    eligible = (times >= t_social_on) & (base.T >= t_floor)
    hits = np.nonzero(eligible & (gap >= 0))[0]
    if hits.size == 0:
        return None
    i = int(hits[0])
    if i > 0 and eligible[i - 1] and gap[i] > 0:
        g0, g1 = gap[i - 1], gap[i]
        return float(times[i - 1] + (times[i] - times[i - 1]) * (-g0) / (g1 - g0))
    return float(times[i])


def peak_temperature(traj: Trajectory) -> tuple[float, float]:
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    i = int(np.argmax(traj.T))  # first occurrence wins ties
    return float(traj.T[i]), float(traj.times[i])


def classify_tipping(auc_diff: float, threshold: float = DEFAULT_THRESHOLD) -> bool:
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    return auc_diff >= threshold


def compare(
    base: Trajectory,
    mod: Trajectory,
    d_values=DEFAULT_D_VALUES,
    threshold: float = DEFAULT_THRESHOLD,
    t_social_on: float = 2017.0,
) -> MetricRecord:
    auc = auc_difference(mod, base)
    peak, peak_year = peak_temperature(mod)
    peak_b, peak_b_year = peak_temperature(base)
    return MetricRecord(
        auc_diff=auc,
        time_to_tip={float(d): time_to_tipping(mod, base, d, t_social_on) for d in d_values},
        peak_T=peak,
        peak_T_year=peak_year,
        peak_T_base=peak_b,
        peak_T_base_year=peak_b_year,
        tipped=classify_tipping(auc, threshold),
        threshold=threshold,
        fingerprint=mod.fingerprint,
    )
