"""Deterministic fixed-step integration of the coupled social-climate system."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from . import _kernel as _k
from .config import ModelParams, ensure_valid
from .earth_system import ClimateState, FluxSet, packed
from .emissions import EmissionDataError, EmissionSeries
from .social import SocialState

Variant = Literal["baseline", "modified"]
VARIANTS = ("baseline", "modified")

STATE_COLUMNS = ("C_at", "C_oc", "C_veg", "C_so", "T", "x")
FLUX_COLUMNS = ("P", "R_veg", "R_so", "L", "F_oc", "R_tip", "F_d", "F_up", "tau", "pCO2a")


class IntegrationError(RuntimeError):
    def __init__(self, t: float, state, message: str = "non-finite derivative"):
        super().__init__(f"{message} at t={t:g}: {state}")
        self.t = t
        self.state = state


@dataclass(frozen=True)
class CoupledState:
    climate: ClimateState
    social: SocialState
    t: float

    def as_array(self) -> np.ndarray:
        c = self.climate
        return np.array([c.C_at, c.C_oc, c.C_veg, c.C_so, c.T, self.social.x])

    @classmethod
    def from_array(cls, y, t: float) -> "CoupledState":
        return cls(ClimateState(*(float(v) for v in y[:5])), SocialState(float(y[5])), float(t))


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray  # (n,)
    states: np.ndarray  # (n, 6) columns STATE_COLUMNS
    flux_table: np.ndarray  # (n, 10) columns FLUX_COLUMNS
    fingerprint: str
    variant: str

    def column(self, name: str) -> np.ndarray:
        if name in STATE_COLUMNS:
            return self.states[:, STATE_COLUMNS.index(name)]
        return self.flux_table[:, FLUX_COLUMNS.index(name)]

    @property
    def T(self) -> np.ndarray:
        return self.states[:, _k.I_T]

    @property
    def x(self) -> np.ndarray:
        return self.states[:, _k.I_X]

    def __len__(self) -> int:
        return len(self.times)

    def state_at(self, i: int) -> CoupledState:
        return CoupledState.from_array(self.states[i], self.times[i])

    def fluxes_at(self, i: int) -> FluxSet:
        return FluxSet.from_array(self.flux_table[i])

    def value_at(self, name: str, t: float) -> float:
        idx = np.searchsorted(self.times, t)
        if idx >= len(self.times) or self.times[idx] != t:
            raise KeyError(f"no sample at t={t}")
        return float(self.column(name)[idx])


def _series_args(params: ModelParams, series: EmissionSeries):
    sch, proj = params.schedule, params.emission
    if series.first_year > sch.t_start or series.last_year < proj.t_pivot:
        raise EmissionDataError(
            f"emission record [{series.first_year:g}, {series.last_year:g}] does not cover "
            f"[{sch.t_start:g}, {proj.t_pivot:g}]"
        )
    return series.years, series.values, series.anchor(proj.t_pivot)


def rk4_step(state: CoupledState, h: float, params: ModelParams, series: EmissionSeries) -> CoupledState:
    """Advance the coupled state by one RK4 step of length ``h`` years.

    The social equation is frozen when the step starts before ``t_social_on``.
    """
    if not h > 0:
        raise ValueError("step size must be positive")
    hist_t, hist_v, anchor = _series_args(params, series)
    y = state.as_array()
    y_next = np.empty(_k.N_STATE)
    social_on = state.t >= params.schedule.t_social_on
    ok = _k.rk4_into(state.t, y, h, social_on, packed(params), hist_t, hist_v, anchor, y_next)
    if not ok:
        raise IntegrationError(state.t, state)
    return CoupledState.from_array(y_next, state.t + h)


def variant_params(params: ModelParams, variant: str) -> ModelParams:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if variant == "baseline" and params.tipping.enabled:
        return replace(params, tipping=replace(params.tipping, enabled=False))
    if variant == "modified" and not params.tipping.enabled:
        return replace(params, tipping=replace(params.tipping, enabled=True))
    return params


def simulate(params: ModelParams, series: EmissionSeries, variant: str = "modified") -> Trajectory:
    """Integrate from ``t_start`` to ``t_end`` and sample every ``output_stride`` years.

    Before ``t_social_on`` emissions are unmitigated and ``x`` is reported as 0;
    at ``t_social_on`` the mitigator fraction is set to ``x0``.
    """
    run = variant_params(ensure_valid(params), variant)
    sch = run.schedule
    hist_t, hist_v, anchor = _series_args(run, series)
    n_steps = sch.steps(sch.t_end - sch.t_start)
    k_on = sch.steps(sch.t_social_on - sch.t_start)
    stride = sch.steps(sch.output_stride)
    n_samples = n_steps // stride + 1

    samples = np.zeros((n_samples, _k.N_STATE))
    last = np.zeros(_k.N_STATE)
    p = packed(run)
    failed = _k.integrate(p, hist_t, hist_v, anchor, np.zeros(_k.N_STATE),
                          sch.t_start, sch.dt, n_steps, k_on, stride, samples, last)
    if failed >= 0:
        t_fail = sch.t_start + failed * sch.dt
        raise IntegrationError(t_fail, dict(zip(STATE_COLUMNS, last.tolist())))

    flux_table = np.empty((n_samples, _k.N_FLUX))
    _k.sample_fluxes(samples, p, flux_table)
    times = sch.t_start + np.arange(n_samples) * sch.output_stride
    return Trajectory(times, samples, flux_table, run.fingerprint(), variant)


def run_pair(params: ModelParams, series: EmissionSeries) -> tuple[Trajectory, Trajectory]:
    return simulate(params, series, "baseline"), simulate(params, series, "modified")
