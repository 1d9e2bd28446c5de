"""Carbon-cycle fluxes, greenhouse opacity and radiation budget of the Earth-system box model.

All state quantities are deviations from the pre-industrial steady state:
carbon in GtC, temperature as an anomaly in K.  Absolute temperature
``T + T0_abs`` is used only inside the Arrhenius terms, water-vapour
opacity and Stefan-Boltzmann emission.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass
from functools import lru_cache

import numpy as np

from . import _kernel as _k
from .config import ModelParams, TippingParams


class SingularityError(ValueError):
    """Soil respiration evaluated at or below its 227.13 K pole."""


@dataclass(frozen=True)
class ClimateState:
    C_at: float = 0.0
    C_oc: float = 0.0
    C_veg: float = 0.0
    C_so: float = 0.0
    T: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)


@dataclass(frozen=True)
class FluxSet:
    P: float
    R_veg: float
    R_so: float
    L_turn: float
    F_oc: float
    R_tip: float
    F_d: float
    F_up: float
    tau_total: float
    pCO2a: float

    @classmethod
    def from_array(cls, fx) -> "FluxSet":
        return cls(*(float(v) for v in fx))


@lru_cache(maxsize=256)
def packed(params: ModelParams) -> np.ndarray:
    p = _k.pack(params)
    p.setflags(write=False)
    return p


def _state_vector(state: ClimateState, x: float = 0.0) -> np.ndarray:
    return np.array([state.C_at, state.C_oc, state.C_veg, state.C_so, state.T, x])


def pco2a(C_at: float, params: ModelParams) -> float:
    """Atmospheric CO2 mole fraction."""
    return _k.pco2a(float(C_at), packed(params))


def photosynthesis(C_at: float, T: float, params: ModelParams) -> float:
    return _k.photosynthesis(float(C_at), float(T), packed(params))


def plant_respiration(C_veg: float, T: float, params: ModelParams) -> float:
    return _k.plant_respiration(float(C_veg), float(T), packed(params))


def soil_respiration(C_so: float, T: float, params: ModelParams) -> float:
    gap = T + params.climate.T0_abs - _k.SOIL_T_OFFSET
    if not gap > 0:
        raise SingularityError(
            f"soil respiration undefined for absolute temperature {T + params.climate.T0_abs} K"
        )
    return _k.soil_respiration(float(C_so), float(T), packed(params))


def turnover(C_veg: float, params: ModelParams) -> float:
    return _k.turnover(float(C_veg), packed(params))


def ocean_flux(C_at: float, C_oc: float, params: ModelParams) -> float:
    """Net atmosphere-to-ocean carbon flux (positive into the ocean)."""
    return _k.ocean_flux(float(C_at), float(C_oc), packed(params))


def opacity_total(C_at: float, T: float, params: ModelParams) -> float:
    return _k.opacity_total(float(C_at), float(T), packed(params))


def opacity_components(C_at: float, T: float, params: ModelParams) -> tuple[float, float, float]:
    p = packed(params)
    return _k.opacity_co2(float(C_at), p), _k.opacity_h2o(float(T), p), params.climate.tau_CH4


def radiation_balance(C_at: float, T: float, params: ModelParams) -> tuple[float, float]:
    """Absorbed downward flux and emitted surface flux, both W/m^2."""
    p = packed(params)
    tau = _k.opacity_total(float(C_at), float(T), p)
    return _k.downward_flux(tau, p), _k.upward_flux(float(T), p)


def tipping_flux(T: float, tipping: TippingParams) -> float:
    """Runaway carbon release switching on around the critical temperature."""
    return _k.tipping_flux(float(T), packed(ModelParams(tipping=tipping)))


def fluxes(state: ClimateState, params: ModelParams) -> FluxSet:
    fx = np.empty(_k.N_FLUX)
    _k.fluxes_into(_state_vector(state), packed(params), fx)
    return FluxSet.from_array(fx)


def climate_derivatives(
    state: ClimateState, eps_eff: float, params: ModelParams
) -> tuple[ClimateState, FluxSet]:
    """Tendencies (per year) of the five climate variables for an already-mitigated emission."""
    soil_respiration(state.C_so, state.T, params)  # raises on the singular side
    fx = np.empty(_k.N_FLUX)
    out = np.empty(_k.N_STATE)
    _k.climate_rates(_state_vector(state), float(eps_eff), packed(params), fx, out)
    return ClimateState(*(float(v) for v in out[:5])), FluxSet.from_array(fx)
