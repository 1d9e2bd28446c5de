import math

import pytest
from hypothesis import given, strategies as st

from socioclimate import earth_system as es
from socioclimate.config import ModelParams, TippingParams, default_params
from socioclimate.earth_system import ClimateState

P = default_params()
C = P.climate


# Independent oracle: the flux formulas written out with plain floats.
def oracle_pco2(c_at):
    return 8.3259e13 * (c_at + 596.0) / 1.773e20


def oracle_photosynthesis(c_at, t):
    pc = oracle_pco2(c_at)
    if pc < 29e-6 or not -15 <= t <= 25:
        return 0.0
    return 0.184 * 550 * 1.478 * (pc - 29e-6) / (120e-6 + pc - 29e-6) * (15 + t) ** 2 * (25 - t) / 5625


def oracle_tau(c_at, t):
    tk = t + 288.15
    return 1.73 * oracle_pco2(c_at) ** 0.263 + 0.0126 * (0.5915 * 1.4e11 * math.exp(-43655 / (8.314 * tk))) ** 0.503 + 0.0231


def test_pco2a():
    assert es.pco2a(0, P) == pytest.approx(2.799e-4, rel=1e-3)
    assert es.pco2a(596, P) == pytest.approx(5.598e-4, rel=1e-3)
    assert es.pco2a(-596, P) == 0.0


def test_photosynthesis_reference():
    assert es.photosynthesis(0, 0, P) == pytest.approx(101.2, abs=0.1)
    assert es.photosynthesis(0, 25, P) == 0.0
    assert es.photosynthesis(0, 25.01, P) == 0.0
    assert es.photosynthesis(0, -15.5, P) == 0.0
    # pCO2 below the compensation point
    c_low = 20e-6 * 1.773e20 / 8.3259e13 - 596
    assert es.photosynthesis(c_low, 0, P) == 0.0


@given(st.floats(-590, 3000), st.floats(-20, 30))
def test_photosynthesis_matches_oracle_and_nonnegative(c_at, t):
    got = es.photosynthesis(c_at, t, P)
    assert got >= 0
    assert got == pytest.approx(oracle_photosynthesis(c_at, t), rel=1e-12, abs=1e-12)


def test_plant_respiration():
    assert es.plant_respiration(0, 0, P) == pytest.approx(50.6, abs=0.1)
    assert es.plant_respiration(-550, 0, P) == 0.0
    assert es.plant_respiration(0, 10, P) > es.plant_respiration(0, 0, P)
    norm = 8.7039e9 * math.exp(-54830 / (8.314 * 288.15))
    assert norm == pytest.approx(1.0, abs=2e-3)


def test_soil_respiration():
    assert es.soil_respiration(0, 0, P) == pytest.approx(51.0, abs=0.1)
    assert es.soil_respiration(-1500, 0, P) == 0.0
    near_pole = 227.13 - 288.15 + 1e-3
    assert es.soil_respiration(0, near_pole, P) < 1e-100
    with pytest.raises(es.SingularityError):
        es.soil_respiration(0, 227.13 - 288.15, P)
    with pytest.raises(es.SingularityError):
        es.soil_respiration(0, -100, P)


def test_turnover():
    assert es.turnover(0, P) == pytest.approx(50.6)
    assert es.turnover(-550, P) == 0.0
    assert es.turnover(550, P) == pytest.approx(101.2)


def test_ocean_flux():
    assert es.ocean_flux(0, 0, P) == 0.0
    assert es.ocean_flux(100, 0, P) == pytest.approx(0.75)
    assert es.ocean_flux(100, 100, P) == pytest.approx(0.025 * 0.3 * (100 - 50 * 596 / 1.5e5 * 100))
    assert es.ocean_flux(100, 100, P) == pytest.approx(0.601, abs=1e-3)


def test_opacity_reference():
    co2, h2o, ch4 = es.opacity_components(0, 0, P)
    assert co2 == pytest.approx(0.2012, abs=2e-4)
    assert h2o == pytest.approx(0.4086, abs=2e-4)
    assert ch4 == 0.0231
    assert es.opacity_total(0, 0, P) == pytest.approx(0.633, abs=0.002)
    assert es.opacity_total(0, 0, P) == pytest.approx(oracle_tau(0, 0), rel=1e-12)


@given(st.floats(-500, 2000), st.floats(0.1, 500), st.floats(-10, 10))
def test_opacity_monotone_in_carbon(c_at, dc, t):
    assert es.opacity_total(c_at + dc, t, P) > es.opacity_total(c_at, t, P)


@given(st.floats(-500, 2000), st.floats(-10, 10), st.floats(0.01, 5))
def test_opacity_monotone_in_temperature(c_at, t, dt):
    assert es.opacity_total(c_at, t + dt, P) > es.opacity_total(c_at, t, P)


def test_radiation_balance_closes():
    f_d, f_up = es.radiation_balance(0, 0, P)
    assert f_d == pytest.approx(390.9, abs=0.5)
    assert f_up == pytest.approx(390.9, abs=0.5)
    assert f_up == pytest.approx(5.67e-8 * 288.15 ** 4, rel=1e-12)
    assert f_d == pytest.approx(0.775 * 1368 / 4 * (1 + 0.75 * oracle_tau(0, 0)), rel=1e-12)
    assert abs(f_d - f_up) <= 0.5


def test_tipping_flux():
    tp = TippingParams(R_max=5.0, R0=5.0, T_c=2.0)
    assert es.tipping_flux(2.0, tp) == pytest.approx(2.5)
    assert es.tipping_flux(0.0, tp) == pytest.approx(5.0 / (1 + math.exp(10)), rel=1e-12)
    assert es.tipping_flux(0.0, tp) / 5.0 == pytest.approx(4.54e-5, rel=1e-3)
    assert es.tipping_flux(100.0, tp) == pytest.approx(5.0)
    assert es.tipping_flux(-1e6, tp) == 0.0
    assert es.tipping_flux(3.0, TippingParams(R_max=0.0)) == 0.0
    assert es.tipping_flux(3.0, TippingParams(enabled=False)) == 0.0


@given(st.floats(0, 5), st.floats(0.1, 10), st.floats(0, 5), st.floats(0, 20))
def test_tipping_sigmoid_symmetry_and_range(r_max, r0, t_c, a):
    tp = TippingParams(R_max=r_max, R0=r0, T_c=t_c)
    hi, lo = es.tipping_flux(t_c + a, tp), es.tipping_flux(t_c - a, tp)
    assert hi + lo == pytest.approx(r_max, rel=1e-12, abs=1e-12)
    assert 0 <= lo <= hi <= r_max


def test_equilibrium_residuals():
    d, fx = es.climate_derivatives(ClimateState(), 0.0, default_params().with_values({"tipping.enabled": False}))
    for v in (d.C_at, d.C_oc, d.C_veg, d.C_so):
        assert abs(v) <= 0.5
    assert abs(d.T) <= 0.02
    assert fx.R_tip == 0.0


def test_emission_is_additive():
    p = default_params().with_values({"tipping.enabled": False})
    d0, _ = es.climate_derivatives(ClimateState(), 0.0, p)
    d10, _ = es.climate_derivatives(ClimateState(), 10.0, p)
    assert d10.C_at - d0.C_at == pytest.approx(10.0, abs=1e-12)
    assert (d10.C_oc, d10.C_veg, d10.C_so, d10.T) == (d0.C_oc, d0.C_veg, d0.C_so, d0.T)


def test_temperature_tendency_units():
    d, fx = es.climate_derivatives(ClimateState(T=0.5), 0.0, P)
    expected = (fx.F_d - fx.F_up) * 5.101e14 * 3.1536e7 / 4.69e23
    assert d.T == pytest.approx(expected, rel=1e-12)


states = st.builds(
    ClimateState,
    C_at=st.floats(-500, 3000), C_oc=st.floats(-500, 3000),
    C_veg=st.floats(-500, 1000), C_so=st.floats(-1400, 2000), T=st.floats(-10, 15),
)


@given(states, st.floats(0, 30), st.floats(0, 5), st.floats(0.5, 5))
def test_carbon_bookkeeping(state, eps, r_max, t_c):
    p = default_params().with_values({"tipping.R_max": r_max, "tipping.T_c": t_c})
    d, fx = es.climate_derivatives(state, eps, p)
    total = d.C_at + d.C_oc + d.C_veg + d.C_so
    scale = max(1.0, fx.P, fx.R_veg, fx.R_so, fx.L_turn, abs(fx.F_oc), eps)
    assert total == pytest.approx(eps + fx.R_tip, abs=8 * 2.0 ** -52 * scale)
    for flux in (fx.P, fx.R_veg, fx.R_so, fx.L_turn, fx.R_tip):
        assert flux >= 0
    assert fx.tau_total > 0


@given(states, st.floats(0, 30), st.floats(0, 5), st.floats(0.1, 10), st.floats(0, 5))
def test_disabled_tipping_ignores_tipping_fields(state, eps, r_max, r0, t_c):
    ref = default_params().with_values({"tipping.enabled": False})
    other = ref.with_values({"tipping.R_max": r_max, "tipping.R0": r0, "tipping.T_c": t_c})
    assert es.climate_derivatives(state, eps, ref) == es.climate_derivatives(state, eps, other)


def test_climate_derivatives_singular_state():
    with pytest.raises(es.SingularityError):
        es.climate_derivatives(ClimateState(T=-70.0), 0.0, P)


def test_fluxes_match_individual_functions():
    s = ClimateState(C_at=120.0, C_oc=30.0, C_veg=15.0, C_so=-4.0, T=1.2)
    fx = es.fluxes(s, P)
    assert fx.P == es.photosynthesis(s.C_at, s.T, P)
    assert fx.R_veg == es.plant_respiration(s.C_veg, s.T, P)
    assert fx.R_so == es.soil_respiration(s.C_so, s.T, P)
    assert fx.L_turn == es.turnover(s.C_veg, P)
    assert fx.F_oc == es.ocean_flux(s.C_at, s.C_oc, P)
    assert fx.R_tip == es.tipping_flux(s.T, P.tipping)
    assert (fx.F_d, fx.F_up) == es.radiation_balance(s.C_at, s.T, P)
