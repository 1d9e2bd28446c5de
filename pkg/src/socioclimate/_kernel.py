"""Compiled scalar kernels for the coupled vector field.

Every model parameter travels as one float64 vector laid out by the index
constants below; ``pack`` builds it from a ``ModelParams``.  The public
modules (earth_system, social, simulation) wrap these functions.
"""

import math

import numpy as np
from numba import njit

(
    C_AT0, C_OC0, C_VEG0, C_SO0,
    K_P, K_R, K_SR, K_T, K_MM, K_C, K_M, K_A_MOL, K_A_NORM, K_B_NORM,
    E_A, C_HEAT, A_E, L_LATENT, R_GAS, HUMIDITY, ALBEDO, CHI, ZETA, S_FLUX,
    TAU_CH4, P0, F0, SIGMA, T0_ABS, F_GTM, SEC_YR,
    KAPPA, BETA, DELTA, F_MAX, OMEGA, T_LIM, X0,
    TIP_ON, R_MAX, R0, T_C,
    EPS_MAX, S_HALF, T_PIVOT,
    N_PARAMS,
) = range(46)

# state vector layout
I_CAT, I_COC, I_CVEG, I_CSO, I_T, I_X = range(6)
N_STATE = 6

# flux vector layout
(FX_P, FX_RVEG, FX_RSO, FX_L, FX_FOC, FX_RTIP, FX_FD, FX_FUP, FX_TAU, FX_PCO2) = range(10)
N_FLUX = 10

SOIL_T_OFFSET = 227.13
SOIL_T_SCALE = 308.56


def pack(params) -> np.ndarray:
    c, s, tp, e = params.climate, params.social, params.tipping, params.emission
    p = np.empty(N_PARAMS)
    p[C_AT0], p[C_OC0], p[C_VEG0], p[C_SO0] = c.C_at0, c.C_oc0, c.C_veg0, c.C_so0
    p[K_P], p[K_R], p[K_SR], p[K_T] = c.k_p, c.k_r, c.k_sr, c.k_t
    p[K_MM], p[K_C], p[K_M], p[K_A_MOL] = c.k_MM, c.k_c, c.k_M, c.k_a
    p[K_A_NORM], p[K_B_NORM], p[E_A] = c.k_A, c.k_B, c.E_a
    p[C_HEAT], p[A_E], p[L_LATENT], p[R_GAS] = c.c_heat, c.a_E, c.L_latent, c.R_gas
    p[HUMIDITY], p[ALBEDO], p[CHI], p[ZETA] = c.H, c.A_albedo, c.chi, c.zeta
    p[S_FLUX], p[TAU_CH4], p[P0], p[F0] = c.S_flux, c.tau_CH4, c.P0, c.F0
    p[SIGMA], p[T0_ABS], p[F_GTM], p[SEC_YR] = c.sigma_SB, c.T0_abs, c.f_gtm, c.seconds_per_year
    p[KAPPA], p[BETA], p[DELTA], p[F_MAX] = s.kappa, s.beta, s.delta, s.f_max
    p[OMEGA], p[T_LIM], p[X0] = s.omega, s.T_lim, s.x0
    p[TIP_ON] = 1.0 if tp.enabled else 0.0
    p[R_MAX], p[R0], p[T_C] = tp.R_max, tp.R0, tp.T_c
    p[EPS_MAX], p[S_HALF], p[T_PIVOT] = e.eps_max, e.s_half, e.t_pivot
    return p


@njit(cache=True)
def logistic(z):
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


@njit(cache=True)
def pco2a(c_at, p):
    return p[F_GTM] * (c_at + p[C_AT0]) / p[K_A_MOL]


@njit(cache=True)
def photosynthesis(c_at, temp, p):
    pc = pco2a(c_at, p)
    if pc < p[K_C] or temp < -15.0 or temp > 25.0:
        return 0.0
    excess = pc - p[K_C]
    mm = excess / (p[K_M] + excess)
    thermal = (15.0 + temp) ** 2 * (25.0 - temp) / 5625.0
    return p[K_P] * p[C_VEG0] * p[K_MM] * mm * thermal


@njit(cache=True)
def plant_respiration(c_veg, temp, p):
    arrhenius = p[K_A_NORM] * math.exp(-p[E_A] / (p[R_GAS] * (temp + p[T0_ABS])))
    return p[K_R] * (c_veg + p[C_VEG0]) * arrhenius


@njit(cache=True)
def soil_respiration(c_so, temp, p):
    # nan signals the singular side of the Lloyd-Taylor form
    gap = temp + p[T0_ABS] - SOIL_T_OFFSET
    if gap <= 0.0:
        return math.nan
    return p[K_SR] * (c_so + p[C_SO0]) * p[K_B_NORM] * math.exp(-SOIL_T_SCALE / gap)


@njit(cache=True)
def turnover(c_veg, p):
    return p[K_T] * (c_veg + p[C_VEG0])


@njit(cache=True)
def ocean_flux(c_at, c_oc, p):
    return p[F0] * p[CHI] * (c_at - p[ZETA] * (p[C_AT0] / p[C_OC0]) * c_oc)


@njit(cache=True)
def opacity_co2(c_at, p):
    return 1.73 * pco2a(c_at, p) ** 0.263


@njit(cache=True)
def opacity_h2o(temp, p):
    vapour = p[HUMIDITY] * p[P0] * math.exp(-p[L_LATENT] / (p[R_GAS] * (temp + p[T0_ABS])))
    return 0.0126 * vapour ** 0.503


@njit(cache=True)
def opacity_total(c_at, temp, p):
    return opacity_co2(c_at, p) + opacity_h2o(temp, p) + p[TAU_CH4]


@njit(cache=True)
def downward_flux(tau, p):
    return (1.0 - p[ALBEDO]) * p[S_FLUX] / 4.0 * (1.0 + 0.75 * tau)


@njit(cache=True)
def upward_flux(temp, p):
    return p[SIGMA] * (temp + p[T0_ABS]) ** 4


@njit(cache=True)
def tipping_flux(temp, p):
    if p[TIP_ON] == 0.0:
        return 0.0
    return p[R_MAX] * logistic(p[R0] * (temp - p[T_C]))


@njit(cache=True)
def warming_cost(temp, p):
    return p[F_MAX] * logistic(p[OMEGA] * (temp - p[T_LIM]))


@njit(cache=True)
def social_rate(x, temp, p):
    gain = -p[BETA] + warming_cost(temp, p) + p[DELTA] * (2.0 * x - 1.0)
    return p[KAPPA] * x * (1.0 - x) * gain


@njit(cache=True)
def fluxes_into(y, p, out):
    c_at, c_oc, c_veg, c_so, temp = y[I_CAT], y[I_COC], y[I_CVEG], y[I_CSO], y[I_T]
    tau = opacity_total(c_at, temp, p)
    out[FX_P] = photosynthesis(c_at, temp, p)
    out[FX_RVEG] = plant_respiration(c_veg, temp, p)
    out[FX_RSO] = soil_respiration(c_so, temp, p)
    out[FX_L] = turnover(c_veg, p)
    out[FX_FOC] = ocean_flux(c_at, c_oc, p)
    out[FX_RTIP] = tipping_flux(temp, p)
    out[FX_FD] = downward_flux(tau, p)
    out[FX_FUP] = upward_flux(temp, p)
    out[FX_TAU] = tau
    out[FX_PCO2] = pco2a(c_at, p)


@njit(cache=True)
def climate_rates(y, eps_eff, p, fx, out):
    """Carbon and temperature tendencies; ``fx`` receives the fluxes."""
    fluxes_into(y, p, fx)
    out[I_CAT] = eps_eff - fx[FX_P] + fx[FX_RVEG] + fx[FX_RSO] - fx[FX_FOC] + fx[FX_RTIP]
    out[I_COC] = fx[FX_FOC]
    out[I_CVEG] = fx[FX_P] - fx[FX_RVEG] - fx[FX_L]
    out[I_CSO] = fx[FX_L] - fx[FX_RSO]
    out[I_T] = (fx[FX_FD] - fx[FX_FUP]) * p[A_E] * p[SEC_YR] / p[C_HEAT]


@njit(cache=True)
def emission_rate(t, hist_t, hist_v, anchor, p):
    if t <= p[T_PIVOT]:
        return np.interp(t, hist_t, hist_v)
    elapsed = t - p[T_PIVOT]
    return anchor + elapsed * p[EPS_MAX] / (elapsed + p[S_HALF])


@njit(cache=True)
def coupled_rates(t, y, social_on, p, hist_t, hist_v, anchor, fx, out):
    eps = emission_rate(t, hist_t, hist_v, anchor, p)
    if social_on:
        climate_rates(y, eps * (1.0 - y[I_X]), p, fx, out)
        out[I_X] = social_rate(y[I_X], y[I_T], p)
    else:
        climate_rates(y, eps, p, fx, out)
        out[I_X] = 0.0


@njit(cache=True)
def rk4_into(t, y, h, social_on, p, hist_t, hist_v, anchor, y_next):
    """One classical RK4 step; returns False if any stage is non-finite."""
    fx = np.empty(N_FLUX)
    k1 = np.empty(N_STATE)
    k2 = np.empty(N_STATE)
    k3 = np.empty(N_STATE)
    k4 = np.empty(N_STATE)
    tmp = np.empty(N_STATE)
    coupled_rates(t, y, social_on, p, hist_t, hist_v, anchor, fx, k1)
    for i in range(N_STATE):
        tmp[i] = y[i] + 0.5 * h * k1[i]
    coupled_rates(t + 0.5 * h, tmp, social_on, p, hist_t, hist_v, anchor, fx, k2)
    for i in range(N_STATE):
        tmp[i] = y[i] + 0.5 * h * k2[i]
    coupled_rates(t + 0.5 * h, tmp, social_on, p, hist_t, hist_v, anchor, fx, k3)
    for i in range(N_STATE):
        tmp[i] = y[i] + h * k3[i]
    coupled_rates(t + h, tmp, social_on, p, hist_t, hist_v, anchor, fx, k4)
    ok = True
    for i in range(N_STATE):
        y_next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        if not math.isfinite(y_next[i]):
            ok = False
    x = y_next[I_X]
    if x < 0.0:
        y_next[I_X] = 0.0
    elif x > 1.0:
        y_next[I_X] = 1.0
    return ok


@njit(cache=True)
def integrate(p, hist_t, hist_v, anchor, y0, t_start, dt, n_steps, k_on, stride, samples, last):
    """Fixed-step RK4 from ``t_start``; writes every ``stride``-th state into ``samples``.

    Social dynamics are active for steps ``k >= k_on``; ``x`` is reset to x0
    when the clock reaches step ``k_on``.  Returns -1 on success, otherwise the
    index of the failing step with its starting state copied into ``last``.
    """
    y = y0.copy()
    y_next = np.empty(N_STATE)
    if k_on == 0:
        y[I_X] = p[X0]
    for i in range(N_STATE):
        samples[0, i] = y[i]
    row = 1
    for k in range(n_steps):
        t = t_start + k * dt
        if not rk4_into(t, y, dt, k >= k_on, p, hist_t, hist_v, anchor, y_next):
            for i in range(N_STATE):
                last[i] = y[i]
            return k
        for i in range(N_STATE):
            y[i] = y_next[i]
        if k + 1 == k_on:
            y[I_X] = p[X0]
        if (k + 1) % stride == 0:
            for i in range(N_STATE):
                samples[row, i] = y[i]
            row += 1
    return -1


@njit(cache=True)
def sample_fluxes(samples, p, out):
    for r in range(samples.shape[0]):
        fluxes_into(samples[r], p, out[r])
