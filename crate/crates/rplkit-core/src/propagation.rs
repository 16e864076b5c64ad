//! Breakpoint power-law path loss, Friis link budget, maximum range, and
//! the radio horizon. All arithmetic is linear (watts, linear gains); dB
//! conversions happen at the I/O boundaries.

use crate::error::CoreError;

/// Speed of light, m/s.
pub const C0: f64 = 2.997_924_58e8;

/// Breakpoint power-law path loss parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossParams {
    /// Path loss exponent beyond the breakpoint (free space n = 2 applies inside).
    pub n: f64,
    pub lambda_m: f64,
    pub h_bs_m: f64,
    pub h_ms_m: f64,
}

impl PathLossParams {
    pub fn new(n: f64, lambda_m: f64, h_bs_m: f64, h_ms_m: f64) -> Result<Self, CoreError> {
        if !(n >= 2.0) {
            return Err(CoreError::Domain("path loss exponent must be >= 2"));
        }
        if !(lambda_m > 0.0 && h_bs_m > 0.0 && h_ms_m > 0.0) {
            return Err(CoreError::Domain("wavelength and heights must be positive"));
        }
        Ok(Self { n, lambda_m, h_bs_m, h_ms_m })
    }

    pub fn from_freq(n: f64, freq_hz: f64, h_bs_m: f64, h_ms_m: f64) -> Result<Self, CoreError> {
        if !(freq_hz > 0.0) {
            return Err(CoreError::Domain("frequency must be positive"));
        }
        Self::new(n, C0 / freq_hz, h_bs_m, h_ms_m)
    }
}

/// Link budget terms, all linear and strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub p_t_w: f64,
    pub g_t: f64,
    pub g_r: f64,
    pub p_rmin_w: f64,
}

impl LinkBudget {
    pub fn new(p_t_w: f64, g_t: f64, g_r: f64, p_rmin_w: f64) -> Result<Self, CoreError> {
        if !(p_t_w > 0.0 && g_t > 0.0 && g_r > 0.0 && p_rmin_w > 0.0) {
            return Err(CoreError::Domain("link budget terms must be strictly positive"));
        }
        Ok(Self { p_t_w, g_t, g_r, p_rmin_w })
    }
}

/// Breakpoint distance r_b = (4 pi / lambda) h_BS h_MS.
pub fn breakpoint_distance(params: &PathLossParams) -> f64 {
    4.0 * core::f64::consts::PI / params.lambda_m * params.h_bs_m * params.h_ms_m
}

/// Inverse path loss L^-1(r): free space inside the breakpoint, (r_b/r)^n beyond.
/// Continuous at r = r_b.
pub fn path_gain(r_m: f64, params: &PathLossParams) -> Result<f64, CoreError> {
    if !(r_m > 0.0) {
        return Err(CoreError::Domain("range must be positive"));
    }
    let r_b = breakpoint_distance(params);
    let at_break = params.lambda_m / (4.0 * core::f64::consts::PI * r_b);
    let n_eff = if r_m <= r_b { 2.0 } else { params.n };
    Ok(at_break * at_break * libm::pow(r_b / r_m, n_eff))
}

/// Received power P_R = P_T G_T L^-1(r) G_R.
pub fn received_power(budget: &LinkBudget, r_m: f64, params: &PathLossParams) -> Result<f64, CoreError> {
    Ok(budget.p_t_w * budget.g_t * path_gain(r_m, params)? * budget.g_r)
}

/// Range at which received power falls to the MS sensitivity.
///
/// Uses the closed-form solution for the n-branch; if that lands inside the
/// breakpoint the MS never leaves the free-space zone, so the n = 2 form is
/// used instead.
pub fn r_max(budget: &LinkBudget, params: &PathLossParams) -> f64 {
    let r_b = breakpoint_distance(params);
    let k = budget.p_t_w * budget.g_t * budget.g_r / budget.p_rmin_w;
    let with_exponent = |n: f64| {
        libm::pow(params.lambda_m / (4.0 * core::f64::consts::PI), 2.0 / n)
            * libm::pow(k, 1.0 / n)
            * libm::pow(r_b, 1.0 - 2.0 / n)
    };
    let r = with_exponent(params.n);
    if r <= r_b {
        with_exponent(2.0)
    } else {
        r
    }
}

/// Radio horizon r_h = 4.12 km * sqrt(h_BS / 1 m).
pub fn radio_horizon(h_bs_m: f64) -> Result<f64, CoreError> {
    if !(h_bs_m > 0.0) {
        return Err(CoreError::Domain("antenna height must be positive"));
    }
    Ok(4120.0 * libm::sqrt(h_bs_m))
}
