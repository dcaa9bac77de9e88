//! Discomfort index and moist-air properties.
//!
//! The discomfort index (DI) is the classic temperature-humidity index
//! `0.81 t + 0.01 RH (0.99 t - 14.3) + 46.3`. The room energy model needs the
//! heat content of air, which is taken from the usual sensible + latent
//! specific enthalpy with a Tetens saturation pressure.

use serde::{Deserialize, Serialize};

use crate::error::{check_param, check_range, Error, Result};

/// Lowest dry-bulb temperature accepted by the models, °C.
pub const T_MIN: f64 = -20.0;
/// Highest dry-bulb temperature accepted by the models, °C.
pub const T_MAX: f64 = 50.0;

const MOLAR_MASS_RATIO: f64 = 0.622;
const WINDOW_SLACK: f64 = 1e-9;

/// Dry-bulb temperature (°C) and relative humidity (%) of a body of air.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AirState {
    pub t: f64,
    pub rh: f64,
}

impl AirState {
    pub fn new(t: f64, rh: f64) -> Result<Self> {
        let air = Self { t, rh };
        air.validate()?;
        Ok(air)
    }

    pub fn validate(&self) -> Result<()> {
        check_range("temperature", self.t, T_MIN, T_MAX)?;
        check_range("relative humidity", self.rh, 0.0, 100.0)
    }
}

/// Constants of the moist-air enthalpy model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsychroConstants {
    /// Atmospheric pressure, kPa.
    pub p_atm: f64,
    /// Specific heat of dry air, kJ/(kg K).
    pub cp_dry: f64,
    /// Latent heat of vaporization at 0 °C, kJ/kg.
    pub h_latent0: f64,
    /// Specific heat of water vapor, kJ/(kg K).
    pub cp_vapor: f64,
}

impl Default for PsychroConstants {
    fn default() -> Self {
        Self {
            p_atm: 101.325,
            cp_dry: 1.006,
            h_latent0: 2501.0,
            cp_vapor: 1.86,
        }
    }
}

impl PsychroConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p_atm", self.p_atm),
            ("cp_dry", self.cp_dry),
            ("h_latent0", self.h_latent0),
            ("cp_vapor", self.cp_vapor),
        ] {
            check_param(v.is_finite() && v > 0.0, || {
                format!("{name} must be strictly positive, got {v}")
            })?;
        }
        Ok(())
    }
}

/// Discomfort index of `air`, dimensionless.
pub fn discomfort_index(air: AirState) -> Result<f64> {
    air.validate()?;
    let AirState { t, rh } = air;
    Ok(0.81 * t + 0.01 * rh * (0.99 * t - 14.3) + 46.3)
}

/// Dry-bulb temperature at which air of humidity `rh` has discomfort index `di`.
///
/// The index is affine in `t` at fixed humidity, so the inverse is closed form.
pub fn temperature_for_di(di: f64, rh: f64) -> Result<f64> {
    check_range("relative humidity", rh, 0.0, 100.0)?;
    if !di.is_finite() {
        return Err(Error::InvalidParameter(format!("discomfort index {di}")));
    }
    let t = (di - 46.3 + 0.143 * rh) / (0.81 + 0.0099 * rh);
    // Rounding can push an exact window edge a few ulps outside.
    check_range("temperature", t, T_MIN - WINDOW_SLACK, T_MAX + WINDOW_SLACK)?;
    Ok(t.clamp(T_MIN, T_MAX))
}

/// Saturation vapor pressure over water (Tetens), kPa.
pub fn saturation_vapor_pressure(t: f64) -> f64 {
    0.61078 * (17.27 * t / (t + 237.3)).exp()
}

/// Humidity ratio, kg water per kg dry air.
pub fn humidity_ratio(air: AirState, consts: &PsychroConstants) -> Result<f64> {
    air.validate()?;
    let pv = air.rh / 100.0 * saturation_vapor_pressure(air.t);
    if pv >= consts.p_atm {
        return Err(Error::Saturated {
            pv,
            p_atm: consts.p_atm,
        });
    }
    Ok(MOLAR_MASS_RATIO * pv / (consts.p_atm - pv))
}

/// Specific enthalpy of moist air, kJ per kg dry air, referenced to dry air at 0 °C.
pub fn moist_air_enthalpy(air: AirState, consts: &PsychroConstants) -> Result<f64> {
    let x = humidity_ratio(air, consts)?;
    Ok(consts.cp_dry * air.t + x * (consts.h_latent0 + consts.cp_vapor * air.t))
}
