//! Room energy model.
//!
//! Global conditioning work is `alpha * |hv - hf - hp|` where every term is a
//! heat quantity in kJ with the sign convention "positive = heat added to the
//! room": `hv` is the heat needed to bring the room air from the outdoor state
//! to the setpoint, `hf` the heat brought in by outdoor air exchange over the
//! run, `hp` the heat released by occupants. Wearable devices add their own
//! consumption on top; the sum is the total heat consumption (THC).

use serde::{Deserialize, Serialize};

use crate::error::{check_param, Result};
use crate::psychro::{moist_air_enthalpy, AirState, PsychroConstants};

/// kJ per watt-hour.
pub const KJ_PER_WH: f64 = 3.6;
/// kJ per kilowatt-hour.
pub const KJ_PER_KWH: f64 = 3600.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoomSpec {
    /// Room volume, m³.
    pub volume: f64,
    /// Air density, kg/m³.
    pub air_density: f64,
    /// Outdoor air changes per hour.
    pub ach: f64,
}

impl RoomSpec {
    pub const DEFAULT_AIR_DENSITY: f64 = 1.2;
    pub const DEFAULT_ACH: f64 = 0.5;

    pub fn with_volume(volume: f64) -> Self {
        Self {
            volume,
            air_density: Self::DEFAULT_AIR_DENSITY,
            ach: Self::DEFAULT_ACH,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_param(self.volume.is_finite() && self.volume > 0.0, || {
            format!("room volume must be positive, got {}", self.volume)
        })?;
        check_param(self.air_density.is_finite() && self.air_density > 0.0, || {
            format!("air density must be positive, got {}", self.air_density)
        })?;
        check_param(self.ach.is_finite() && self.ach >= 0.0, || {
            format!("air changes per hour must be nonnegative, got {}", self.ach)
        })
    }

    /// Mass of air in the room, kg.
    pub fn air_mass(&self) -> f64 {
        self.volume * self.air_density
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThermalParams {
    /// Global system load factor.
    pub alpha: f64,
    /// Sensible heat released per occupant, W.
    pub occupant_heat: f64,
    /// Wearable draw per occupant per unit of |dn|, W.
    pub ihcs_coeff: f64,
    /// Run length, h.
    pub duration: f64,
}

impl Default for ThermalParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            occupant_heat: 100.0,
            ihcs_coeff: 4.0,
            duration: 1.0,
        }
    }
}

impl ThermalParams {
    pub fn validate(&self) -> Result<()> {
        check_param(self.alpha.is_finite() && self.alpha > 0.0, || {
            format!("alpha must be positive, got {}", self.alpha)
        })?;
        check_param(self.occupant_heat.is_finite() && self.occupant_heat >= 0.0, || {
            format!("occupant heat must be nonnegative, got {}", self.occupant_heat)
        })?;
        check_param(self.ihcs_coeff.is_finite() && self.ihcs_coeff >= 0.0, || {
            format!("IHCS coefficient must be nonnegative, got {}", self.ihcs_coeff)
        })?;
        check_param(self.duration.is_finite() && self.duration > 0.0, || {
            format!("duration must be positive, got {}", self.duration)
        })
    }
}

/// Energy figures for one scenario, kJ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatBreakdown {
    pub hv: f64,
    pub hf: f64,
    pub hp: f64,
    pub he: f64,
    pub ihcs: f64,
    pub thc: f64,
    /// False when the global system is switched off; `he` is then zero.
    pub ghcs_on: bool,
}

impl HeatBreakdown {
    /// Breakdown with the global system running.
    pub fn ghcs(params: &ThermalParams, hv: f64, hf: f64, hp: f64, ihcs: f64) -> Self {
        let he = ghcs_consumption(params, hv, hf, hp);
        Self {
            hv,
            hf,
            hp,
            he,
            ihcs,
            thc: total_heat_consumption(he, ihcs),
            ghcs_on: true,
        }
    }

    /// Breakdown with the global system off: no conditioning, no exchange load.
    pub fn ghcs_off(hp: f64, ihcs: f64) -> Self {
        Self {
            hv: 0.0,
            hf: 0.0,
            hp,
            he: 0.0,
            ihcs,
            thc: total_heat_consumption(0.0, ihcs),
            ghcs_on: false,
        }
    }

    pub fn thc_kwh(&self) -> f64 {
        self.thc / KJ_PER_KWH
    }

    /// Recomputes the derived fields and compares them to the stored ones.
    pub fn is_consistent(&self, params: &ThermalParams, tol: f64) -> bool {
        let he = if self.ghcs_on {
            ghcs_consumption(params, self.hv, self.hf, self.hp)
        } else {
            0.0
        };
        self.hp >= 0.0
            && self.ihcs >= 0.0
            && self.he >= 0.0
            && (self.he - he).abs() <= tol
            && (self.thc - (self.he + self.ihcs)).abs() <= tol
    }
}

/// Heat that must be added to take the room air from `outside` to `target` (Hv).
pub fn conditioning_heat(
    room: &RoomSpec,
    outside: AirState,
    target: AirState,
    consts: &PsychroConstants,
) -> Result<f64> {
    let dh = moist_air_enthalpy(target, consts)? - moist_air_enthalpy(outside, consts)?;
    Ok(room.air_mass() * dh)
}

/// Heat carried into the conditioned room by outdoor air exchange (Hf).
pub fn infiltration_heat(
    room: &RoomSpec,
    outside: AirState,
    target: AirState,
    duration: f64,
    consts: &PsychroConstants,
) -> Result<f64> {
    check_param(duration.is_finite() && duration > 0.0, || {
        format!("duration must be positive, got {duration}")
    })?;
    let dh = moist_air_enthalpy(outside, consts)? - moist_air_enthalpy(target, consts)?;
    Ok(room.ach * room.air_mass() * duration * dh)
}

/// Heat released by `n` occupants over the run (Hp).
pub fn occupant_heat(n: usize, params: &ThermalParams) -> f64 {
    n as f64 * params.occupant_heat * params.duration * KJ_PER_WH
}

/// Global system consumption (He).
pub fn ghcs_consumption(params: &ThermalParams, hv: f64, hf: f64, hp: f64) -> f64 {
    params.alpha * (hv - hf - hp).abs()
}

/// Wearable consumption, linear in the applied correction.
pub fn ihcs_consumption(dn: &[i32], params: &ThermalParams) -> f64 {
    let steps: u64 = dn.iter().map(|d| u64::from(d.unsigned_abs())).sum();
    params.ihcs_coeff * steps as f64 * params.duration * KJ_PER_WH
}

pub fn total_heat_consumption(he: f64, ihcs: f64) -> f64 {
    he + ihcs
}
