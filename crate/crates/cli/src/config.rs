//! JSON run configuration.
//!
//! Every field is optional; anything left out takes the reference value.
//! Unknown fields are rejected.

use std::path::{Path, PathBuf};

use comfort_opt::{
    AirState, ComfortBand, IhcsRange, Mode, Overrides, PopulationParams, PsychroConstants,
    RoomSpec, SamplingMode, SetpointPolicy, System, ThermalParams,
};
use serde::{Deserialize, Serialize};

use crate::Format;

pub const SEED_ENV: &str = "COMFORT_OPT_SEED";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<System>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_users: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume_m3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outside: Option<OutsideConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band: Option<ComfortBand>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ihcs: Option<IhcsRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thermal: Option<ThermalConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psychro: Option<PsychroConstants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub population: Option<PopulationConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub setpoint_rh_pct: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_setpoint: Option<SetpointPolicy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ihcs_only_occupant_duty: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutsideConfig {
    pub t_c: f64,
    pub rh_pct: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThermalConfig {
    pub alpha: f64,
    pub occupant_heat_w: f64,
    pub ihcs_coeff_w: f64,
    pub duration_h: f64,
    pub ach: f64,
    pub air_density: f64,
}

impl Default for ThermalConfig {
    fn default() -> Self {
        let t = ThermalParams::default();
        Self {
            alpha: t.alpha,
            occupant_heat_w: t.occupant_heat,
            ihcs_coeff_w: t.ihcs_coeff,
            duration_h: t.duration,
            ach: RoomSpec::DEFAULT_ACH,
            air_density: RoomSpec::DEFAULT_AIR_DENSITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PopulationConfig {
    pub mode: SamplingMode,
    pub sigma: f64,
    pub seed: Option<u64>,
}

impl Default for PopulationConfig {
    fn default() -> Self {
        let p = PopulationParams::default();
        Self {
            mode: p.mode,
            sigma: p.sigma,
            seed: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// Scenario overrides with the seed resolved as flag, then config, then
    /// environment, then zero.
    pub fn overrides(&self, seed_flag: Option<u64>) -> Result<Overrides, String> {
        let thermal = self.thermal.unwrap_or_default();
        let population = self.population.unwrap_or_default();
        let seed = match seed_flag.or(population.seed) {
            Some(seed) => seed,
            None => seed_from_env()?.unwrap_or(0),
        };
        Ok(Overrides {
            outside: self.outside.map(|o| AirState {
                t: o.t_c,
                rh: o.rh_pct,
            }),
            volume: self.volume_m3,
            air_density: Some(thermal.air_density),
            ach: Some(thermal.ach),
            band: self.band,
            range: self.ihcs,
            thermal: Some(ThermalParams {
                alpha: thermal.alpha,
                occupant_heat: thermal.occupant_heat_w,
                ihcs_coeff: thermal.ihcs_coeff_w,
                duration: thermal.duration_h,
            }),
            psychro: self.psychro,
            population: Some(PopulationParams {
                mode: population.mode,
                sigma: population.sigma,
                seed,
            }),
            setpoint_rh: self.setpoint_rh_pct,
            baseline_policy: self.baseline_setpoint,
            ihcs_only_occupant_duty: self.ihcs_only_occupant_duty,
        })
    }

    /// Fully populated configuration for `mode`.
    pub fn defaults(mode: Mode) -> Self {
        let outside = mode.default_outside();
        let n_users = 5;
        let population = PopulationParams::default();
        Self {
            mode: Some(mode),
            system: Some(System::Combined),
            n_users: Some(n_users),
            volume_m3: Some(comfort_opt::table1_volume(n_users)),
            outside: Some(OutsideConfig {
                t_c: outside.t,
                rh_pct: outside.rh,
            }),
            band: Some(ComfortBand::default()),
            ihcs: Some(IhcsRange::default()),
            thermal: Some(ThermalConfig::default()),
            psychro: Some(PsychroConstants::default()),
            population: Some(PopulationConfig {
                mode: population.mode,
                sigma: population.sigma,
                seed: Some(population.seed),
            }),
            setpoint_rh_pct: Some(comfort_opt::sim::DEFAULT_SETPOINT_RH),
            baseline_setpoint: Some(SetpointPolicy::default()),
            ihcs_only_occupant_duty: Some(false),
            format: None,
            out: None,
        }
    }
}

fn seed_from_env() -> Result<Option<u64>, String> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("{SEED_ENV}={v:?} is not an unsigned integer")),
        Err(_) => Ok(None),
    }
}
