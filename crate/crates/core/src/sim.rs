//! Scenario assembly and sweeps.
//!
//! A scenario is one room, one outdoor state, one population and one control
//! system, run for a fixed duration. Sweeps cover the Cartesian product of
//! modes, systems and occupant counts in a fixed order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::comfort::{sample_population, ComfortBand, IhcsRange, SamplingMode, DEFAULT_SIGMA};
use crate::control::{
    combined_decision, ghcs_only_decision, ihcs_only_decision, ControlDecision, EnergyModel,
    SetpointPolicy,
};
use crate::error::{check_param, check_range, Error, Result};
use crate::psychro::{discomfort_index, AirState, PsychroConstants};
use crate::thermal::{HeatBreakdown, RoomSpec, ThermalParams};

/// Standard room volume per maximum number of users, m³.
pub const TABLE1: [(usize, f64); 5] = [
    (5, 172.3),
    (10, 344.5),
    (15, 516.8),
    (20, 689.0),
    (25, 861.3),
];

/// Room volume per user for counts not listed in [`TABLE1`], m³.
pub const VOLUME_PER_USER: f64 = 34.45;

pub const DEFAULT_SETPOINT_RH: f64 = 60.0;

/// Standard room volume for `n_users` occupants.
pub fn table1_volume(n_users: usize) -> f64 {
    TABLE1
        .iter()
        .find(|(n, _)| *n == n_users)
        .map(|&(_, v)| v)
        .unwrap_or(VOLUME_PER_USER * n_users as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Cooling,
    Heating,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Cooling, Mode::Heating];

    /// Outdoor state of the mode's reference scenario.
    pub fn default_outside(self) -> AirState {
        match self {
            Mode::Cooling => AirState { t: 30.0, rh: 60.0 },
            Mode::Heating => AirState { t: 12.0, rh: 60.0 },
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Cooling => "cooling",
            Mode::Heating => "heating",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cooling" => Ok(Mode::Cooling),
            "heating" => Ok(Mode::Heating),
            other => Err(Error::InvalidParameter(format!(
                "unknown mode {other:?} (expected cooling or heating)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum System {
    GhcsOnly,
    IhcsOnly,
    Combined,
}

impl System {
    pub const ALL: [System; 3] = [System::GhcsOnly, System::IhcsOnly, System::Combined];

    pub fn as_str(self) -> &'static str {
        match self {
            System::GhcsOnly => "ghcs-only",
            System::IhcsOnly => "ihcs-only",
            System::Combined => "combined",
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ghcs-only" | "ghcs" => Ok(System::GhcsOnly),
            "ihcs-only" | "ihcs" => Ok(System::IhcsOnly),
            "combined" => Ok(System::Combined),
            other => Err(Error::InvalidParameter(format!(
                "unknown system {other:?} (expected ghcs-only, ihcs-only or combined)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationParams {
    pub mode: SamplingMode,
    pub sigma: f64,
    pub seed: u64,
}

impl Default for PopulationParams {
    fn default() -> Self {
        Self {
            mode: SamplingMode::Stratified,
            sigma: DEFAULT_SIGMA,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub mode: Mode,
    pub system: System,
    pub n_users: usize,
    pub outside: AirState,
    pub room: RoomSpec,
    pub band: ComfortBand,
    pub range: IhcsRange,
    pub thermal: ThermalParams,
    pub psychro: PsychroConstants,
    pub population: PopulationParams,
    pub setpoint_rh: f64,
    pub baseline_policy: SetpointPolicy,
    /// When set, the devices-only system keeps the global system running just
    /// to remove occupant heat; otherwise it is off.
    pub ihcs_only_occupant_duty: bool,
}

impl Scenario {
    /// Reference scenario for the given mode, system and occupant count.
    pub fn new(mode: Mode, system: System, n_users: usize) -> Self {
        Overrides::default().scenario(mode, system, n_users)
    }

    pub fn validate(&self) -> Result<()> {
        check_param(self.n_users >= 1, || "n_users must be at least 1".into())?;
        self.outside.validate()?;
        self.room.validate()?;
        self.band.validate()?;
        self.range.validate()?;
        self.thermal.validate()?;
        self.psychro.validate()?;
        check_range("setpoint humidity", self.setpoint_rh, 0.0, 100.0)
    }

    pub fn energy_model(&self) -> EnergyModel {
        EnergyModel {
            outside: self.outside,
            room: self.room,
            thermal: self.thermal,
            psychro: self.psychro,
            setpoint_rh: self.setpoint_rh,
        }
    }
}

/// Scenario settings that replace the reference values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    /// Outdoor state for every mode.
    pub outside: Option<AirState>,
    pub volume: Option<f64>,
    pub air_density: Option<f64>,
    pub ach: Option<f64>,
    pub band: Option<ComfortBand>,
    pub range: Option<IhcsRange>,
    pub thermal: Option<ThermalParams>,
    pub psychro: Option<PsychroConstants>,
    pub population: Option<PopulationParams>,
    pub setpoint_rh: Option<f64>,
    pub baseline_policy: Option<SetpointPolicy>,
    pub ihcs_only_occupant_duty: Option<bool>,
}

impl Overrides {
    pub fn scenario(&self, mode: Mode, system: System, n_users: usize) -> Scenario {
        Scenario {
            mode,
            system,
            n_users,
            outside: self.outside.unwrap_or_else(|| mode.default_outside()),
            room: RoomSpec {
                volume: self.volume.unwrap_or_else(|| table1_volume(n_users)),
                air_density: self.air_density.unwrap_or(RoomSpec::DEFAULT_AIR_DENSITY),
                ach: self.ach.unwrap_or(RoomSpec::DEFAULT_ACH),
            },
            band: self.band.unwrap_or_default(),
            range: self.range.unwrap_or_default(),
            thermal: self.thermal.unwrap_or_default(),
            psychro: self.psychro.unwrap_or_default(),
            population: self.population.unwrap_or_default(),
            setpoint_rh: self.setpoint_rh.unwrap_or(DEFAULT_SETPOINT_RH),
            baseline_policy: self.baseline_policy.unwrap_or_default(),
            ihcs_only_occupant_duty: self.ihcs_only_occupant_duty.unwrap_or(false),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario: Scenario,
    pub env_di: f64,
    pub decision: ControlDecision,
    pub heat: HeatBreakdown,
}

pub fn run_scenario(s: &Scenario) -> Result<ScenarioResult> {
    s.validate()?;
    let env_di = discomfort_index(s.outside)?;
    let pop = sample_population(
        s.n_users,
        s.population.mode,
        s.population.seed,
        s.population.sigma,
    )?;
    let energy = s.energy_model();

    let (decision, heat) = match s.system {
        System::GhcsOnly => {
            let d = ghcs_only_decision(env_di, &pop, &s.band, s.baseline_policy, s.setpoint_rh)?;
            let heat = energy.breakdown(d.tdi, s.n_users, &d.dn)?;
            (d, heat)
        }
        System::IhcsOnly => {
            let d = ihcs_only_decision(s.outside, &pop, &s.band, &s.range)?;
            let mut heat = energy.breakdown_ghcs_off(s.n_users, &d.dn);
            if s.ihcs_only_occupant_duty {
                heat = HeatBreakdown::ghcs(&s.thermal, 0.0, 0.0, heat.hp, heat.ihcs);
            }
            (d, heat)
        }
        System::Combined => {
            let d = combined_decision(env_di, &pop, &s.band, &s.range, &energy)?;
            let heat = energy.breakdown(d.tdi, s.n_users, &d.dn)?;
            (d, heat)
        }
    };

    Ok(ScenarioResult {
        scenario: s.clone(),
        env_di,
        decision,
        heat,
    })
}

/// Scenarios of a sweep in output order: mode-major, then system, then count.
pub fn sweep_scenarios(
    modes: &[Mode],
    systems: &[System],
    user_counts: &[usize],
    overrides: &Overrides,
) -> Result<Vec<Scenario>> {
    check_param(!modes.is_empty(), || "sweep needs at least one mode".into())?;
    check_param(!systems.is_empty(), || "sweep needs at least one system".into())?;
    check_param(!user_counts.is_empty(), || "sweep needs at least one user count".into())?;
    let mut out = Vec::with_capacity(modes.len() * systems.len() * user_counts.len());
    for &mode in modes {
        for &system in systems {
            for &n in user_counts {
                out.push(overrides.scenario(mode, system, n));
            }
        }
    }
    Ok(out)
}

/// Runs every scenario of the sweep; scenarios are evaluated in parallel but
/// results come back in declaration order.
pub fn sweep(
    modes: &[Mode],
    systems: &[System],
    user_counts: &[usize],
    overrides: &Overrides,
) -> Result<Vec<ScenarioResult>> {
    sweep_scenarios(modes, systems, user_counts, overrides)?
        .par_iter()
        .map(run_scenario)
        .collect()
}

/// Fraction of the baseline's total heat consumption saved by `proposed`.
pub fn reduction_ratio(baseline: &ScenarioResult, proposed: &ScenarioResult) -> Result<f64> {
    let (b, p) = (&baseline.scenario, &proposed.scenario);
    if b.mode != p.mode || b.n_users != p.n_users {
        return Err(Error::Incomparable(format!(
            "{} with {} users vs {} with {} users",
            b.mode, b.n_users, p.mode, p.n_users
        )));
    }
    if baseline.heat.thc <= 0.0 {
        return Err(Error::ZeroBaseline);
    }
    Ok((baseline.heat.thc - proposed.heat.thc) / baseline.heat.thc)
}
