//! Thermal comfort and energy optimization for rooms served by a global
//! heating/cooling system and per-occupant wearable devices.
//!
//! - [`psychro`]: discomfort index and moist-air enthalpy.
//! - [`comfort`]: occupant population, sensation index, comfort error.
//! - [`thermal`]: heat consumption of the global system and the devices.
//! - [`control`]: feasible TDI interval, optimal TDI, baseline controllers.
//! - [`sim`]: reference scenarios and sweeps.
//! - [`report`]: byte-stable CSV tables.

pub mod comfort;
pub mod control;
pub mod report;
pub mod error;
pub mod psychro;
pub mod sim;
pub mod thermal;

pub use comfort::{
    comfort_error, sample_population, sdi, total_error, ComfortBand, IhcsRange, Occupant,
    Population, SamplingMode,
};
pub use control::{
    assign_dn, combined_decision, curve, curve_argmin, feasible_tdi_interval, ghcs_only_decision,
    ihcs_only_decision, optimal_tdi, ControlDecision, CurveSample, EnergyModel, SetpointPolicy,
    TdiInterval,
};
pub use error::{Error, Result};
pub use psychro::{discomfort_index, temperature_for_di, AirState, PsychroConstants};
pub use sim::{
    reduction_ratio, run_scenario, sweep, table1_volume, Mode, Overrides, PopulationParams,
    Scenario, ScenarioResult, System,
};
pub use thermal::{HeatBreakdown, RoomSpec, ThermalParams};
