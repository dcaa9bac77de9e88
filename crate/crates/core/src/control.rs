//! Target discomfort index selection.
//!
//! The combined controller minimizes the total comfort error first and total
//! heat consumption second. Every TDI inside the feasible interval reaches
//! zero error, so the first stage reduces to that interval; within it the
//! controller starts from the projection of the ambient DI (the TDI closest to
//! what the room would be without conditioning) and only moves away from it
//! when the energy model finds a strictly cheaper point.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::comfort::{comfort_error, sdi, total_error, ComfortBand, IhcsRange, Population};
use crate::error::{check_param, Error, Result};
use crate::psychro::{discomfort_index, temperature_for_di, AirState, PsychroConstants};
use crate::thermal::{
    conditioning_heat, ihcs_consumption, infiltration_heat, occupant_heat, HeatBreakdown,
    RoomSpec, ThermalParams,
};

/// Closed TDI interval, DI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TdiInterval {
    pub lo: f64,
    pub hi: f64,
}

impl TdiInterval {
    pub fn contains(&self, tdi: f64) -> bool {
        self.lo <= tdi && tdi <= self.hi
    }

    pub fn clamp(&self, tdi: f64) -> f64 {
        tdi.clamp(self.lo, self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetpointPolicy {
    /// Clamp the ambient DI into the comfort band.
    #[default]
    Nearest,
    /// Band midpoint.
    Center,
    /// Lowest comfort error inside the band, ties toward the ambient DI.
    MinEs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlDecision {
    pub tdi: f64,
    pub setpoint: AirState,
    pub dn: Vec<i32>,
    pub es: f64,
}

impl ControlDecision {
    fn build(
        tdi: f64,
        setpoint: AirState,
        dn: Vec<i32>,
        pop: &Population,
        band: &ComfortBand,
    ) -> Result<Self> {
        let es = total_error(pop, tdi, &dn, band)?;
        Ok(Self {
            tdi,
            setpoint,
            dn,
            es,
        })
    }
}

fn require_occupants(pop: &Population) -> Result<()> {
    if pop.is_empty() {
        Err(Error::EmptyPopulation)
    } else {
        Ok(())
    }
}

/// TDIs at which every occupant can be brought into the band by their device.
///
/// Returns `None` when no such TDI exists.
pub fn feasible_tdi_interval(
    pop: &Population,
    band: &ComfortBand,
    range: &IhcsRange,
) -> Result<Option<TdiInterval>> {
    require_occupants(pop)?;
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for dp in pop.offsets() {
        let dp = f64::from(dp);
        lo = lo.max(band.lower - dp - f64::from(range.max_dn));
        hi = hi.min(band.upper - dp - f64::from(range.min_dn));
    }
    Ok((lo <= hi).then_some(TdiInterval { lo, hi }))
}

/// Correction for a single occupant: lowest comfort error, then smallest
/// magnitude, then the level that moves the sensation toward the band midpoint.
pub fn assign_dn_one(tdi: f64, dp: i32, band: &ComfortBand, range: &IhcsRange) -> i32 {
    let mid = band.midpoint();
    let key = |dn: i32| {
        let s = sdi(tdi, dp, dn);
        (comfort_error(s, band), dn.unsigned_abs(), (s - mid).abs())
    };
    range
        .levels()
        .min_by(|&a, &b| {
            let (ea, ma, da) = key(a);
            let (eb, mb, db) = key(b);
            ea.total_cmp(&eb)
                .then(ma.cmp(&mb))
                .then(da.total_cmp(&db))
        })
        .unwrap_or(0)
}

pub fn assign_dn(tdi: f64, pop: &Population, band: &ComfortBand, range: &IhcsRange) -> Vec<i32> {
    pop.offsets()
        .map(|dp| assign_dn_one(tdi, dp, band, range))
        .collect()
}

/// Comfort error at `tdi` with every device set by [`assign_dn`].
fn best_es(tdi: f64, pop: &Population, band: &ComfortBand, range: &IhcsRange) -> f64 {
    pop.offsets()
        .map(|dp| comfort_error(sdi(tdi, dp, assign_dn_one(tdi, dp, band, range)), band))
        .sum()
}

/// TDI with the lowest achievable comfort error, ties broken toward `env_di`.
///
/// The error is piecewise linear in the TDI with kinks where some occupant's
/// sensation crosses a band edge, so its minimum is attained at a kink or,
/// on a flat stretch, at the point nearest `env_di`.
fn min_es_tdi(
    env_di: f64,
    pop: &Population,
    band: &ComfortBand,
    range: &IhcsRange,
    window: Option<(f64, f64)>,
) -> f64 {
    let clip = |t: f64| match window {
        Some((lo, hi)) => t.clamp(lo, hi),
        None => t,
    };
    let mut candidates = vec![clip(env_di)];
    if let Some((lo, hi)) = window {
        candidates.extend([lo, hi]);
    }
    for dp in pop.offsets() {
        for dn in range.levels() {
            candidates.push(clip(band.lower - f64::from(dp) - f64::from(dn)));
            candidates.push(clip(band.upper - f64::from(dp) - f64::from(dn)));
        }
    }
    candidates
        .into_iter()
        .map(|t| (best_es(t, pop, band, range), (t - env_di).abs(), t))
        .min_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(a.1.total_cmp(&b.1))
                .then(a.2.total_cmp(&b.2))
        })
        .map(|(_, _, t)| t)
        .unwrap_or(env_di)
}

/// The zero-error TDI closest to the ambient DI.
///
/// When no TDI gives zero error (only possible with a narrowed device range),
/// falls back to the error-minimizing TDI nearest the ambient DI.
pub fn optimal_tdi(
    env_di: f64,
    pop: &Population,
    band: &ComfortBand,
    range: &IhcsRange,
) -> Result<f64> {
    Ok(match feasible_tdi_interval(pop, band, range)? {
        Some(interval) => interval.clamp(env_di),
        None => min_es_tdi(env_di, pop, band, range, None),
    })
}

/// Everything needed to price a TDI: outdoor state, room, and constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyModel {
    pub outside: AirState,
    pub room: RoomSpec,
    pub thermal: ThermalParams,
    pub psychro: PsychroConstants,
    /// Humidity the global system holds, %.
    pub setpoint_rh: f64,
}

impl EnergyModel {
    pub fn setpoint(&self, tdi: f64) -> Result<AirState> {
        AirState::new(temperature_for_di(tdi, self.setpoint_rh)?, self.setpoint_rh)
    }

    /// Heat figures with the global system holding `tdi` and devices set to `dn`.
    pub fn breakdown(&self, tdi: f64, n_users: usize, dn: &[i32]) -> Result<HeatBreakdown> {
        let target = self.setpoint(tdi)?;
        let hv = conditioning_heat(&self.room, self.outside, target, &self.psychro)?;
        let hf = infiltration_heat(
            &self.room,
            self.outside,
            target,
            self.thermal.duration,
            &self.psychro,
        )?;
        let hp = occupant_heat(n_users, &self.thermal);
        let ihcs = ihcs_consumption(dn, &self.thermal);
        Ok(HeatBreakdown::ghcs(&self.thermal, hv, hf, hp, ihcs))
    }

    /// Heat figures with the global system off and devices set to `dn`.
    pub fn breakdown_ghcs_off(&self, n_users: usize, dn: &[i32]) -> HeatBreakdown {
        HeatBreakdown::ghcs_off(
            occupant_heat(n_users, &self.thermal),
            ihcs_consumption(dn, &self.thermal),
        )
    }

    /// Signed argument of the global system's absolute value at `tdi`.
    fn load_balance(&self, tdi: f64, n_users: usize) -> Result<f64> {
        let b = self.breakdown(tdi, n_users, &[])?;
        Ok(b.hv - b.hf - b.hp)
    }
}

pub fn ghcs_only_decision(
    env_di: f64,
    pop: &Population,
    band: &ComfortBand,
    policy: SetpointPolicy,
    setpoint_rh: f64,
) -> Result<ControlDecision> {
    require_occupants(pop)?;
    let tdi = match policy {
        SetpointPolicy::Nearest => band.clamp(env_di),
        SetpointPolicy::Center => band.midpoint(),
        SetpointPolicy::MinEs => min_es_tdi(
            env_di,
            pop,
            band,
            &IhcsRange::IDLE,
            Some((band.lower, band.upper)),
        ),
    };
    let setpoint = AirState::new(temperature_for_di(tdi, setpoint_rh)?, setpoint_rh)?;
    ControlDecision::build(tdi, setpoint, vec![0; pop.len()], pop, band)
}

/// Devices only: the room stays at `room_air` and each occupant's device
/// does what it can.
pub fn ihcs_only_decision(
    room_air: AirState,
    pop: &Population,
    band: &ComfortBand,
    range: &IhcsRange,
) -> Result<ControlDecision> {
    require_occupants(pop)?;
    let tdi = discomfort_index(room_air)?;
    let dn = assign_dn(tdi, pop, band, range);
    ControlDecision::build(tdi, room_air, dn, pop, band)
}

/// Lowest-consumption zero-error TDI, starting from the projection of the
/// ambient DI.
///
/// On the feasible interval the device cost only changes where an occupant's
/// best correction steps, and the global cost is `alpha * |A(tdi)|` with `A`
/// increasing, so the minimum sits at a step, an interval end, the root of
/// `A`, or the projection itself.
fn lowest_cost_tdi(
    env_di: f64,
    interval: TdiInterval,
    pop: &Population,
    band: &ComfortBand,
    range: &IhcsRange,
    energy: &EnergyModel,
) -> Result<f64> {
    let projection = interval.clamp(env_di);
    let n = pop.len();
    let mut candidates = vec![projection, interval.lo, interval.hi];
    for dp in pop.offsets() {
        for dn in range.levels() {
            for edge in [band.lower, band.upper] {
                let t = edge - f64::from(dp) - f64::from(dn);
                if interval.contains(t) {
                    candidates.push(t);
                }
            }
        }
    }

    let (a_lo, a_hi) = (
        energy.load_balance(interval.lo, n)?,
        energy.load_balance(interval.hi, n)?,
    );
    if a_lo < 0.0 && a_hi > 0.0 {
        let (mut lo, mut hi) = (interval.lo, interval.hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if energy.load_balance(mid, n)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        candidates.extend([lo, hi]);
    }

    let mut best = (projection, thc_at(projection, pop, band, range, energy)?);
    for t in candidates {
        let thc = thc_at(t, pop, band, range, energy)?;
        let tie = (thc - best.1).abs() <= 1e-9 * best.1.abs().max(1.0);
        let better = if tie {
            (t - env_di).abs() < (best.0 - env_di).abs()
        } else {
            thc < best.1
        };
        if better {
            best = (t, thc);
        }
    }
    Ok(best.0)
}

fn thc_at(
    tdi: f64,
    pop: &Population,
    band: &ComfortBand,
    range: &IhcsRange,
    energy: &EnergyModel,
) -> Result<f64> {
    let dn = assign_dn(tdi, pop, band, range);
    Ok(energy.breakdown(tdi, pop.len(), &dn)?.thc)
}

/// Global system and devices together: zero comfort error first, then the
/// lowest total heat consumption.
pub fn combined_decision(
    env_di: f64,
    pop: &Population,
    band: &ComfortBand,
    range: &IhcsRange,
    energy: &EnergyModel,
) -> Result<ControlDecision> {
    let tdi = match feasible_tdi_interval(pop, band, range)? {
        Some(interval) => lowest_cost_tdi(env_di, interval, pop, band, range, energy)?,
        None => optimal_tdi(env_di, pop, band, range)?,
    };
    let dn = assign_dn(tdi, pop, band, range);
    ControlDecision::build(tdi, energy.setpoint(tdi)?, dn, pop, band)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub tdi: f64,
    pub es: f64,
    pub he: f64,
    pub ihcs: f64,
    pub thc: f64,
}

/// Samples comfort error and consumption of the combined system on a TDI grid.
///
/// Grid points are `lo + k * step` for every `k` with the point not past `hi`.
pub fn curve(
    energy: &EnergyModel,
    pop: &Population,
    band: &ComfortBand,
    range: &IhcsRange,
    tdi_lo: f64,
    tdi_hi: f64,
    step: f64,
) -> Result<Vec<CurveSample>> {
    require_occupants(pop)?;
    check_param(tdi_lo.is_finite() && tdi_hi.is_finite() && tdi_lo < tdi_hi, || {
        format!("TDI range must satisfy lo < hi, got {tdi_lo}:{tdi_hi}")
    })?;
    check_param(step.is_finite() && step > 0.0, || {
        format!("TDI step must be positive, got {step}")
    })?;
    let count = ((tdi_hi - tdi_lo) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .into_par_iter()
        .map(|k| {
            let tdi = tdi_lo + k as f64 * step;
            let dn = assign_dn(tdi, pop, band, range);
            let es = total_error(pop, tdi, &dn, band)?;
            let heat = energy.breakdown(tdi, pop.len(), &dn)?;
            Ok(CurveSample {
                tdi,
                es,
                he: heat.he,
                ihcs: heat.ihcs,
                thc: heat.thc,
            })
        })
        .collect()
}

/// Lexicographic (es, thc) minimum of a sampled curve; earliest sample on ties.
pub fn curve_argmin(samples: &[CurveSample]) -> Option<&CurveSample> {
    samples.iter().min_by(|a, b| match a.es.total_cmp(&b.es) {
        Ordering::Equal => a.thc.total_cmp(&b.thc),
        other => other,
    })
}
