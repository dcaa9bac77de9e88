//! Byte-stable CSV tables.
//!
//! Floats are written with six significant digits in the style of C's `%g`,
//! columns and rows in a fixed order, LF line endings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::control::CurveSample;
use crate::error::Result;
use crate::sim::{reduction_ratio, run_scenario, Mode, Overrides, ScenarioResult, System};
use crate::thermal::KJ_PER_KWH;

pub const SWEEP_HEADER: &str = "mode,system,n_users,room_volume_m3,env_di,tdi,t_setpoint_c,rh_setpoint_pct,es,hv_kj,hf_kj,hp_kj,he_kj,ihcs_kj,thc_kj,thc_kwh";
pub const CURVE_HEADER: &str = "tdi,es,he_kj,ihcs_kj,thc_kj";
pub const REDUCTION_HEADER: &str = "mode,n_users,thc_ghcs_kj,thc_combined_kj,reduction_ratio";

const SIG_DIGITS: usize = 6;

/// Formats `v` with six significant digits, trailing zeros removed.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn sweep_row(r: &ScenarioResult) -> String {
    let s = &r.scenario;
    let d = &r.decision;
    let h = &r.heat;
    let mut row = format!("{},{},{}", s.mode, s.system, s.n_users);
    for v in [
        s.room.volume,
        r.env_di,
        d.tdi,
        d.setpoint.t,
        d.setpoint.rh,
        d.es,
        h.hv,
        h.hf,
        h.hp,
        h.he,
        h.ihcs,
        h.thc,
        h.thc / KJ_PER_KWH,
    ] {
        row.push(',');
        row.push_str(&fmt_sig(v));
    }
    row
}

pub fn sweep_csv(results: &[ScenarioResult]) -> String {
    table(SWEEP_HEADER, results.iter().map(sweep_row))
}

pub fn curve_csv(samples: &[CurveSample]) -> String {
    table(
        CURVE_HEADER,
        samples.iter().map(|s| {
            [s.tdi, s.es, s.he, s.ihcs, s.thc]
                .map(fmt_sig)
                .join(",")
        }),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionRow {
    pub mode: Mode,
    pub n_users: usize,
    pub thc_ghcs_kj: f64,
    pub thc_combined_kj: f64,
    pub reduction_ratio: f64,
}

/// Global-only versus combined consumption for each occupant count.
pub fn reduction_table(
    mode: Mode,
    user_counts: &[usize],
    overrides: &Overrides,
) -> Result<Vec<ReductionRow>> {
    user_counts
        .iter()
        .map(|&n| {
            let baseline = run_scenario(&overrides.scenario(mode, System::GhcsOnly, n))?;
            let proposed = run_scenario(&overrides.scenario(mode, System::Combined, n))?;
            Ok(ReductionRow {
                mode,
                n_users: n,
                thc_ghcs_kj: baseline.heat.thc,
                thc_combined_kj: proposed.heat.thc,
                reduction_ratio: reduction_ratio(&baseline, &proposed)?,
            })
        })
        .collect()
}

pub fn reduction_csv(rows: &[ReductionRow]) -> String {
    table(
        REDUCTION_HEADER,
        rows.iter().map(|r| {
            format!(
                "{},{},{},{},{}",
                r.mode,
                r.n_users,
                fmt_sig(r.thc_ghcs_kj),
                fmt_sig(r.thc_combined_kj),
                fmt_sig(r.reduction_ratio)
            )
        }),
    )
}

fn table(header: &str, rows: impl Iterator<Item = String>) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{row}");
    }
    out
}
