//! Occupant comfort model.
//!
//! Each occupant carries an integer comfort offset `dp` in [-3, 3] (DI units).
//! Their sensation of discomfort is the room's target DI plus that offset
//! plus the correction `dn` applied by their wearable device. Anyone whose
//! sensation falls inside the comfort band is comfortable; everyone else
//! contributes their distance to the band to the total error.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{check_param, Error, Result};

/// Smallest individual comfort offset.
pub const DP_MIN: i32 = -3;
/// Largest individual comfort offset.
pub const DP_MAX: i32 = 3;

pub const DEFAULT_SIGMA: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occupant {
    pub id: usize,
    pub dp: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    /// Offsets from evenly spaced normal quantiles; independent of the seed.
    Stratified,
    /// Offsets drawn independently from a seeded generator.
    #[serde(alias = "random")]
    SeededRandom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub occupants: Vec<Occupant>,
    pub sampling_mode: SamplingMode,
    pub seed: u64,
    pub sigma: f64,
}

impl Population {
    /// Builds a population with explicit offsets, ids assigned in order.
    pub fn from_offsets(dps: &[i32]) -> Result<Self> {
        for &dp in dps {
            check_param((DP_MIN..=DP_MAX).contains(&dp), || {
                format!("comfort offset {dp} outside [{DP_MIN}, {DP_MAX}]")
            })?;
        }
        Ok(Self {
            occupants: dps
                .iter()
                .enumerate()
                .map(|(id, &dp)| Occupant { id, dp })
                .collect(),
            sampling_mode: SamplingMode::Stratified,
            seed: 0,
            sigma: DEFAULT_SIGMA,
        })
    }

    pub fn len(&self) -> usize {
        self.occupants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupants.is_empty()
    }

    pub fn offsets(&self) -> impl Iterator<Item = i32> + '_ {
        self.occupants.iter().map(|o| o.dp)
    }
}

/// Draws a population of `n` occupants whose offsets follow a rounded,
/// clamped normal distribution with mean 0 and standard deviation `sigma`.
pub fn sample_population(n: usize, mode: SamplingMode, seed: u64, sigma: f64) -> Result<Population> {
    check_param(n >= 1, || "population size must be at least 1".into())?;
    check_param(sigma.is_finite() && sigma > 0.0, || {
        format!("sigma must be strictly positive, got {sigma}")
    })?;

    let level = |z: f64| ((sigma * z).round() as i32).clamp(DP_MIN, DP_MAX);
    let dps: Vec<i32> = match mode {
        SamplingMode::Stratified => {
            let normal = Normal::standard();
            (0..n)
                .map(|j| level(normal.inverse_cdf((j as f64 + 0.5) / n as f64)))
                .collect()
        }
        SamplingMode::SeededRandom => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| level(StandardNormal.sample(&mut rng)))
                .collect()
        }
    };

    Ok(Population {
        occupants: dps
            .into_iter()
            .enumerate()
            .map(|(id, dp)| Occupant { id, dp })
            .collect(),
        sampling_mode: mode,
        seed,
        sigma,
    })
}

/// The DI band inside which an occupant is comfortable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComfortBand {
    pub lower: f64,
    pub upper: f64,
}

impl Default for ComfortBand {
    fn default() -> Self {
        Self {
            lower: 65.0,
            upper: 70.0,
        }
    }
}

impl ComfortBand {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        let band = Self { lower, upper };
        band.validate()?;
        Ok(band)
    }

    pub fn validate(&self) -> Result<()> {
        check_param(
            self.lower.is_finite() && self.upper.is_finite() && self.lower < self.upper,
            || format!("comfort band [{}, {}] must satisfy lower < upper", self.lower, self.upper),
        )
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lower, self.upper)
    }
}

/// Integer correction levels a wearable device can apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IhcsRange {
    pub min_dn: i32,
    pub max_dn: i32,
}

impl Default for IhcsRange {
    fn default() -> Self {
        Self {
            min_dn: -5,
            max_dn: 5,
        }
    }
}

impl IhcsRange {
    /// A range admitting only `dn = 0`.
    pub const IDLE: Self = Self { min_dn: 0, max_dn: 0 };

    pub fn validate(&self) -> Result<()> {
        check_param(self.min_dn <= 0 && 0 <= self.max_dn, || {
            format!(
                "IHCS range [{}, {}] must contain 0",
                self.min_dn, self.max_dn
            )
        })
    }

    pub fn contains(&self, dn: i32) -> bool {
        (self.min_dn..=self.max_dn).contains(&dn)
    }

    pub fn levels(&self) -> impl Iterator<Item = i32> + Clone {
        self.min_dn..=self.max_dn
    }
}

/// Sensation of discomfort index.
pub fn sdi(tdi: f64, dp: i32, dn: i32) -> f64 {
    tdi + f64::from(dp) + f64::from(dn)
}

/// Distance from `sdi_value` to the comfort band; zero inside it.
pub fn comfort_error(sdi_value: f64, band: &ComfortBand) -> f64 {
    if sdi_value < band.lower {
        band.lower - sdi_value
    } else if sdi_value > band.upper {
        sdi_value - band.upper
    } else {
        0.0
    }
}

/// Sum of comfort errors over the population (Es).
pub fn total_error(pop: &Population, tdi: f64, dn: &[i32], band: &ComfortBand) -> Result<f64> {
    if dn.len() != pop.len() {
        return Err(Error::LengthMismatch {
            expected: pop.len(),
            got: dn.len(),
        });
    }
    Ok(pop
        .offsets()
        .zip(dn)
        .map(|(dp, &dn)| comfort_error(sdi(tdi, dp, dn), band))
        .sum())
}
