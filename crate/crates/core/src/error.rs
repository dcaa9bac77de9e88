use thiserror::Error;

/// Errors raised by the comfort and energy models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{quantity} = {value} is outside the valid range [{min}, {max}]")]
    OutOfRange {
        quantity: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("vapor pressure {pv} kPa is not below atmospheric pressure {p_atm} kPa")]
    Saturated { pv: f64, p_atm: f64 },

    #[error("population is empty")]
    EmptyPopulation,

    #[error("correction vector has {got} entries but the population has {expected} occupants")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("baseline total heat consumption is zero")]
    ZeroBaseline,

    #[error("scenarios are not comparable: {0}")]
    Incomparable(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_range(quantity: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    if value.is_finite() && (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            quantity,
            value,
            min,
            max,
        })
    }
}

pub(crate) fn check_param(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what()))
    }
}
