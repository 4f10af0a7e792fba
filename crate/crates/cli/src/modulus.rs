//! Conversion between decimal moduli `|z_j|` and exact log-coordinates.
//!
//! Logarithms of decimals are irrational in general, so these conversions
//! round: `log|z|` is rounded to the nearest multiple of `10^-precision`.
//! They are an input/output convenience only; nothing computed from a
//! converted point is exact with respect to the original moduli.

use crosshull::reinhardt::{LogCoord, LogPoint};
use crosshull::Rational;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

/// Largest supported number of decimal digits (double precision).
pub const MAX_PRECISION: u32 = 15;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModulusError {
    #[error("modulus {0} is negative")]
    Negative(String),
    #[error("{0}: not a decimal number")]
    Parse(String),
    #[error("precision {0} exceeds the supported {MAX_PRECISION} digits")]
    Precision(u32),
}

fn check_precision(precision: u32) -> Result<(), ModulusError> {
    if precision > MAX_PRECISION {
        Err(ModulusError::Precision(precision))
    } else {
        Ok(())
    }
}

/// `log|z_j|` per coordinate, `-∞` for zero moduli.
pub fn log_point(moduli: &[String], precision: u32) -> Result<LogPoint, ModulusError> {
    check_precision(precision)?;
    let scale = 10f64.powi(precision as i32);
    let coords = moduli
        .iter()
        .map(|m| {
            let v: f64 = m.trim().parse().map_err(|_| ModulusError::Parse(m.clone()))?;
            if !v.is_finite() {
                return Err(ModulusError::Parse(m.clone()));
            }
            if v < 0.0 {
                return Err(ModulusError::Negative(m.clone()));
            }
            if v == 0.0 {
                return Ok(LogCoord::NegInf);
            }
            let n = (v.ln() * scale).round();
            let num = BigInt::from(n as i64);
            let den = BigInt::from(10u64.pow(precision));
            Ok(LogCoord::Finite(Rational::new(num, den)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LogPoint(coords))
}

/// Decimal moduli `exp(x_j)` with `precision` digits after the point; `-∞` maps to `0`.
pub fn modulus_point(p: &LogPoint, precision: u32) -> Result<Vec<String>, ModulusError> {
    check_precision(precision)?;
    Ok(p.0
        .iter()
        .map(|c| match c {
            LogCoord::NegInf => "0".to_string(),
            LogCoord::Finite(x) => {
                let v = x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY });
                format!("{:.*}", precision as usize, v.exp())
            }
        })
        .collect())
}
