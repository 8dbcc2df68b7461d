//! Gamma at integer arguments, Riemann zeta and Bose–Einstein integrals.
//!
//! Every Bose–Einstein integral can be computed by two independent routes:
//! the closed form `Γ(s)ζ(s)` for integer orders, and direct quadrature of
//! `x^(s-1)/(e^x - 1)`. The two share no code beyond the order check.

mod quadrature;
mod zeta;

#[cfg(test)]
pub(crate) use quadrature::adaptive_kronrod;
pub use quadrature::{
    bose_einstein_quadrature, tail_bound, truncated_bose_einstein, QuadratureBreakdown, DEFAULT_X_MAX, HEAD_LIMIT,
};
pub use zeta::{truncation_bound as zeta_truncation_bound, zeta, BORWEIN_TERMS};

use serde::Serialize;

use crate::error::{Error, Result};

/// Γ(n) = (n-1)! for positive integers.
pub fn gamma_int(n: i64) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain(format!("gamma_int requires n >= 1, got {n}")));
    }
    Ok((1..n).map(|k| k as f64).product())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

/// Value of `∫₀^∞ x^(s-1)/(e^x-1) dx` together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoseEinsteinIntegral {
    pub order: f64,
    pub value: f64,
    pub method: Method,
}

/// `∫₀^∞ x^(s-1)/(e^x-1) dx` for `s ≥ 2`.
///
/// The closed form only exists here for integer `s`; quadrature uses
/// [`DEFAULT_X_MAX`] plus the analytic tail.
///
/// The value is increasing in `s` except on `[2, 2.1038...)`, where it dips
/// from `π²/6` to its minimum `1.6327...`.
pub fn bose_einstein_integral(s: f64, method: Method) -> Result<BoseEinsteinIntegral> {
    if !(s.is_finite() && s >= 2.0) {
        return Err(Error::domain(format!("Bose-Einstein order must be >= 2, got {s}")));
    }
    let value = match method {
        Method::ClosedForm => {
            if s.fract() != 0.0 {
                return Err(Error::UnsupportedMethod(format!(
                    "closed form needs an integer order, got {s}"
                )));
            }
            gamma_int(s as i64)? * zeta(s)?
        }
        Method::Quadrature => bose_einstein_quadrature(s, DEFAULT_X_MAX.max(s + 1.0))?.total(),
    };
    Ok(BoseEinsteinIntegral {
        order: s,
        value,
        method,
    })
}

/// Shorthand for the integer-order closed form `Γ(n)ζ(n)`.
pub(crate) fn gamma_zeta(n: i64) -> f64 {
    gamma_int(n).expect("positive order") * zeta(n as f64).expect("order >= 2")
}
