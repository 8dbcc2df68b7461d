//! Power-law fits `y = A T^n` by ordinary least squares on `(ln T, ln y)`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// `ln A`
    pub log_prefactor: f64,
    /// Standard error of the slope; NaN with only two points.
    pub exponent_std_err: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

/// Least-squares fit of `ln y = ln A + n ln T`.
///
/// Logs are taken relative to the first point, `ln(T_i/T_0)` and
/// `ln(y_i/y_0)`, so rescaling all `T` or all `y` by a power of two leaves
/// the exponent and `r²` bit-for-bit unchanged.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 2 {
        return Err(Error::domain(format!("need at least 2 points, got {}", points.len())));
    }
    for (i, &(t, y)) in points.iter().enumerate() {
        if !(t.is_finite() && t > 0.0 && y.is_finite() && y > 0.0) {
            return Err(Error::domain(format!(
                "point {i} = ({t}, {y}) is not strictly positive"
            )));
        }
    }
    let (t0, y0) = points[0];
    let xs: Vec<f64> = points.iter().map(|&(t, _)| (t / t0).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| (y / y0).ln()).collect();
    let n = points.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all temperatures are identical".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    let syy: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    let exponent = sxy / sxx;
    let intercept = y_mean - exponent * x_mean;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - exponent * x).powi(2))
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    let exponent_std_err = if points.len() > 2 {
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    Ok(PowerLawFit {
        exponent,
        log_prefactor: y0.ln() + intercept - exponent * t0.ln(),
        exponent_std_err,
        r_squared,
        n_points: points.len(),
    })
}

/// True iff `|exponent - target| ≤ k_sigma · exponent_std_err`.
pub fn exponent_consistent(fit: &PowerLawFit, target: f64, k_sigma: f64) -> bool {
    (fit.exponent - target).abs() <= k_sigma * fit.exponent_std_err
}
