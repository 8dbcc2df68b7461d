//! Riemann zeta on the real half-line `s ≥ 2`.
//!
//! Uses Borwein's accelerated alternating series for the Dirichlet eta
//! function (P. Borwein, "An efficient algorithm for the Riemann zeta
//! function", 2000, algorithm 2):
//!
//! ```text
//! d_k  = n Σ_{i=0}^{k} (n+i-1)! 4^i / ((n-i)! (2i)!)
//! η(s) = -1/d_n Σ_{k=0}^{n-1} (-1)^k (d_k - d_n) / (k+1)^s + γ_n(s)
//! ζ(s) = η(s) / (1 - 2^(1-s))
//! ```
//!
//! For real `s` the truncation satisfies `|γ_n(s)| ≤ 3 / ((3+√8)^n Γ(s))`.
//! On `s ≥ 2` we have `Γ(s) ≥ 1` and `1 - 2^(1-s) ≥ 1/2`, so the error in
//! ζ is at most `6 / (3+√8)^n`. With `n = 28` that is below `2e-21`, far
//! under the rounding error of the final sum (a few ulp).

use crate::error::{Error, Result};

/// Number of terms in the accelerated series.
pub const BORWEIN_TERMS: usize = 28;

/// Upper bound on the series-truncation error of [`zeta`] for `s ≥ 2`.
pub fn truncation_bound() -> f64 {
    6.0 / (3.0 + 8f64.sqrt()).powi(BORWEIN_TERMS as i32)
}

fn borwein_weights() -> [f64; BORWEIN_TERMS + 1] {
    let n = BORWEIN_TERMS as f64;
    let mut d = [0.0; BORWEIN_TERMS + 1];
    // term_i = (n+i-1)! 4^i / ((n-i)! (2i)!), term_0 = 1/n
    let mut term = 1.0 / n;
    let mut acc = term;
    d[0] = n * acc;
    for i in 0..BORWEIN_TERMS {
        let fi = i as f64;
        term *= 4.0 * (n + fi) * (n - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
        acc += term;
        d[i + 1] = n * acc;
    }
    d
}

/// Riemann zeta function for real `s ≥ 2`.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s.is_finite() && s >= 2.0) {
        return Err(Error::domain(format!("zeta requires s >= 2, got {s}")));
    }
    // 2^(1-s) underflows long before the series matters
    if s > 60.0 {
        return Ok(1.0 + 2f64.powf(-s) + 3f64.powf(-s));
    }
    let d = borwein_weights();
    let dn = d[BORWEIN_TERMS];
    let mut sum = 0.0;
    for (k, dk) in d.iter().take(BORWEIN_TERMS).enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (dk - dn) / ((k + 1) as f64).powf(s);
    }
    let eta = -sum / dn;
    Ok(eta / (1.0 - 2f64.powf(1.0 - s)))
}
