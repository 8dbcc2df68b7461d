//! Macroscopic derivation of the pressure law from `U = αPV`.
//!
//! With `U = U(V, T)`, the equation of state `U = αPV`, the first law
//! `dU = dQ - dL` (the `μ dN` term set to zero) and
//! `(∂U/∂V)_T = T (∂P/∂T)_V - P`, one gets `αP = T dP/dT - P`, i.e.
//!
//! ```text
//! dP/P = (α + 1) dT/T
//! ```
//!
//! For `α = 3` this is the fourth-power law. `α = d` is the equation of
//! state of a photon gas in `d` dimensions.

use serde::Serialize;

use crate::error::{ensure_positive, Error, Result};
use crate::photon_gas::{observables, PhysicalConstants};

/// Order of the fixed-step integrator used by [`integrate_pressure`].
pub const INTEGRATOR_ORDER: u32 = 4;

/// Macroscopic state of a radiation gas obeying `U = αPV`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoState {
    /// J
    pub internal_energy: f64,
    /// Pa
    pub pressure: f64,
    /// m³
    pub volume: f64,
    /// K
    pub temperature: f64,
    pub alpha: f64,
}

impl ThermoState {
    pub fn new(pressure: f64, volume: f64, temperature: f64, alpha: f64) -> Result<Self> {
        ensure_positive("pressure", pressure)?;
        ensure_positive("volume", volume)?;
        ensure_positive("temperature", temperature)?;
        ensure_positive("alpha", alpha)?;
        Ok(Self {
            internal_energy: alpha * pressure * volume,
            pressure,
            volume,
            temperature,
            alpha,
        })
    }

    /// The three-dimensional photon gas at `(V, T)`, `α = 3`.
    pub fn photon_gas(volume: f64, temperature: f64, constants: &PhysicalConstants) -> Result<Self> {
        let obs = observables(volume, temperature, constants)?;
        Self::new(obs.pressure, volume, temperature, 3.0)
    }

    /// The chemical-potential term of the first law; always zero.
    pub fn mu_dn(&self) -> f64 {
        0.0
    }
}

/// Exponent `n` of `P ∝ T^n` implied by `U = αPV`: `n = α + 1`.
pub fn pressure_exponent(alpha: f64) -> Result<f64> {
    ensure_positive("alpha", alpha)?;
    Ok(alpha + 1.0)
}

/// Integrates `dP/P = (α+1) dT/T` from `(t0, p0)` to `t1`.
///
/// The variable is `u = ln T`, in which the equation is linear with constant
/// coefficient, `dP/du = (α+1) P`. Classical fixed-step RK4 in `u`; the
/// global relative error behaves as `C · (|ln(t1/t0)| / steps)^4`.
pub fn integrate_pressure(t0: f64, p0: f64, t1: f64, alpha: f64, steps: u32) -> Result<f64> {
    ensure_positive("t0", t0)?;
    ensure_positive("p0", p0)?;
    ensure_positive("t1", t1)?;
    let rate = pressure_exponent(alpha)?;
    if steps == 0 {
        return Err(Error::domain("steps must be at least 1"));
    }
    if t0 == t1 {
        return Ok(p0);
    }
    let du = (t1 / t0).ln() / steps as f64;
    let rhs = |p: f64| rate * p;
    let mut p = p0;
    for _ in 0..steps {
        let k1 = rhs(p);
        let k2 = rhs(p + 0.5 * du * k1);
        let k3 = rhs(p + 0.5 * du * k2);
        let k4 = rhs(p + du * k3);
        p += du / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok(p)
}

/// Pressure along a temperature grid starting from `(t0, p0)`, integrated
/// segment by segment with `steps` per segment.
pub fn pressure_trajectory(t0: f64, p0: f64, temperatures: &[f64], alpha: f64, steps: u32) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(temperatures.len());
    let (mut t, mut p) = (t0, p0);
    for &next in temperatures {
        p = integrate_pressure(t, p, next, alpha, steps)?;
        t = next;
        out.push((t, p));
    }
    Ok(out)
}

/// Heat, work and energy change for an isothermal volume change `dV`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBalance {
    /// `T (∂P/∂T) dV = (α+1) P dV`
    pub heat: f64,
    /// `P dV`
    pub work: f64,
    /// `dQ - dL = α P dV`
    pub internal_energy: f64,
}

impl EnergyBalance {
    /// `dU - (dQ - dL)`; zero by construction.
    pub fn first_law_residual(&self) -> f64 {
        self.internal_energy - (self.heat - self.work)
    }
}

pub fn heat_and_work(state: &ThermoState, dv: f64) -> EnergyBalance {
    let heat = (state.alpha + 1.0) * state.pressure * dv;
    let work = state.pressure * dv;
    EnergyBalance {
        heat,
        work,
        internal_energy: heat - work,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::photon_gas::pressure_law;
    use proptest::prelude::*;

    #[test]
    fn exponent_from_equation_of_state() {
        assert_eq!(pressure_exponent(3.0).unwrap(), 4.0);
        assert_eq!(pressure_exponent(2.0).unwrap(), 3.0);
        assert_eq!(pressure_exponent(1.0).unwrap(), 2.0);
        assert!(pressure_exponent(0.0).is_err());
        assert!(pressure_exponent(-1.0).is_err());
    }

    #[test]
    fn doubling_temperature_gives_sixteen() {
        let p = 1.7e-3;
        let out = integrate_pressure(100.0, p, 200.0, 3.0, 1024).unwrap();
        assert!((out / (16.0 * p) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn identity_when_endpoints_coincide() {
        assert_eq!(integrate_pressure(250.0, 3.25, 250.0, 3.0, 7).unwrap(), 3.25);
    }

    #[test]
    fn matches_closed_form_pressure_law() {
        let consts = PhysicalConstants::default();
        let p300 = pressure_law(300.0, &consts).unwrap();
        let p600 = pressure_law(600.0, &consts).unwrap();
        let out = integrate_pressure(300.0, p300, 600.0, 3.0, 1024).unwrap();
        assert!((out / p600 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn fourth_order_convergence() {
        let exact = 16.0;
        let err = |n: u32| (integrate_pressure(100.0, 1.0, 200.0, 3.0, n).unwrap() / exact - 1.0).abs();
        for &n in &[16u32, 32, 64] {
            let order = (err(n) / err(2 * n)).log2();
            assert!((order - INTEGRATOR_ORDER as f64).abs() < 0.2, "n={n}: {order}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(integrate_pressure(0.0, 1.0, 2.0, 3.0, 10).is_err());
        assert!(integrate_pressure(1.0, -1.0, 2.0, 3.0, 10).is_err());
        assert!(integrate_pressure(1.0, 1.0, 2.0, 3.0, 0).is_err());
        assert!(integrate_pressure(1.0, 1.0, 2.0, 0.0, 10).is_err());
        assert!(ThermoState::new(1.0, 0.0, 1.0, 3.0).is_err());
    }

    #[test]
    fn photon_gas_balance() {
        let s = ThermoState::new(2.0, 1.0, 300.0, 3.0).unwrap();
        let b = heat_and_work(&s, 0.5);
        assert_eq!(b.heat, 4.0);
        assert_eq!(b.work, 1.0);
        assert_eq!(b.internal_energy, 3.0);
        assert_eq!(
            heat_and_work(&s, 0.0),
            EnergyBalance {
                heat: 0.0,
                work: 0.0,
                internal_energy: 0.0
            }
        );
        assert_eq!(s.mu_dn(), 0.0);
    }

    #[test]
    fn photon_gas_state_obeys_equation_of_state() {
        let s = ThermoState::photon_gas(2.0, 500.0, &PhysicalConstants::default()).unwrap();
        let obs = observables(2.0, 500.0, &PhysicalConstants::default()).unwrap();
        assert!((s.internal_energy / obs.internal_energy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trajectory_follows_power_law() {
        let temps: Vec<f64> = (1..=10).map(|k| 100.0 * k as f64).collect();
        let traj = pressure_trajectory(100.0, 1.0, &temps, 2.0, 256).unwrap();
        for (t, p) in traj {
            assert!((p / (t / 100.0).powi(3) - 1.0).abs() < 1e-9, "T={t}");
        }
    }

    proptest! {
        #[test]
        fn first_law_closes(p in 1e-12f64..1e6, v in 1e-6f64..1e3, t in 1e-3f64..1e5,
                            alpha in 0.1f64..6.0, dv in -10.0f64..10.0) {
            let s = ThermoState::new(p, v, t, alpha).unwrap();
            prop_assert_eq!(heat_and_work(&s, dv).first_law_residual(), 0.0);
            prop_assert!((s.internal_energy / (alpha * p * v) - 1.0).abs() < 1e-12);
        }
    }
}
