//! Black-body radiation toolkit.
//!
//! Quantum photon-gas observables and their classical counterpoints:
//!
//! - [`specfun`]: Gamma at integers, Riemann zeta and Bose–Einstein integrals,
//!   each integral available in closed form and by quadrature.
//! - [`photon_gas`]: Stefan–Boltzmann constant, radiation constant, mean photon
//!   number and energy of a cavity, spectral densities, the Rayleigh–Jeans
//!   cutoff energy and the `h → 0` behaviour of the radiation constant.
//! - [`thermo_ode`]: the macroscopic route to `P ∝ T^4`, integrating the
//!   pressure equation that follows from `U = αPV` and the first law.
//! - [`mode_sampler`]: cavity normal modes and Monte Carlo sampling of their
//!   occupation numbers.
//! - [`exponent_fit`]: log-log least-squares power-law fits.
//! - [`cli`]: the `blackbody` command-line front end.

pub mod cli;
pub mod error;
pub mod exponent_fit;
pub mod mode_sampler;
pub mod photon_gas;
pub mod specfun;
pub mod thermo_ode;

pub use error::{Error, Result};
pub use photon_gas::PhysicalConstants;
