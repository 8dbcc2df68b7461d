//! Monte Carlo check of the photon gas from its cavity normal modes.
//!
//! A cavity of edge `L` in `d` dimensions has standing-wave modes at
//! `f = (c/2L)|n|`. Each mode holds an integer number of quanta `hf` with
//! the geometric distribution `P(n) = (1-q)qⁿ`, `q = e^(-hf/K_BT)`.
//! Summing sampled occupations over all modes below the cutoff estimates
//! the mean photon number and energy.
//!
//! Two boundary conditions are available. [`Boundary::Dirichlet`] takes
//! indices `≥ 1` for each of a configurable number of polarizations.
//! [`Boundary::Conductor`] is the electromagnetic box: two polarizations
//! for indices `≥ 1` and one when exactly one index is zero. Its mode
//! count has no wall term, so it converges to the bulk law much faster.
//! Three-dimensional cavities default to the conductor, lower dimensions
//! to a single Dirichlet polarization.

mod cavity;
mod sampling;
mod spectrum;

pub use cavity::{enumerate_modes, Boundary, CavitySpec, Mode, DEFAULT_MODE_LIMIT};
pub use sampling::{
    bulk_expectation, classical_mode_energy, classical_spectrum_energy, derive_seed, draw_occupations, draw_rng,
    occupation_statistics, sample_occupations, sample_spectrum, scaling_experiment, OccupationStats, SampleEstimate,
    ScalingRow,
};
pub use spectrum::{ModeGroup, ModeSpectrum, SpectrumResolution};
