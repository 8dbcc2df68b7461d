//! Closed-form observables of a photon gas in a cavity and their classical
//! counterparts.
//!
//! With `x = hf / K_B T` and the mode density `8π f² / c³` per unit volume
//! and frequency (two polarizations), the mean photon number and energy are
//!
//! ```text
//! N̄ = 8π Γ(3)ζ(3) / (c h)³ · V (K_B T)³
//! Ū = 8π Γ(4)ζ(4) / (c h)³ · V (K_B T)⁴
//! ```
//!
//! so that `Ū = C V T⁴` with the radiation constant `C = 4σ/c`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::specfun::{gamma_zeta, truncated_bose_einstein};

/// Planck constant (J s), exact SI value.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Speed of light in vacuum (m/s), exact SI value.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
/// Boltzmann constant (J/K), exact SI value.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// The unit system: Planck constant, speed of light and Boltzmann constant.
///
/// All three are strictly positive; the constructor enforces it, so every
/// function taking a `&PhysicalConstants` can rely on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    h: f64,
    c: f64,
    k_b: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            h: PLANCK,
            c: SPEED_OF_LIGHT,
            k_b: BOLTZMANN,
        }
    }
}

impl PhysicalConstants {
    pub fn new(h: f64, c: f64, k_b: f64) -> Result<Self> {
        ensure_positive("h", h)?;
        ensure_positive("c", c)?;
        ensure_positive("K_B", k_b)?;
        Ok(Self { h, c, k_b })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn k_b(&self) -> f64 {
        self.k_b
    }

    pub fn with_h(self, h: f64) -> Result<Self> {
        Self::new(h, self.c, self.k_b)
    }

    pub fn with_c(self, c: f64) -> Result<Self> {
        Self::new(self.h, c, self.k_b)
    }

    pub fn with_k_b(self, k_b: f64) -> Result<Self> {
        Self::new(self.h, self.c, k_b)
    }

    /// Dimensionless mode energy `hf / K_B T`.
    pub fn reduced_energy(&self, frequency: f64, temperature: f64) -> f64 {
        self.h * frequency / (self.k_b * temperature)
    }

    /// `8π / (c h)³`, the common prefactor of the photon-gas moments.
    fn moment_prefactor(&self) -> f64 {
        8.0 * PI / (self.c * self.h).powi(3)
    }
}

/// Stefan–Boltzmann constant `σ = 2π⁵ K_B⁴ / (15 h³ c²)` in W m⁻² K⁻⁴.
pub fn stefan_boltzmann_sigma(constants: &PhysicalConstants) -> f64 {
    let PhysicalConstants { h, c, k_b } = *constants;
    2.0 * PI.powi(5) * k_b.powi(4) / (15.0 * h.powi(3) * c * c)
}

/// Radiation constant `C = 4σ/c` in J m⁻³ K⁻⁴, the coefficient of `U = C V T⁴`.
pub fn radiation_constant(constants: &PhysicalConstants) -> f64 {
    4.0 * stefan_boltzmann_sigma(constants) / constants.c
}

/// Radiation constant with `h` halved `halvings` times, one row per step.
/// Each halving multiplies `C` by 8.
pub fn radiation_constant_h_scan(constants: &PhysicalConstants, halvings: u32) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::with_capacity(halvings as usize + 1);
    let mut current = *constants;
    for step in 0..=halvings {
        if step > 0 {
            current = current.with_h(current.h / 2.0)?;
        }
        rows.push((current.h, radiation_constant(&current)));
    }
    Ok(rows)
}

/// Equilibrium photon-gas observables at one `(V, T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasObservables {
    pub mean_photon_number: f64,
    /// J
    pub internal_energy: f64,
    /// Pa
    pub pressure: f64,
    /// J; zero at `T = 0`.
    pub energy_per_photon: f64,
    /// K
    pub temperature: f64,
    /// m³
    pub volume: f64,
}

/// Closed-form mean photon number, energy, pressure and energy per photon.
pub fn observables(volume: f64, temperature: f64, constants: &PhysicalConstants) -> Result<GasObservables> {
    ensure_positive("volume", volume)?;
    ensure_non_negative("temperature", temperature)?;
    let kt = constants.k_b * temperature;
    let prefactor = constants.moment_prefactor() * volume;
    let mean_photon_number = prefactor * gamma_zeta(3) * kt.powi(3);
    let internal_energy = prefactor * gamma_zeta(4) * kt.powi(4);
    let energy_per_photon = if temperature == 0.0 {
        0.0
    } else {
        internal_energy / mean_photon_number
    };
    Ok(GasObservables {
        mean_photon_number,
        internal_energy,
        pressure: internal_energy / (3.0 * volume),
        energy_per_photon,
        temperature,
        volume,
    })
}

/// `ε̄ / K_B T = Γ(4)ζ(4) / Γ(3)ζ(3)`, independent of `V` and `T`.
pub fn energy_per_photon_ratio() -> f64 {
    gamma_zeta(4) / gamma_zeta(3)
}

/// Radiation pressure `P = C T⁴ / 3`.
pub fn pressure_law(temperature: f64, constants: &PhysicalConstants) -> Result<f64> {
    ensure_non_negative("temperature", temperature)?;
    Ok(radiation_constant(constants) / 3.0 * temperature.powi(4))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralModel {
    Planck,
    RayleighJeans,
}

impl SpectralModel {
    pub fn name(self) -> &'static str {
        match self {
            SpectralModel::Planck => "planck",
            SpectralModel::RayleighJeans => "rayleigh_jeans",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPoint {
    /// Hz
    pub frequency: f64,
    /// J s m⁻³, energy per unit volume and unit frequency.
    pub energy_density: f64,
    pub model: SpectralModel,
}

/// Spectral energy density per unit frequency.
///
/// Planck: `(8πh f³/c³) / (e^(hf/K_BT) - 1)`; Rayleigh–Jeans: `8π f² K_B T / c³`.
/// Both vanish at `f = 0`.
pub fn spectral_density(
    frequency: f64,
    temperature: f64,
    model: SpectralModel,
    constants: &PhysicalConstants,
) -> Result<f64> {
    ensure_non_negative("frequency", frequency)?;
    ensure_positive("temperature", temperature)?;
    if frequency == 0.0 {
        return Ok(0.0);
    }
    let PhysicalConstants { h, c, k_b } = *constants;
    let modes = 8.0 * PI * frequency * frequency / c.powi(3);
    Ok(match model {
        SpectralModel::Planck => modes * h * frequency / constants.reduced_energy(frequency, temperature).exp_m1(),
        SpectralModel::RayleighJeans => modes * k_b * temperature,
    })
}

/// Spectral points for every frequency in `frequencies`.
pub fn spectrum(
    frequencies: &[f64],
    temperature: f64,
    model: SpectralModel,
    constants: &PhysicalConstants,
) -> Result<Vec<SpectralPoint>> {
    frequencies
        .iter()
        .map(|&frequency| {
            Ok(SpectralPoint {
                frequency,
                energy_density: spectral_density(frequency, temperature, model, constants)?,
                model,
            })
        })
        .collect()
}

/// Classical equipartition energy of all modes below `f_cutoff`:
/// `(8π/3) (f_cutoff/c)³ V K_B T`. Unbounded as the cutoff grows.
pub fn classical_cutoff_energy(
    volume: f64,
    temperature: f64,
    f_cutoff: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    ensure_positive("volume", volume)?;
    ensure_positive("temperature", temperature)?;
    ensure_positive("f_cutoff", f_cutoff)?;
    Ok(8.0 * PI / 3.0 * (f_cutoff / constants.c).powi(3) * volume * constants.k_b * temperature)
}

/// Planck energy of all modes below `f_cutoff`; tends to the closed-form
/// `Ū` as the cutoff grows.
pub fn quantum_cutoff_energy(
    volume: f64,
    temperature: f64,
    f_cutoff: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    ensure_positive("volume", volume)?;
    ensure_positive("temperature", temperature)?;
    ensure_positive("f_cutoff", f_cutoff)?;
    let x_cut = constants.reduced_energy(f_cutoff, temperature);
    let kt = constants.k_b * temperature;
    Ok(constants.moment_prefactor() * volume * kt.powi(4) * truncated_bose_einstein(4.0, x_cut)?)
}

/// Temperature exponents `(d+1, d)` of `U ∝ T^(d+1)` and `N̄ ∝ T^d` in `d`
/// spatial dimensions.
pub fn dimensional_exponents(dimension: u32) -> Result<(u32, u32)> {
    match dimension {
        1..=3 => Ok((dimension + 1, dimension)),
        _ => Err(Error::domain(format!("dimension must be 1, 2 or 3, got {dimension}"))),
    }
}
