use std::collections::BTreeMap;

use serde::Serialize;

use super::cavity::{CavitySpec, Mode};
use crate::error::{ensure_positive, Error, Result};
use crate::photon_gas::PhysicalConstants;

/// `degeneracy` modes sharing one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeGroup {
    /// Hz
    pub frequency: f64,
    pub degeneracy: u64,
}

/// How finely [`ModeSpectrum::build`] resolves a cavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumResolution {
    /// Lattice points enumerated exactly, starting from the lowest modes.
    pub lattice_points: u64,
    /// Relative width `Δr / r` of the shells beyond the exact region.
    pub shell_ratio: f64,
}

impl Default for SpectrumResolution {
    fn default() -> Self {
        Self {
            lattice_points: 200_000,
            shell_ratio: 1e-3,
        }
    }
}

/// The modes of a cavity as groups of equal frequency.
///
/// Low modes come from the exact standing-wave lattice, one group per
/// distinct `|n|²`. Cavities too large to enumerate continue with thin
/// shells in index radius whose integer degeneracies follow the smoothed
/// lattice count (bulk term plus wall and edge corrections) and whose
/// frequency is the density-weighted mean radius of the shell. Shell
/// placement introduces a relative bias of order `shell_ratio²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSpectrum {
    groups: Vec<ModeGroup>,
    lattice_groups: usize,
    total_modes: u64,
}

impl ModeSpectrum {
    /// One group per mode, in the given order.
    pub fn from_modes(modes: &[Mode]) -> Self {
        let groups: Vec<ModeGroup> = modes
            .iter()
            .map(|m| ModeGroup {
                frequency: m.frequency,
                degeneracy: 1,
            })
            .collect();
        Self {
            lattice_groups: groups.len(),
            total_modes: groups.len() as u64,
            groups,
        }
    }

    pub fn build(
        spec: &CavitySpec,
        temperature: f64,
        constants: &PhysicalConstants,
        resolution: &SpectrumResolution,
    ) -> Result<Self> {
        ensure_positive("temperature", temperature)?;
        if !(resolution.shell_ratio > 0.0 && resolution.shell_ratio < 1.0) {
            return Err(Error::domain(format!(
                "shell ratio must lie in (0, 1), got {}",
                resolution.shell_ratio
            )));
        }
        let d = spec.dimension() as f64;
        let unit = spec.frequency_unit(constants);
        let cutoff = spec.index_cutoff(temperature, constants);
        let lattice_radius = (resolution.lattice_points as f64 / spec.bulk_coefficient())
            .powf(1.0 / d)
            .max(4.0);

        let exact_to = cutoff.min(lattice_radius);
        let max_norm_sq = (exact_to * exact_to).floor() as u64;
        let mut by_norm: BTreeMap<u64, u64> = BTreeMap::new();
        spec.for_each_lattice_point(max_norm_sq, |_, norm, weight| {
            *by_norm.entry(norm).or_insert(0) += weight as u64;
        });
        let mut groups: Vec<ModeGroup> = by_norm
            .into_iter()
            .map(|(norm, degeneracy)| ModeGroup {
                frequency: unit * (norm as f64).sqrt(),
                degeneracy,
            })
            .collect();
        let lattice_groups = groups.len();

        if cutoff > lattice_radius {
            let shells = (cutoff / lattice_radius).ln() / resolution.shell_ratio.ln_1p();
            if shells > 5e7 {
                return Err(Error::Resource {
                    what: "spectrum shells",
                    requested: shells as u64,
                    limit: 50_000_000,
                });
            }
            // the continuum starts half-way between the last included |n|² and
            // the next; counting from the exact lattice total puts the lattice
            // fluctuation at the junction into the first shell
            let mut inner = ((max_norm_sq as f64) + 0.5).sqrt();
            let mut inner_count: f64 = groups.iter().map(|g| g.degeneracy as f64).sum();
            let mut radius = inner;
            while radius < cutoff {
                let outer = (radius * (1.0 + resolution.shell_ratio)).min(cutoff);
                let outer_count = spec.smoothed_count(outer).round();
                let degeneracy = outer_count - inner_count;
                if degeneracy >= 1.0 {
                    // mean radius under the bulk density r^(d-1)
                    let mean_radius =
                        d / (d + 1.0) * (outer.powf(d + 1.0) - inner.powf(d + 1.0)) / (outer.powf(d) - inner.powf(d));
                    groups.push(ModeGroup {
                        frequency: unit * mean_radius,
                        degeneracy: degeneracy as u64,
                    });
                    inner_count = outer_count;
                    inner = outer;
                }
                radius = outer;
            }
        }
        let total_modes = groups.iter().map(|g| g.degeneracy).sum();
        Ok(Self {
            groups,
            lattice_groups,
            total_modes,
        })
    }

    pub fn groups(&self) -> &[ModeGroup] {
        &self.groups
    }

    /// Number of leading groups that come from exact lattice enumeration.
    pub fn lattice_groups(&self) -> usize {
        self.lattice_groups
    }

    pub fn total_modes(&self) -> u64 {
        self.total_modes
    }

    /// Expected photon number and energy, `Σ g / (e^x - 1)` and `Σ g hf / (e^x - 1)`.
    pub fn expected_totals(&self, temperature: f64, constants: &PhysicalConstants) -> (f64, f64) {
        let mut n = 0.0;
        let mut u = 0.0;
        for g in &self.groups {
            let occ = g.degeneracy as f64 / constants.reduced_energy(g.frequency, temperature).exp_m1();
            n += occ;
            u += occ * constants.h() * g.frequency;
        }
        (n, u)
    }
}
