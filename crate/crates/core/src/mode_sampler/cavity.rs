use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{ensure_positive, Error, Result};
use crate::photon_gas::PhysicalConstants;

/// Default cap on explicitly enumerated modes.
pub const DEFAULT_MODE_LIMIT: u64 = 50_000_000;

/// Wall boundary condition of the cavity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Boundary {
    /// Standing waves vanishing on the walls: every index ≥ 1 and each
    /// lattice point carries `polarizations` modes.
    Dirichlet { polarizations: u32 },
    /// Perfectly conducting box: two modes per lattice point with all
    /// indices ≥ 1, one mode when exactly one index is zero (d ≥ 2).
    Conductor,
}

impl Boundary {
    pub fn polarizations(self) -> u32 {
        match self {
            Boundary::Dirichlet { polarizations } => polarizations,
            Boundary::Conductor => 2,
        }
    }

    fn min_index(self) -> u32 {
        match self {
            Boundary::Dirichlet { .. } => 1,
            Boundary::Conductor => 0,
        }
    }
}

/// Geometry of a cubic cavity of edge `L` in `d` dimensions, with a
/// dimensionless cutoff `x_max` on the mode energy `hf / K_B T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavitySpec {
    dimension: u32,
    edge: f64,
    boundary: Boundary,
    x_max: f64,
    mode_limit: u64,
}

impl CavitySpec {
    /// Cavity with the default boundary: a conducting box (two
    /// polarizations) in three dimensions, single-polarization Dirichlet
    /// walls in one and two.
    pub fn new(dimension: u32, edge: f64, x_max: f64) -> Result<Self> {
        if !(1..=3).contains(&dimension) {
            return Err(Error::domain(format!("dimension must be 1, 2 or 3, got {dimension}")));
        }
        ensure_positive("edge length", edge)?;
        ensure_positive("x_max", x_max)?;
        let boundary = if dimension == 3 {
            Boundary::Conductor
        } else {
            Boundary::Dirichlet { polarizations: 1 }
        };
        Ok(Self {
            dimension,
            edge,
            boundary,
            x_max,
            mode_limit: DEFAULT_MODE_LIMIT,
        })
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Result<Self> {
        if boundary.polarizations() == 0 {
            return Err(Error::domain("polarization count must be positive"));
        }
        self.boundary = boundary;
        Ok(self)
    }

    pub fn with_x_max(mut self, x_max: f64) -> Result<Self> {
        ensure_positive("x_max", x_max)?;
        self.x_max = x_max;
        Ok(self)
    }

    pub fn with_edge(mut self, edge: f64) -> Result<Self> {
        ensure_positive("edge length", edge)?;
        self.edge = edge;
        Ok(self)
    }

    pub fn with_mode_limit(mut self, limit: u64) -> Self {
        self.mode_limit = limit;
        self
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn edge(&self) -> f64 {
        self.edge
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn polarizations(&self) -> u32 {
        self.boundary.polarizations()
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn mode_limit(&self) -> u64 {
        self.mode_limit
    }

    /// `L^d`
    pub fn volume(&self) -> f64 {
        self.edge.powi(self.dimension as i32)
    }

    /// Frequency spacing `c / 2L` of the standing-wave lattice.
    pub fn frequency_unit(&self, constants: &PhysicalConstants) -> f64 {
        constants.c() / (2.0 * self.edge)
    }

    /// Reduced energy `hf / K_B T` of one unit of index radius.
    pub fn reduced_energy_unit(&self, temperature: f64, constants: &PhysicalConstants) -> f64 {
        constants.reduced_energy(self.frequency_unit(constants), temperature)
    }

    /// Largest index radius `|n|` whose mode lies under the cutoff.
    pub fn index_cutoff(&self, temperature: f64, constants: &PhysicalConstants) -> f64 {
        self.x_max / self.reduced_energy_unit(temperature, constants)
    }

    /// Number of modes carried by one lattice point.
    pub(crate) fn weight(&self, indices: &[u32]) -> u32 {
        match self.boundary {
            Boundary::Dirichlet { polarizations } => polarizations,
            Boundary::Conductor => match indices.iter().filter(|&&i| i == 0).count() {
                0 => 2,
                1 if self.dimension > 1 => 1,
                _ => 0,
            },
        }
    }

    /// Leading coefficient `b` of the smoothed mode count `b r^d`.
    pub(crate) fn bulk_coefficient(&self) -> f64 {
        let orthant = match self.dimension {
            1 => 1.0,
            2 => PI / 4.0,
            _ => PI / 6.0,
        };
        orthant * self.polarizations() as f64
    }

    /// Smoothed number of modes with index radius ≤ r, including the wall
    /// and edge corrections of the lattice count.
    ///
    /// Per polarization with all indices ≥ 1:
    /// `r - 1/2`, `πr²/4 - r + 1/4`, `πr³/6 - 3πr²/8 + 3r/4 - 1/8`.
    /// The conducting box adds the one-zero-index points, which cancels
    /// the wall term: `2r - 1`, `πr²/2 - 1/2`, `πr³/3 - 3r/2 + 1/2`.
    pub(crate) fn smoothed_count(&self, r: f64) -> f64 {
        match (self.boundary, self.dimension) {
            (Boundary::Dirichlet { polarizations }, d) => {
                let per = match d {
                    1 => r - 0.5,
                    2 => PI * r * r / 4.0 - r + 0.25,
                    _ => PI * r.powi(3) / 6.0 - 3.0 * PI * r * r / 8.0 + 0.75 * r - 0.125,
                };
                polarizations as f64 * per
            }
            (Boundary::Conductor, 1) => 2.0 * r - 1.0,
            (Boundary::Conductor, 2) => PI * r * r / 2.0 - 0.5,
            (Boundary::Conductor, _) => PI * r.powi(3) / 3.0 - 1.5 * r + 0.5,
        }
    }

    /// Visits every lattice point with `|n|² ≤ max_norm_sq` and positive
    /// weight, in lexicographic index order.
    pub(crate) fn for_each_lattice_point(&self, max_norm_sq: u64, mut visit: impl FnMut(&[u32], u64, u32)) {
        let lo = self.boundary.min_index();
        let d = self.dimension as usize;
        let mut idx = [lo; 3];
        let sq = |i: u32| (i as u64) * (i as u64);
        loop {
            let norm: u64 = idx[..d].iter().map(|&i| sq(i)).sum();
            if norm <= max_norm_sq {
                let w = self.weight(&idx[..d]);
                if w > 0 {
                    visit(&idx[..d], norm, w);
                }
                idx[d - 1] += 1;
                continue;
            }
            // carry into the next slower index
            let mut level = d - 1;
            loop {
                if level == 0 {
                    return;
                }
                idx[level] = lo;
                level -= 1;
                idx[level] += 1;
                let prefix: u64 = idx[..=level].iter().map(|&i| sq(i)).sum::<u64>() + (d - 1 - level) as u64 * sq(lo);
                if prefix <= max_norm_sq {
                    break;
                }
            }
        }
    }
}

/// One cavity normal mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    indices: [u32; 3],
    dimension: u8,
    /// Polarization label, `0..weight`.
    pub polarization: u8,
    /// Hz; `(c/2L) |n|`.
    pub frequency: f64,
    /// kg m/s; `hf / c`.
    pub momentum: f64,
    /// Number of quanta currently in the mode.
    pub occupation: u64,
}

impl Mode {
    pub fn indices(&self) -> &[u32] {
        &self.indices[..self.dimension as usize]
    }

    /// Quantized energy `n h f`.
    pub fn energy(&self, constants: &PhysicalConstants) -> f64 {
        self.occupation as f64 * constants.h() * self.frequency
    }

    /// Classical mode energy `p c`.
    pub fn classical_energy(&self, constants: &PhysicalConstants) -> f64 {
        self.momentum * constants.c()
    }

    pub fn reduced_energy(&self, temperature: f64, constants: &PhysicalConstants) -> f64 {
        constants.reduced_energy(self.frequency, temperature)
    }
}

/// All modes with `hf / K_B T ≤ x_max`, one entry per polarization, in
/// lexicographic index order. Fails before allocating if the smoothed
/// count already exceeds the cavity's mode limit.
pub fn enumerate_modes(spec: &CavitySpec, temperature: f64, constants: &PhysicalConstants) -> Result<Vec<Mode>> {
    ensure_positive("temperature", temperature)?;
    let cutoff = spec.index_cutoff(temperature, constants);
    let max_norm_sq = (cutoff * cutoff).floor();
    if max_norm_sq >= u64::MAX as f64 / 4.0 {
        return Err(Error::Resource {
            what: "mode enumeration",
            requested: u64::MAX,
            limit: spec.mode_limit,
        });
    }
    let estimate = spec.smoothed_count(cutoff).max(0.0);
    if estimate > spec.mode_limit as f64 * 1.01 + 16.0 {
        return Err(Error::Resource {
            what: "mode enumeration",
            requested: estimate as u64,
            limit: spec.mode_limit,
        });
    }
    let unit = spec.frequency_unit(constants);
    let dimension = spec.dimension as u8;
    let mut modes = Vec::with_capacity(estimate as usize + 16);
    let mut overflow = false;
    spec.for_each_lattice_point(max_norm_sq as u64, |idx, norm, weight| {
        if overflow {
            return;
        }
        if modes.len() as u64 + weight as u64 > spec.mode_limit {
            overflow = true;
            return;
        }
        let mut indices = [0u32; 3];
        indices[..idx.len()].copy_from_slice(idx);
        let frequency = unit * (norm as f64).sqrt();
        for polarization in 0..weight {
            modes.push(Mode {
                indices,
                dimension,
                polarization: polarization as u8,
                frequency,
                momentum: constants.h() * frequency / constants.c(),
                occupation: 0,
            });
        }
    });
    if overflow {
        return Err(Error::Resource {
            what: "mode enumeration",
            requested: estimate as u64,
            limit: spec.mode_limit,
        });
    }
    Ok(modes)
}
