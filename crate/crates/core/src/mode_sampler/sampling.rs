use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use super::cavity::{CavitySpec, Mode};
use super::spectrum::{ModeSpectrum, SpectrumResolution};
use crate::error::{ensure_positive, Error, Result};
use crate::photon_gas::PhysicalConstants;
use crate::specfun::truncated_bose_einstein;

/// Groups up to this degeneracy are sampled mode by mode; larger groups
/// draw their total occupation from the negative binomial directly.
const DIRECT_GROUP_LIMIT: u64 = 16;

/// Monte Carlo estimate of the total photon number and energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleEstimate {
    pub mean_n: f64,
    /// J
    pub mean_u: f64,
    /// NaN for a single draw.
    pub std_err_n: f64,
    /// J; NaN for a single draw.
    pub std_err_u: f64,
    pub draws: u32,
    pub seed: u64,
}

/// Random stream for one draw: ChaCha8 keyed by `seed`, stream number `draw`.
pub fn draw_rng(seed: u64, draw: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(draw);
    rng
}

/// SplitMix64 of `master + counter · γ`; seeds for the `counter`-th
/// sub-experiment.
pub fn derive_seed(master: u64, counter: u64) -> u64 {
    let mut z = master.wrapping_add(counter.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Inverse-CDF draw from `P(n) = (1-q) qⁿ` with `q = e^(-x)`:
/// `n = floor(ln(1-u) / ln q)`.
fn geometric<R: Rng>(rng: &mut R, x: f64) -> u64 {
    let u: f64 = rng.gen();
    let n = ((-u).ln_1p() / -x).floor();
    if n >= u64::MAX as f64 {
        u64::MAX
    } else {
        n as u64
    }
}

/// Total occupation of `g` independent modes at reduced energy `x`.
fn group_occupation<R: Rng>(rng: &mut R, g: u64, x: f64) -> f64 {
    if g <= DIRECT_GROUP_LIMIT {
        return (0..g).map(|_| geometric(rng, x) as f64).sum();
    }
    // negative binomial as a Gamma–Poisson mixture
    let scale = 1.0 / x.exp_m1();
    let lambda = Gamma::new(g as f64, scale)
        .expect("positive shape and scale")
        .sample(rng);
    if lambda > 0.0 && lambda.is_finite() {
        Poisson::new(lambda).expect("positive rate").sample(rng)
    } else {
        0.0
    }
}

fn check_draws(draws: u32) -> Result<()> {
    if draws == 0 {
        return Err(Error::domain("draws must be at least 1"));
    }
    Ok(())
}

fn mean_and_std_err(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Samples the occupation of every mode in `spectrum`, `draws` times.
///
/// Draws run in parallel; draw `k` uses only [`draw_rng`]`(seed, k)`, so
/// the estimate does not depend on scheduling.
pub fn sample_spectrum(
    spectrum: &ModeSpectrum,
    temperature: f64,
    draws: u32,
    seed: u64,
    constants: &PhysicalConstants,
) -> Result<SampleEstimate> {
    ensure_positive("temperature", temperature)?;
    check_draws(draws)?;
    let levels: Vec<(u64, f64, f64)> = spectrum
        .groups()
        .iter()
        .map(|g| {
            (
                g.degeneracy,
                constants.reduced_energy(g.frequency, temperature),
                constants.h() * g.frequency,
            )
        })
        .collect();
    let totals: Vec<(f64, f64)> = (0..draws as u64)
        .into_par_iter()
        .map(|draw| {
            let mut rng = draw_rng(seed, draw);
            let mut n = 0.0;
            let mut u = 0.0;
            for &(g, x, quantum) in &levels {
                let occ = group_occupation(&mut rng, g, x);
                n += occ;
                u += occ * quantum;
            }
            (n, u)
        })
        .collect();
    let ns: Vec<f64> = totals.iter().map(|t| t.0).collect();
    let us: Vec<f64> = totals.iter().map(|t| t.1).collect();
    let (mean_n, std_err_n) = mean_and_std_err(&ns);
    let (mean_u, std_err_u) = mean_and_std_err(&us);
    Ok(SampleEstimate {
        mean_n,
        mean_u,
        std_err_n,
        std_err_u,
        draws,
        seed,
    })
}

/// [`sample_spectrum`] over an explicit mode list.
pub fn sample_occupations(
    modes: &[Mode],
    temperature: f64,
    draws: u32,
    seed: u64,
    constants: &PhysicalConstants,
) -> Result<SampleEstimate> {
    sample_spectrum(&ModeSpectrum::from_modes(modes), temperature, draws, seed, constants)
}

/// Fills `occupation` of every mode with draw number `draw`.
///
/// Uses the same stream and order as [`sample_occupations`], so the
/// totals of these modes reproduce that draw exactly.
pub fn draw_occupations(
    modes: &mut [Mode],
    temperature: f64,
    seed: u64,
    draw: u64,
    constants: &PhysicalConstants,
) -> Result<()> {
    ensure_positive("temperature", temperature)?;
    let mut rng = draw_rng(seed, draw);
    for m in modes.iter_mut() {
        m.occupation = geometric(&mut rng, m.reduced_energy(temperature, constants));
    }
    Ok(())
}

/// Sample mean and standard error of one mode's occupation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OccupationStats {
    pub mean: f64,
    pub std_err: f64,
}

/// Per-mode occupation statistics over `draws` draws.
pub fn occupation_statistics(
    modes: &[Mode],
    temperature: f64,
    draws: u32,
    seed: u64,
    constants: &PhysicalConstants,
) -> Result<Vec<OccupationStats>> {
    ensure_positive("temperature", temperature)?;
    check_draws(draws)?;
    let mut work = modes.to_vec();
    let mut samples = vec![Vec::with_capacity(draws as usize); modes.len()];
    for draw in 0..draws as u64 {
        draw_occupations(&mut work, temperature, seed, draw, constants)?;
        for (s, m) in samples.iter_mut().zip(&work) {
            s.push(m.occupation as f64);
        }
    }
    Ok(samples
        .iter()
        .map(|s| {
            let (mean, std_err) = mean_and_std_err(s);
            OccupationStats { mean, std_err }
        })
        .collect())
}

/// Classical equipartition total `K_B T` per mode.
pub fn classical_mode_energy(modes: &[Mode], temperature: f64, constants: &PhysicalConstants) -> Result<f64> {
    ensure_positive("temperature", temperature)?;
    Ok(constants.k_b() * temperature * modes.len() as f64)
}

/// [`classical_mode_energy`] for a grouped spectrum.
pub fn classical_spectrum_energy(
    spectrum: &ModeSpectrum,
    temperature: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    ensure_positive("temperature", temperature)?;
    Ok(constants.k_b() * temperature * spectrum.total_modes() as f64)
}

/// Continuum (bulk-term) expectation of photon number and energy for the
/// modes below the cutoff.
///
/// With `b r^d` modes below index radius `r` and `x = a r`:
/// `N = b d a^-d ∫₀^xmax x^(d-1)/(e^x-1) dx`, `U = K_B T · b d a^-d ∫₀^xmax x^d/(e^x-1) dx`.
/// The photon number diverges in one dimension and is `None` there.
pub fn bulk_expectation(
    spec: &CavitySpec,
    temperature: f64,
    constants: &PhysicalConstants,
) -> Result<(Option<f64>, f64)> {
    ensure_positive("temperature", temperature)?;
    let d = spec.dimension();
    let a = spec.reduced_energy_unit(temperature, constants);
    let weight = spec.bulk_coefficient() * d as f64 * a.powi(-(d as i32));
    let x_max = spec.x_max();
    let n = if d >= 2 {
        Some(weight * truncated_bose_einstein(d as f64, x_max)?)
    } else {
        None
    };
    let u = constants.k_b() * temperature * weight * truncated_bose_einstein(d as f64 + 1.0, x_max)?;
    Ok((n, u))
}

/// One temperature of a [`scaling_experiment`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingRow {
    /// K
    pub temperature: f64,
    /// J
    pub mean_u: f64,
    /// J
    pub std_err_u: f64,
    pub mean_n: f64,
    pub std_err_n: f64,
}

/// Samples the cavity at every temperature of `temperatures`.
///
/// The `i`-th temperature uses seed [`derive_seed`]`(seed, i)`.
pub fn scaling_experiment(
    spec: &CavitySpec,
    temperatures: &[f64],
    draws: u32,
    seed: u64,
    constants: &PhysicalConstants,
) -> Result<Vec<ScalingRow>> {
    if temperatures.len() < 4 {
        return Err(Error::domain(format!(
            "temperature grid needs at least 4 points, got {}",
            temperatures.len()
        )));
    }
    for &t in temperatures {
        ensure_positive("temperature", t)?;
    }
    let lo = temperatures.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = temperatures.iter().copied().fold(0.0, f64::max);
    if hi < 4.0 * lo {
        return Err(Error::domain(format!(
            "temperature grid must span a factor of 4, got {lo} to {hi}"
        )));
    }
    let resolution = SpectrumResolution::default();
    temperatures
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let spectrum = ModeSpectrum::build(spec, t, constants, &resolution)?;
            let est = sample_spectrum(&spectrum, t, draws, derive_seed(seed, i as u64), constants)?;
            Ok(ScalingRow {
                temperature: t,
                mean_u: est.mean_u,
                std_err_u: est.std_err_u,
                mean_n: est.mean_n,
                std_err_n: est.std_err_n,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode_sampler::cavity::enumerate_modes;

    fn consts() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    /// Edge at which one index step is reduced energy `a` at 300 K.
    fn edge_for_unit(a: f64) -> f64 {
        let c = consts();
        c.h() * c.c() / (2.0 * a * c.k_b() * 300.0)
    }

    /// Ten one-dimensional modes at x = 0.3, 0.6, ..., 3.0.
    fn ten_modes() -> Vec<Mode> {
        let spec = CavitySpec::new(1, edge_for_unit(0.3), 3.0 + 1e-9).unwrap();
        let modes = enumerate_modes(&spec, 300.0, &consts()).unwrap();
        assert_eq!(modes.len(), 10);
        modes
    }

    #[test]
    fn geometric_mean_matches_brute_force_sum() {
        let x = 0.7_f64;
        let q = (-x).exp();
        let oracle: f64 = (0..=10_000).map(|n| n as f64 * (1.0 - q) * q.powi(n)).sum();
        assert!((oracle / (1.0 / x.exp_m1()) - 1.0).abs() < 1e-12);
        let mut rng = draw_rng(1, 0);
        let n = 200_000;
        let mean = (0..n).map(|_| geometric(&mut rng, x) as f64).sum::<f64>() / n as f64;
        let sd = (q).sqrt() / (1.0 - q) / (n as f64).sqrt();
        assert!((mean - oracle).abs() < 4.0 * sd, "{mean} vs {oracle}");
    }

    #[test]
    fn negative_binomial_groups_have_the_right_moments() {
        let (g, x) = (1000u64, 0.5_f64);
        let mut rng = draw_rng(2, 0);
        let draws: Vec<f64> = (0..20_000).map(|_| group_occupation(&mut rng, g, x)).collect();
        let (mean, se) = mean_and_std_err(&draws);
        let expected = g as f64 / x.exp_m1();
        assert!((mean - expected).abs() < 4.0 * se);
        let var = draws.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (draws.len() - 1) as f64;
        let q = (-x).exp();
        let expected_var = g as f64 * q / (1.0 - q).powi(2);
        assert!((var / expected_var - 1.0).abs() < 0.05);
    }

    #[test]
    fn frozen_mode_is_empty() {
        let spec = CavitySpec::new(1, edge_for_unit(60.0), 61.0).unwrap();
        let modes = enumerate_modes(&spec, 300.0, &consts()).unwrap();
        assert_eq!(modes.len(), 1);
        let est = sample_occupations(&modes, 300.0, 1000, 5, &consts()).unwrap();
        assert_eq!(est.mean_n, 0.0);
        assert_eq!(est.mean_u, 0.0);
    }

    #[test]
    fn per_mode_means_match_planck_occupation() {
        let modes = ten_modes();
        let stats = occupation_statistics(&modes, 300.0, 20_000, 11, &consts()).unwrap();
        for (m, s) in modes.iter().zip(&stats) {
            let x = m.reduced_energy(300.0, &consts());
            let q = (-x).exp();
            let oracle: f64 = (0..=10_000).map(|n| n as f64 * (1.0 - q) * q.powi(n)).sum();
            assert!(
                (s.mean - oracle).abs() < 3.0 * s.std_err,
                "x={x}: {} vs {oracle}",
                s.mean
            );
        }
    }

    #[test]
    fn per_mode_energy_stays_below_equipartition() {
        let modes = ten_modes();
        let kt = consts().k_b() * 300.0;
        let stats = occupation_statistics(&modes, 300.0, 20_000, 12, &consts()).unwrap();
        for (m, s) in modes.iter().zip(&stats) {
            let energy = consts().h() * m.frequency;
            assert!(energy / m.reduced_energy(300.0, &consts()).exp_m1() < kt);
            assert!(s.mean * energy < kt);
        }
    }

    #[test]
    fn draw_occupations_reproduces_a_sampled_draw() {
        let modes = ten_modes();
        let mut work = modes.clone();
        draw_occupations(&mut work, 300.0, 99, 0, &consts()).unwrap();
        let total: u64 = work.iter().map(|m| m.occupation).sum();
        let est = sample_occupations(&modes, 300.0, 1, 99, &consts()).unwrap();
        assert_eq!(est.mean_n, total as f64);
        assert!(est.std_err_n.is_nan());
    }

    #[test]
    fn deterministic_for_equal_inputs() {
        let spec = CavitySpec::new(3, 1e-4, 30.0).unwrap();
        let spectrum = ModeSpectrum::build(&spec, 300.0, &consts(), &SpectrumResolution::default()).unwrap();
        let a = sample_spectrum(&spectrum, 300.0, 8, 42, &consts()).unwrap();
        let b = sample_spectrum(&spectrum, 300.0, 8, 42, &consts()).unwrap();
        assert_eq!(a.mean_u.to_bits(), b.mean_u.to_bits());
        assert_eq!(a.std_err_n.to_bits(), b.std_err_n.to_bits());
        let c = sample_spectrum(&spectrum, 300.0, 8, 43, &consts()).unwrap();
        assert_ne!(a.mean_u, c.mean_u);
    }

    #[test]
    fn quadrupling_draws_halves_the_standard_error() {
        let modes = ten_modes();
        let trials = 40u64;
        let mut small = 0.0;
        let mut large = 0.0;
        for t in 0..trials {
            small += sample_occupations(&modes, 300.0, 250, derive_seed(7, t), &consts())
                .unwrap()
                .std_err_u;
            large += sample_occupations(&modes, 300.0, 1000, derive_seed(8, t), &consts())
                .unwrap()
                .std_err_u;
        }
        let ratio = small / large;
        assert!((ratio / 2.0 - 1.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn sampled_totals_match_expected_totals() {
        let spec = CavitySpec::new(3, 2e-5, 30.0).unwrap();
        let spectrum = ModeSpectrum::build(&spec, 300.0, &consts(), &SpectrumResolution::default()).unwrap();
        let est = sample_spectrum(&spectrum, 300.0, 400, 3, &consts()).unwrap();
        let (n, u) = spectrum.expected_totals(300.0, &consts());
        assert!((est.mean_u - u).abs() < 3.5 * est.std_err_u);
        assert!((est.mean_n - n).abs() < 3.5 * est.std_err_n);
    }

    #[test]
    fn classical_total_is_equipartition() {
        let modes = ten_modes();
        let kt = consts().k_b() * 300.0;
        assert_eq!(classical_mode_energy(&modes, 300.0, &consts()).unwrap(), 10.0 * kt);
        assert!(classical_mode_energy(&modes, 0.0, &consts()).is_err());
    }

    #[test]
    fn classical_total_grows_with_the_cube_of_the_cutoff() {
        let spec = CavitySpec::new(3, 5e-5, 10.0).unwrap();
        let low = enumerate_modes(&spec, 300.0, &consts()).unwrap();
        let high = enumerate_modes(&spec.with_x_max(20.0).unwrap(), 300.0, &consts()).unwrap();
        let ratio = classical_mode_energy(&high, 300.0, &consts()).unwrap()
            / classical_mode_energy(&low, 300.0, &consts()).unwrap();
        assert!((ratio / 8.0 - 1.0).abs() < 0.03, "{ratio}");
        let quantum = sample_occupations(&high, 300.0, 20, 1, &consts()).unwrap();
        assert!(quantum.mean_u < classical_mode_energy(&high, 300.0, &consts()).unwrap());
    }

    #[test]
    fn bulk_expectation_reproduces_the_closed_form() {
        let spec = CavitySpec::new(3, 0.01, 30.0).unwrap();
        let (n, u) = bulk_expectation(&spec, 300.0, &consts()).unwrap();
        let obs = crate::photon_gas::observables(spec.volume(), 300.0, &consts()).unwrap();
        let fu = truncated_bose_einstein(4.0, 30.0).unwrap() / crate::specfun::gamma_zeta(4);
        let fn_ = truncated_bose_einstein(3.0, 30.0).unwrap() / crate::specfun::gamma_zeta(3);
        assert!((u / (obs.internal_energy * fu) - 1.0).abs() < 1e-12);
        assert!((n.unwrap() / (obs.mean_photon_number * fn_) - 1.0).abs() < 1e-12);
        let one_d = CavitySpec::new(1, 1.0, 30.0).unwrap();
        assert!(bulk_expectation(&one_d, 300.0, &consts()).unwrap().0.is_none());
    }

    #[test]
    fn cutoff_30_to_40_moves_the_expectation_by_the_analytic_tail() {
        let spec = CavitySpec::new(3, 0.01, 30.0).unwrap();
        let (_, u30) = bulk_expectation(&spec, 300.0, &consts()).unwrap();
        let (_, u40) = bulk_expectation(&spec.with_x_max(40.0).unwrap(), 300.0, &consts()).unwrap();
        let change = u40 / u30 - 1.0;
        let tail = crate::specfun::bose_einstein_quadrature(4.0, 30.0).unwrap();
        let expected =
            (tail.tail - crate::specfun::bose_einstein_quadrature(4.0, 40.0).unwrap().tail) / tail.truncated();
        assert!((change / expected - 1.0).abs() < 1e-6, "{change} vs {expected}");
        assert!(change < crate::specfun::tail_bound(4.0, 30.0) / tail.truncated());
    }

    #[test]
    fn scaling_grid_validation() {
        let spec = CavitySpec::new(3, 1e-4, 30.0).unwrap();
        assert!(scaling_experiment(&spec, &[100.0, 200.0, 300.0], 2, 0, &consts()).is_err());
        assert!(scaling_experiment(&spec, &[100.0, 150.0, 200.0, 300.0], 2, 0, &consts()).is_err());
        assert!(scaling_experiment(&spec, &[100.0, 200.0, -300.0, 400.0], 2, 0, &consts()).is_err());
        let rows = scaling_experiment(&spec, &[100.0, 200.0, 300.0, 400.0], 2, 0, &consts()).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.windows(2).all(|w| w[1].mean_u > w[0].mean_u));
    }

    #[test]
    fn derived_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }
}
