//! The `blackbody` command-line front end.
//!
//! Every command writes a provenance block (command, parameters, seed and
//! the physical constants in use) followed by its payload, as CSV or JSON.
//! Numbers carry nine significant digits in scientific notation and column
//! names carry their units.
//!
//! Constants default to the exact SI values and can be overridden with the
//! environment variables `BLACKBODY_H`, `BLACKBODY_C` and `BLACKBODY_KB`.
//!
//! Exit codes: 0 success, 2 domain error, 64 usage error, 65 malformed
//! input data, 66 unreadable input file, 73 unwritable output file.

mod output;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::exponent_fit::{exponent_consistent, fit_power_law};
use crate::mode_sampler::{
    bulk_expectation, sample_spectrum, scaling_experiment, Boundary, CavitySpec, ModeSpectrum, SpectrumResolution,
};
use crate::photon_gas::{
    classical_cutoff_energy, energy_per_photon_ratio, observables, quantum_cutoff_energy, radiation_constant,
    radiation_constant_h_scan, spectral_density, stefan_boltzmann_sigma, PhysicalConstants, SpectralModel,
};
use crate::thermo_ode::{integrate_pressure, pressure_exponent};
use output::{Cell, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_CANT_CREATE: i32 = 73;

pub const ENV_H: &str = "BLACKBODY_H";
pub const ENV_C: &str = "BLACKBODY_C";
pub const ENV_KB: &str = "BLACKBODY_KB";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "blackbody",
    version,
    about = "Photon-gas thermodynamics and cavity-mode Monte Carlo"
)]
struct Cli {
    /// Output format; tables default to csv, single records to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the payload to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Master seed for the Monte Carlo commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stefan-Boltzmann and radiation constants.
    Constants,
    /// Closed-form photon number, energy and pressure at (V, T).
    Observables(ObservablesArgs),
    /// Planck and Rayleigh-Jeans spectral energy densities.
    Spectrum(SpectrumArgs),
    /// Integrates dP/P = (alpha+1) dT/T.
    Ode(OdeArgs),
    /// Monte Carlo photon number and energy of one cavity.
    Sample(SampleArgs),
    /// Monte Carlo totals over a temperature grid.
    Scaling(ScalingArgs),
    /// Power-law fit of a two-column positive CSV.
    Fit(FitArgs),
    /// Radiation constant as h is repeatedly halved.
    ScanH(ScanHArgs),
    /// Classical versus quantum energy below a growing frequency cutoff.
    Catastrophe(CatastropheArgs),
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct ObservablesArgs {
    /// m³
    #[arg(long)]
    volume: f64,
    /// K
    #[arg(long)]
    temp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ModelChoice {
    Planck,
    RayleighJeans,
    Both,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct SpectrumArgs {
    /// K
    #[arg(long)]
    temp: f64,
    /// Hz; defaults to 20 K_B T / h.
    #[arg(long)]
    f_max: Option<f64>,
    /// Hz; defaults to f_max / points.
    #[arg(long)]
    f_min: Option<f64>,
    #[arg(long, default_value_t = 200)]
    points: u32,
    #[arg(long, value_enum, default_value_t = ModelChoice::Both)]
    model: ModelChoice,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct OdeArgs {
    /// K
    #[arg(long)]
    t0: f64,
    /// Pa
    #[arg(long)]
    p0: f64,
    /// K
    #[arg(long)]
    t1: f64,
    #[arg(long, default_value_t = 3.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1024)]
    steps: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum BoundaryChoice {
    Conductor,
    Dirichlet,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct CavityArgs {
    /// Spatial dimension, 1 to 3.
    #[arg(long, default_value_t = 3)]
    dim: u32,
    /// Edge length, m.
    #[arg(long)]
    edge: f64,
    /// Mode cutoff in units of K_B T.
    #[arg(long, default_value_t = 30.0)]
    x_max: f64,
    /// Defaults to conductor in three dimensions, dirichlet otherwise.
    #[arg(long, value_enum)]
    boundary: Option<BoundaryChoice>,
    /// Polarizations per lattice point for dirichlet walls.
    #[arg(long, default_value_t = 1)]
    polarizations: u32,
    #[arg(long, default_value_t = 100)]
    draws: u32,
}

impl CavityArgs {
    fn spec(&self) -> crate::Result<CavitySpec> {
        let spec = CavitySpec::new(self.dim, self.edge, self.x_max)?;
        match self.boundary {
            None => Ok(spec),
            Some(BoundaryChoice::Conductor) => spec.with_boundary(Boundary::Conductor),
            Some(BoundaryChoice::Dirichlet) => spec.with_boundary(Boundary::Dirichlet {
                polarizations: self.polarizations,
            }),
        }
    }
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    cavity: CavityArgs,
    /// K
    #[arg(long)]
    temp: f64,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct ScalingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    cavity: CavityArgs,
    /// Comma-separated temperatures, K.
    #[arg(long, value_delimiter = ',', default_value = "200,400,800,1600")]
    temps: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct FitArgs {
    /// CSV file; standard input when absent or "-".
    #[arg(long)]
    input: Option<PathBuf>,
    /// Temperature column, by header name or 0-based index.
    #[arg(long, default_value = "0")]
    x: String,
    /// Observable column, by header name or 0-based index.
    #[arg(long, default_value = "1")]
    y: String,
    /// Exponent to test for consistency.
    #[arg(long)]
    target: Option<f64>,
    #[arg(long, default_value_t = 3.0)]
    k_sigma: f64,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct ScanHArgs {
    #[arg(long, default_value_t = 10)]
    halvings: u32,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct CatastropheArgs {
    /// m³
    #[arg(long, default_value_t = 1.0)]
    volume: f64,
    /// K
    #[arg(long, default_value_t = 300.0)]
    temp: f64,
    /// First cutoff, Hz; defaults to K_B T / h.
    #[arg(long)]
    f_start: Option<f64>,
    #[arg(long, default_value_t = 10)]
    doublings: u32,
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Domain(Error),
    Usage(String),
    Data { line: u64, message: String },
    NoInput(String),
    CantCreate(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Domain(_) => EXIT_DOMAIN,
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data { .. } => EXIT_DATA,
            Failure::NoInput(_) => EXIT_NO_INPUT,
            Failure::CantCreate(_) => EXIT_CANT_CREATE,
        }
    }

    fn message(&self) -> String {
        let text = match self {
            Failure::Domain(e) => e.to_string(),
            Failure::Usage(m) | Failure::NoInput(m) | Failure::CantCreate(m) => m.clone(),
            Failure::Data { line, message } => format!("malformed CSV at line {line}: {message}"),
        };
        format!("error: {}", text.replace('\n', " "))
    }
}

/// Runs the command line `args` (program name first) with constants taken
/// from the process environment.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_env(args, &|key| std::env::var(key).ok(), stdin, stdout, stderr)
}

/// [`run`] with an explicit environment lookup.
pub fn run_with_env<I, S>(
    args: I,
    env: &dyn Fn(&str) -> Option<String>,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, env, stdin) {
        Ok((report, default_format)) => {
            let bytes = match report.render(cli.format.unwrap_or(default_format)) {
                Ok(b) => b,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    return EXIT_CANT_CREATE;
                }
            };
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &bytes)
                    .map_err(|e| Failure::CantCreate(format!("cannot write {}: {e}", path.display()))),
                None => stdout
                    .write_all(&bytes)
                    .map_err(|e| Failure::CantCreate(format!("cannot write output: {e}"))),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(f) => {
                    let _ = writeln!(stderr, "{}", f.message());
                    f.exit_code()
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "{}", f.message());
            f.exit_code()
        }
    }
}

fn constants_from_env(env: &dyn Fn(&str) -> Option<String>) -> Result<PhysicalConstants, Failure> {
    let defaults = PhysicalConstants::default();
    let read = |key: &str, default: f64| -> Result<f64, Failure> {
        match env(key) {
            None => Ok(default),
            Some(text) => text
                .trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("{key}={text:?} is not a number"))),
        }
    };
    Ok(PhysicalConstants::new(
        read(ENV_H, defaults.h())?,
        read(ENV_C, defaults.c())?,
        read(ENV_KB, defaults.k_b())?,
    )?)
}

fn provenance(
    command: &str,
    params: &impl Serialize,
    seed: u64,
    constants: &PhysicalConstants,
) -> Vec<(String, String)> {
    let mut out = vec![("command".to_string(), command.to_string())];
    if let Ok(serde_json::Value::Object(map)) = serde_json::to_value(params) {
        for (k, v) in map {
            let text = match v {
                serde_json::Value::String(s) => s,
                serde_json::Value::Null => "default".to_string(),
                serde_json::Value::Array(items) => items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";"),
                other => other.to_string(),
            };
            out.push((k, text));
        }
    }
    out.push(("seed".into(), seed.to_string()));
    out.push(("h_j_s".into(), format!("{:e}", constants.h())));
    out.push(("c_m_per_s".into(), format!("{:e}", constants.c())));
    out.push(("k_b_j_per_k".into(), format!("{:e}", constants.k_b())));
    out
}

#[derive(Serialize)]
struct NoParams {}

fn execute(cli: &Cli, env: &dyn Fn(&str) -> Option<String>, stdin: &mut dyn Read) -> Result<(Report, Format), Failure> {
    let k = constants_from_env(env)?;
    let seed = cli.seed;
    match &cli.command {
        Command::Constants => {
            let prov = provenance("constants", &NoParams {}, seed, &k);
            Ok((
                Report::record(
                    prov,
                    vec![
                        ("h_j_s", k.h().into()),
                        ("c_m_per_s", k.c().into()),
                        ("k_b_j_per_k", k.k_b().into()),
                        ("sigma_w_per_m2_k4", stefan_boltzmann_sigma(&k).into()),
                        ("radiation_constant_j_per_m3_k4", radiation_constant(&k).into()),
                        ("energy_per_photon_over_kt", energy_per_photon_ratio().into()),
                    ],
                ),
                Format::Json,
            ))
        }
        Command::Observables(a) => {
            let o = observables(a.volume, a.temp, &k)?;
            Ok((
                Report::record(
                    provenance("observables", a, seed, &k),
                    vec![
                        ("volume_m3", o.volume.into()),
                        ("temperature_k", o.temperature.into()),
                        ("mean_photon_number", o.mean_photon_number.into()),
                        ("internal_energy_j", o.internal_energy.into()),
                        ("pressure_pa", o.pressure.into()),
                        ("energy_per_photon_j", o.energy_per_photon.into()),
                    ],
                ),
                Format::Json,
            ))
        }
        Command::Spectrum(a) => spectrum_command(a, seed, &k).map(|r| (r, Format::Csv)),
        Command::Ode(a) => {
            let p1 = integrate_pressure(a.t0, a.p0, a.t1, a.alpha, a.steps)?;
            Ok((
                Report::record(
                    provenance("ode", a, seed, &k),
                    vec![
                        ("t0_k", a.t0.into()),
                        ("p0_pa", a.p0.into()),
                        ("t1_k", a.t1.into()),
                        ("pressure_pa", p1.into()),
                        ("pressure_ratio", (p1 / a.p0).into()),
                        ("exponent", pressure_exponent(a.alpha)?.into()),
                        ("steps", (a.steps as u64).into()),
                    ],
                ),
                Format::Json,
            ))
        }
        Command::Sample(a) => {
            let spec = a.cavity.spec()?;
            let spectrum = ModeSpectrum::build(&spec, a.temp, &k, &SpectrumResolution::default())?;
            let est = sample_spectrum(&spectrum, a.temp, a.cavity.draws, seed, &k)?;
            let (bulk_n, bulk_u) = bulk_expectation(&spec, a.temp, &k)?;
            Ok((
                Report::record(
                    provenance("sample", a, seed, &k),
                    vec![
                        ("temperature_k", a.temp.into()),
                        ("modes", spectrum.total_modes().into()),
                        ("draws", (est.draws as u64).into()),
                        ("mean_n", est.mean_n.into()),
                        ("stderr_n", est.std_err_n.into()),
                        ("mean_u_j", est.mean_u.into()),
                        ("stderr_u_j", est.std_err_u.into()),
                        ("bulk_n", bulk_n.into()),
                        ("bulk_u_j", bulk_u.into()),
                    ],
                ),
                Format::Json,
            ))
        }
        Command::Scaling(a) => {
            let spec = a.cavity.spec()?;
            let rows = scaling_experiment(&spec, &a.temps, a.cavity.draws, seed, &k)?;
            Ok((
                Report::table(
                    provenance("scaling", a, seed, &k),
                    vec!["temperature_k", "mean_u_j", "stderr_u_j", "mean_n", "stderr_n"],
                    rows.iter()
                        .map(|r| {
                            vec![
                                r.temperature.into(),
                                r.mean_u.into(),
                                r.std_err_u.into(),
                                r.mean_n.into(),
                                r.std_err_n.into(),
                            ]
                        })
                        .collect(),
                ),
                Format::Csv,
            ))
        }
        Command::Fit(a) => fit_command(a, seed, &k, stdin).map(|r| (r, Format::Json)),
        Command::ScanH(a) => {
            let scan = radiation_constant_h_scan(&k, a.halvings)?;
            let rows = scan
                .iter()
                .enumerate()
                .map(|(i, &(h, c))| {
                    let ratio = if i == 0 { None } else { Some(c / scan[i - 1].1) };
                    vec![(i as u64).into(), h.into(), c.into(), ratio.into()]
                })
                .collect();
            Ok((
                Report::table(
                    provenance("scan-h", a, seed, &k),
                    vec![
                        "halvings",
                        "h_j_s",
                        "radiation_constant_j_per_m3_k4",
                        "ratio_to_previous",
                    ],
                    rows,
                ),
                Format::Csv,
            ))
        }
        Command::Catastrophe(a) => {
            let f0 = a.f_start.unwrap_or(k.k_b() * a.temp / k.h());
            let mut rows = Vec::with_capacity(a.doublings as usize + 1);
            for i in 0..=a.doublings {
                let f = f0 * 2f64.powi(i as i32);
                let classical = classical_cutoff_energy(a.volume, a.temp, f, &k)?;
                let quantum = quantum_cutoff_energy(a.volume, a.temp, f, &k)?;
                rows.push(vec![
                    f.into(),
                    k.reduced_energy(f, a.temp).into(),
                    classical.into(),
                    quantum.into(),
                    (classical / quantum).into(),
                ]);
            }
            Ok((
                Report::table(
                    provenance("catastrophe", a, seed, &k),
                    vec![
                        "f_cutoff_hz",
                        "x_cutoff",
                        "classical_energy_j",
                        "quantum_energy_j",
                        "classical_over_quantum",
                    ],
                    rows,
                ),
                Format::Csv,
            ))
        }
    }
}

fn spectrum_command(a: &SpectrumArgs, seed: u64, k: &PhysicalConstants) -> Result<Report, Failure> {
    if a.temp <= 0.0 || !a.temp.is_finite() {
        return Err(Error::domain(format!("temperature must be positive and finite, got {}", a.temp)).into());
    }
    if a.points < 2 {
        return Err(Error::domain("spectrum needs at least 2 points").into());
    }
    let f_max = a.f_max.unwrap_or(20.0 * k.k_b() * a.temp / k.h());
    let f_min = a.f_min.unwrap_or(f_max / a.points as f64);
    if !(f_min >= 0.0 && f_max > f_min && f_max.is_finite()) {
        return Err(Error::domain(format!("need 0 <= f_min < f_max, got {f_min} and {f_max}")).into());
    }
    let models: &[SpectralModel] = match a.model {
        ModelChoice::Planck => &[SpectralModel::Planck],
        ModelChoice::RayleighJeans => &[SpectralModel::RayleighJeans],
        ModelChoice::Both => &[SpectralModel::Planck, SpectralModel::RayleighJeans],
    };
    let step = (f_max - f_min) / (a.points - 1) as f64;
    let mut rows = Vec::new();
    for i in 0..a.points {
        let f = f_min + step * i as f64;
        for &m in models {
            rows.push(vec![
                f.into(),
                spectral_density(f, a.temp, m, k)?.into(),
                m.name().into(),
            ]);
        }
    }
    Ok(Report::table(
        provenance("spectrum", a, seed, k),
        vec!["frequency_hz", "energy_density_j_s_per_m3", "model"],
        rows,
    ))
}

/// Resolves a column given by header name or 0-based index.
fn column_index(headers: &csv::StringRecord, key: &str) -> Result<usize, Failure> {
    if let Some(i) = headers.iter().position(|h| h == key) {
        return Ok(i);
    }
    match key.parse::<usize>() {
        Ok(i) if i < headers.len() => Ok(i),
        _ => Err(Failure::Usage(format!(
            "no column {key:?} in header {:?}",
            headers.iter().collect::<Vec<_>>().join(",")
        ))),
    }
}

fn fit_command(a: &FitArgs, seed: u64, k: &PhysicalConstants, stdin: &mut dyn Read) -> Result<Report, Failure> {
    let mut text = Vec::new();
    match &a.input {
        Some(path) if path.as_os_str() != "-" => {
            text = std::fs::read(path).map_err(|e| Failure::NoInput(format!("cannot read {}: {e}", path.display())))?;
        }
        _ => {
            stdin
                .read_to_end(&mut text)
                .map_err(|e| Failure::NoInput(format!("cannot read standard input: {e}")))?;
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_slice());
    let data_error = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line());
        Failure::Data {
            line,
            message: e.to_string(),
        }
    };
    let headers = reader.headers().map_err(data_error)?.clone();
    if headers.len() < 2 {
        return Err(Failure::Data {
            line: reader.position().line().max(1),
            message: "expected a header with at least two columns".into(),
        });
    }
    let xi = column_index(&headers, &a.x)?;
    let yi = column_index(&headers, &a.y)?;
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(data_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<f64, Failure> {
            let raw = &record[i];
            raw.parse::<f64>().map_err(|_| Failure::Data {
                line,
                message: format!("{raw:?} is not a number"),
            })
        };
        let (x, y) = (field(xi)?, field(yi)?);
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::domain(format!("line {line}: values must be positive, got ({x}, {y})")).into());
        }
        points.push((x, y));
    }
    let fit = fit_power_law(&points)?;
    let mut fields = vec![
        ("x_column", Cell::Text(headers[xi].to_string())),
        ("y_column", Cell::Text(headers[yi].to_string())),
        ("exponent", fit.exponent.into()),
        ("exponent_stderr", fit.exponent_std_err.into()),
        ("log_prefactor", fit.log_prefactor.into()),
        ("r_squared", fit.r_squared.into()),
        ("n_points", (fit.n_points as u64).into()),
    ];
    if let Some(target) = a.target {
        let ok = exponent_consistent(&fit, target, a.k_sigma);
        fields.push(("consistent", Cell::Bool(ok)));
    }
    Ok(Report::record(provenance("fit", a, seed, k), fields))
}
