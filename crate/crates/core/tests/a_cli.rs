//! End-to-end tests of the `blackbody` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use blackbody::exponent_fit::fit_power_law;
use blackbody::mode_sampler::{scaling_experiment, CavitySpec};
use blackbody::PhysicalConstants;
use serde_json::Value;

fn blackbody(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_blackbody"))
        .args(args)
        .env_remove("BLACKBODY_H")
        .env_remove("BLACKBODY_C")
        .env_remove("BLACKBODY_KB")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn constants_command() {
    let v = json(&blackbody(&["constants"], ""));
    assert!(rel(v["result"]["sigma_w_per_m2_k4"].as_f64().unwrap(), 5.67e-8) < 1e-3);
    assert!(
        rel(
            v["result"]["radiation_constant_j_per_m3_k4"].as_f64().unwrap(),
            7.566e-16
        ) < 1e-3
    );
    assert_eq!(v["provenance"]["command"], "constants");
    assert_eq!(v["provenance"]["seed"], "0");
    assert_eq!(v["provenance"]["h_j_s"], "6.62607015e-34");
}

#[test]
fn observables_command() {
    let v = json(&blackbody(&["observables", "--volume", "1", "--temp", "1"], ""));
    assert!(rel(v["result"]["mean_photon_number"].as_f64().unwrap(), 2.02e7) < 5e-3);
    assert_eq!(v["provenance"]["volume"], "1.0");
}

#[test]
fn ode_command() {
    let args = [
        "ode", "--t0", "100", "--p0", "1", "--t1", "200", "--alpha", "3", "--steps", "1024",
    ];
    let v = json(&blackbody(&args, ""));
    assert!((v["result"]["pressure_pa"].as_f64().unwrap() - 16.0).abs() < 1e-8);
}

#[test]
fn exit_codes() {
    assert_eq!(blackbody(&["bogus"], "").status.code(), Some(64));
    assert_eq!(blackbody(&["observables", "--volume", "1"], "").status.code(), Some(64));
    let domain = blackbody(&["observables", "--volume", "-1", "--temp", "1"], "");
    assert_eq!(domain.status.code(), Some(2));
    let stderr = String::from_utf8(domain.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    let malformed = blackbody(&["fit"], "# provenance\nt,u\n1,2\n3,x\n");
    assert_eq!(malformed.status.code(), Some(65));
    assert!(String::from_utf8(malformed.stderr).unwrap().contains("line 4"));
    assert_eq!(
        blackbody(&["fit", "--input", "/nonexistent/data.csv"], "")
            .status
            .code(),
        Some(66)
    );
}

#[test]
fn spectrum_schema_and_ordering() {
    let out = blackbody(&["spectrum", "--temp", "300", "--points", "50"], "");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut body = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(body.next(), Some("frequency_hz,energy_density_j_s_per_m3,model"));
    let rows: Vec<Vec<String>> = body.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 100);
    for pair in rows.chunks(2) {
        assert_eq!(pair[0][2], "planck");
        assert_eq!(pair[1][2], "rayleigh_jeans");
        let planck: f64 = pair[0][1].parse().unwrap();
        let rj: f64 = pair[1][1].parse().unwrap();
        assert!(planck < rj);
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "sample", "--edge", "0.001", "--temp", "300", "--draws", "16", "--seed", "9",
    ];
    let a = blackbody(&args, "");
    let b = blackbody(&args, "");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_goes_only_to_the_named_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = blackbody(&["scan-h", "--halvings", "4", "--output", path.to_str().unwrap()], "");
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# command=scan-h\n"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn catastrophe_classical_energy_grows_eightfold() {
    let out = blackbody(&["catastrophe", "--doublings", "6", "--format", "json"], "");
    let v = json(&out);
    let rows = v["result"].as_array().unwrap();
    for pair in rows.windows(2) {
        let ratio = pair[1]["classical_energy_j"].as_f64().unwrap() / pair[0]["classical_energy_j"].as_f64().unwrap();
        assert!((ratio - 8.0).abs() < 1e-6);
    }
    let last = rows.last().unwrap()["quantum_energy_j"].as_f64().unwrap();
    assert!(rel(last, 7.56573325e-16 * 300f64.powi(4)) < 1e-6);
}

#[test]
fn scaling_output_round_trips_through_fit() {
    let args = ["scaling", "--edge", "0.01", "--draws", "30", "--seed", "5"];
    let out = blackbody(&args, "");
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv
        .lines()
        .any(|l| l == "temperature_k,mean_u_j,stderr_u_j,mean_n,stderr_n"));
    let fit_cli = json(&blackbody(&["fit", "--x", "temperature_k", "--y", "mean_u_j"], &csv));

    let spec = CavitySpec::new(3, 0.01, 30.0).unwrap();
    let rows = scaling_experiment(
        &spec,
        &[200.0, 400.0, 800.0, 1600.0],
        30,
        5,
        &PhysicalConstants::default(),
    )
    .unwrap();
    let fit = fit_power_law(&rows.iter().map(|r| (r.temperature, r.mean_u)).collect::<Vec<_>>()).unwrap();
    let printed: f64 = format!("{:.8e}", fit.exponent).parse().unwrap();
    assert_eq!(fit_cli["result"]["exponent"].as_f64().unwrap(), printed);
}
