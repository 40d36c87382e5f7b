// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use infoquant::fitting::ReturnSeries;
use infoquant::io::returns_csv_string;
use infoquant::models::{DensityModel, LaplaceModel};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_infoquant"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn json(p: impl AsRef<Path>) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn stderr_json(o: &Output) -> serde_json::Value {
    serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).expect("stderr is JSON")
}

fn write_returns(dir: &Path, name: &str, values: &[f64]) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, returns_csv_string(values).unwrap()).unwrap();
    p
}

#[test]
fn solve_harmonic_sidecar_energy() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "g.csv");
    let o = run(&[
        "solve",
        "--potential",
        r#"{"type":"oscillator","omega":1,"eps1":0,"eps2":0}"#,
        "-o",
        &out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let side = json(dir.path().join("g.json"));
    assert!((side["energy"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert_eq!(side["method"], "finite_difference");
    assert_eq!(side["grid"]["n_points"], 10001);
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("x,psi,p\n"));
}

#[test]
fn solve_reads_spec_file_and_grid_override() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("well.json");
    fs::write(
        &spec,
        r#"{"type":"square_well","half_width":1.0,"depth":2.0}"#,
    )
    .unwrap();
    let out = path(dir.path(), "w.csv");
    let o = run(&[
        "solve",
        "--potential",
        spec.to_str().unwrap(),
        "--grid",
        "-10,10,4001",
        "-o",
        &out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let side = json(dir.path().join("w.json"));
    assert!(side["energy"].as_f64().unwrap() < 0.0);
    assert_eq!(side["grid"]["x_min"].as_f64().unwrap(), -10.0);
}

#[test]
fn solved_densities_round_trip_through_info() {
    let dir = tempfile::tempdir().unwrap();
    for (name, spec) in [
        (
            "h",
            r#"{"type":"oscillator","omega":2,"eps1":0,"eps2":0.05}"#,
        ),
        ("w", r#"{"type":"square_well","half_width":0.5,"depth":3}"#),
        ("d", r#"{"type":"delta","strength":1}"#),
        ("p", r#"{"type":"polynomial","lambdas":[0,-4,0,-0.4]}"#),
    ] {
        let out = path(dir.path(), &format!("{name}.csv"));
        let o = run(&["solve", "--potential", spec, "-o", &out]);
        assert!(
            o.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let info = path(dir.path(), &format!("{name}_info.json"));
        let o = run(&["info", "--density", &out, "-o", &info]);
        assert!(
            o.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let v = json(&info);
        assert!(
            v["cramer_rao_product"].as_f64().unwrap() >= 1.0 - 1e-3,
            "{name}"
        );
    }
}

#[test]
fn info_on_laplace_density() {
    let dir = tempfile::tempdir().unwrap();
    let m = LaplaceModel::new(1.0).unwrap();
    let grid = m.report_grid();
    let d = m.density_on_grid(&grid).unwrap();
    let csv = infoquant::io::density_csv_string(&grid, &[("value", d.values())]).unwrap();
    let input = dir.path().join("lap.csv");
    fs::write(&input, csv).unwrap();
    let out = path(dir.path(), "i.json");
    let o = run(&["info", "--density", input.to_str().unwrap(), "-o", &out]);
    assert!(o.status.success());
    let v = json(&out);
    assert!((v["cramer_rao_product"].as_f64().unwrap() - 2.0).abs() / 2.0 < 0.02);
    assert!((v["peak_height"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    assert!(v["fisher_info"].as_f64().is_some());
    assert!(v["variance"].as_f64().is_some());
}

#[test]
fn info_clamps_small_negative_values_and_rejects_large_ones() {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small.csv");
    fs::write(&small, "x,value\n-2,-1e-9\n-1,0.2\n0,0.6\n1,0.2\n2,0\n").unwrap();
    let out = path(dir.path(), "s.json");
    let o = run(&["info", "--density", small.to_str().unwrap(), "-o", &out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(json(&out)["clamped_mass"].as_f64().unwrap() > 0.0);
    let large = dir.path().join("large.csv");
    fs::write(&large, "x,value\n-2,-0.1\n-1,0.2\n0,0.6\n1,0.2\n2,0\n").unwrap();
    let o = run(&["info", "--density", large.to_str().unwrap(), "-o", &out]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], "ClampMassExceeded");
}

#[test]
fn returns_from_prices() {
    let dir = tempfile::tempdir().unwrap();
    let prices = dir.path().join("p.csv");
    fs::write(
        &prices,
        "date,close\n2024-01-01,100\n2024-01-02,105\n2024-01-03,105\n",
    )
    .unwrap();
    let out = path(dir.path(), "r.csv");
    let o = run(&[
        "returns",
        "--prices",
        prices.to_str().unwrap(),
        "--column",
        "close",
        "-o",
        &out,
    ]);
    assert!(o.status.success());
    let back = infoquant::io::parse_returns_csv(fs::read(&out).unwrap().as_slice()).unwrap();
    assert_eq!(back.len(), 2);
    assert!((back[0] - 1.05f64.ln()).abs() < 1e-11);
    assert_eq!(back[1], 0.0);
}

#[test]
fn non_positive_price_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let prices = dir.path().join("p.csv");
    fs::write(&prices, "close\n100\n0\n").unwrap();
    let out = path(dir.path(), "r.csv");
    let o = run(&["returns", "--prices", prices.to_str().unwrap(), "-o", &out]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "NonPositivePrice");
    assert!(!Path::new(&out).exists());
}

#[test]
fn fit_on_two_rows_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_returns(dir.path(), "r.csv", &[0.01, -0.02]);
    let out = path(dir.path(), "f.json");
    let o = run(&[
        "fit",
        "--model",
        "gaussian",
        "--input",
        input.to_str().unwrap(),
        "-o",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "InsufficientData");
    assert_eq!(e["category"], "data");
    assert!(e["message"].as_str().unwrap().contains("need at least 30"));
}

#[test]
fn fit_writes_report_with_seed() {
    let dir = tempfile::tempdir().unwrap();
    let r = ReturnSeries::synthetic(&LaplaceModel::new(1.0).unwrap(), 2000, 3).unwrap();
    let input = write_returns(dir.path(), "r.csv", r.values());
    let out = path(dir.path(), "f.json");
    let o = run(&[
        "fit",
        "--model",
        "laplace",
        "--input",
        input.to_str().unwrap(),
        "-o",
        &out,
        "--seed",
        "3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&out);
    assert_eq!(v["model"], "laplace");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["n"], 2000);
    for key in [
        "nll",
        "aic",
        "bic",
        "ks_stat",
        "fisher_info",
        "variance",
        "cramer_rao_product",
    ] {
        assert!(v[key].as_f64().is_some(), "{key}");
    }
    assert!(v["params"]["lambda"].as_f64().is_some());
    assert!(
        fs::read_to_string(&out).unwrap().contains("e-1")
            || fs::read_to_string(&out).unwrap().contains("e0")
    );
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_returns(dir.path(), "r.csv", &[0.0; 40]);
    let inp = input.to_str().unwrap();
    for args in [
        vec!["frobnicate"],
        vec!["fit", "--model", "cauchy", "--input", inp, "-o", "x.json"],
        vec!["fit", "--model", "gaussian", "--input", inp, "-o", "x.txt"],
        vec![
            "compare", "--input", inp, "--models", "gaussian", "-o", "x.json",
        ],
        vec!["solve", "--potential", "{}", "--grid", "1,2", "-o", "x.csv"],
        vec![
            "fit",
            "--model",
            "anharmonic",
            "--source",
            "guess",
            "--input",
            inp,
            "-o",
            "x.json",
        ],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert_eq!(stderr_json(&o)["category"], "usage", "{args:?}");
    }
}

#[test]
fn help_and_version_exit_0() {
    assert!(run(&["--help"]).status.success());
    assert!(run(&["--version"]).status.success());
    assert!(run(&["fit", "--help"]).status.success());
}

#[test]
fn bad_potentials_are_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "g.csv");
    for spec in [
        r#"{"type":"polynomial","lambdas":[0,4]}"#,
        r#"{"type":"oscillator","omega":1,"eps1":0.1,"eps2":-0.1}"#,
        r#"{"type":"cosine"}"#,
    ] {
        let o = run(&["solve", "--potential", spec, "-o", &out]);
        assert_eq!(o.status.code(), Some(2), "{spec}");
    }
}

#[test]
fn narrow_grid_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "g.csv");
    let o = run(&[
        "solve",
        "--potential",
        r#"{"type":"oscillator","omega":1,"eps1":0,"eps2":0}"#,
        "--grid",
        "-2,2,401",
        "-o",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], "GridTooNarrow");
}

#[test]
fn compare_ranks_and_collects_failures() {
    let dir = tempfile::tempdir().unwrap();
    let r = ReturnSeries::synthetic(&LaplaceModel::new(1.0).unwrap(), 200, 5).unwrap();
    let input = write_returns(dir.path(), "r.csv", r.values());
    let out = path(dir.path(), "c.json");
    let o = run(&[
        "compare",
        "--input",
        input.to_str().unwrap(),
        "--models",
        "gaussian,laplace,square_well",
        "-o",
        &out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&out);
    assert_eq!(v["ranked"].as_array().unwrap().len(), 2);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
    let aics: Vec<f64> = v["ranked"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["aic"].as_f64().unwrap())
        .collect();
    assert!(aics[0] <= aics[1]);
}
