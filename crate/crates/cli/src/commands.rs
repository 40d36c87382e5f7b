// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use infoquant::eigensolver;
use infoquant::fitting::{
    compare_models, fit_family, log_returns, Comparison, ModelFamily, ReturnSeries,
};
use infoquant::grid::{DensityOnGrid, Grid};
use infoquant::io;
use infoquant::models::BracketSource;
use infoquant::potentials::PotentialSpec;
use infoquant::scalar::trapezoid;
use infoquant::Error;
use serde::Serialize;

use crate::Failure;

type Outcome = Result<(), Failure>;

fn expect_extension(path: &Path, ext: &str) -> Result<(), Failure> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case(ext) => Ok(()),
        _ => Err(Failure::Usage(format!(
            "output '{}' must have a .{ext} extension",
            path.display()
        ))),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Core(Error::Io(format!("{}: {e}", path.display()))))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let io_err = |e: std::io::Error| Failure::Core(Error::Io(format!("{}: {e}", path.display())));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn read_returns(path: &Path) -> Result<ReturnSeries<f64>, Failure> {
    let values = io::parse_returns_csv(read(path)?.as_bytes())?;
    Ok(ReturnSeries::new(values)?.with_labels("unspecified", path.display().to_string()))
}

pub fn returns(prices: &Path, column: &str, output: &Path) -> Outcome {
    expect_extension(output, "csv")?;
    let p = io::parse_prices_csv(read(prices)?.as_bytes(), column)?;
    let r = log_returns(&p)?;
    write_atomic(output, &io::returns_csv_string(r.values())?)
}

fn parse_grid(text: &str) -> Result<Grid<f64>, Failure> {
    let usage = || Failure::Usage(format!("--grid expects x_min,x_max,n_points, got '{text}'"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(usage());
    };
    let lo: f64 = lo.parse().map_err(|_| usage())?;
    let hi: f64 = hi.parse().map_err(|_| usage())?;
    let n: usize = n.parse().map_err(|_| usage())?;
    Ok(Grid::new(lo, hi, n)?)
}

pub fn solve(potential: &str, grid: Option<&str>, output: &Path) -> Outcome {
    expect_extension(output, "csv")?;
    let grid = grid.map(parse_grid).transpose()?;
    let text = if potential.trim_start().starts_with('{') {
        potential.to_string()
    } else {
        read(Path::new(potential))?
    };
    let pot = PotentialSpec::from_json(&text)?.build::<f64>()?;
    let grid = grid.unwrap_or_else(|| eigensolver::default_grid(&pot));
    let gs = eigensolver::solve(&pot, &grid)?;
    let sidecar = io::ground_state_sidecar(&gs);
    write_atomic(output, &io::ground_state_csv_string(&gs)?)?;
    write_atomic(
        &output.with_extension("json"),
        &io::to_json_string(&sidecar)?,
    )
}

#[derive(Debug, Serialize)]
struct InfoReport {
    fisher_info: f64,
    variance: f64,
    mean: f64,
    cramer_rao_product: f64,
    peak_height: f64,
    input_mass: f64,
    clamped_mass: f64,
    n_points: usize,
    warnings: Vec<String>,
}

pub fn info(density: &Path, output: &Path) -> Outcome {
    expect_extension(output, "json")?;
    let (grid, values) = io::parse_density_csv(read(density)?.as_bytes())?;
    let input_mass = trapezoid(&values, grid.spacing());
    let (d, clamped) = DensityOnGrid::from_signed(grid, values)?;
    let mut warnings = Vec::new();
    if (input_mass - 1.0).abs() > 1e-6 {
        warnings.push(format!("input mass {input_mass:.6e} was renormalized to 1"));
    }
    if clamped > 0.0 {
        warnings.push(format!(
            "negative samples clamped to zero (relative mass {clamped:.3e})"
        ));
    }
    warnings.extend(d.tail_warning());
    let rep = InfoReport {
        fisher_info: d.fisher_information(),
        variance: d.variance(),
        mean: d.mean(),
        cramer_rao_product: d.cramer_rao_product(),
        peak_height: d.peak_height()?,
        input_mass,
        clamped_mass: clamped,
        n_points: d.grid().len(),
        warnings,
    };
    write_atomic(output, &io::to_json_string(&rep)?)
}

pub fn fit(
    model: ModelFamily,
    input: &Path,
    output: &Path,
    source: BracketSource,
    seed: Option<u64>,
) -> Outcome {
    expect_extension(output, "json")?;
    let r = read_returns(input)?;
    let rep = fit_family(&r, model, source)?.with_seed(seed);
    write_atomic(output, &io::to_json_string(&rep)?)
}

pub fn compare(
    input: &Path,
    models: &str,
    output: &Path,
    source: BracketSource,
    seed: Option<u64>,
) -> Outcome {
    expect_extension(output, "json")?;
    let families = ModelFamily::parse_list(models).map_err(|e| Failure::Usage(e.to_string()))?;
    if families.len() < 2 {
        return Err(Failure::Usage(format!(
            "--models needs at least 2 families, got '{models}'"
        )));
    }
    let r = read_returns(input)?;
    let mut c: Comparison = compare_models(&r, &families, source)?;
    for rep in c.ranked.iter_mut() {
        rep.seed = seed;
    }
    write_atomic(output, &io::to_json_string(&c)?)
}
