// SPDX-License-Identifier: Apache-2.0

//! Maximum-likelihood fits for the four model families.

use super::optimize::{invert, numerical_hessian, Bounds, NelderMead};
use super::sampling::{ks_statistic, TabulatedCdf};
use super::{FitReport, ModelFamily, ModelParams, ReturnSeries};
use crate::eigensolver::SquareWellGround;
use crate::error::{Error, Result};
use crate::models::{
    BracketSource, C8Density, DensityModel, GaussianModel, LaplaceModel, PERTURBATION_LIMIT,
};
use crate::potentials::{OscillatorParams, SquareWellPotential};
use crate::scalar::Scalar;

/// Sample size required by the closed-form fits.
pub const MIN_CLOSED_FORM_SAMPLES: usize = 30;
/// Sample size required by the optimized multi-parameter fits.
pub const MIN_OPTIMIZED_SAMPLES: usize = 500;

fn require<T>(r: &ReturnSeries<T>, need: usize) -> Result<()> {
    if r.values.len() < need {
        return Err(Error::InsufficientData {
            got: r.values.len(),
            need,
        });
    }
    Ok(())
}

fn centered<T: Scalar>(r: &ReturnSeries<T>) -> (Vec<T>, T) {
    let m = r.mean();
    (r.values.iter().map(|&v| v - m).collect(), m)
}

fn mean_of<T: Scalar>(values: impl Iterator<Item = T>, n: usize) -> T {
    values.sum::<T>() / T::from_usize_lossy(n)
}

/// `ω̂ = 1 / (2·mean x²)` for zero-centred data.
pub fn gaussian_mle<T: Scalar>(values: &[T]) -> Result<T> {
    let m2 = mean_of(values.iter().map(|&v| v * v), values.len());
    if !(m2 > T::zero()) {
        return Err(Error::DegenerateData(
            "mean of squared returns is zero".into(),
        ));
    }
    Ok((T::lit(2.0) * m2).recip())
}

/// `λ̂ = 1 / (2·mean |x|)` for zero-centred data.
pub fn laplace_mle<T: Scalar>(values: &[T]) -> Result<T> {
    let m1 = mean_of(values.iter().map(|v| v.abs()), values.len());
    if !(m1 > T::zero()) {
        return Err(Error::DegenerateData("mean absolute return is zero".into()));
    }
    Ok((T::lit(2.0) * m1).recip())
}

pub fn negative_log_likelihood<T: Scalar, M: DensityModel<T> + ?Sized>(
    model: &M,
    values: &[T],
) -> T {
    -values.iter().map(|&x| model.log_density(x)).sum::<T>()
}

fn report<T: Scalar, M: DensityModel<T>>(
    family: ModelFamily,
    params: ModelParams,
    model: &M,
    data: &[T],
    removed_mean: Option<T>,
    mut warnings: Vec<String>,
) -> Result<FitReport> {
    let nll = negative_log_likelihood(model, data).as_f64();
    let k = family.parameter_count() as f64;
    let n = data.len();
    let grid = model.report_grid();
    let density = model.density_on_grid(&grid)?.normalize()?;
    if let Some(w) = density.tail_warning() {
        warnings.push(w);
    }
    let cdf = TabulatedCdf::from_density_values(grid, density.values())?;
    let ks = ks_statistic(data, &cdf)?;
    Ok(FitReport {
        model: family,
        params,
        nll,
        aic: 2.0 * k + 2.0 * nll,
        bic: k * (n as f64).ln() + 2.0 * nll,
        ks_stat: ks.as_f64(),
        fisher_info: density.fisher_information().as_f64(),
        variance: density.variance().as_f64(),
        cramer_rao_product: density.cramer_rao_product().as_f64(),
        n,
        removed_mean: removed_mean.map(|m| m.as_f64()),
        seed: None,
        warnings,
    })
}

/// Zero-centred Gaussian, closed form.
pub fn fit_gaussian<T: Scalar>(r: &ReturnSeries<T>) -> Result<FitReport> {
    require(r, MIN_CLOSED_FORM_SAMPLES)?;
    let (data, mean) = centered(r);
    let model = GaussianModel::new(gaussian_mle(&data)?)?;
    let params = ModelParams::Gaussian {
        omega: model.omega().as_f64(),
    };
    report(
        ModelFamily::Gaussian,
        params,
        &model,
        &data,
        Some(mean),
        Vec::new(),
    )
}

/// Zero-centred Laplace, closed form.
pub fn fit_laplace<T: Scalar>(r: &ReturnSeries<T>) -> Result<FitReport> {
    require(r, MIN_CLOSED_FORM_SAMPLES)?;
    let (data, mean) = centered(r);
    let model = LaplaceModel::new(laplace_mle(&data)?)?;
    let params = ModelParams::Laplace {
        lambda: model.lambda().as_f64(),
    };
    report(
        ModelFamily::Laplace,
        params,
        &model,
        &data,
        Some(mean),
        Vec::new(),
    )
}

fn c8_from(theta: &[f64], source: BracketSource) -> Result<C8Density<f64>> {
    let omega = theta[0].exp();
    C8Density::new(
        OscillatorParams::new(omega, theta[1] * omega, theta[2] * omega)?,
        source,
    )
}

fn boundary_warnings(bounds: &Bounds<f64>, x: &[f64], names: &[&str]) -> Vec<String> {
    bounds
        .active(x, 1e-6)
        .iter()
        .zip(names)
        .filter(|(&a, _)| a)
        .map(|(_, n)| format!("{n} stopped at its bound"))
        .collect()
}

/// First-order anharmonic (C8) fit starting from the Gaussian estimate.
pub fn fit_anharmonic<T: Scalar>(r: &ReturnSeries<T>, source: BracketSource) -> Result<FitReport> {
    fit_anharmonic_from(r, source, None)
}

/// First-order anharmonic fit over `(ln ω, ε₁/ω, ε₂/ω)` with
/// `|ε|/ω ≤ 0.3` and `ε₂ ≥ 0`. The data are not re-centred: the cubic term
/// carries the skew.
pub fn fit_anharmonic_from<T: Scalar>(
    r: &ReturnSeries<T>,
    source: BracketSource,
    start: Option<OscillatorParams<T>>,
) -> Result<FitReport> {
    require(r, MIN_OPTIMIZED_SAMPLES)?;
    let data: Vec<f64> = r.values.iter().map(|v| v.as_f64()).collect();
    let omega0 = gaussian_mle(&data)?;
    let start = match start {
        Some(p) => {
            let (w, e1, e2) = (p.omega.as_f64(), p.eps1.as_f64(), p.eps2.as_f64());
            if e2 < 0.0 {
                return Err(Error::Precondition(format!(
                    "starting eps2 = {e2} must be nonnegative"
                )));
            }
            if e1.abs() / w > PERTURBATION_LIMIT || e2 / w > PERTURBATION_LIMIT {
                return Err(Error::Precondition(format!(
                    "starting |eps|/omega must not exceed {PERTURBATION_LIMIT}"
                )));
            }
            [w.ln(), e1 / w, e2 / w]
        }
        None => [omega0.ln(), 0.0, 0.0],
    };
    let limit = PERTURBATION_LIMIT;
    let bounds = Bounds::new(
        vec![start[0].min(omega0.ln()) - 3.0, -limit, 0.0],
        vec![start[0].max(omega0.ln()) + 3.0, limit, limit],
    )?;
    let objective = |theta: &[f64]| match c8_from(theta, source) {
        Ok(m) => negative_log_likelihood(&m, &data),
        Err(_) => f64::INFINITY,
    };
    let best = NelderMead::default().minimize(objective, &start, &[0.1, 0.02, 0.02], &bounds)?;
    let model = c8_from(&best.x, source)?;
    let p = *model.params();
    let mut warnings = p.warnings();
    warnings.extend(boundary_warnings(
        &bounds,
        &best.x,
        &["ln omega", "eps1/omega", "eps2/omega"],
    ));
    let params = ModelParams::Anharmonic {
        omega: p.omega,
        eps1: p.eps1,
        eps2: p.eps2,
        source,
    };
    report(
        ModelFamily::Anharmonic,
        params,
        &model,
        &data,
        None,
        warnings,
    )
}

/// Standard errors of `(ω, ε₁, ε₂)` from the observed information at `params`.
pub fn anharmonic_standard_errors<T: Scalar>(
    values: &[T],
    params: &OscillatorParams<T>,
    source: BracketSource,
) -> Result<[f64; 3]> {
    let data: Vec<f64> = values.iter().map(|v| v.as_f64()).collect();
    let at = [
        params.omega.as_f64(),
        params.eps1.as_f64(),
        params.eps2.as_f64(),
    ];
    let nll = |p: &[f64]| match OscillatorParams::new(p[0], p[1], p[2])
        .and_then(|o| C8Density::new(o, source))
    {
        Ok(m) => negative_log_likelihood(&m, &data),
        Err(_) => f64::NAN,
    };
    let h = 1e-3 * at[0];
    let hessian = numerical_hessian(nll, &at, &[h, h, h]);
    if hessian.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateData(
            "likelihood is not finite around the estimate".into(),
        ));
    }
    let cov = invert(&hessian)?;
    let mut se = [0.0; 3];
    for (i, s) in se.iter_mut().enumerate() {
        if !(cov[i][i] > 0.0) {
            return Err(Error::DegenerateData(
                "observed information is not positive definite".into(),
            ));
        }
        *s = cov[i][i].sqrt();
    }
    Ok(se)
}

fn well_from(log_half_width: f64, log_strength: f64) -> Result<SquareWellGround<f64>> {
    let a = log_half_width.exp();
    let depth = log_strength.exp() / (2.0 * a);
    Ok(SquareWellGround::new(SquareWellPotential::new(a, depth)?))
}

fn square_well_nll(data: &[f64], theta: &[f64]) -> f64 {
    match well_from(theta[0], theta[1]) {
        Ok(g) => negative_log_likelihood(&g, data),
        Err(_) => f64::INFINITY,
    }
}

/// Zero-centred square-well fit over `(ln a, ln 2a·depth)`.
///
/// The strength `2a·depth` is the coordinate that stays finite in the
/// narrow-well limit, where the density tends to Laplace with `λ = 2a·depth`.
pub fn fit_square_well<T: Scalar>(r: &ReturnSeries<T>) -> Result<FitReport> {
    require(r, MIN_OPTIMIZED_SAMPLES)?;
    let (centred, mean) = centered(r);
    let data: Vec<f64> = centred.iter().map(|v| v.as_f64()).collect();
    let sigma = (2.0 * gaussian_mle(&data)?).recip().sqrt();
    let lam = laplace_mle(&data)?;
    let bounds = Bounds::new(
        vec![(1e-6 * sigma).ln(), lam.ln() - 7.0],
        vec![(10.0 * sigma).ln(), lam.ln() + 7.0],
    )?;
    let start = [(0.5 * sigma).ln(), lam.ln()];
    let best = NelderMead::default().minimize(
        |t: &[f64]| square_well_nll(&data, t),
        &start,
        &[0.5, 0.2],
        &bounds,
    )?;
    let ground = well_from(best.x[0], best.x[1])?;
    let well = *ground.well();
    let fineness = well.fineness();
    let mut warnings = boundary_warnings(&bounds, &best.x, &["ln half_width", "ln strength"]);
    if fineness < 0.1 {
        warnings.push(format!(
            "fineness a^2*depth = {fineness:.3e} is small: the fitted well is in its narrow, Laplace-like limit"
        ));
    }
    let params = ModelParams::SquareWell {
        half_width: well.half_width(),
        depth: well.depth(),
        fineness,
    };
    report(
        ModelFamily::SquareWell,
        params,
        &ground,
        &data,
        Some(mean.as_f64()),
        warnings,
    )
}

/// Best strength `2a·depth` and its NLL for a fixed half-width, on
/// zero-centred data.
pub fn square_well_profile(centred: &[f64], half_width: f64) -> Result<(f64, f64)> {
    let lam = laplace_mle(centred)?;
    let la = half_width.ln();
    let bounds = Bounds::new(vec![lam.ln() - 7.0], vec![lam.ln() + 7.0])?;
    let best = NelderMead::default().minimize(
        |t: &[f64]| square_well_nll(centred, &[la, t[0]]),
        &[lam.ln()],
        &[0.2],
        &bounds,
    )?;
    Ok((best.x[0].exp(), best.value))
}

/// Fits one family; `source` only affects the anharmonic family.
pub fn fit_family<T: Scalar>(
    r: &ReturnSeries<T>,
    family: ModelFamily,
    source: BracketSource,
) -> Result<FitReport> {
    match family {
        ModelFamily::Gaussian => fit_gaussian(r),
        ModelFamily::Laplace => fit_laplace(r),
        ModelFamily::Anharmonic => fit_anharmonic(r, source),
        ModelFamily::SquareWell => fit_square_well(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alternating(v: f64, n: usize) -> ReturnSeries<f64> {
        ReturnSeries::new((0..n).map(|i| if i % 2 == 0 { -v } else { v }).collect()).unwrap()
    }

    #[test]
    fn gaussian_closed_form_examples() {
        let f = fit_gaussian(&alternating(1.0, 40)).unwrap();
        assert_eq!(f.params, ModelParams::Gaussian { omega: 0.5 });
        assert_eq!(f.removed_mean, Some(0.0));
        assert!((f.aic - (2.0 + 2.0 * f.nll)).abs() < 1e-12);
        assert!(matches!(
            fit_gaussian(&ReturnSeries::new(vec![0.0; 40]).unwrap()),
            Err(Error::DegenerateData(_))
        ));
        assert!(matches!(
            fit_gaussian(&alternating(1.0, 2)),
            Err(Error::InsufficientData { got: 2, need: 30 })
        ));
    }

    #[test]
    fn laplace_closed_form_example() {
        let f = fit_laplace(&alternating(0.5, 40)).unwrap();
        assert_eq!(f.params, ModelParams::Laplace { lambda: 1.0 });
        assert!(matches!(
            fit_laplace(&ReturnSeries::new(vec![0.0; 40]).unwrap()),
            Err(Error::DegenerateData(_))
        ));
    }

    #[test]
    fn gaussian_nll_matches_closed_form() {
        let f = fit_gaussian(&alternating(1.0, 40)).unwrap();
        // nll = n (½ ln(π/ω) + ω·mean x²) at ω = 1/2, mean x² = 1.
        let want = 40.0 * (0.5 * (std::f64::consts::PI / 0.5).ln() + 0.5);
        assert!((f.nll - want).abs() < 1e-10);
        assert!(f.cramer_rao_product > 1.0 - 1e-3);
    }

    #[test]
    fn anharmonic_rejects_negative_eps2_start() {
        let r = alternating(1.0, 600);
        let start = OscillatorParams::new(1.0, 0.0, -0.01).unwrap();
        assert!(matches!(
            fit_anharmonic_from(&r, BracketSource::Oracle, Some(start)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            fit_anharmonic(&alternating(1.0, 100), BracketSource::Oracle),
            Err(Error::InsufficientData {
                got: 100,
                need: 500
            })
        ));
    }
}
