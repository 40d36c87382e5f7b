// SPDX-License-Identifier: Apache-2.0

//! Closed-form return densities.
//!
//! * Gaussian `√(ω/π) e^{-ωx²}`: harmonic ground state, `σ² = 1/(2ω)`.
//! * C8 `√(ω/π) e^{-ωx²} B(x)²`: first-order anharmonic ground state.
//! * Laplace `λ e^{-2λ|x|}`: delta-potential ground state, `σ² = 1/(2λ²)`.
//! * Power law of the price ratio `y = e^x` implied by the Laplace model.
//!
//! Every model exposes a log-density through [`DensityModel`], which the
//! fitting code uses for likelihoods, tabulated CDFs and report grids.

pub mod hermite;
pub mod perturbation;

use serde::{Deserialize, Serialize};

pub use hermite::{hermite_coefficients, hermite_eigenfunction, hermite_polynomial};
pub use perturbation::{
    bracket_divergence, c8_density, oracle_bracket_coefficients, paper_bracket_coefficients,
    perturbation_first_order, perturbed_amplitude_paper, position_matrix_element,
    BracketDivergence, BracketSource, BracketTerm, C8Density, FirstOrderCorrection,
    PERTURBATION_LIMIT,
};

use crate::eigensolver::SquareWellGround;
use crate::error::{Error, Result};
use crate::grid::{DensityOnGrid, Grid};
use crate::scalar::Scalar;

/// Node count of model report grids.
pub const REPORT_GRID_POINTS: usize = 4001;

/// A normalized density on the real line.
pub trait DensityModel<T: Scalar> {
    fn log_density(&self, x: T) -> T;

    fn density(&self, x: T) -> T {
        self.log_density(x).exp()
    }

    /// Half-width of a centred window outside of which the density is
    /// negligible (below roughly `1e-10` of its peak).
    fn support_half_width(&self) -> T;

    fn report_grid(&self) -> Grid<T> {
        Grid::symmetric(self.support_half_width(), REPORT_GRID_POINTS).expect("positive half width")
    }

    fn density_on_grid(&self, grid: &Grid<T>) -> Result<DensityOnGrid<T>> {
        DensityOnGrid::from_fn(*grid, |x| self.density(x))
    }
}

impl<T: Scalar> DensityModel<T> for SquareWellGround<T> {
    fn log_density(&self, x: T) -> T {
        SquareWellGround::log_density(self, x)
    }

    fn support_half_width(&self) -> T {
        self.well().half_width() + T::lit(12.0) / self.kappa()
    }

    fn report_grid(&self) -> Grid<T> {
        self.default_grid()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianModel<T> {
    omega: T,
}

impl<T: Scalar> GaussianModel<T> {
    pub fn new(omega: T) -> Result<Self> {
        if !(omega > T::zero()) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega = {omega} must be positive"
            )));
        }
        Ok(Self { omega })
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    /// `1/(2ω)`.
    pub fn variance(&self) -> T {
        (T::lit(2.0) * self.omega).recip()
    }

    /// `2ω`.
    pub fn fisher_information(&self) -> T {
        T::lit(2.0) * self.omega
    }

    /// Ground energy `ω/2`.
    pub fn energy(&self) -> T {
        self.omega / T::lit(2.0)
    }
}

impl<T: Scalar> DensityModel<T> for GaussianModel<T> {
    fn log_density(&self, x: T) -> T {
        (self.omega / T::PI()).ln() / T::lit(2.0) - self.omega * x * x
    }

    fn support_half_width(&self) -> T {
        T::lit(10.0) / self.omega.sqrt()
    }
}

pub fn gaussian_density<T: Scalar>(m: &GaussianModel<T>, x: T) -> T {
    m.density(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceModel<T> {
    lam: T,
}

impl<T: Scalar> LaplaceModel<T> {
    pub fn new(lam: T) -> Result<Self> {
        if !(lam > T::zero()) || !lam.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda = {lam} must be positive"
            )));
        }
        Ok(Self { lam })
    }

    pub fn lambda(&self) -> T {
        self.lam
    }

    /// `1/(2λ²)`.
    pub fn variance(&self) -> T {
        (T::lit(2.0) * self.lam * self.lam).recip()
    }

    /// `4λ²`.
    pub fn fisher_information(&self) -> T {
        T::lit(4.0) * self.lam * self.lam
    }

    pub fn cdf(&self, x: T) -> T {
        let half = T::lit(0.5);
        let tail = half * (-T::lit(2.0) * self.lam * x.abs()).exp();
        if x < T::zero() {
            tail
        } else {
            T::one() - tail
        }
    }
}

impl<T: Scalar> DensityModel<T> for LaplaceModel<T> {
    fn log_density(&self, x: T) -> T {
        self.lam.ln() - T::lit(2.0) * self.lam * x.abs()
    }

    fn support_half_width(&self) -> T {
        T::lit(15.0) / self.lam
    }
}

pub fn laplace_density<T: Scalar>(m: &LaplaceModel<T>, x: T) -> T {
    m.density(x)
}

/// Which power-law expression to evaluate for `y = e^x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PowerLawForm {
    /// `p_x(ln y) / y`: `λ y^{-(2λ+1)}` for `y ≥ 1`, `λ y^{2λ-1}` below.
    #[default]
    ChangeOfVariables,
    /// `λ / |y|^{2λ}` as printed, without the Jacobian `1/y`; not normalized.
    PaperForm,
}

/// Density of the price ratio `y = e^x` under the Laplace log-return model.
pub fn price_return_density<T: Scalar>(m: &LaplaceModel<T>, y: T, form: PowerLawForm) -> Result<T> {
    if !(y > T::zero()) {
        return Err(Error::DomainError(y.as_f64()));
    }
    let lam = m.lambda();
    Ok(match form {
        PowerLawForm::ChangeOfVariables => m.density(y.ln()) / y,
        PowerLawForm::PaperForm => lam / y.abs().powf(T::lit(2.0) * lam),
    })
}
