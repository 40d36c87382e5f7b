// SPDX-License-Identifier: Apache-2.0

//! Information potentials and the maps between Lagrange multipliers and
//! oscillator parameters.
//!
//! With power-moment constraints `⟨x^k⟩` the potential is
//! `U(x) = -(1/8) Σ_k λ_k x^k`. The anharmonic oscillator is written as
//! `ω²x²/2 + ε₁(√ω x)³ + ε₂(√ω x)⁴`, where `ε₁` and `ε₂` carry energy units
//! like `ω`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::Scalar;

/// Ratio `|ε|/ω` above which first-order perturbation theory is flagged.
pub const SMALLNESS_WARNING: f64 = 0.1;

/// `U(x) = -(1/8) Σ_{k=1}^{M} λ_k x^k`; `lambdas[0]` is `λ_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPotential<T> {
    lambdas: Vec<T>,
}

impl<T: Scalar> PolynomialPotential<T> {
    /// Validates confinement: the highest nonzero multiplier must have even
    /// order and be negative, so the leading term of `U` is positive.
    pub fn from_multipliers(lambdas: Vec<T>) -> Result<Self> {
        if lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidParameter("multipliers must be finite".into()));
        }
        let Some(top) = lambdas.iter().rposition(|&l| l != T::zero()) else {
            return Err(Error::NotConfining("all multipliers vanish".into()));
        };
        let order = top + 1;
        if order % 2 == 1 {
            return Err(Error::NotConfining(format!("leading order {order} is odd")));
        }
        if lambdas[top] >= T::zero() {
            return Err(Error::NotConfining(format!(
                "lambda_{order} = {} must be negative",
                lambdas[top]
            )));
        }
        Ok(Self { lambdas })
    }

    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }

    /// `λ_k`, zero when not retained.
    pub fn lambda(&self, k: usize) -> T {
        k.checked_sub(1)
            .and_then(|i| self.lambdas.get(i))
            .copied()
            .unwrap_or_else(T::zero)
    }

    pub fn evaluate(&self, x: T) -> T {
        // Horner on Σ λ_k x^k = x (λ_1 + x (λ_2 + …)).
        let inner = self
            .lambdas
            .iter()
            .rev()
            .fold(T::zero(), |acc, &l| acc * x + l);
        -(inner * x) / T::lit(8.0)
    }

    /// Harmonic frequency implied by `λ₂`, if `λ₂ < 0`.
    pub fn harmonic_omega(&self) -> Option<T> {
        omega_from_lambda2(self.lambda(2)).ok()
    }

    pub fn is_even(&self) -> bool {
        self.lambdas.iter().step_by(2).all(|&l| l == T::zero())
    }

    /// `[-L, L]` with `L = 10/√ω` and [`DEFAULT_POLYNOMIAL_POINTS`] nodes; `ω`
    /// falls back to one without a harmonic term.
    pub fn default_grid(&self) -> Grid<T> {
        let omega = self.harmonic_omega().unwrap_or_else(T::one);
        Grid::symmetric(T::lit(10.0) / omega.sqrt(), DEFAULT_POLYNOMIAL_POINTS)
            .expect("positive half width")
    }
}

/// Node count of default polynomial-potential grids.
pub const DEFAULT_POLYNOMIAL_POINTS: usize = 10_001;

pub fn potential_from_multipliers<T: Scalar>(lambdas: Vec<T>) -> Result<PolynomialPotential<T>> {
    PolynomialPotential::from_multipliers(lambdas)
}

/// `ω = √|λ₂| / 2`, defined for `λ₂ < 0`.
pub fn omega_from_lambda2<T: Scalar>(lambda2: T) -> Result<T> {
    if !(lambda2 < T::zero()) {
        return Err(Error::SignError(format!(
            "lambda_2 = {lambda2} must be negative"
        )));
    }
    Ok(lambda2.abs().sqrt() / T::lit(2.0))
}

/// `λ₂ = -4ω²`, defined for `ω > 0`.
pub fn lambda2_from_omega<T: Scalar>(omega: T) -> Result<T> {
    if !(omega > T::zero()) || !omega.is_finite() {
        return Err(Error::SignError(format!(
            "omega = {omega} must be positive"
        )));
    }
    Ok(-T::lit(4.0) * omega * omega)
}

/// `E = ε/8`: the normalization multiplier read as an energy.
pub fn energy_from_epsilon<T: Scalar>(eps: T) -> T {
    eps / T::lit(8.0)
}

/// Anharmonic oscillator parameters `(ω, ε₁, ε₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams<T> {
    pub omega: T,
    pub eps1: T,
    pub eps2: T,
}

impl<T: Scalar> OscillatorParams<T> {
    pub fn new(omega: T, eps1: T, eps2: T) -> Result<Self> {
        if !(omega > T::zero()) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega = {omega} must be positive"
            )));
        }
        if !eps1.is_finite() || !eps2.is_finite() {
            return Err(Error::InvalidParameter(
                "eps1 and eps2 must be finite".into(),
            ));
        }
        Ok(Self { omega, eps1, eps2 })
    }

    pub fn harmonic(omega: T) -> Result<Self> {
        Self::new(omega, T::zero(), T::zero())
    }

    /// Largest of `|ε₁|/ω` and `|ε₂|/ω`.
    pub fn smallness(&self) -> T {
        self.eps1.abs().max(self.eps2.abs()) / self.omega
    }

    pub fn warnings(&self) -> Vec<String> {
        let s = self.smallness();
        if s > T::lit(SMALLNESS_WARNING) {
            vec![format!(
                "|eps|/omega = {:.4} exceeds {SMALLNESS_WARNING}; first-order perturbation theory is unreliable",
                s.as_f64()
            )]
        } else {
            Vec::new()
        }
    }

    /// `ω²x²/2 + ε₁(√ω x)³ + ε₂(√ω x)⁴`.
    pub fn potential(&self, x: T) -> T {
        let xi = self.omega.sqrt() * x;
        self.omega * self.omega * x * x / T::lit(2.0)
            + self.eps1 * xi.powi(3)
            + self.eps2 * xi.powi(4)
    }
}

/// `λ₂ = -4ω²`, `λ₃ = -8ε₁ω^{3/2}`, `λ₄ = -8ε₂ω²`.
///
/// A cubic term needs `ε₂ > 0` to stay confining; `ε₂ < 0` is always rejected.
pub fn multipliers_from_oscillator<T: Scalar>(
    p: &OscillatorParams<T>,
) -> Result<PolynomialPotential<T>> {
    if p.eps2 < T::zero() || (p.eps2 == T::zero() && p.eps1 != T::zero()) {
        return Err(Error::SignError(format!(
            "eps2 = {} must be positive for a confining anharmonic potential",
            p.eps2
        )));
    }
    let w = p.omega;
    let eight = T::lit(8.0);
    let lambdas = vec![
        T::zero(),
        lambda2_from_omega(w)?,
        -eight * p.eps1 * w * w.sqrt(),
        -eight * p.eps2 * w * w,
    ];
    PolynomialPotential::from_multipliers(lambdas)
}

/// Recovers `(ω, ε₁, ε₂)` from `λ₂, λ₃, λ₄`.
pub fn oscillator_from_multipliers<T: Scalar>(
    pot: &PolynomialPotential<T>,
) -> Result<OscillatorParams<T>> {
    if pot.lambda(1) != T::zero() || pot.lambdas().len() > 4 {
        return Err(Error::InvalidParameter(
            "only lambda_2..lambda_4 map onto oscillator parameters".into(),
        ));
    }
    let w = omega_from_lambda2(pot.lambda(2))?;
    let eight = T::lit(8.0);
    OscillatorParams::new(
        w,
        -pot.lambda(3) / (eight * w * w.sqrt()),
        -pot.lambda(4) / (eight * w * w),
    )
}

/// `U(x) = -depth` for `|x| ≤ a`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareWellPotential<T> {
    half_width: T,
    depth: T,
}

impl<T: Scalar> SquareWellPotential<T> {
    pub fn new(half_width: T, depth: T) -> Result<Self> {
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "half width {half_width} must be positive"
            )));
        }
        if !(depth > T::zero()) || !depth.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "depth {depth} must be positive"
            )));
        }
        Ok(Self { half_width, depth })
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn depth(&self) -> T {
        self.depth
    }

    /// `a²·depth`; the narrow-shallow regime has this much below one.
    pub fn fineness(&self) -> T {
        self.half_width * self.half_width * self.depth
    }

    /// Integrated strength `2a·depth`, the delta-potential limit strength.
    pub fn strength(&self) -> T {
        T::lit(2.0) * self.half_width * self.depth
    }

    pub fn evaluate(&self, x: T) -> T {
        if x.abs() <= self.half_width {
            -self.depth
        } else {
            T::zero()
        }
    }

    /// Mean of `U` over `[x - h/2, x + h/2]`. Sampling the well this way keeps
    /// the effective width equal to `2a` when the edges fall between nodes.
    pub fn cell_average(&self, x: T, h: T) -> T {
        let half = h / T::lit(2.0);
        let lo = (x - half).max(-self.half_width);
        let hi = (x + half).min(self.half_width);
        let overlap = (hi - lo).max(T::zero());
        -self.depth * overlap / h
    }
}

/// `U(x) = -λ δ(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaPotential<T> {
    strength: T,
}

impl<T: Scalar> DeltaPotential<T> {
    pub fn new(strength: T) -> Result<Self> {
        if !(strength > T::zero()) || !strength.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "strength {strength} must be positive"
            )));
        }
        Ok(Self { strength })
    }

    pub fn strength(&self) -> T {
        self.strength
    }
}

/// Potential description as read from JSON, e.g.
/// `{"type":"oscillator","omega":1,"eps1":0,"eps2":0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Polynomial { lambdas: Vec<f64> },
    Oscillator { omega: f64, eps1: f64, eps2: f64 },
    SquareWell { half_width: f64, depth: f64 },
    Delta { strength: f64 },
}

/// Validated potential.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential<T> {
    Polynomial(PolynomialPotential<T>),
    SquareWell(SquareWellPotential<T>),
    Delta(DeltaPotential<T>),
}

impl PotentialSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build<T: Scalar>(&self) -> Result<Potential<T>> {
        let c = T::lit;
        Ok(match self {
            PotentialSpec::Polynomial { lambdas } => Potential::Polynomial(
                PolynomialPotential::from_multipliers(lambdas.iter().map(|&l| c(l)).collect())?,
            ),
            PotentialSpec::Oscillator { omega, eps1, eps2 } => {
                Potential::Polynomial(multipliers_from_oscillator(&OscillatorParams::new(
                    c(*omega),
                    c(*eps1),
                    c(*eps2),
                )?)?)
            }
            PotentialSpec::SquareWell { half_width, depth } => {
                Potential::SquareWell(SquareWellPotential::new(c(*half_width), c(*depth))?)
            }
            PotentialSpec::Delta { strength } => {
                Potential::Delta(DeltaPotential::new(c(*strength))?)
            }
        })
    }
}
