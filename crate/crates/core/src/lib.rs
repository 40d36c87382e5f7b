// SPDX-License-Identifier: Apache-2.0

//! Return densities from extremized Fisher information.
//!
//! A density `p(x)` of log returns that extremizes the Fisher information
//! `I = 4 ∫ (ψ')² dx`, `ψ = √p`, under moment constraints is the ground state
//! of a Schrödinger-type equation whose potential is built from the
//! constraint multipliers. This crate provides
//!
//! * [`grid`]: uniform-grid densities and amplitudes, moments, Fisher
//!   information and the Cramér–Rao product `σ²·I`;
//! * [`potentials`]: polynomial, square-well and delta information potentials;
//! * [`eigensolver`]: the finite-difference ground-state solver plus the
//!   square-well and delta closed forms;
//! * [`models`]: Gaussian, perturbed-oscillator (C8), Laplace and power-law
//!   densities, with a ladder-operator first-order perturbation oracle;
//! * [`fitting`]: log returns, histograms, maximum-likelihood fits, synthetic
//!   sampling and AIC-ranked model comparison.
//!
//! The numerical core is generic over [`Scalar`] (`f32`, `f64`); the `*64`
//! aliases below name the usual double-precision instantiations.

// `!(x > 0)` is used on purpose throughout: it rejects NaN along with
// nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eigensolver;
pub mod error;
pub mod fitting;
pub mod grid;
pub mod io;
pub mod models;
pub mod potentials;
pub mod scalar;

pub use error::{Error, ErrorCategory, Result};
pub use scalar::Scalar;

pub type Grid64 = grid::Grid<f64>;
pub type Density64 = grid::DensityOnGrid<f64>;
pub type Amplitude64 = grid::AmplitudeOnGrid<f64>;
pub type PolynomialPotential64 = potentials::PolynomialPotential<f64>;
pub type OscillatorParams64 = potentials::OscillatorParams<f64>;
pub type SquareWell64 = potentials::SquareWellPotential<f64>;
pub type Delta64 = potentials::DeltaPotential<f64>;
pub type GroundState64 = eigensolver::GroundState<f64>;
pub type ReturnSeries64 = fitting::ReturnSeries<f64>;

pub type Grid32 = grid::Grid<f32>;
pub type Density32 = grid::DensityOnGrid<f32>;
pub type Amplitude32 = grid::AmplitudeOnGrid<f32>;
