// SPDX-License-Identifier: Apache-2.0

//! Ground states of `-(1/2)ψ'' + U(x)ψ = Eψ`.
//!
//! Grid potentials are discretized with the three-point second difference and
//! zero boundary values, giving a symmetric tridiagonal matrix whose lowest
//! eigenpair is found by Sturm bisection and inverse iteration. The square
//! well also has a transcendental closed form, and the delta potential is
//! only ever handled in closed form.

mod delta;
mod square_well;
pub mod tridiag;

pub use delta::{delta_ground_state, DeltaGroundState};
pub use square_well::{square_well_density, square_well_ground_energy, SquareWellGround};

use crate::error::{Error, Result};
use crate::grid::{AmplitudeOnGrid, DensityOnGrid, Grid, EDGE_RATIO_LIMIT};
use crate::potentials::{PolynomialPotential, Potential, SquareWellPotential};
use crate::scalar::Scalar;
use tridiag::SymTridiagonal;

/// Residual bound `max|Hψ - Eψ| / max|ψ|` every grid solve must meet.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// A potential that can be placed on grid nodes.
pub trait GridPotential<T: Scalar> {
    /// Diagonal potential term at each node of `grid`.
    fn node_values(&self, grid: &Grid<T>) -> Vec<T>;

    /// Finite wells must bind: a nonnegative lowest eigenvalue is an error.
    fn requires_bound_state(&self) -> bool;
}

impl<T: Scalar> GridPotential<T> for PolynomialPotential<T> {
    fn node_values(&self, grid: &Grid<T>) -> Vec<T> {
        grid.sample(|x| self.evaluate(x))
    }

    fn requires_bound_state(&self) -> bool {
        false
    }
}

impl<T: Scalar> GridPotential<T> for SquareWellPotential<T> {
    fn node_values(&self, grid: &Grid<T>) -> Vec<T> {
        let h = grid.spacing();
        grid.sample(|x| self.cell_average(x, h))
    }

    fn requires_bound_state(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    FiniteDifference,
    ClosedForm,
}

/// Lowest eigenpair on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState<T> {
    pub energy: T,
    /// Nonnegative, nodeless, `∫ψ² dx = 1`.
    pub amplitude: AmplitudeOnGrid<T>,
    /// `max_i |(Hψ)_i - Eψ_i|` for the normalized amplitude.
    pub residual: T,
    pub method: SolveMethod,
}

impl<T: Scalar> GroundState<T> {
    pub fn density(&self) -> DensityOnGrid<T> {
        self.amplitude.density()
    }

    pub fn grid(&self) -> &Grid<T> {
        self.amplitude.grid()
    }
}

/// Discrete Hamiltonian `-(1/2)D₂ + diag(U)` on the interior nodes.
pub fn hamiltonian<T: Scalar, P: GridPotential<T>>(
    potential: &P,
    grid: &Grid<T>,
) -> SymTridiagonal<T> {
    let h = grid.spacing();
    let inv_h2 = T::one() / (h * h);
    let u = potential.node_values(grid);
    let n = grid.len();
    let diag = u[1..n - 1].iter().map(|&v| inv_h2 + v).collect();
    let off = vec![-inv_h2 / T::lit(2.0); n - 3];
    SymTridiagonal::new(diag, off).expect("interior has n - 2 >= 1 nodes")
}

/// Ground state of `potential` on `grid` (Dirichlet boundaries at both ends).
pub fn ground_state<T: Scalar, P: GridPotential<T>>(
    potential: &P,
    grid: &Grid<T>,
) -> Result<GroundState<T>> {
    let h_mat = hamiltonian(potential, grid);
    let tol = T::lit(RESIDUAL_TOLERANCE).max(T::lit(16.0) * T::epsilon() * h_mat.norm_inf());
    let pair = h_mat.lowest_eigenpair(tol)?;
    if potential.requires_bound_state() && pair.value >= T::zero() {
        return Err(Error::NoBoundState {
            energy: pair.value.as_f64(),
        });
    }

    // Unit Euclidean norm → unit trapezoid norm (end nodes are zero).
    let scale = T::one() / grid.spacing().sqrt();
    let n = grid.len();
    let mut values = Vec::with_capacity(n);
    values.push(T::zero());
    values.extend(pair.vector.iter().map(|&v| (v * scale).max(T::zero())));
    values.push(T::zero());

    let peak = values.iter().fold(T::zero(), |m, &v| m.max(v));
    let band = (n / 100).max(1);
    let edge = values[1..=band]
        .iter()
        .chain(&values[n - 1 - band..n - 1])
        .fold(T::zero(), |m, &v| m.max(v));
    let ratio = (edge / peak) * (edge / peak);
    if ratio > T::lit(EDGE_RATIO_LIMIT) {
        return Err(Error::GridTooNarrow {
            ratio: ratio.as_f64(),
        });
    }

    let amplitude = AmplitudeOnGrid::new(*grid, values)?;
    let residual = pair.relative_residual * peak;
    Ok(GroundState {
        energy: pair.value,
        amplitude,
        residual,
        method: SolveMethod::FiniteDifference,
    })
}

/// Solves any validated potential: grid potentials numerically, the delta
/// potential in closed form.
pub fn solve<T: Scalar>(potential: &Potential<T>, grid: &Grid<T>) -> Result<GroundState<T>> {
    match potential {
        Potential::Polynomial(p) => ground_state(p, grid),
        Potential::SquareWell(w) => ground_state(w, grid),
        Potential::Delta(d) => {
            let state = delta_ground_state(d);
            Ok(GroundState {
                energy: state.energy(),
                amplitude: AmplitudeOnGrid::from_fn(*grid, |x| state.amplitude(x))?,
                residual: T::zero(),
                method: SolveMethod::ClosedForm,
            })
        }
    }
}

/// Grid used when the caller does not supply one.
pub fn default_grid<T: Scalar>(potential: &Potential<T>) -> Grid<T> {
    match potential {
        Potential::Polynomial(p) => p.default_grid(),
        Potential::SquareWell(w) => SquareWellGround::new(*w).default_grid(),
        Potential::Delta(d) => delta_ground_state(d).default_grid(),
    }
}
