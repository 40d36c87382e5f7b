// SPDX-License-Identifier: Apache-2.0

//! Bound state of `U(x) = -λ δ(x)`.
//!
//! The derivative jump `ψ'(0⁺) - ψ'(0⁻) = -2λψ(0)` fixes the decay rate
//! `κ = λ`, so `ψ = √λ e^{-λ|x|}` and `E = -λ²/2`.

use crate::error::Result;
use crate::grid::{DensityOnGrid, Grid};
use crate::potentials::DeltaPotential;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaGroundState<T> {
    strength: T,
}

pub fn delta_ground_state<T: Scalar>(dp: &DeltaPotential<T>) -> DeltaGroundState<T> {
    DeltaGroundState {
        strength: dp.strength(),
    }
}

impl<T: Scalar> DeltaGroundState<T> {
    pub fn energy(&self) -> T {
        -self.strength * self.strength / T::lit(2.0)
    }

    pub fn amplitude(&self, x: T) -> T {
        self.strength.sqrt() * (-self.strength * x.abs()).exp()
    }

    /// `λ e^{-2λ|x|}`, the Laplace density.
    pub fn density(&self, x: T) -> T {
        self.strength * (-T::lit(2.0) * self.strength * x.abs()).exp()
    }

    /// `σ = (4|E|)^{-1/2}`.
    pub fn sigma(&self) -> T {
        (T::lit(4.0) * self.energy().abs()).sqrt().recip()
    }

    pub fn density_on_grid(&self, grid: &Grid<T>) -> Result<DensityOnGrid<T>> {
        DensityOnGrid::from_fn(*grid, |x| self.density(x))
    }

    /// `[-15/λ, 15/λ]` with 4001 nodes.
    pub fn default_grid(&self) -> Grid<T> {
        Grid::symmetric(T::lit(15.0) / self.strength, 4001).expect("positive half width")
    }
}
