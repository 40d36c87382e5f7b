// SPDX-License-Identifier: Apache-2.0

//! Tabulated CDFs, inverse-CDF sampling and the Kolmogorov–Smirnov statistic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::models::DensityModel;
use crate::scalar::{cumulative_trapezoid, Scalar};

/// Table size used for synthetic sampling.
pub const SAMPLER_POINTS: usize = 1 << 20;

/// Monotone piecewise-linear CDF built by integrating a density on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCdf<T> {
    grid: Grid<T>,
    cdf: Vec<T>,
}

impl<T: Scalar> TabulatedCdf<T> {
    pub fn from_density_values(grid: Grid<T>, values: &[T]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(
                "density length does not match the grid".into(),
            ));
        }
        let mut cdf = cumulative_trapezoid(values, grid.spacing());
        let total = *cdf.last().expect("grid has nodes");
        if !(total > T::zero()) || !total.is_finite() {
            return Err(Error::ZeroMass);
        }
        for c in cdf.iter_mut() {
            *c = (*c / total).min(T::one());
        }
        Ok(Self { grid, cdf })
    }

    pub fn from_model<M: DensityModel<T> + ?Sized>(model: &M, grid: Grid<T>) -> Result<Self> {
        let values = grid.sample(|x| model.density(x));
        Self::from_density_values(grid, &values)
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn evaluate(&self, x: T) -> T {
        let g = &self.grid;
        if x <= g.x_min() {
            return T::zero();
        }
        if x >= g.x_max() {
            return T::one();
        }
        let t = (x - g.x_min()) / g.spacing();
        let i = t.floor().to_usize().unwrap_or(0).min(g.len() - 2);
        let frac = t - T::from_usize_lossy(i);
        self.cdf[i] + frac * (self.cdf[i + 1] - self.cdf[i])
    }

    /// Smallest `x` with `F(x) = u`, by linear interpolation.
    pub fn inverse(&self, u: T) -> T {
        let j = self.cdf.partition_point(|&c| c < u);
        if j == 0 {
            return self.grid.x_min();
        }
        if j >= self.cdf.len() {
            return self.grid.x_max();
        }
        let (c0, c1) = (self.cdf[j - 1], self.cdf[j]);
        let x0 = self.grid.x(j - 1);
        if c1 > c0 {
            x0 + (u - c0) / (c1 - c0) * self.grid.spacing()
        } else {
            x0
        }
    }
}

/// Inverse-CDF sampler over a [`SAMPLER_POINTS`]-node table.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedSampler<T> {
    cdf: TabulatedCdf<T>,
}

impl<T: Scalar> TabulatedSampler<T> {
    /// Tabulates `model` on `[-L, L]` with `L` its support half-width.
    pub fn from_model<M: DensityModel<T> + ?Sized>(model: &M) -> Result<Self> {
        let grid = Grid::symmetric(model.support_half_width(), SAMPLER_POINTS)?;
        Ok(Self {
            cdf: TabulatedCdf::from_model(model, grid)?,
        })
    }

    pub fn from_cdf(cdf: TabulatedCdf<T>) -> Self {
        Self { cdf }
    }

    pub fn cdf(&self) -> &TabulatedCdf<T> {
        &self.cdf
    }

    /// `n` draws from a ChaCha8 stream seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| self.cdf.inverse(T::lit(rng.random::<f64>())))
            .collect()
    }
}

/// `sup |F_n - F|` for the sample against a model CDF.
pub fn ks_statistic<T: Scalar>(sample: &[T], cdf: &TabulatedCdf<T>) -> Result<T> {
    if sample.is_empty() {
        return Err(Error::InsufficientData { got: 0, need: 1 });
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite sample"));
    let n = T::from_usize_lossy(sorted.len());
    let mut d = T::zero();
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf.evaluate(x);
        let below = T::from_usize_lossy(i) / n;
        let above = T::from_usize_lossy(i + 1) / n;
        d = d.max(f - below).max(above - f);
    }
    Ok(d)
}
