// SPDX-License-Identifier: Apache-2.0

//! Uniform 1-D grids carrying densities `p(x)` and amplitudes `ψ(x) = √p(x)`.
//!
//! All quadratures are trapezoid sums. Fisher information is estimated from
//! the amplitude form `4 ∫ (ψ')² dx` using differences between neighbouring
//! nodes, i.e. the derivative at each cell midpoint. That is second order in
//! the spacing and identical to the kinetic-energy form of the discrete
//! Hamiltonian used by [`crate::eigensolver`].

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{trapezoid, Scalar};

/// Edge-to-peak density ratio above which tails are considered truncated.
pub const EDGE_RATIO_LIMIT: f64 = 1e-8;

/// Largest relative mass that [`DensityOnGrid::from_signed`] may clamp away.
pub const CLAMP_MASS_LIMIT: f64 = 1e-3;

/// Uniform grid `x_min, x_min + h, …, x_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    x_min: T,
    x_max: T,
    n_points: usize,
}

impl<T: Scalar> Grid<T> {
    pub fn new(x_min: T, x_max: T, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if x_min >= x_max {
            return Err(Error::InvalidGrid(format!(
                "x_min {x_min} must be below x_max {x_max}"
            )));
        }
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 points, got {n_points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    /// Symmetric grid on `[-half_width, half_width]`.
    pub fn symmetric(half_width: T, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn x_min(&self) -> T {
        self.x_min
    }

    pub fn x_max(&self) -> T {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> T {
        (self.x_max - self.x_min) / T::from_usize_lossy(self.n_points - 1)
    }

    pub fn is_symmetric(&self) -> bool {
        self.x_min == -self.x_max
    }

    /// Node `i`, computed as a convex combination of the end points so that a
    /// symmetric grid has `x(i) == -x(n-1-i)` and, for odd `n`, an exact zero
    /// at the midpoint.
    #[inline]
    pub fn x(&self, i: usize) -> T {
        let last = T::from_usize_lossy(self.n_points - 1);
        let t = T::from_usize_lossy(i);
        let s = T::from_usize_lossy(self.n_points - 1 - i);
        (self.x_min * s + self.x_max * t) / last
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// Index of the node at `x = 0`, if the grid has one.
    pub fn zero_index(&self) -> Option<usize> {
        (0..self.n_points).find(|&i| self.x(i) == T::zero())
    }

    pub fn sample<F: Fn(T) -> T>(&self, f: F) -> Vec<T> {
        (0..self.n_points).map(|i| f(self.x(i))).collect()
    }

    /// Same node count with both end points multiplied by `c > 0`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(self.x_min * c, self.x_max * c, self.n_points)
    }
}

fn validate_values<T: Scalar>(grid: &Grid<T>, values: &[T]) -> Result<()> {
    if values.len() != grid.len() {
        return Err(Error::InvalidGrid(format!(
            "expected {} values, got {}",
            grid.len(),
            values.len()
        )));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(())
}

/// Probability density sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOnGrid<T> {
    grid: Grid<T>,
    values: Vec<T>,
}

impl<T: Scalar> DensityOnGrid<T> {
    /// Wraps samples; values must be finite and nonnegative.
    pub fn new(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        validate_values(&grid, &values)?;
        if let Some(i) = values.iter().position(|&v| v < T::zero()) {
            return Err(Error::NegativeDensity {
                index: i,
                value: values[i].as_f64(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(T) -> T>(grid: Grid<T>, f: F) -> Result<Self> {
        let values = grid.sample(f);
        Self::new(grid, values)
    }

    /// Clamps negative samples to zero and renormalizes. Fails with
    /// `ClampMassExceeded` when the clamped mass `∫ max(-v, 0)` relative to
    /// the positive mass exceeds [`CLAMP_MASS_LIMIT`]. Returns the clamped
    /// mass alongside the density.
    pub fn from_signed(grid: Grid<T>, mut values: Vec<T>) -> Result<(Self, T)> {
        validate_values(&grid, &values)?;
        let h = grid.spacing();
        let negative: Vec<T> = values.iter().map(|&v| (-v).max(T::zero())).collect();
        values.iter_mut().for_each(|v| *v = v.max(T::zero()));
        let positive = trapezoid(&values, h);
        if !(positive > T::zero()) {
            return Err(Error::ZeroMass);
        }
        let clamped = trapezoid(&negative, h) / positive;
        if clamped > T::lit(CLAMP_MASS_LIMIT) {
            return Err(Error::ClampMassExceeded {
                mass: clamped.as_f64(),
            });
        }
        Ok((Self { grid, values }.normalize()?, clamped))
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Trapezoid integral of the samples.
    pub fn mass(&self) -> T {
        trapezoid(&self.values, self.grid.spacing())
    }

    /// Rescales to unit trapezoid mass. A density whose mass is already one
    /// to within rounding is returned unchanged, so normalization is exactly
    /// idempotent.
    pub fn normalize(&self) -> Result<Self> {
        let mass = self.mass();
        if !mass.is_finite() || mass <= T::zero() {
            return Err(Error::ZeroMass);
        }
        let slack = T::epsilon() * T::lit(4.0) * T::from_usize_lossy(self.values.len()).sqrt();
        if (mass - T::one()).abs() <= slack {
            return Ok(self.clone());
        }
        let values = self.values.iter().map(|&v| v / mass).collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    /// Pointwise `ψ = √p`.
    pub fn amplitude(&self) -> AmplitudeOnGrid<T> {
        AmplitudeOnGrid {
            grid: self.grid,
            values: self.values.iter().map(|v| v.sqrt()).collect(),
        }
    }

    /// Trapezoid estimate of `∫ x^k p(x) dx` for `k ≥ 1`.
    pub fn moment(&self, k: u32) -> Result<T> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "moment order must be at least 1".into(),
            ));
        }
        let integrand: Vec<T> = (0..self.grid.len())
            .map(|i| self.grid.x(i).powi(k as i32) * self.values[i])
            .collect();
        Ok(trapezoid(&integrand, self.grid.spacing()))
    }

    pub fn mean(&self) -> T {
        self.moment(1).expect("order 1 is valid")
    }

    /// Second central moment.
    pub fn variance(&self) -> T {
        let mu = self.mean();
        let integrand: Vec<T> = (0..self.grid.len())
            .map(|i| {
                let d = self.grid.x(i) - mu;
                d * d * self.values[i]
            })
            .collect();
        trapezoid(&integrand, self.grid.spacing())
    }

    /// `I = 4 ∫ (ψ')² dx` of the amplitude.
    pub fn fisher_information(&self) -> T {
        self.amplitude().fisher_information()
    }

    /// `σ² · I`, bounded below by one (Cramér–Rao). Uses the central variance.
    pub fn cramer_rao_product(&self) -> T {
        self.variance() * self.fisher_information()
    }

    /// `p(0)`, exact at a zero node and linearly interpolated otherwise.
    pub fn peak_height(&self) -> Result<T> {
        self.value_at(T::zero())
    }

    /// Linear interpolation of the samples at `x` inside the grid.
    pub fn value_at(&self, x: T) -> Result<T> {
        let g = &self.grid;
        if x < g.x_min() || x > g.x_max() {
            return Err(Error::InvalidParameter(format!(
                "x = {x} outside grid [{}, {}]",
                g.x_min(),
                g.x_max()
            )));
        }
        let pos = (x - g.x_min()) / g.spacing();
        let i = pos.floor().to_usize().unwrap_or(0).min(g.len() - 1);
        if g.x(i) == x || i == g.len() - 1 {
            return Ok(self.values[i]);
        }
        if g.x(i + 1) == x {
            return Ok(self.values[i + 1]);
        }
        let t = (x - g.x(i)) / g.spacing();
        Ok(self.values[i] * (T::one() - t) + self.values[i + 1] * t)
    }

    /// Larger of the two end values relative to the maximum.
    pub fn edge_ratio(&self) -> T {
        let peak = self.values.iter().copied().fold(T::zero(), T::max);
        if peak <= T::zero() {
            return T::zero();
        }
        let n = self.values.len();
        self.values[0].max(self.values[n - 1]) / peak
    }

    /// Warning text when the edge density exceeds [`EDGE_RATIO_LIMIT`] of the peak.
    pub fn tail_warning(&self) -> Option<String> {
        let r = self.edge_ratio();
        (r > T::lit(EDGE_RATIO_LIMIT)).then(|| {
            format!(
                "edge density is {:.3e} of the peak; tails are truncated by the grid",
                r.as_f64()
            )
        })
    }

    /// Density translated by `shift` nodes (positive moves mass to larger x),
    /// padding with zeros.
    pub fn shifted(&self, shift: isize) -> Self {
        let n = self.values.len() as isize;
        let values = (0..n)
            .map(|i| {
                let j = i - shift;
                if (0..n).contains(&j) {
                    self.values[j as usize]
                } else {
                    T::zero()
                }
            })
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }
}

/// Amplitude `ψ` on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeOnGrid<T> {
    grid: Grid<T>,
    values: Vec<T>,
}

impl<T: Scalar> AmplitudeOnGrid<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        validate_values(&grid, &values)?;
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(T) -> T>(grid: Grid<T>, f: F) -> Result<Self> {
        let values = grid.sample(f);
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `∫ ψ² dx`.
    pub fn norm_squared(&self) -> T {
        let sq: Vec<T> = self.values.iter().map(|&v| v * v).collect();
        trapezoid(&sq, self.grid.spacing())
    }

    /// Scales to `∫ ψ² dx = 1`.
    pub fn normalize(&self) -> Result<Self> {
        let n2 = self.norm_squared();
        if !n2.is_finite() || n2 <= T::zero() {
            return Err(Error::ZeroMass);
        }
        let s = n2.sqrt();
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| v / s).collect(),
        })
    }

    /// Pointwise `p = ψ²`.
    pub fn density(&self) -> DensityOnGrid<T> {
        DensityOnGrid {
            grid: self.grid,
            values: self.values.iter().map(|&v| v * v).collect(),
        }
    }

    /// `4 ∫ (ψ')² dx` with `ψ'` taken at cell midpoints. Never divides by `p`,
    /// so vanishing tails are harmless.
    pub fn fisher_information(&self) -> T {
        let h = self.grid.spacing();
        let sum: T = self
            .values
            .windows(2)
            .map(|w| {
                let d = w[1] - w[0];
                d * d
            })
            .sum();
        T::lit(4.0) * sum / h
    }

    /// Number of interior sign changes, ignoring values below `tol·max|ψ|`.
    pub fn sign_changes(&self, tol: T) -> usize {
        let peak = self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let floor = peak * tol;
        let mut last = 0i8;
        let mut changes = 0;
        for &v in &self.values {
            let s = if v > floor {
                1
            } else if v < -floor {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }
}

/// Normalizes a density.
pub fn normalize<T: Scalar>(d: &DensityOnGrid<T>) -> Result<DensityOnGrid<T>> {
    d.normalize()
}

/// `ψ = √p`.
pub fn amplitude_from_density<T: Scalar>(d: &DensityOnGrid<T>) -> AmplitudeOnGrid<T> {
    d.amplitude()
}

/// `p = ψ²`.
pub fn density_from_amplitude<T: Scalar>(a: &AmplitudeOnGrid<T>) -> DensityOnGrid<T> {
    a.density()
}

pub fn moment<T: Scalar>(d: &DensityOnGrid<T>, k: u32) -> Result<T> {
    d.moment(k)
}

pub fn fisher_information<T: Scalar>(a: &AmplitudeOnGrid<T>) -> T {
    a.fisher_information()
}

pub fn cramer_rao_product<T: Scalar>(d: &DensityOnGrid<T>) -> T {
    d.cramer_rao_product()
}

pub fn peak_height<T: Scalar>(d: &DensityOnGrid<T>) -> Result<T> {
    d.peak_height()
}

/// Power moments `F_k = ⟨x^k⟩`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MomentSet<T> {
    moments: BTreeMap<u32, T>,
}

impl<T: Scalar> MomentSet<T> {
    pub fn new(moments: BTreeMap<u32, T>) -> Result<Self> {
        if moments.contains_key(&0) {
            return Err(Error::InvalidParameter("moment orders start at 1".into()));
        }
        if let (Some(&m1), Some(&m2)) = (moments.get(&1), moments.get(&2)) {
            if m2 < m1 * m1 {
                return Err(Error::InvalidParameter(format!(
                    "F_2 = {m2} is below F_1^2 = {}",
                    m1 * m1
                )));
            }
        }
        Ok(Self { moments })
    }

    /// Moments `1..=max_order` of a density.
    pub fn of_density(d: &DensityOnGrid<T>, max_order: u32) -> Result<Self> {
        let mut moments = BTreeMap::new();
        for k in 1..=max_order {
            moments.insert(k, d.moment(k)?);
        }
        Self::new(moments)
    }

    pub fn get(&self, k: u32) -> Option<T> {
        self.moments.get(&k).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, T)> + '_ {
        self.moments.iter().map(|(&k, &v)| (k, v))
    }
}
