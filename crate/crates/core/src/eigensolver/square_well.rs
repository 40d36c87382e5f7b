// SPDX-License-Identifier: Apache-2.0

//! Even ground state of the finite square well.
//!
//! Inside (`|x| ≤ a`) the amplitude is `A cos(kx)`, outside `B e^{-κ|x|}`,
//! with `k = √(2(λ - |E|))`, `κ = √(2|E|)`. Matching the logarithmic
//! derivative at `x = a` gives `k tan(ka) = κ`; the ground state is the root
//! with `ka < π/2`.

use crate::error::Result;
use crate::grid::{DensityOnGrid, Grid};
use crate::potentials::SquareWellPotential;
use crate::scalar::Scalar;

/// Closed-form even ground state of a square well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareWellGround<T> {
    well: SquareWellPotential<T>,
    binding: T,
    k: T,
    kappa: T,
    /// `ln A²` with `A` fixed by unit mass over the real line.
    log_a2: T,
    /// `ln B²`, from continuity at `|x| = a`.
    log_b2: T,
}

/// Binding energy `|E|` of the ground state, `E = -|E|`.
pub fn square_well_ground_energy<T: Scalar>(w: &SquareWellPotential<T>) -> T {
    let a = w.half_width();
    let depth = w.depth();
    let two = T::lit(2.0);
    // Matching function with the sign of k tan(ka) - κ on ka ∈ (0, π/2].
    let matching = |binding: T| {
        let k = (two * (depth - binding)).max(T::zero()).sqrt();
        let kappa = (two * binding).max(T::zero()).sqrt();
        k * (k * a).sin() - kappa * (k * a).cos()
    };
    let rim = T::FRAC_PI_2() / a;
    let mut lo = (depth - rim * rim / two).max(T::zero());
    let mut hi = depth;
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(4.0) * depth);
    while hi - lo > tol {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if matching(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / two
}

impl<T: Scalar> SquareWellGround<T> {
    pub fn new(well: SquareWellPotential<T>) -> Self {
        let two = T::lit(2.0);
        let a = well.half_width();
        let binding = square_well_ground_energy(&well);
        let k = (two * (well.depth() - binding)).sqrt();
        let kappa = (two * binding).sqrt();
        let cos_ka = (k * a).cos();
        // ∫ψ² = A² [a + sin(2ka)/(2k) + cos²(ka)/κ] = 1; sin(2ka)/(2k) → a as k → 0.
        let inner = if k * a > T::lit(1e-8) {
            (two * k * a).sin() / (two * k)
        } else {
            a
        };
        let mass = a + inner + cos_ka * cos_ka / kappa;
        let log_a2 = -mass.ln();
        let log_b2 = log_a2 + two * cos_ka.ln() + two * kappa * a;
        Self {
            well,
            binding,
            k,
            kappa,
            log_a2,
            log_b2,
        }
    }

    pub fn well(&self) -> &SquareWellPotential<T> {
        &self.well
    }

    /// Ground-state energy `E < 0`.
    pub fn energy(&self) -> T {
        -self.binding
    }

    pub fn binding_energy(&self) -> T {
        self.binding
    }

    /// Interior wavenumber `k`.
    pub fn k(&self) -> T {
        self.k
    }

    /// Exterior decay rate `κ`.
    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn log_density(&self, x: T) -> T {
        let ax = x.abs();
        if ax <= self.well.half_width() {
            self.log_a2 + T::lit(2.0) * (self.k * x).cos().ln()
        } else {
            self.log_b2 - T::lit(2.0) * self.kappa * ax
        }
    }

    pub fn density(&self, x: T) -> T {
        self.log_density(x).exp()
    }

    /// Nonnegative amplitude `ψ = √p`.
    pub fn amplitude(&self, x: T) -> T {
        (self.log_density(x) / T::lit(2.0)).exp()
    }

    /// Exact variance `∫ x² p(x) dx`.
    pub fn variance(&self) -> T {
        let two = T::lit(2.0);
        let a = self.well.half_width();
        let a2 = self.log_a2.exp();
        let b2 = self.log_b2.exp();
        let k = self.k;
        let kap = self.kappa;
        // ∫_{-a}^{a} x² cos²(kx) dx = a³/3 + [(2k²a² - 1) sin(2ka) + 2ka cos(2ka)] / (4k³)
        let inside = if k * a > T::lit(1e-4) {
            let s = (two * k * a).sin();
            let c = (two * k * a).cos();
            a.powi(3) / T::lit(3.0)
                + ((two * k * k * a * a - T::one()) * s + two * k * a * c)
                    / (T::lit(4.0) * k.powi(3))
        } else {
            T::lit(2.0) * a.powi(3) / T::lit(3.0)
        };
        // 2 ∫_a^∞ x² e^{-2κx} dx = e^{-2κa} (2κ²a² + 2κa + 1) / (2κ³)
        let outside = (-two * kap * a).exp() * (two * kap * kap * a * a + two * kap * a + T::one())
            / (two * kap.powi(3));
        a2 * inside + b2 * outside
    }

    pub fn density_on_grid(&self, grid: &Grid<T>) -> Result<DensityOnGrid<T>> {
        DensityOnGrid::from_fn(*grid, |x| self.density(x))
    }

    /// Symmetric grid wide enough that the exterior tail is below `e^{-24}`
    /// of its value at the rim, fine enough to resolve both `a` and `1/κ`.
    pub fn default_grid(&self) -> Grid<T> {
        let a = self.well.half_width();
        let half = a + T::lit(12.0) / self.kappa;
        let h = (a / T::lit(20.0)).min(T::lit(0.05) / self.kappa);
        let cells = (T::lit(2.0) * half / h)
            .ceil()
            .to_usize()
            .unwrap_or(4000)
            .clamp(4000, 2_000_000);
        let n = cells + 1 + cells % 2;
        Grid::symmetric(half, n).expect("positive half width")
    }
}

/// Ground-state density of the well sampled on `grid`.
pub fn square_well_density<T: Scalar>(
    w: &SquareWellPotential<T>,
    grid: &Grid<T>,
) -> Result<DensityOnGrid<T>> {
    SquareWellGround::new(*w).density_on_grid(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::trapezoid;

    fn bisect_oracle(a: f64, depth: f64) -> f64 {
        // Root of k tan(ka) = κ in k on (0, min(√(2λ), π/(2a))).
        let kmax = (2.0 * depth).sqrt();
        let f = |k: f64| k * (k * a).tan() - (kmax * kmax - k * k).max(0.0).sqrt();
        let (mut lo, mut hi) = (
            1e-300,
            kmax.min(std::f64::consts::FRAC_PI_2 / a) * (1.0 - 1e-15),
        );
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let k = 0.5 * (lo + hi);
        depth - k * k / 2.0
    }

    #[test]
    fn matches_independent_bisection() {
        for (a, depth) in [(1.0, 2.0), (0.3, 5.0), (2.0, 0.1)] {
            let w = SquareWellPotential::new(a, depth).unwrap();
            let e = square_well_ground_energy(&w);
            assert!(
                (e - bisect_oracle(a, depth)).abs() < 1e-10,
                "a={a} depth={depth}"
            );
            let k = (2.0 * (depth - e)).sqrt();
            let kappa = (2.0 * e).sqrt();
            assert!((k * (k * a).tan() - kappa).abs() < 1e-8);
        }
    }

    #[test]
    fn fine_well_binding() {
        let w = SquareWellPotential::new(0.05f64, 1.0).unwrap();
        let e = square_well_ground_energy(&w);
        assert!((e - 0.005).abs() / 0.005 < 0.1, "{e}");
    }

    #[test]
    fn deep_well_approaches_infinite_well() {
        let w = SquareWellPotential::new(1.0, 1e4).unwrap();
        let e = square_well_ground_energy(&w);
        let want = 1e4 - std::f64::consts::PI.powi(2) / 8.0;
        assert!((e - want).abs() / want < 0.01);
    }

    #[test]
    fn density_is_continuous_and_normalized() {
        let w = SquareWellPotential::new(1.0f64, 2.0).unwrap();
        let g = SquareWellGround::new(w);
        let inside = g.log_a2 + 2.0 * (g.k * 1.0).cos().ln();
        let outside = g.log_b2 - 2.0 * g.kappa;
        assert!((inside.exp() - outside.exp()).abs() < 1e-10);
        let grid = Grid::symmetric(30.0, 60_001).unwrap();
        let d = g.density_on_grid(&grid).unwrap();
        assert!((d.mass() - 1.0).abs() < 1e-8);
        assert!((d.variance() - g.variance()).abs() < 1e-7);
        let half = trapezoid(&d.values()[30_000..], grid.spacing());
        assert!((half - 0.5).abs() < 1e-8);
    }

    #[test]
    fn fine_well_sigma() {
        let w = SquareWellPotential::new(0.05f64, 1.0).unwrap();
        let g = SquareWellGround::new(w);
        let sigma = (4.0 * g.binding_energy()).powf(-0.5);
        let d = g.density_on_grid(&g.default_grid()).unwrap();
        assert!(d.edge_ratio() < 1e-8);
        let measured = d.variance().sqrt();
        assert!(
            (measured - sigma).abs() / sigma < 0.05,
            "{measured} vs {sigma}"
        );
        assert!(sigma > 10.0 * 0.05);
    }
}
