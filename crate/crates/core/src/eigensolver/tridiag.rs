// SPDX-License-Identifier: Apache-2.0

//! Lowest eigenpair of a real symmetric tridiagonal matrix.
//!
//! The eigenvalue is bracketed by bisection on Sturm-sequence counts and the
//! eigenvector follows from inverse iteration with a shift just below the
//! bracket, where `T - σI` is positive definite.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal<T> {
    diag: Vec<T>,
    off: Vec<T>,
}

impl<T: Scalar> SymTridiagonal<T> {
    /// `off[i]` couples rows `i` and `i + 1`.
    pub fn new(diag: Vec<T>, off: Vec<T>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
                diag.len(),
                off.len()
            )));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn off(&self) -> &[T] {
        &self.off
    }

    /// Number of eigenvalues strictly below `lambda`: the count of negative
    /// pivots in the LDLᵀ factorization of `T - λI`.
    pub fn sturm_count(&self, lambda: T) -> usize {
        let guard = T::min_positive_value().sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - lambda;
        if q < T::zero() {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let safe = if q.abs() < guard {
                guard.copysign(q)
            } else {
                q
            };
            let e = self.off[i - 1];
            q = (self.diag[i] - lambda) - e * e / safe;
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.diag.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let left = if i > 0 {
                self.off[i - 1].abs()
            } else {
                T::zero()
            };
            let right = if i + 1 < n {
                self.off[i].abs()
            } else {
                T::zero()
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// `max_i Σ_j |T_ij|`.
    pub fn norm_inf(&self) -> T {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// Bracket `[lo, hi]` around the smallest eigenvalue, with
    /// `sturm_count(lo) == 0` and `sturm_count(hi) ≥ 1`.
    pub fn lowest_eigenvalue_bracket(&self) -> (T, T) {
        let (g_lo, g_hi) = self.gershgorin();
        let pad = T::epsilon() * T::lit(8.0) * self.norm_inf().max(T::one());
        let mut lo = g_lo - pad;
        let mut hi = g_hi + pad;
        for _ in 0..256 {
            let mid = (lo + hi) / T::lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc = acc + self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc = acc + self.off[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Solves `(T - σI) y = b` by Gaussian elimination without pivoting.
    fn shifted_solve(&self, sigma: T, b: &[T]) -> Vec<T> {
        let n = self.diag.len();
        let tiny = T::min_positive_value().sqrt();
        let mut pivots = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        let mut p = self.diag[0] - sigma;
        if p.abs() < tiny {
            p = tiny;
        }
        pivots.push(p);
        y.push(b[0]);
        for i in 1..n {
            let m = self.off[i - 1] / pivots[i - 1];
            let mut p = (self.diag[i] - sigma) - m * self.off[i - 1];
            if p.abs() < tiny {
                p = tiny;
            }
            pivots.push(p);
            y.push(b[i] - m * y[i - 1]);
        }
        let mut x = vec![T::zero(); n];
        x[n - 1] = y[n - 1] / pivots[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = (y[i] - self.off[i] * x[i + 1]) / pivots[i];
        }
        x
    }

    /// Smallest eigenvalue and its eigenvector (unit Euclidean norm, sign
    /// chosen so the largest-magnitude component is positive).
    ///
    /// Returns the Rayleigh quotient of the final vector and the residual
    /// `max_i |(T x - λ x)_i|` relative to `max_i |x_i|`.
    pub fn lowest_eigenpair(&self, rel_residual_tol: T) -> Result<LowestEigenpair<T>> {
        let n = self.diag.len();
        if n == 1 {
            return Ok(LowestEigenpair {
                value: self.diag[0],
                vector: vec![T::one()],
                relative_residual: T::zero(),
            });
        }
        let (lo, hi) = self.lowest_eigenvalue_bracket();
        let scale = self.norm_inf().max(T::one());
        let sigma = lo - (hi - lo) - T::epsilon() * T::lit(4.0) * scale;
        let mut x = vec![T::one(); n];
        let mut best: Option<LowestEigenpair<T>> = None;
        for _ in 0..16 {
            let y = self.shifted_solve(sigma, &x);
            let norm = y.iter().map(|&v| v * v).sum::<T>().sqrt();
            if !norm.is_finite() || norm == T::zero() {
                return Err(Error::EigenNotConverged(
                    "inverse iteration broke down".into(),
                ));
            }
            x = y.into_iter().map(|v| v / norm).collect();
            let tx = self.mul_vec(&x);
            let value: T = x.iter().zip(&tx).map(|(&a, &b)| a * b).sum();
            let peak = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
            let resid = x
                .iter()
                .zip(&tx)
                .fold(T::zero(), |m, (&a, &b)| m.max((b - value * a).abs()))
                / peak;
            let done = resid <= rel_residual_tol;
            let candidate = LowestEigenpair {
                value,
                vector: x.clone(),
                relative_residual: resid,
            };
            if best.as_ref().is_none_or(|b| resid < b.relative_residual) {
                best = Some(candidate);
            }
            if done {
                break;
            }
        }
        let mut best = best.expect("at least one iteration");
        if best.relative_residual > rel_residual_tol {
            return Err(Error::EigenNotConverged(format!(
                "relative residual {:e} above {:e}",
                best.relative_residual.as_f64(),
                rel_residual_tol.as_f64()
            )));
        }
        let (imax, _) = best
            .vector
            .iter()
            .enumerate()
            .fold((0, T::zero()), |(bi, bv), (i, &v)| {
                if v.abs() > bv {
                    (i, v.abs())
                } else {
                    (bi, bv)
                }
            });
        if best.vector[imax] < T::zero() {
            best.vector.iter_mut().for_each(|v| *v = -*v);
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowestEigenpair<T> {
    pub value: T,
    pub vector: Vec<T>,
    pub relative_residual: T,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sturm_counts_on_2x2() {
        // [[1, -1], [-1, 3]]: eigenvalues 2 ∓ √2.
        let t = SymTridiagonal::new(vec![1.0, 3.0], vec![-1.0]).unwrap();
        assert_eq!(t.sturm_count(0.0), 0);
        assert_eq!(t.sturm_count(1.0), 1);
        assert_eq!(t.sturm_count(4.0), 2);
        let p = t.lowest_eigenpair(1e-12).unwrap();
        assert!((p.value - (2.0 - 2f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn lowest_mode_of_free_chain() {
        // d = 2, e = -1: λ_k = 2 - 2 cos(kπ/(n+1)), v_j ∝ sin(jπ/(n+1)).
        let n = 200;
        let t = SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
        let p = t.lowest_eigenpair(1e-12).unwrap();
        let exact = 2.0 - 2.0 * (PI / (n as f64 + 1.0)).cos();
        assert!((p.value - exact).abs() < 1e-13);
        let norm: f64 = (1..=n)
            .map(|j| (j as f64 * PI / (n as f64 + 1.0)).sin().powi(2))
            .sum::<f64>()
            .sqrt();
        for (j, v) in p.vector.iter().enumerate() {
            let want = ((j + 1) as f64 * PI / (n as f64 + 1.0)).sin() / norm;
            assert!((v - want).abs() < 1e-10);
        }
        assert!(p.vector.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn bracket_is_tight_and_valid() {
        let t = SymTridiagonal::new(vec![4.0f64, -1.0, 3.0, 0.5], vec![1.0, 2.0, -0.5]).unwrap();
        let (lo, hi) = t.lowest_eigenvalue_bracket();
        assert_eq!(t.sturm_count(lo), 0);
        assert!(t.sturm_count(hi) >= 1);
        assert!(hi - lo < 1e-14 * hi.abs().max(1.0) * 16.0);
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(SymTridiagonal::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymTridiagonal::<f64>::new(vec![], vec![]).is_err());
    }
}
