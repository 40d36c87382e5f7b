// SPDX-License-Identifier: Apache-2.0

//! Bounded Nelder–Mead.
//!
//! Trial points are projected onto the box `[lower, upper]` before they are
//! evaluated. A projected simplex can flatten against a bound and lose a
//! direction, so after each convergence the search restarts from the best
//! vertex with a fresh simplex until a restart stops improving the value.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_EVALUATIONS: usize = 10_000;
pub const RELATIVE_DIAMETER_TOL: f64 = 1e-8;
const MAX_RESTARTS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Bounds<T> {
    pub lower: Vec<T>,
    pub upper: Vec<T>,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::Precondition(
                "bounds need matching, nonempty lower and upper".into(),
            ));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
            return Err(Error::Precondition(
                "every lower bound must lie below its upper bound".into(),
            ));
        }
        Ok(Self { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&v, (&l, &u))| v >= l && v <= u)
    }

    pub fn project(&self, x: &mut [T]) {
        for (v, (&l, &u)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.max(l).min(u);
        }
    }

    /// `true` for coordinates within `tol` (relative to the box width) of a bound.
    pub fn active(&self, x: &[T], tol: T) -> Vec<bool> {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&l, &u))| {
                let w = u - l;
                v - l <= tol * w || u - v <= tol * w
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum<T> {
    pub x: Vec<T>,
    pub value: T,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead<T> {
    pub max_evaluations: usize,
    pub relative_diameter: T,
}

impl<T: Scalar> Default for NelderMead<T> {
    fn default() -> Self {
        Self {
            max_evaluations: MAX_EVALUATIONS,
            relative_diameter: T::lit(RELATIVE_DIAMETER_TOL),
        }
    }
}

struct Counter<F> {
    f: F,
    count: usize,
    limit: usize,
}

impl<F> Counter<F> {
    fn eval<T: Scalar>(&mut self, x: &[T]) -> Result<T>
    where
        F: FnMut(&[T]) -> T,
    {
        if self.count >= self.limit {
            return Err(Error::NotConverged {
                evaluations: self.count,
            });
        }
        self.count += 1;
        let v = (self.f)(x);
        // NaN would poison every comparison below.
        Ok(if v.is_nan() { T::infinity() } else { v })
    }
}

impl<T: Scalar> NelderMead<T> {
    /// Minimizes `f` from `start` with initial edge lengths `steps`.
    ///
    /// Non-finite objective values are treated as `+∞`, so callers can
    /// signal an invalid region by returning `T::infinity()`.
    pub fn minimize<F>(
        &self,
        f: F,
        start: &[T],
        steps: &[T],
        bounds: &Bounds<T>,
    ) -> Result<Minimum<T>>
    where
        F: FnMut(&[T]) -> T,
    {
        let n = bounds.dim();
        if start.len() != n || steps.len() != n {
            return Err(Error::Precondition(
                "start and steps must match the bounds dimension".into(),
            ));
        }
        if !bounds.contains(start) {
            return Err(Error::Precondition(
                "start point lies outside the bounds".into(),
            ));
        }
        let mut counter = Counter {
            f,
            count: 0,
            limit: self.max_evaluations,
        };
        let mut best = start.to_vec();
        let mut best_value = counter.eval(&best)?;
        for _ in 0..=MAX_RESTARTS {
            let (x, value) = self.run(&mut counter, &best, best_value, steps, bounds)?;
            let improved = best_value - value > T::lit(1e-12) * (T::one() + value.abs());
            let moved = diameter_ratio(&[best.clone(), x.clone()]) > self.relative_diameter;
            if value <= best_value {
                best = x;
                best_value = value;
            }
            if !improved && !moved {
                break;
            }
        }
        if !best_value.is_finite() {
            return Err(Error::NotConverged {
                evaluations: counter.count,
            });
        }
        Ok(Minimum {
            x: best,
            value: best_value,
            evaluations: counter.count,
        })
    }

    fn run<F>(
        &self,
        counter: &mut Counter<F>,
        start: &[T],
        start_value: T,
        steps: &[T],
        bounds: &Bounds<T>,
    ) -> Result<(Vec<T>, T)>
    where
        F: FnMut(&[T]) -> T,
    {
        let n = start.len();
        let (alpha, gamma, rho, sigma) = (T::one(), T::lit(2.0), T::lit(0.5), T::lit(0.5));
        let mut simplex = vec![start.to_vec()];
        let mut values = vec![start_value];
        for i in 0..n {
            let mut v = start.to_vec();
            v[i] = v[i] + steps[i];
            // Step inward when the start sits on the upper bound.
            if v[i] > bounds.upper[i] {
                v[i] = start[i] - steps[i];
            }
            bounds.project(&mut v);
            values.push(counter.eval(&v)?);
            simplex.push(v);
        }
        loop {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| {
                values[a]
                    .partial_cmp(&values[b])
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();
            if diameter_ratio(&simplex) < self.relative_diameter {
                return Ok((simplex.swap_remove(0), values[0]));
            }
            let worst = n;
            let centroid: Vec<T> = (0..n)
                .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<T>() / T::from_usize_lossy(n))
                .collect();
            let toward = |coef: T| -> Vec<T> {
                let mut p: Vec<T> = centroid
                    .iter()
                    .zip(&simplex[worst])
                    .map(|(&c, &w)| c + coef * (c - w))
                    .collect();
                bounds.project(&mut p);
                p
            };
            let reflected = toward(alpha);
            let fr = counter.eval(&reflected)?;
            if fr < values[0] {
                let expanded = toward(gamma);
                let fe = counter.eval(&expanded)?;
                if fe < fr {
                    simplex[worst] = expanded;
                    values[worst] = fe;
                } else {
                    simplex[worst] = reflected;
                    values[worst] = fr;
                }
                continue;
            }
            if fr < values[n - 1] {
                simplex[worst] = reflected;
                values[worst] = fr;
                continue;
            }
            let (contracted, threshold) = if fr < values[worst] {
                (toward(rho), fr)
            } else {
                (toward(-rho), values[worst])
            };
            let fc = counter.eval(&contracted)?;
            if fc < threshold {
                simplex[worst] = contracted;
                values[worst] = fc;
                continue;
            }
            for i in 1..=n {
                let shrunk: Vec<T> = simplex[0]
                    .iter()
                    .zip(&simplex[i])
                    .map(|(&b, &v)| b + sigma * (v - b))
                    .collect();
                values[i] = counter.eval(&shrunk)?;
                simplex[i] = shrunk;
            }
        }
    }
}

/// Largest vertex distance from the first vertex (max norm), relative to
/// `max(1, |first|)`.
fn diameter_ratio<T: Scalar>(simplex: &[Vec<T>]) -> T {
    let first = &simplex[0];
    let scale = first.iter().fold(T::one(), |m, v| m.max(v.abs()));
    let spread = simplex[1..].iter().fold(T::zero(), |m, v| {
        v.iter()
            .zip(first)
            .fold(m, |m, (&a, &b)| m.max((a - b).abs()))
    });
    spread / scale
}

/// Central-difference Hessian of `f` at `x` with per-coordinate steps.
pub fn numerical_hessian<T: Scalar, F: FnMut(&[T]) -> T>(
    mut f: F,
    x: &[T],
    steps: &[T],
) -> Vec<Vec<T>> {
    let n = x.len();
    let mut h = vec![vec![T::zero(); n]; n];
    let f0 = f(x);
    let mut at = |di: (usize, T), dj: (usize, T)| {
        let mut p = x.to_vec();
        p[di.0] = p[di.0] + di.1;
        p[dj.0] = p[dj.0] + dj.1;
        f(&p)
    };
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    for i in 0..n {
        let si = steps[i];
        let plus = at((i, si), (i, T::zero()));
        let minus = at((i, -si), (i, T::zero()));
        h[i][i] = (plus - two * f0 + minus) / (si * si);
        for j in 0..i {
            let sj = steps[j];
            let pp = at((i, si), (j, sj));
            let pm = at((i, si), (j, -sj));
            let mp = at((i, -si), (j, sj));
            let mm = at((i, -si), (j, -sj));
            let v = (pp - pm - mp + mm) / (four * si * sj);
            h[i][j] = v;
            h[j][i] = v;
        }
    }
    h
}

/// Inverse of a small dense matrix by Gauss–Jordan with partial pivoting.
pub fn invert<T: Scalar>(m: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| {
                a[p][col]
                    .abs()
                    .partial_cmp(&a[q][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("nonempty");
        if !(a[pivot][col].abs() > T::zero()) {
            return Err(Error::DegenerateData("singular matrix".into()));
        }
        a.swap(col, pivot);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v = *v / p;
        }
        for r in 0..n {
            if r != col {
                let factor = a[r][col];
                if factor != T::zero() {
                    let pivot_row = a[col].clone();
                    for (v, &q) in a[r].iter_mut().zip(&pivot_row) {
                        *v = *v - factor * q;
                    }
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
