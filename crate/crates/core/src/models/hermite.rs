// SPDX-License-Identifier: Apache-2.0

//! Physicists' Hermite polynomials and harmonic-oscillator eigenfunctions.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Highest order supported by the eigenfunction helpers.
pub const MAX_ORDER: usize = 10;

/// `H_n(ξ)` from `H_{n+1} = 2ξH_n - 2nH_{n-1}`.
pub fn hermite_polynomial<T: Scalar>(n: usize, xi: T) -> T {
    let two = T::lit(2.0);
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = two * xi;
    for k in 1..n {
        let next = two * xi * cur - two * T::from_usize_lossy(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Power-basis coefficients of `H_n`, lowest degree first.
pub fn hermite_coefficients<T: Scalar>(n: usize) -> Vec<T> {
    let two = T::lit(2.0);
    let mut prev = vec![T::one()];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![T::zero(), two];
    for k in 1..n {
        let mut next = vec![T::zero(); k + 2];
        for (j, &c) in cur.iter().enumerate() {
            next[j + 1] = next[j + 1] + two * c;
        }
        let kk = two * T::from_usize_lossy(k);
        for (j, &c) in prev.iter().enumerate() {
            next[j] = next[j] - kk * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `1 / √(2ⁿ n!)`.
pub(crate) fn hermite_norm<T: Scalar>(n: usize) -> T {
    let mut v = 1.0f64;
    for k in 1..=n {
        v *= 2.0 * k as f64;
    }
    T::lit(v.sqrt().recip())
}

/// `ψ_n(x) = √(1/(2ⁿn!) √(ω/π)) H_n(√ω x) e^{-ωx²/2}` for `n ≤ 10`.
pub fn hermite_eigenfunction<T: Scalar>(n: usize, omega: T, x: T) -> Result<T> {
    if n > MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "order {n} above {MAX_ORDER}"
        )));
    }
    if !(omega > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "omega = {omega} must be positive"
        )));
    }
    let ground = (omega / T::PI()).sqrt().sqrt() * (-omega * x * x / T::lit(2.0)).exp();
    Ok(hermite_norm::<T>(n) * hermite_polynomial(n, omega.sqrt() * x) * ground)
}
