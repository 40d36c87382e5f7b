// SPDX-License-Identifier: Apache-2.0

//! Freedman–Diaconis histograms for reporting.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MIN_BINS: usize = 32;
pub const MAX_BINS: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram<T> {
    pub bin_edges: Vec<T>,
    pub densities: Vec<T>,
    pub count: usize,
}

/// Linear-interpolation quantile of sorted data.
pub(crate) fn quantile_sorted<T: Scalar>(sorted: &[T], q: T) -> T {
    let pos = q * T::from_usize_lossy(sorted.len() - 1);
    let i = pos.floor().to_usize().unwrap_or(0).min(sorted.len() - 1);
    let frac = pos - T::from_usize_lossy(i);
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

impl<T: Scalar> Histogram<T> {
    /// Bin width `2·IQR·n^{-1/3}`, bin count clipped to `[32, 512]`.
    pub fn freedman_diaconis(values: &[T]) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InsufficientData {
                got: values.len(),
                need: 2,
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
        let range = hi - lo;
        if !(range > T::zero()) {
            return Err(Error::DegenerateData("all values are equal".into()));
        }
        let iqr = quantile_sorted(&sorted, T::lit(0.75)) - quantile_sorted(&sorted, T::lit(0.25));
        let n = T::from_usize_lossy(sorted.len());
        let width = T::lit(2.0) * iqr / n.cbrt();
        let bins = if width > T::zero() {
            (range / width).ceil().to_usize().unwrap_or(MAX_BINS)
        } else {
            MIN_BINS
        }
        .clamp(MIN_BINS, MAX_BINS);
        Self::with_bins(&sorted, lo, hi, bins)
    }

    fn with_bins(sorted: &[T], lo: T, hi: T, bins: usize) -> Result<Self> {
        let nb = T::from_usize_lossy(bins);
        let mut bin_edges: Vec<T> = (0..=bins)
            .map(|i| lo + (hi - lo) * T::from_usize_lossy(i) / nb)
            .collect();
        bin_edges[bins] = hi;
        let mut counts = vec![0usize; bins];
        let width = (hi - lo) / nb;
        for &v in sorted {
            let i = ((v - lo) / width)
                .floor()
                .to_usize()
                .unwrap_or(0)
                .min(bins - 1);
            counts[i] += 1;
        }
        let total = T::from_usize_lossy(sorted.len());
        let densities = counts
            .iter()
            .zip(bin_edges.windows(2))
            .map(|(&c, e)| T::from_usize_lossy(c) / (total * (e[1] - e[0])))
            .collect();
        Ok(Self {
            bin_edges,
            densities,
            count: sorted.len(),
        })
    }

    pub fn bins(&self) -> usize {
        self.densities.len()
    }

    /// `Σ density·width`.
    pub fn mass(&self) -> T {
        self.densities
            .iter()
            .zip(self.bin_edges.windows(2))
            .map(|(&d, e)| d * (e[1] - e[0]))
            .sum()
    }
}
