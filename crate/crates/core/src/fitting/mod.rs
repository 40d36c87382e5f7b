// SPDX-License-Identifier: Apache-2.0

//! Log returns, maximum-likelihood fits and model comparison.
//!
//! Fits use the exact per-sample likelihood. The Gaussian, Laplace and
//! square-well families are zero-centred, so their fits remove the sample
//! mean first and report it; the anharmonic family carries its own skew and
//! sees the raw data.

pub mod compare;
pub mod histogram;
pub mod mle;
pub mod optimize;
pub mod sampling;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use compare::{compare_models, Comparison};
pub use histogram::Histogram;
pub use mle::{
    anharmonic_standard_errors, fit_anharmonic, fit_anharmonic_from, fit_family, fit_gaussian,
    fit_laplace, fit_square_well, gaussian_mle, laplace_mle, negative_log_likelihood,
    square_well_profile, MIN_CLOSED_FORM_SAMPLES, MIN_OPTIMIZED_SAMPLES,
};
pub use optimize::{Bounds, Minimum, NelderMead};
pub use sampling::{ks_statistic, TabulatedCdf, TabulatedSampler, SAMPLER_POINTS};

use crate::error::{Error, Result};
use crate::models::{BracketSource, DensityModel};
use crate::scalar::Scalar;

/// Log returns with their sampling interval and provenance labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries<T> {
    values: Vec<T>,
    interval_label: String,
    source: String,
}

impl<T: Scalar> ReturnSeries<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            values,
            interval_label: "unspecified".into(),
            source: "memory".into(),
        })
    }

    pub fn with_labels(
        mut self,
        interval_label: impl Into<String>,
        source: impl Into<String>,
    ) -> Self {
        self.interval_label = interval_label.into();
        self.source = source.into();
        self
    }

    /// `n` inverse-CDF draws from `model`.
    pub fn synthetic<M: DensityModel<T> + ?Sized>(model: &M, n: usize, seed: u64) -> Result<Self> {
        let values = TabulatedSampler::from_model(model)?.sample(n, seed);
        Ok(Self::new(values)?.with_labels("synthetic", format!("seed {seed}")))
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn interval_label(&self) -> &str {
        &self.interval_label
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn mean(&self) -> T {
        if self.values.is_empty() {
            return T::zero();
        }
        self.values.iter().copied().sum::<T>() / T::from_usize_lossy(self.values.len())
    }

    /// Every value multiplied by `c`.
    pub fn scaled(&self, c: T) -> Self {
        Self {
            values: self.values.iter().map(|&v| v * c).collect(),
            interval_label: self.interval_label.clone(),
            source: self.source.clone(),
        }
    }
}

/// `x_i = ln(p_{i+1} / p_i)`.
pub fn log_returns<T: Scalar>(prices: &[T]) -> Result<ReturnSeries<T>> {
    if prices.len() < 2 {
        return Err(Error::InsufficientData {
            got: prices.len(),
            need: 2,
        });
    }
    if let Some((index, &p)) = prices
        .iter()
        .enumerate()
        .find(|(_, &p)| !(p > T::zero()) || !p.is_finite())
    {
        return Err(Error::NonPositivePrice {
            index,
            value: p.as_f64(),
        });
    }
    ReturnSeries::new(prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    Gaussian,
    Anharmonic,
    Laplace,
    SquareWell,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 4] = [
        Self::Gaussian,
        Self::Laplace,
        Self::Anharmonic,
        Self::SquareWell,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Anharmonic => "anharmonic",
            Self::Laplace => "laplace",
            Self::SquareWell => "square_well",
        }
    }

    pub fn parameter_count(self) -> usize {
        match self {
            Self::Gaussian | Self::Laplace => 1,
            Self::SquareWell => 2,
            Self::Anharmonic => 3,
        }
    }

    /// Parses a comma-separated family list such as `gaussian,laplace`.
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        s.split(',').map(|p| p.trim().parse()).collect()
    }
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "anharmonic" => Ok(Self::Anharmonic),
            "laplace" => Ok(Self::Laplace),
            "square_well" => Ok(Self::SquareWell),
            other => Err(Error::InvalidParameter(format!(
                "unknown model '{other}' (expected gaussian, anharmonic, laplace or square_well)"
            ))),
        }
    }
}

/// Fitted parameters, serialized as a flat object.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ModelParams {
    Gaussian {
        omega: f64,
    },
    Anharmonic {
        omega: f64,
        eps1: f64,
        eps2: f64,
        source: BracketSource,
    },
    Laplace {
        lambda: f64,
    },
    SquareWell {
        half_width: f64,
        depth: f64,
        /// `a²·depth`; the narrow-well regime is `fineness ≪ 1`.
        fineness: f64,
    },
}

/// Outcome of one maximum-likelihood fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub model: ModelFamily,
    pub params: ModelParams,
    pub nll: f64,
    /// `2k + 2·nll`; ranks models.
    pub aic: f64,
    /// `k ln n + 2·nll`; reported only.
    pub bic: f64,
    pub ks_stat: f64,
    pub fisher_info: f64,
    pub variance: f64,
    pub cramer_rao_product: f64,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub removed_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub warnings: Vec<String>,
}

impl FitReport {
    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn parameter_count(&self) -> usize {
        self.model.parameter_count()
    }
}
