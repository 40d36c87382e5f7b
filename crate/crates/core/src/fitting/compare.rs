// SPDX-License-Identifier: Apache-2.0

//! AIC-ranked comparison across model families.

use serde::Serialize;

use super::mle::fit_family;
use super::{FitReport, ModelFamily, ReturnSeries};
use crate::error::{Error, Result};
use crate::models::BracketSource;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    /// Successful fits, best (lowest AIC) first.
    pub ranked: Vec<FitReport>,
    /// One entry per family whose fit failed.
    pub warnings: Vec<String>,
}

/// Fits every family concurrently and ranks by AIC, ties going to the
/// family with fewer parameters.
///
/// Per-family failures become warnings. If every family fails, the first
/// family's error is returned.
pub fn compare_models<T: Scalar>(
    r: &ReturnSeries<T>,
    families: &[ModelFamily],
    source: BracketSource,
) -> Result<Comparison> {
    if families.len() < 2 {
        return Err(Error::Precondition(format!(
            "model comparison needs at least 2 families, got {}",
            families.len()
        )));
    }
    for (i, f) in families.iter().enumerate() {
        if families[..i].contains(f) {
            return Err(Error::Precondition(format!("family '{f}' listed twice")));
        }
    }
    let outcomes: Vec<Result<FitReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = families
            .iter()
            .map(|&f| s.spawn(move || fit_family(r, f, source)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(Error::Precondition("fit thread panicked".into())))
            })
            .collect()
    });
    let mut ranked = Vec::new();
    let mut warnings = Vec::new();
    let mut first_error = None;
    for (family, outcome) in families.iter().zip(outcomes) {
        match outcome {
            Ok(rep) => ranked.push(rep),
            Err(e) => {
                warnings.push(format!("{family}: {e}"));
                first_error.get_or_insert(e);
            }
        }
    }
    if ranked.is_empty() {
        return Err(first_error.expect("at least one family"));
    }
    ranked.sort_by(|a, b| {
        a.aic
            .total_cmp(&b.aic)
            .then(a.parameter_count().cmp(&b.parameter_count()))
    });
    Ok(Comparison { ranked, warnings })
}
