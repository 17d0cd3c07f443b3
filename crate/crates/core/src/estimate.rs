//! Estimating the success index from two impact factors.
//!
//! Journals with the same impact factor have similar citation distributions,
//! so the index is well approximated by a logistic function of the IF ratio
//! `x = IF_t / IF_r` with a lower plateau at half the reference journal's
//! uncited fraction `f0`:
//!
//! ```text
//! S = f0/2 + (1 - f0/2) / (1 + x^-k / (1 - f0))
//! ```
//!
//! `f0` itself is predicted from `IF_r` by [`UncitedCurveParams`]. With
//! `f0 = 0` the curve reduces to the ratio-only form `S = 1 / (1 + x^-k)`.

use serde::{Deserialize, Serialize};

use crate::distribution::{impact_factor, CitationDistribution};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::index::{success_matrix, Method, SuccessIndex};
use crate::uncited::UncitedCurveParams;

pub const DEFAULT_K: f64 = 1.23;

/// Below this predicted uncited fraction the ratio-only form differs from the
/// full curve by less than a quarter of a percentage point.
pub const RATIO_ONLY_F0_THRESHOLD: f64 = 0.005;

/// Evaluates the plateau logistic at ratio `x` for reference uncited fraction
/// `f0` and exponent `k`.
///
/// Written as `1/2 + (1 - f0)(1 - z) / (2((1 - f0) + z))` with `z = x^-k`,
/// which is algebraically identical to the plateau form and returns exactly
/// 0.5 at `x = 1`.
pub fn success_curve(x: f64, f0: f64, k: f64) -> f64 {
    if x <= 0.0 {
        return 0.5 * f0;
    }
    let z = x.powf(-k);
    if z.is_infinite() {
        return 0.5 * f0;
    }
    let cited = 1.0 - f0;
    0.5 + 0.5 * cited * (1.0 - z) / (cited + z)
}

/// Constants of the IF-only estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConstants {
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
    pub k: f64,
}

impl Default for ModelConstants {
    fn default() -> Self {
        let uncited = UncitedCurveParams::default();
        Self {
            alpha: uncited.alpha,
            beta: uncited.beta,
            q: uncited.q,
            k: DEFAULT_K,
        }
    }
}

impl ModelConstants {
    pub fn new(uncited: UncitedCurveParams, k: f64) -> Result<Self> {
        let constants = Self {
            alpha: uncited.alpha,
            beta: uncited.beta,
            q: uncited.q,
            k,
        };
        constants.validate()?;
        Ok(constants)
    }

    pub fn uncited(&self) -> UncitedCurveParams {
        UncitedCurveParams {
            alpha: self.alpha,
            beta: self.beta,
            q: self.q,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.uncited().validate()?;
        require_positive("k", self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorMode {
    /// Full plateau logistic with `f0` predicted from the reference IF.
    #[default]
    Eq3,
    /// Ratio-only logistic (`f0` treated as zero).
    Eq4,
}

impl EstimatorMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorMode::Eq3 => "eq3",
            EstimatorMode::Eq4 => "eq4",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEstimate {
    pub if_target: f64,
    pub if_reference: f64,
    pub ratio_x: f64,
    /// Predicted uncited fraction of the reference journal.
    pub f0_reference: f64,
    pub mode: EstimatorMode,
    pub index: SuccessIndex,
}

impl PairEstimate {
    /// True when the ratio-only form would agree with this estimate to within
    /// [`RATIO_ONLY_F0_THRESHOLD`] / 2.
    pub fn ratio_only_applies(&self) -> bool {
        self.f0_reference < RATIO_ONLY_F0_THRESHOLD
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Estimator {
    pub constants: ModelConstants,
    pub mode: EstimatorMode,
}

impl Estimator {
    pub fn new(constants: ModelConstants) -> Result<Self> {
        constants.validate()?;
        Ok(Self {
            constants,
            mode: EstimatorMode::Eq3,
        })
    }

    pub fn ratio_only(mut self) -> Self {
        self.mode = EstimatorMode::Eq4;
        self
    }

    pub fn estimate(&self, if_target: f64, if_reference: f64) -> Result<PairEstimate> {
        self.estimate_named("target", "reference", if_target, if_reference)
    }

    pub fn estimate_named(
        &self,
        target_id: &str,
        reference_id: &str,
        if_target: f64,
        if_reference: f64,
    ) -> Result<PairEstimate> {
        require_non_negative("if_target", if_target)?;
        require_positive("if_reference", if_reference)?;
        self.constants.validate()?;

        let f0_reference = self.constants.uncited().predict(if_reference);
        let ratio_x = if_target / if_reference;
        let plateau = match self.mode {
            EstimatorMode::Eq3 => f0_reference,
            EstimatorMode::Eq4 => 0.0,
        };
        let value = success_curve(ratio_x, plateau, self.constants.k);
        Ok(PairEstimate {
            if_target,
            if_reference,
            ratio_x,
            f0_reference,
            mode: self.mode,
            index: SuccessIndex {
                value,
                method: Method::Estimated,
                target_id: target_id.to_owned(),
                reference_id: reference_id.to_owned(),
            },
        })
    }
}

/// Estimates the index of a journal with impact factor `if_target` over one
/// with `if_reference` using the full plateau logistic.
pub fn estimate_success_index(
    if_target: f64,
    if_reference: f64,
    params: &UncitedCurveParams,
    k: f64,
) -> Result<PairEstimate> {
    Estimator::new(ModelConstants::new(*params, k)?)?.estimate(if_target, if_reference)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualBin {
    pub center: f64,
    pub count: u64,
}

/// Statistics of `estimated - exact` over every ordered pair of a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub n_pairs: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub max_abs: f64,
    pub histogram_width: f64,
    pub histogram: Vec<ResidualBin>,
    /// Mean residual of each journal acting as the target, in corpus order.
    pub target_means: Vec<(String, f64)>,
}

pub const DEFAULT_RESIDUAL_BIN_WIDTH: f64 = 0.01;

pub fn estimate_matrix_residuals(
    corpus: &[CitationDistribution],
    adjustment: f64,
    estimator: &Estimator,
    histogram_width: f64,
) -> Result<ResidualStats> {
    require_positive("histogram width", histogram_width)?;
    let exact = success_matrix(corpus)?;
    let ifs = corpus
        .iter()
        .map(|d| impact_factor(d, adjustment))
        .collect::<Result<Vec<f64>>>()?;

    let n = corpus.len();
    let mut residuals = Vec::with_capacity(n * (n - 1));
    let mut target_means = Vec::with_capacity(n);
    for t in 0..n {
        let mut row_sum = 0.0;
        for r in (0..n).filter(|&r| r != t) {
            let estimate = estimator
                .estimate_named(
                    corpus[t].journal_id(),
                    corpus[r].journal_id(),
                    ifs[t],
                    ifs[r],
                )
                .map_err(|e| {
                    Error::Domain(format!(
                        "pair {} / {}: {e}",
                        corpus[t].journal_id(),
                        corpus[r].journal_id()
                    ))
                })?;
            let residual = estimate.index.value - exact.get(t, r);
            row_sum += residual;
            residuals.push(residual);
        }
        target_means.push((corpus[t].journal_id().to_owned(), row_sum / (n - 1) as f64));
    }

    let count = residuals.len() as f64;
    let mean = residuals.iter().sum::<f64>() / count;
    let std_dev = (residuals.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / count).sqrt();
    let max_abs = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));

    let mut bins = std::collections::BTreeMap::<i64, u64>::new();
    for r in &residuals {
        *bins
            .entry((r / histogram_width).round() as i64)
            .or_insert(0) += 1;
    }
    let histogram = bins
        .into_iter()
        .map(|(i, count)| ResidualBin {
            center: i as f64 * histogram_width,
            count,
        })
        .collect();

    Ok(ResidualStats {
        n_pairs: residuals.len(),
        mean,
        std_dev,
        max_abs,
        histogram_width,
        histogram,
        target_means,
    })
}
