//! Fitting the exponent of the success-vs-ratio curve.
//!
//! Exact indices of many targets against one reference are averaged in equal
//! bins of `log x`, so every ratio range carries the same weight, and the
//! plateau logistic is fitted to the bin means with `k` as the only free
//! parameter.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::{impact_factor, uncited_fraction, CitationDistribution};
use crate::error::{require_positive, Error, Result};
use crate::estimate::success_curve;
use crate::index::success_index_exact;
use crate::optimize::{golden_section, grid_bracket, Bracket};

pub const DEFAULT_BIN_WIDTH: f64 = 0.05;
pub const DEFAULT_LOG_BASE: f64 = 10.0;
pub const DEFAULT_MIN_BIN_PAIRS: usize = 3;
pub const DEFAULT_MIN_BINS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinningConfig {
    pub bin_width: f64,
    pub log_base: f64,
    /// Bins with fewer pairs are dropped.
    pub min_pairs: usize,
}

impl Default for BinningConfig {
    fn default() -> Self {
        Self {
            bin_width: DEFAULT_BIN_WIDTH,
            log_base: DEFAULT_LOG_BASE,
            min_pairs: DEFAULT_MIN_BIN_PAIRS,
        }
    }
}

impl BinningConfig {
    pub fn validate(&self) -> Result<()> {
        require_positive("bin width", self.bin_width)?;
        require_positive("log base", self.log_base)?;
        if self.log_base == 1.0 {
            return Err(Error::InvalidParameter {
                name: "log base",
                value: 1.0,
                reason: "must differ from 1",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveBin {
    /// Bin center in units of `log_base(x)`.
    pub log_ratio_center: f64,
    pub mean_index: f64,
    pub pair_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinnedCurve {
    pub reference_id: String,
    pub bin_width: f64,
    pub log_base: f64,
    pub bins: Vec<CurveBin>,
}

impl BinnedCurve {
    pub fn ratio_at(&self, bin: &CurveBin) -> f64 {
        self.log_base.powf(bin.log_ratio_center)
    }
}

/// Averages `(ratio, index)` pairs in equal bins of `log ratio`. Bins are
/// centered on integer multiples of the bin width.
pub fn bin_success_curve(pairs: &[(f64, f64)], config: &BinningConfig) -> Result<BinnedCurve> {
    config.validate()?;
    if pairs.is_empty() {
        return Err(Error::Domain("no pairs to bin".into()));
    }
    let mut sums: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
    for &(ratio, index) in pairs {
        require_positive("ratio", ratio)?;
        let slot = (ratio.log(config.log_base) / config.bin_width).round() as i64;
        let entry = sums.entry(slot).or_insert((0.0, 0));
        entry.0 += index;
        entry.1 += 1;
    }
    let bins = sums
        .into_iter()
        .filter(|(_, (_, count))| *count >= config.min_pairs.max(1))
        .map(|(slot, (sum, count))| CurveBin {
            log_ratio_center: slot as f64 * config.bin_width,
            mean_index: sum / count as f64,
            pair_count: count,
        })
        .collect();
    Ok(BinnedCurve {
        reference_id: String::new(),
        bin_width: config.bin_width,
        log_base: config.log_base,
        bins,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessCurveFit {
    pub reference_id: String,
    pub k: f64,
    pub f0_ref: f64,
    pub n_bins_used: usize,
    pub sum_sq_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KFitConfig {
    pub min_bins: usize,
    pub k_min: f64,
    pub k_max: f64,
    /// Points of the log-spaced scan that brackets the minimum.
    pub scan_points: usize,
    /// Final bracket width in `ln k`.
    pub tolerance: f64,
}

impl Default for KFitConfig {
    fn default() -> Self {
        Self {
            min_bins: DEFAULT_MIN_BINS,
            k_min: 0.01,
            k_max: 100.0,
            scan_points: 241,
            tolerance: 1e-12,
        }
    }
}

/// Least-squares estimate of the exponent `k`, bins weighted equally.
pub fn fit_k(
    curve: &BinnedCurve,
    f0_reference: f64,
    config: &KFitConfig,
) -> Result<SuccessCurveFit> {
    if !(0.0..1.0).contains(&f0_reference) {
        return Err(Error::InvalidParameter {
            name: "f0_reference",
            value: f0_reference,
            reason: "must lie in [0, 1)",
        });
    }
    if curve.bins.len() < config.min_bins {
        return Err(Error::Fit(format!(
            "reference `{}`: {} bins retained, need at least {}",
            curve.reference_id,
            curve.bins.len(),
            config.min_bins
        )));
    }
    let points: Vec<(f64, f64)> = curve
        .bins
        .iter()
        .map(|b| (curve.ratio_at(b), b.mean_index))
        .collect();
    let sse = |ln_k: f64| -> f64 {
        let k = ln_k.exp();
        points
            .iter()
            .map(|&(x, s)| (s - success_curve(x, f0_reference, k)).powi(2))
            .sum()
    };
    let (lo, hi) = (config.k_min.ln(), config.k_max.ln());
    let ln_k = match grid_bracket(sse, lo, hi, config.scan_points) {
        Bracket::Interior { lo, hi } => golden_section(sse, lo, hi, config.tolerance, 500),
        Bracket::Edge { at } => {
            return Err(Error::Fit(format!(
                "reference `{}`: best k sits on the search boundary ({:.4})",
                curve.reference_id,
                at.exp()
            )))
        }
    };
    Ok(SuccessCurveFit {
        reference_id: curve.reference_id.clone(),
        k: ln_k.exp(),
        f0_ref: f0_reference,
        n_bins_used: curve.bins.len(),
        sum_sq_residual: sse(ln_k),
    })
}

/// Outcome of the k fit for one reference journal.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFit {
    pub reference_id: String,
    pub impact_factor: f64,
    pub outcome: Result<SuccessCurveFit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KDistributionSummary {
    pub n_fitted: usize,
    pub n_failed: usize,
    pub mean_k: f64,
    pub std_k: f64,
}

pub fn summarize_k(fits: &[ReferenceFit]) -> Option<KDistributionSummary> {
    let ks: Vec<f64> = fits
        .iter()
        .filter_map(|f| f.outcome.as_ref().ok().map(|fit| fit.k))
        .collect();
    if ks.is_empty() {
        return None;
    }
    let n = ks.len() as f64;
    let mean_k = ks.iter().sum::<f64>() / n;
    let std_k = (ks.iter().map(|k| (k - mean_k).powi(2)).sum::<f64>() / n).sqrt();
    Some(KDistributionSummary {
        n_fitted: ks.len(),
        n_failed: fits.len() - ks.len(),
        mean_k,
        std_k,
    })
}

/// Fits `k` for every reference journal whose impact factor exceeds
/// `reference_min_if`, using all other journals with a positive impact factor
/// as targets. Failed references are kept in the output with their error.
pub fn fit_k_distribution(
    corpus: &[CitationDistribution],
    adjustment: f64,
    reference_min_if: f64,
    binning: &BinningConfig,
    config: &KFitConfig,
) -> Result<Vec<ReferenceFit>> {
    binning.validate()?;
    let ifs = corpus
        .iter()
        .map(|d| impact_factor(d, adjustment))
        .collect::<Result<Vec<f64>>>()?;
    let references: Vec<usize> = (0..corpus.len())
        .filter(|&i| ifs[i] > reference_min_if)
        .collect();
    if references.len() < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 reference journals with IF > {reference_min_if}, found {}",
            references.len()
        )));
    }

    let fit_one = |r: usize| -> Result<SuccessCurveFit> {
        let reference = &corpus[r];
        let mut pairs = Vec::with_capacity(corpus.len());
        for (t, target) in corpus.iter().enumerate() {
            if t == r || ifs[t] <= 0.0 {
                continue;
            }
            let s = success_index_exact(target, reference)?;
            pairs.push((ifs[t] / ifs[r], s.value));
        }
        let mut curve = bin_success_curve(&pairs, binning)?;
        curve.reference_id = reference.journal_id().to_owned();
        fit_k(&curve, uncited_fraction(reference)?, config)
    };

    Ok(references
        .par_iter()
        .map(|&r| ReferenceFit {
            reference_id: corpus[r].journal_id().to_owned(),
            impact_factor: ifs[r],
            outcome: fit_one(r),
        })
        .collect())
}
