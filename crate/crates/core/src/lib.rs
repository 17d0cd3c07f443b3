//! Citation success index toolkit.
//!
//! The citation success index of a target journal over a reference journal
//! is the probability that a random article of the target has more citations
//! than a random article of the reference, ties counted half. This crate
//! computes it exactly from citation histograms, fits the universal curves
//! that relate it to impact factors, and estimates it from two impact
//! factors alone.

pub mod curve;
pub mod distribution;
pub mod error;
pub mod estimate;
pub mod index;
pub mod ingest;
pub mod logbin;
pub mod optimize;
pub mod params;
pub mod synthetic;
pub mod uncited;

pub use curve::{
    bin_success_curve, fit_k, fit_k_distribution, summarize_k, BinnedCurve, BinningConfig,
    CurveBin, KDistributionSummary, KFitConfig, ReferenceFit, SuccessCurveFit,
};
pub use distribution::{
    ccdf, impact_factor, pmf, uncited_fraction, CitationDistribution, JournalSummary,
    DEFAULT_IF_ADJUSTMENT,
};
pub use error::{Error, Result};
pub use estimate::{
    estimate_matrix_residuals, estimate_success_index, success_curve, Estimator, EstimatorMode,
    ModelConstants, PairEstimate, ResidualStats, DEFAULT_K,
};
pub use index::{
    success_index_brute, success_index_exact, success_matrix, Method, SuccessIndex, SuccessMatrix,
};
pub use ingest::{export_corpus, load_corpus, CorpusConfig, LoadedCorpus, Schema};
pub use logbin::{log_binned_histogram, LogBin, LogBinnedHistogram};
pub use synthetic::{
    generate_synthetic_corpus, ArticleCount, Family, SyntheticJournal, SyntheticSpec,
};
pub use uncited::{
    fit_uncited_curve, predict_uncited_fraction, UncitedCurveParams, UncitedFit, UncitedFitConfig,
};
