//! Uncited fraction as a function of impact factor.
//!
//! The fraction of never-cited articles follows a generalized logistic curve
//! in the impact factor:
//!
//! ```text
//! f0(IF) = 1 / (1 + q · IF^alpha)^beta
//! ```

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::distribution::JournalSummary;
use crate::error::{require_non_negative, require_positive, Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.94;
pub const DEFAULT_BETA: f64 = 2.37;
pub const DEFAULT_Q: f64 = 0.33;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncitedCurveParams {
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
}

impl Default for UncitedCurveParams {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            q: DEFAULT_Q,
        }
    }
}

impl UncitedCurveParams {
    pub fn new(alpha: f64, beta: f64, q: f64) -> Result<Self> {
        let params = Self { alpha, beta, q };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("alpha", self.alpha)?;
        require_positive("beta", self.beta)?;
        require_positive("q", self.q)
    }

    /// Predicted uncited fraction for a journal with impact factor `if_value`.
    pub fn predict(&self, if_value: f64) -> f64 {
        if if_value <= 0.0 {
            return 1.0;
        }
        (1.0 + self.q * if_value.powf(self.alpha)).powf(-self.beta)
    }
}

pub fn predict_uncited_fraction(if_value: f64, params: &UncitedCurveParams) -> Result<f64> {
    require_non_negative("impact factor", if_value)?;
    params.validate()?;
    Ok(params.predict(if_value))
}

/// Least-squares fit of the uncited-fraction curve, with diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncitedFit {
    pub params: UncitedCurveParams,
    pub n_journals: usize,
    pub sum_sq_residual: f64,
    /// Mean of `observed - predicted`.
    pub residual_mean: f64,
    pub residual_std: f64,
}

/// Knobs for [`fit_uncited_curve`].
#[derive(Debug, Clone, PartialEq)]
pub struct UncitedFitConfig {
    pub min_journals: usize,
    /// Required ratio between the largest and smallest positive IF.
    pub min_if_span: f64,
    pub alpha_starts: Vec<f64>,
    pub beta_starts: Vec<f64>,
    pub q_starts: Vec<f64>,
    /// Relative step size on every parameter at which iteration stops.
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for UncitedFitConfig {
    fn default() -> Self {
        Self {
            min_journals: 10,
            min_if_span: 10.0,
            alpha_starts: vec![0.5, 1.0, 2.0],
            beta_starts: vec![0.5, 1.0, 2.0, 4.0],
            q_starts: vec![0.1, 0.3, 1.0, 3.0],
            tolerance: 1e-9,
            max_iter: 1000,
        }
    }
}

struct Point {
    impact_factor: f64,
    uncited: f64,
}

fn sum_sq(points: &[Point], params: &UncitedCurveParams) -> f64 {
    points
        .iter()
        .map(|p| (p.uncited - params.predict(p.impact_factor)).powi(2))
        .sum()
}

fn from_log(theta: &Vector3<f64>) -> UncitedCurveParams {
    UncitedCurveParams {
        alpha: theta[0].exp(),
        beta: theta[1].exp(),
        q: theta[2].exp(),
    }
}

/// Levenberg-Marquardt in log-parameter space, which keeps every parameter
/// positive without constraints.
fn levenberg_marquardt(
    points: &[Point],
    start: UncitedCurveParams,
    config: &UncitedFitConfig,
) -> (UncitedCurveParams, f64) {
    let mut theta = Vector3::new(start.alpha.ln(), start.beta.ln(), start.q.ln());
    let mut current = sum_sq(points, &from_log(&theta));
    let mut lambda = 1e-3;

    for _ in 0..config.max_iter {
        let params = from_log(&theta);
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for p in points.iter().filter(|p| p.impact_factor > 0.0) {
            let u = params.q * p.impact_factor.powf(params.alpha);
            let log1pu = u.ln_1p();
            let model = (-params.beta * log1pu).exp();
            let share = u / (1.0 + u);
            let grad = Vector3::new(
                -params.beta * model * share * params.alpha * p.impact_factor.ln(),
                -params.beta * log1pu * model,
                -params.beta * model * share,
            );
            jtj += grad * grad.transpose();
            jtr += grad * (p.uncited - model);
        }

        let mut improved = false;
        while lambda < 1e12 {
            let mut damped = jtj;
            for i in 0..3 {
                damped[(i, i)] += lambda * jtj[(i, i)].max(1e-300);
            }
            let Some(step) = damped.lu().solve(&jtr) else {
                lambda *= 10.0;
                continue;
            };
            let candidate = theta + step;
            let value = sum_sq(points, &from_log(&candidate));
            if value.is_finite() && value <= current {
                let converged = step.amax() < config.tolerance;
                theta = candidate;
                current = value;
                lambda = (lambda / 10.0).max(1e-12);
                improved = true;
                if converged {
                    return (from_log(&theta), current);
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (from_log(&theta), current)
}

/// Fits `(alpha, beta, q)` by least squares over journals, each journal
/// weighted equally. Every combination of the configured starting values is
/// tried and the lowest residual wins; ties go to the earliest start.
pub fn fit_uncited_curve(
    journals: &[JournalSummary],
    config: &UncitedFitConfig,
) -> Result<UncitedFit> {
    if journals.len() < config.min_journals.max(3) {
        return Err(Error::Fit(format!(
            "uncited-fraction fit needs at least {} journals, got {}",
            config.min_journals.max(3),
            journals.len()
        )));
    }
    let points: Vec<Point> = journals
        .iter()
        .map(|j| Point {
            impact_factor: j.impact_factor,
            uncited: j.uncited_fraction,
        })
        .collect();
    let positive = points.iter().map(|p| p.impact_factor).filter(|&x| x > 0.0);
    let (lo, hi) = positive.fold((f64::INFINITY, 0.0f64), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    });
    if !(lo.is_finite() && hi / lo >= config.min_if_span) {
        return Err(Error::Fit(format!(
            "impact factors must span a factor of at least {} (got {lo} to {hi})",
            config.min_if_span
        )));
    }

    let mut best: Option<(UncitedCurveParams, f64)> = None;
    for &alpha in &config.alpha_starts {
        for &beta in &config.beta_starts {
            for &q in &config.q_starts {
                let start = UncitedCurveParams { alpha, beta, q };
                let (params, sse) = levenberg_marquardt(&points, start, config);
                if params.validate().is_err() || !sse.is_finite() {
                    continue;
                }
                if best.as_ref().is_none_or(|(_, b)| sse < *b) {
                    best = Some((params, sse));
                }
            }
        }
    }
    let (params, sum_sq_residual) =
        best.ok_or_else(|| Error::Fit("no starting point converged".into()))?;

    let residuals: Vec<f64> = points
        .iter()
        .map(|p| p.uncited - params.predict(p.impact_factor))
        .collect();
    let n = residuals.len() as f64;
    let residual_mean = residuals.iter().sum::<f64>() / n;
    let residual_std = (residuals
        .iter()
        .map(|r| (r - residual_mean).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(UncitedFit {
        params,
        n_journals: points.len(),
        sum_sq_residual,
        residual_mean,
        residual_std,
    })
}
