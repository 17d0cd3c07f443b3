//! Synthetic journal corpora for desk-scale validation.
//!
//! Each journal draws a target impact factor log-uniformly from a range. Its
//! articles then follow a hurdle model: a point mass at zero citations sized
//! to the uncited-fraction curve at that impact factor, and a positive-count
//! component whose mean makes the expected citations per article equal the
//! target impact factor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, LogNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::distribution::CitationDistribution;
use crate::error::{require_positive, Error, Result};
use crate::uncited::UncitedCurveParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Zero mass plus `1 + Geometric(p)`.
    HurdleGeometric,
    /// Zero mass plus `ceil(LogNormal(mu, sigma))`.
    DiscreteLognormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArticleCount {
    Fixed(u64),
    /// Uniform over the inclusive range.
    Range(u64, u64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_journals: usize,
    pub if_range: (f64, f64),
    pub articles_per_journal: ArticleCount,
    pub family: Family,
    pub seed: u64,
    /// Curve the zero mass is calibrated to.
    pub uncited_curve: UncitedCurveParams,
    /// Log-scale spread of the discrete lognormal family.
    pub lognormal_sigma: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_journals: 100,
            if_range: (0.3, 30.0),
            articles_per_journal: ArticleCount::Fixed(1000),
            family: Family::HurdleGeometric,
            seed: 0,
            uncited_curve: UncitedCurveParams::default(),
            lognormal_sigma: 1.0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_journals == 0 {
            return Err(Error::Domain("n_journals must be at least 1".into()));
        }
        let (lo, hi) = self.if_range;
        require_positive("if_range min", lo)?;
        require_positive("if_range max", hi)?;
        if lo > hi {
            return Err(Error::Domain(format!("if_range min {lo} exceeds max {hi}")));
        }
        match self.articles_per_journal {
            ArticleCount::Fixed(0) => {
                return Err(Error::Domain(
                    "articles_per_journal must be positive".into(),
                ))
            }
            ArticleCount::Range(a, b) if a == 0 || a > b => {
                return Err(Error::Domain(format!("invalid article range {a}..={b}")))
            }
            _ => {}
        }
        self.uncited_curve.validate()?;
        require_positive("lognormal sigma", self.lognormal_sigma)
    }
}

/// The hurdle parameters a journal was generated from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FamilyParams {
    HurdleGeometric { p: f64 },
    DiscreteLognormal { mu: f64, sigma: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticJournal {
    pub distribution: CitationDistribution,
    pub target_if: f64,
    pub target_uncited: f64,
    pub params: FamilyParams,
}

/// Expected value of `ceil(X)` for `X ~ LogNormal(mu, sigma)`, i.e.
/// `Σ_{j≥0} P(X > j)`.
pub fn discrete_lognormal_mean(mu: f64, sigma: f64) -> f64 {
    let survival = |j: f64| 0.5 * erfc((j.ln() - mu) / (sigma * std::f64::consts::SQRT_2));
    let median = mu.exp();
    let mut total = 1.0;
    let mut j = 1.0;
    loop {
        let term = survival(j);
        total += term;
        if j > median && term < 1e-14 * total {
            break;
        }
        j += 1.0;
    }
    total
}

fn solve_lognormal_mu(mean: f64, sigma: f64) -> Option<f64> {
    if mean < 1.0 {
        return None;
    }
    // E[X] <= E[ceil X] <= E[X] + 1 brackets mu
    let half_var = 0.5 * sigma * sigma;
    let mut hi = mean.ln() - half_var;
    let mut lo = if mean > 1.0 + 1e-12 {
        (mean - 1.0).ln() - half_var
    } else {
        -40.0
    };
    lo = lo.max(-40.0);
    if hi < lo {
        hi = lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if discrete_lognormal_mean(mid, sigma) < mean {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn journal_id(index: usize, n: usize) -> String {
    let width = n.to_string().len();
    format!("J{:0width$}", index + 1)
}

fn generate_one(spec: &SyntheticSpec, index: usize) -> Result<SyntheticJournal> {
    let id = journal_id(index, spec.n_journals);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);

    let (lo, hi) = spec.if_range;
    let target_if = if lo == hi {
        lo
    } else {
        rng.random_range(lo.ln()..hi.ln()).exp()
    };
    let n_articles = match spec.articles_per_journal {
        ArticleCount::Fixed(n) => n,
        ArticleCount::Range(a, b) => rng.random_range(a..=b),
    };
    let target_uncited = spec.uncited_curve.predict(target_if);
    let cited = 1.0 - target_uncited;
    let positive_mean = target_if / cited;
    let fail = |reason: String| Error::Generation {
        journal: id.clone(),
        reason,
    };
    if !(positive_mean.is_finite() && positive_mean >= 1.0) {
        return Err(fail(format!(
            "target IF {target_if:.4} is below the cited fraction {cited:.4}; \
             cited articles would need fewer than one citation on average"
        )));
    }

    let mut citations = Vec::with_capacity(n_articles as usize);
    let params = match spec.family {
        Family::HurdleGeometric => {
            let p = 1.0 / positive_mean;
            let tail = Geometric::new(p).map_err(|e| fail(e.to_string()))?;
            for _ in 0..n_articles {
                let zero = rng.random::<f64>() < target_uncited;
                citations.push(if zero { 0 } else { 1 + tail.sample(&mut rng) });
            }
            FamilyParams::HurdleGeometric { p }
        }
        Family::DiscreteLognormal => {
            let sigma = spec.lognormal_sigma;
            let mu = solve_lognormal_mu(positive_mean, sigma)
                .ok_or_else(|| fail("lognormal location solve failed".into()))?;
            let tail = LogNormal::new(mu, sigma).map_err(|e| fail(e.to_string()))?;
            for _ in 0..n_articles {
                let zero = rng.random::<f64>() < target_uncited;
                citations.push(if zero {
                    0
                } else {
                    (tail.sample(&mut rng).ceil() as u64).max(1)
                });
            }
            FamilyParams::DiscreteLognormal { mu, sigma }
        }
    };

    Ok(SyntheticJournal {
        distribution: CitationDistribution::from_citations(id, citations),
        target_if,
        target_uncited,
        params,
    })
}

/// Generates a corpus; journal `i` uses its own ChaCha stream so the output
/// does not depend on scheduling.
pub fn generate_synthetic_corpus(spec: &SyntheticSpec) -> Result<Vec<SyntheticJournal>> {
    spec.validate()?;
    (0..spec.n_journals)
        .into_par_iter()
        .map(|i| generate_one(spec, i))
        .collect()
}

pub fn distributions(journals: &[SyntheticJournal]) -> Vec<CitationDistribution> {
    journals.iter().map(|j| j.distribution.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::{impact_factor, uncited_fraction};

    #[test]
    fn same_seed_same_corpus() {
        let spec = SyntheticSpec {
            n_journals: 20,
            seed: 42,
            ..Default::default()
        };
        assert_eq!(
            generate_synthetic_corpus(&spec).unwrap(),
            generate_synthetic_corpus(&spec).unwrap()
        );
        let other = SyntheticSpec {
            seed: 43,
            ..spec.clone()
        };
        assert_ne!(
            generate_synthetic_corpus(&spec).unwrap(),
            generate_synthetic_corpus(&other).unwrap()
        );
    }

    #[test]
    fn ids_sort_in_generation_order() {
        let spec = SyntheticSpec {
            n_journals: 12,
            articles_per_journal: ArticleCount::Fixed(10),
            ..Default::default()
        };
        let ids: Vec<String> = generate_synthetic_corpus(&spec)
            .unwrap()
            .iter()
            .map(|j| j.distribution.journal_id().to_owned())
            .collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        assert_eq!(ids[0], "J01");
    }

    #[test]
    fn invalid_specs() {
        let bad = [
            SyntheticSpec {
                n_journals: 0,
                ..Default::default()
            },
            SyntheticSpec {
                if_range: (0.0, 3.0),
                ..Default::default()
            },
            SyntheticSpec {
                if_range: (5.0, 3.0),
                ..Default::default()
            },
            SyntheticSpec {
                articles_per_journal: ArticleCount::Range(5, 2),
                ..Default::default()
            },
        ];
        for spec in bad {
            assert!(generate_synthetic_corpus(&spec).is_err(), "{spec:?}");
        }
    }

    #[test]
    fn extreme_low_if_fails_with_journal_name() {
        let spec = SyntheticSpec {
            n_journals: 1,
            if_range: (0.001, 0.001),
            ..Default::default()
        };
        match generate_synthetic_corpus(&spec) {
            Err(Error::Generation { journal, .. }) => assert_eq!(journal, "J1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn realized_if_and_f0_track_targets() {
        for family in [Family::HurdleGeometric, Family::DiscreteLognormal] {
            let spec = SyntheticSpec {
                n_journals: 30,
                articles_per_journal: ArticleCount::Fixed(5000),
                family,
                seed: 9,
                ..Default::default()
            };
            for j in generate_synthetic_corpus(&spec).unwrap() {
                let realized = impact_factor(&j.distribution, 1.0).unwrap();
                assert!(
                    (realized / j.target_if - 1.0).abs() < 0.1,
                    "{family:?} {realized} {}",
                    j.target_if
                );
                let f0 = uncited_fraction(&j.distribution).unwrap();
                assert!((f0 - j.target_uncited).abs() < 0.03);
            }
        }
    }

    #[test]
    fn lognormal_mean_solve_round_trips() {
        for &(mean, sigma) in &[(1.5, 1.0), (4.0, 0.5), (40.0, 1.2)] {
            let mu = solve_lognormal_mu(mean, sigma).unwrap();
            assert!((discrete_lognormal_mean(mu, sigma) - mean).abs() < 1e-9);
        }
        assert!(solve_lognormal_mu(0.5, 1.0).is_none());
    }
}
