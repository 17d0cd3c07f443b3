//! Per-journal citation histograms and the scalars derived from them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

/// Default multiplier applied to computed impact factors so they line up with
/// officially published values, which also count citations to non-citable
/// items and unmatched references.
pub const DEFAULT_IF_ADJUSTMENT: f64 = 1.04;

/// Histogram of citation counts for the articles a journal published in the
/// two-year window preceding the census year.
///
/// Keys are citation counts, values the number of articles with exactly that
/// many citations. Zero-article bins are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitationDistribution {
    journal_id: String,
    histogram: BTreeMap<u64, u64>,
    n_articles: u64,
}

impl CitationDistribution {
    /// Builds a distribution from `(citations, articles)` pairs. Repeated
    /// citation values are summed and zero-article entries are dropped.
    pub fn from_histogram<I>(journal_id: impl Into<String>, bins: I) -> Self
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut histogram = BTreeMap::new();
        for (citations, articles) in bins {
            if articles > 0 {
                *histogram.entry(citations).or_insert(0) += articles;
            }
        }
        let n_articles = histogram.values().sum();
        Self {
            journal_id: journal_id.into(),
            histogram,
            n_articles,
        }
    }

    /// Builds a distribution from one citation count per article.
    pub fn from_citations<I>(journal_id: impl Into<String>, citations: I) -> Self
    where
        I: IntoIterator<Item = u64>,
    {
        Self::from_histogram(journal_id, citations.into_iter().map(|c| (c, 1)))
    }

    pub fn journal_id(&self) -> &str {
        &self.journal_id
    }

    pub fn histogram(&self) -> &BTreeMap<u64, u64> {
        &self.histogram
    }

    pub fn n_articles(&self) -> u64 {
        self.n_articles
    }

    pub fn is_empty(&self) -> bool {
        self.n_articles == 0
    }

    /// Number of distinct citation values.
    pub fn n_distinct(&self) -> usize {
        self.histogram.len()
    }

    pub fn max_citations(&self) -> Option<u64> {
        self.histogram.keys().next_back().copied()
    }

    pub fn min_citations(&self) -> Option<u64> {
        self.histogram.keys().next().copied()
    }

    /// Sum of citations over all articles.
    pub fn total_citations(&self) -> u128 {
        self.histogram
            .iter()
            .map(|(&c, &n)| c as u128 * n as u128)
            .sum()
    }

    /// Number of articles with exactly `citations` citations.
    pub fn count(&self, citations: u64) -> u64 {
        self.histogram.get(&citations).copied().unwrap_or(0)
    }

    /// Returns a copy with every bin multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        Self::from_histogram(
            self.journal_id.clone(),
            self.histogram.iter().map(|(&c, &n)| (c, n * factor)),
        )
    }

    /// Returns a copy where every article gained `shift` citations.
    pub fn shifted(&self, shift: u64) -> Self {
        Self::from_histogram(
            self.journal_id.clone(),
            self.histogram.iter().map(|(&c, &n)| (c + shift, n)),
        )
    }

    /// Returns a copy under a different journal id.
    pub fn renamed(&self, journal_id: impl Into<String>) -> Self {
        Self {
            journal_id: journal_id.into(),
            ..self.clone()
        }
    }

    pub(crate) fn ensure_non_empty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyDistribution(self.journal_id.clone()))
        } else {
            Ok(())
        }
    }
}

/// Derived per-journal scalars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JournalSummary {
    pub journal_id: String,
    pub n_articles: u64,
    pub total_citations: u64,
    pub impact_factor: f64,
    pub uncited_fraction: f64,
}

impl JournalSummary {
    pub fn from_distribution(dist: &CitationDistribution, adjustment: f64) -> Result<Self> {
        let impact_factor = impact_factor(dist, adjustment)?;
        let uncited_fraction = uncited_fraction(dist)?;
        let total_citations = u64::try_from(dist.total_citations())
            .map_err(|_| Error::Domain("total citation count overflows u64".into()))?;
        Ok(Self {
            journal_id: dist.journal_id().to_owned(),
            n_articles: dist.n_articles(),
            total_citations,
            impact_factor,
            uncited_fraction,
        })
    }
}

/// Mean citations per article, multiplied by `adjustment`.
pub fn impact_factor(dist: &CitationDistribution, adjustment: f64) -> Result<f64> {
    require_positive("adjustment", adjustment)?;
    dist.ensure_non_empty()?;
    Ok(adjustment * dist.total_citations() as f64 / dist.n_articles() as f64)
}

/// Fraction of articles that received no citations.
pub fn uncited_fraction(dist: &CitationDistribution) -> Result<f64> {
    pmf(dist, 0)
}

/// Fraction of articles with exactly `c` citations.
pub fn pmf(dist: &CitationDistribution, c: u64) -> Result<f64> {
    dist.ensure_non_empty()?;
    Ok(dist.count(c) as f64 / dist.n_articles() as f64)
}

/// Fraction of articles with strictly more than `c` citations.
pub fn ccdf(dist: &CitationDistribution, c: u64) -> Result<f64> {
    dist.ensure_non_empty()?;
    let above: u64 = dist
        .histogram()
        .range((std::ops::Bound::Excluded(c), std::ops::Bound::Unbounded))
        .map(|(_, &n)| n)
        .sum();
    Ok(above as f64 / dist.n_articles() as f64)
}
