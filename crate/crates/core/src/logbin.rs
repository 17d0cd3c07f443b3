//! Logarithmic binning of citation histograms for plotting heavy tails.

use serde::{Deserialize, Serialize};

use crate::distribution::CitationDistribution;
use crate::error::{Error, Result};

/// One logarithmic bin covering citation counts in `[lower, upper)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogBin {
    pub lower: f64,
    pub upper: f64,
    /// Geometric mean of the bin edges.
    pub center: f64,
    /// Number of integer citation values inside the bin.
    pub width: u64,
    pub articles: u64,
    /// Fraction of all articles that fall into the bin.
    pub mass: f64,
    /// `mass / width`, i.e. the average probability per citation value.
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogBinnedHistogram {
    pub journal_id: String,
    /// Uncited articles cannot be placed on a log axis and are reported here.
    pub zero_mass: f64,
    pub bins: Vec<LogBin>,
}

impl LogBinnedHistogram {
    pub fn total_mass(&self) -> f64 {
        self.zero_mass + self.bins.iter().map(|b| b.mass).sum::<f64>()
    }
}

fn edge(index: i64, bins_per_decade: u32) -> f64 {
    10f64.powf(index as f64 / bins_per_decade as f64)
}

/// Index `i` such that `edge(i) <= c < edge(i + 1)`.
fn bin_index(c: u64, bins_per_decade: u32) -> i64 {
    let c = c as f64;
    let mut i = (c.log10() * bins_per_decade as f64).floor() as i64;
    while edge(i, bins_per_decade) > c {
        i -= 1;
    }
    while edge(i + 1, bins_per_decade) <= c {
        i += 1;
    }
    i
}

/// Groups cited articles into `bins_per_decade` logarithmic bins per decade.
/// Bins that hold no articles are omitted.
pub fn log_binned_histogram(
    dist: &CitationDistribution,
    bins_per_decade: u32,
) -> Result<LogBinnedHistogram> {
    if bins_per_decade == 0 {
        return Err(Error::Domain("bins_per_decade must be at least 1".into()));
    }
    dist.ensure_non_empty()?;
    let n = dist.n_articles() as f64;

    let mut bins: Vec<LogBin> = Vec::new();
    let mut current: Option<(i64, u64)> = None;
    let flush = |index: i64, articles: u64, bins: &mut Vec<LogBin>| {
        let lower = edge(index, bins_per_decade);
        let upper = edge(index + 1, bins_per_decade);
        let width = (upper.ceil() - lower.ceil()) as u64;
        let mass = articles as f64 / n;
        bins.push(LogBin {
            lower,
            upper,
            center: (lower * upper).sqrt(),
            width,
            articles,
            mass,
            density: mass / width as f64,
        });
    };
    for (&c, &count) in dist.histogram().range(1..) {
        let index = bin_index(c, bins_per_decade);
        match current {
            Some((i, ref mut acc)) if i == index => *acc += count,
            Some((i, acc)) => {
                flush(i, acc, &mut bins);
                current = Some((index, count));
            }
            None => current = Some((index, count)),
        }
    }
    if let Some((i, acc)) = current {
        flush(i, acc, &mut bins);
    }

    Ok(LogBinnedHistogram {
        journal_id: dist.journal_id().to_owned(),
        zero_mass: dist.count(0) as f64 / n,
        bins,
    })
}
