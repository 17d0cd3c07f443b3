//! Exact citation success index.
//!
//! The index of a target journal `t` over a reference journal `r` is the
//! probability that a random article of `t` has more citations than a random
//! article of `r`, with ties counted as half a win:
//!
//! ```text
//! S = Σ_c [P_t(> c) + ½ P_t(c)] · P_r(c)
//! ```
//!
//! This is the Mann-Whitney U statistic of `t` against `r` divided by the
//! number of article pairs. [`success_index_exact`] evaluates it with one
//! merge pass over the sorted citation values of both journals; the pair
//! counts are accumulated as integers and divided once at the end.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::CitationDistribution;
use crate::error::{Error, Result};

/// Largest number of article pairs [`success_index_brute`] will enumerate.
pub const BRUTE_FORCE_PAIR_LIMIT: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Estimated,
}

/// A success index value in `[0, 1]` together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessIndex {
    pub value: f64,
    pub method: Method,
    pub target_id: String,
    pub reference_id: String,
}

impl SuccessIndex {
    pub fn percent(&self) -> f64 {
        self.value * 100.0
    }
}

/// Twice the number of target wins, ties counting one (i.e. `2·U`).
fn doubled_wins(target: &CitationDistribution, reference: &CitationDistribution) -> u128 {
    let n_target = target.n_articles() as u128;
    let mut target_bins = target.histogram().iter().peekable();
    // target articles with citations strictly below the current reference value
    let mut below: u128 = 0;
    let mut total: u128 = 0;
    for (&c, &n_ref) in reference.histogram() {
        while let Some(&(&tc, &tn)) = target_bins.peek() {
            if tc < c {
                below += tn as u128;
                target_bins.next();
            } else {
                break;
            }
        }
        let tied = match target_bins.peek() {
            Some(&(&tc, &tn)) if tc == c => tn as u128,
            _ => 0,
        };
        let above = n_target - below - tied;
        total += (2 * above + tied) * n_ref as u128;
    }
    total
}

/// Exact index in time linear in the number of distinct citation values.
pub fn success_index_exact(
    target: &CitationDistribution,
    reference: &CitationDistribution,
) -> Result<SuccessIndex> {
    target.ensure_non_empty()?;
    reference.ensure_non_empty()?;
    let pairs = target.n_articles() as u128 * reference.n_articles() as u128;
    let value = doubled_wins(target, reference) as f64 / (2 * pairs) as f64;
    Ok(SuccessIndex {
        value,
        method: Method::Exact,
        target_id: target.journal_id().to_owned(),
        reference_id: reference.journal_id().to_owned(),
    })
}

/// Reference implementation that expands both journals into per-article
/// citation lists and compares every pair. Only meant as a test oracle.
pub fn success_index_brute(
    target: &CitationDistribution,
    reference: &CitationDistribution,
) -> Result<SuccessIndex> {
    target.ensure_non_empty()?;
    reference.ensure_non_empty()?;
    let pairs = target.n_articles() as u128 * reference.n_articles() as u128;
    if pairs > BRUTE_FORCE_PAIR_LIMIT {
        return Err(Error::TooManyPairs {
            pairs,
            limit: BRUTE_FORCE_PAIR_LIMIT,
        });
    }
    let expand = |d: &CitationDistribution| -> Vec<u64> {
        d.histogram()
            .iter()
            .flat_map(|(&c, &n)| std::iter::repeat_n(c, n as usize))
            .collect()
    };
    let t_articles = expand(target);
    let r_articles = expand(reference);
    let mut score = 0.0f64;
    for &t in &t_articles {
        for &r in &r_articles {
            score += match t.cmp(&r) {
                std::cmp::Ordering::Greater => 1.0,
                std::cmp::Ordering::Equal => 0.5,
                std::cmp::Ordering::Less => 0.0,
            };
        }
    }
    Ok(SuccessIndex {
        value: score / pairs as f64,
        method: Method::Exact,
        target_id: target.journal_id().to_owned(),
        reference_id: reference.journal_id().to_owned(),
    })
}

/// All ordered pairwise indices of a set of journals.
///
/// `values[i][j]` is the index of journal `i` (target) over journal `j`
/// (reference). The diagonal is 0.5 and `values[j][i] = 1 - values[i][j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessMatrix {
    pub journal_ids: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl SuccessMatrix {
    pub fn len(&self) -> usize {
        self.journal_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.journal_ids.is_empty()
    }

    pub fn get(&self, target: usize, reference: usize) -> f64 {
        self.values[target][reference]
    }
}

pub fn success_matrix(journals: &[CitationDistribution]) -> Result<SuccessMatrix> {
    if journals.len() < 2 {
        return Err(Error::Domain(format!(
            "a success matrix needs at least 2 journals, got {}",
            journals.len()
        )));
    }
    let n = journals.len();
    let upper: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let computed = upper
        .par_iter()
        .map(|&(i, j)| success_index_exact(&journals[i], &journals[j]).map(|s| s.value))
        .collect::<Result<Vec<f64>>>()?;
    // diagonal entries still need a non-empty check
    for journal in journals {
        journal.ensure_non_empty()?;
    }

    let mut values = vec![vec![0.5; n]; n];
    for (&(i, j), &value) in upper.iter().zip(&computed) {
        values[i][j] = value;
        values[j][i] = 1.0 - value;
    }
    Ok(SuccessMatrix {
        journal_ids: journals.iter().map(|j| j.journal_id().to_owned()).collect(),
        values,
    })
}
