//! Shared fixtures for the benchmarks.

use citesuccess_core::{
    generate_synthetic_corpus, ArticleCount, CitationDistribution, SyntheticSpec,
};

/// A seeded hurdle-geometric corpus.
pub fn corpus(n_journals: usize, articles: u64, seed: u64) -> Vec<CitationDistribution> {
    let spec = SyntheticSpec {
        n_journals,
        articles_per_journal: ArticleCount::Fixed(articles),
        seed,
        ..Default::default()
    };
    generate_synthetic_corpus(&spec)
        .expect("bench corpus")
        .into_iter()
        .map(|j| j.distribution)
        .collect()
}
