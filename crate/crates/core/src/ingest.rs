//! Loading and exporting per-journal citation data.
//!
//! Two CSV layouts are accepted, told apart by their header:
//!
//! * histogram: `journal_id,citations,n_articles`, one row per citation value
//!   of a journal; a journal's rows must be contiguous.
//! * per-article: `journal_id,citations`, one row per article.
//!
//! Files ending in `.json` hold an array of objects with the same field
//! names. Exports always use the histogram layout with rows sorted by
//! `(journal_id, citations)`.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::distribution::{CitationDistribution, JournalSummary, DEFAULT_IF_ADJUSTMENT};
use crate::error::{require_positive, Error, Result};

pub const DEFAULT_MIN_ARTICLES: u64 = 25;
pub const DEFAULT_CENSUS_YEAR: i32 = 2010;

const HISTOGRAM_HEADER: [&str; 3] = ["journal_id", "citations", "n_articles"];
const ARTICLE_HEADER: [&str; 2] = ["journal_id", "citations"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub census_year: i32,
    /// First and last publication year counted; both precede the census year.
    pub publication_window: (i32, i32),
    pub min_articles: u64,
    pub if_adjustment: f64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self::for_census_year(DEFAULT_CENSUS_YEAR)
    }
}

impl CorpusConfig {
    pub fn for_census_year(census_year: i32) -> Self {
        Self {
            census_year,
            publication_window: (census_year - 2, census_year - 1),
            min_articles: DEFAULT_MIN_ARTICLES,
            if_adjustment: DEFAULT_IF_ADJUSTMENT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (first, last) = self.publication_window;
        if !(first <= last && last < self.census_year) {
            return Err(Error::Domain(format!(
                "publication window {first}-{last} must precede census year {}",
                self.census_year
            )));
        }
        if self.min_articles == 0 {
            return Err(Error::Domain("min_articles must be at least 1".into()));
        }
        require_positive("if_adjustment", self.if_adjustment)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schema {
    Histogram,
    PerArticle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedJournal {
    pub journal_id: String,
    pub n_articles: u64,
}

/// Journals that passed the article threshold, sorted by id, with summaries
/// in the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedCorpus {
    pub schema: Schema,
    pub distributions: Vec<CitationDistribution>,
    pub summaries: Vec<JournalSummary>,
    pub skipped: Vec<SkippedJournal>,
}

impl LoadedCorpus {
    pub fn find(&self, journal_id: &str) -> Option<usize> {
        self.distributions
            .iter()
            .position(|d| d.journal_id() == journal_id)
    }

    pub fn input_journal_count(&self) -> usize {
        self.distributions.len() + self.skipped.len()
    }
}

/// One parsed row, before aggregation.
struct Row {
    line: u64,
    journal_id: String,
    citations: u64,
    articles: u64,
}

fn parse_count(field: &str, name: &str, line: u64) -> Result<u64> {
    field.trim().parse::<u64>().map_err(|_| Error::Parse {
        line,
        message: format!("{name} must be a non-negative integer, got `{field}`"),
    })
}

fn read_csv_rows<R: Read>(reader: R) -> Result<(Schema, Vec<Row>)> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = csv
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let columns: Vec<&str> = header.iter().collect();
    let schema = if columns == HISTOGRAM_HEADER {
        Schema::Histogram
    } else if columns == ARTICLE_HEADER {
        Schema::PerArticle
    } else {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "unrecognised header `{}`; expected `{}` or `{}`",
                columns.join(","),
                HISTOGRAM_HEADER.join(","),
                ARTICLE_HEADER.join(",")
            ),
        });
    };

    let mut rows = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let journal_id = record[0].to_owned();
        if journal_id.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty journal_id".into(),
            });
        }
        let citations = parse_count(&record[1], "citations", line)?;
        let articles = match schema {
            Schema::Histogram => parse_count(&record[2], "n_articles", line)?,
            Schema::PerArticle => 1,
        };
        rows.push(Row {
            line,
            journal_id,
            citations,
            articles,
        });
    }
    Ok((schema, rows))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRow {
    journal_id: String,
    citations: serde_json::Value,
    #[serde(default)]
    n_articles: Option<serde_json::Value>,
}

fn json_count(value: &serde_json::Value, name: &str, line: u64) -> Result<u64> {
    value.as_u64().ok_or_else(|| Error::Parse {
        line,
        message: format!("{name} must be a non-negative integer, got `{value}`"),
    })
}

/// Parses the JSON mirror of either schema. `line` in errors is the 1-based
/// position of the offending object in the array.
pub fn read_json_rows(text: &str) -> Result<(Schema, Vec<CorpusRow>)> {
    let raw: Vec<JsonRow> = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    let schema = match raw.first().map(|r| r.n_articles.is_some()) {
        Some(false) => Schema::PerArticle,
        _ => Schema::Histogram,
    };
    let mut rows = Vec::with_capacity(raw.len());
    for (i, row) in raw.into_iter().enumerate() {
        let line = i as u64 + 1;
        let articles = match (schema, &row.n_articles) {
            (Schema::Histogram, Some(v)) => json_count(v, "n_articles", line)?,
            (Schema::PerArticle, None) => 1,
            _ => {
                return Err(Error::Parse {
                    line,
                    message: "rows mix the histogram and per-article schemas".into(),
                })
            }
        };
        if row.journal_id.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty journal_id".into(),
            });
        }
        rows.push(CorpusRow {
            line,
            journal_id: row.journal_id,
            citations: json_count(&row.citations, "citations", line)?,
            n_articles: articles,
        });
    }
    Ok((schema, rows))
}

/// A parsed input row with its source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRow {
    pub line: u64,
    pub journal_id: String,
    pub citations: u64,
    pub n_articles: u64,
}

/// Groups rows into distributions, sorted by journal id.
fn aggregate(schema: Schema, rows: Vec<Row>) -> Result<Vec<CitationDistribution>> {
    let mut journals: BTreeMap<String, BTreeMap<u64, u64>> = BTreeMap::new();
    let mut finished: HashSet<String> = HashSet::new();
    let mut current: Option<String> = None;
    for row in rows {
        if schema == Schema::Histogram && current.as_deref() != Some(row.journal_id.as_str()) {
            if finished.contains(&row.journal_id) {
                return Err(Error::DuplicateJournal(row.journal_id));
            }
            if let Some(prev) = current.replace(row.journal_id.clone()) {
                finished.insert(prev);
            }
        }
        let bins = journals.entry(row.journal_id.clone()).or_default();
        match schema {
            Schema::Histogram => {
                if bins.insert(row.citations, row.articles).is_some() {
                    return Err(Error::Parse {
                        line: row.line,
                        message: format!(
                            "journal `{}` lists citation value {} twice",
                            row.journal_id, row.citations
                        ),
                    });
                }
            }
            Schema::PerArticle => *bins.entry(row.citations).or_insert(0) += row.articles,
        }
    }
    Ok(journals
        .into_iter()
        .map(|(id, bins)| CitationDistribution::from_histogram(id, bins))
        .collect())
}

/// Applies the article threshold and computes summaries.
pub fn filter_corpus(
    schema: Schema,
    journals: Vec<CitationDistribution>,
    config: &CorpusConfig,
) -> Result<LoadedCorpus> {
    config.validate()?;
    let mut distributions = Vec::new();
    let mut summaries = Vec::new();
    let mut skipped = Vec::new();
    for dist in journals {
        if dist.n_articles() < config.min_articles {
            skipped.push(SkippedJournal {
                journal_id: dist.journal_id().to_owned(),
                n_articles: dist.n_articles(),
            });
            continue;
        }
        summaries.push(JournalSummary::from_distribution(
            &dist,
            config.if_adjustment,
        )?);
        distributions.push(dist);
    }
    Ok(LoadedCorpus {
        schema,
        distributions,
        summaries,
        skipped,
    })
}

pub fn load_corpus_csv<R: Read>(reader: R, config: &CorpusConfig) -> Result<LoadedCorpus> {
    let (schema, rows) = read_csv_rows(reader)?;
    filter_corpus(schema, aggregate(schema, rows)?, config)
}

pub fn load_corpus_json(text: &str, config: &CorpusConfig) -> Result<LoadedCorpus> {
    let (schema, rows) = read_json_rows(text)?;
    let rows = rows
        .into_iter()
        .map(|r| Row {
            line: r.line,
            journal_id: r.journal_id,
            citations: r.citations,
            articles: r.n_articles,
        })
        .collect();
    filter_corpus(schema, aggregate(schema, rows)?, config)
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("json"))
}

/// Loads a corpus file, choosing the JSON reader for `.json` files and CSV
/// otherwise.
pub fn load_corpus(path: impl AsRef<Path>, config: &CorpusConfig) -> Result<LoadedCorpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if is_json(path) {
        let mut text = String::new();
        BufReader::new(file).read_to_string(&mut text)?;
        load_corpus_json(&text, config)
    } else {
        load_corpus_csv(BufReader::new(file), config)
    }
}

fn sorted_rows(corpus: &[CitationDistribution]) -> Vec<(&str, u64, u64)> {
    let mut journals: Vec<&CitationDistribution> = corpus.iter().collect();
    journals.sort_by(|a, b| a.journal_id().cmp(b.journal_id()));
    journals
        .into_iter()
        .flat_map(|d| {
            d.histogram()
                .iter()
                .map(move |(&c, &n)| (d.journal_id(), c, n))
        })
        .collect()
}

/// Writes the corpus in the histogram CSV layout.
pub fn write_corpus_csv<W: Write>(corpus: &[CitationDistribution], writer: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Io(e.to_string());
    csv.write_record(HISTOGRAM_HEADER).map_err(io)?;
    for (id, c, n) in sorted_rows(corpus) {
        csv.write_record([id, &c.to_string(), &n.to_string()])
            .map_err(io)?;
    }
    csv.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonOutRow<'a> {
    journal_id: &'a str,
    citations: u64,
    n_articles: u64,
}

pub fn write_corpus_json<W: Write>(corpus: &[CitationDistribution], writer: W) -> Result<()> {
    let rows: Vec<JsonOutRow> = sorted_rows(corpus)
        .into_iter()
        .map(|(journal_id, citations, n_articles)| JsonOutRow {
            journal_id,
            citations,
            n_articles,
        })
        .collect();
    serde_json::to_writer_pretty(writer, &rows).map_err(|e| Error::Io(e.to_string()))
}

/// Writes the corpus to `path`; `.json` paths get the JSON mirror.
pub fn export_corpus(corpus: &[CitationDistribution], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut writer = BufWriter::new(file);
    if is_json(path) {
        write_corpus_json(corpus, &mut writer)?;
        writer.write_all(b"\n")?;
    } else {
        write_corpus_csv(corpus, &mut writer)?;
    }
    writer.flush()?;
    Ok(())
}
