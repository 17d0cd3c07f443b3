use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use citesuccess_core::curve::DEFAULT_MIN_BINS;
use citesuccess_core::ingest::{write_corpus_csv, write_corpus_json};
use citesuccess_core::params::{format_params, read_params_file, write_params_file};
use citesuccess_core::{
    bin_success_curve, estimate_matrix_residuals, fit_k_distribution, fit_uncited_curve,
    generate_synthetic_corpus, impact_factor, load_corpus, log_binned_histogram,
    success_index_exact, success_matrix, summarize_k, synthetic, ArticleCount, BinningConfig,
    CitationDistribution, CorpusConfig, Error, Estimator, EstimatorMode, Family, KFitConfig,
    LoadedCorpus, ModelConstants, SyntheticSpec, UncitedFitConfig,
};

use crate::output::{field, fixed4, fixed6, IndexFormat};
use crate::{Common, FamilyArg, PlotKind};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Fit(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(msg) | CliError::Fit(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Core(err)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Io(_) | Error::Parse { .. } | Error::DuplicateJournal(_)) => 1,
            CliError::Core(Error::Fit(_)) | CliError::Fit(_) => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
        }
    }
}

type CliResult = Result<String, CliError>;

fn corpus_config(common: &Common) -> CorpusConfig {
    CorpusConfig {
        min_articles: common.min_articles,
        if_adjustment: common.adjustment,
        ..Default::default()
    }
}

fn load(common: &Common, path: &Path) -> Result<LoadedCorpus, CliError> {
    load_corpus(path, &corpus_config(common)).map_err(|err| match err {
        Error::Io(msg) => Error::Io(format!("{}: {msg}", path.display())).into(),
        other => other.into(),
    })
}

fn journal<'a>(corpus: &'a LoadedCorpus, id: &str) -> Result<&'a CitationDistribution, CliError> {
    if let Some(i) = corpus.find(id) {
        return Ok(&corpus.distributions[i]);
    }
    match corpus.skipped.iter().find(|s| s.journal_id == id) {
        Some(s) => Err(CliError::Usage(format!(
            "journal `{id}` has {} articles, below --min-articles",
            s.n_articles
        ))),
        None => Err(Error::UnknownJournal(id.to_owned()).into()),
    }
}

/// Published defaults, then the parameter file, then individual flags.
pub fn constants(common: &Common) -> Result<ModelConstants, CliError> {
    let mut constants = match &common.params {
        Some(path) => read_params_file(path)?,
        None => ModelConstants::default(),
    };
    if let Some(v) = common.alpha {
        constants.alpha = v;
    }
    if let Some(v) = common.beta {
        constants.beta = v;
    }
    if let Some(v) = common.q {
        constants.q = v;
    }
    if let Some(v) = common.k {
        constants.k = v;
    }
    constants.validate()?;
    Ok(constants)
}

fn estimator(common: &Common) -> Result<Estimator, CliError> {
    let estimator = Estimator::new(constants(common)?)?;
    Ok(if common.ratio_only {
        estimator.ratio_only()
    } else {
        estimator
    })
}

fn binning(common: &Common, min_pairs: usize) -> Result<BinningConfig, CliError> {
    let config = BinningConfig {
        bin_width: common.bin_width,
        log_base: common.log_base,
        min_pairs,
    };
    config.validate()?;
    Ok(config)
}

fn index_format(common: &Common) -> IndexFormat {
    IndexFormat {
        fraction: common.fraction,
    }
}

pub fn compare(common: &Common, corpus_path: &Path, target: &str, reference: &str) -> CliResult {
    let corpus = load(common, corpus_path)?;
    let t = journal(&corpus, target)?;
    let r = journal(&corpus, reference)?;
    let st = &corpus.summaries[corpus.find(target).unwrap()];
    let sr = &corpus.summaries[corpus.find(reference).unwrap()];
    let forward = success_index_exact(t, r)?.value;
    let backward = success_index_exact(r, t)?.value;

    let estimator = estimator(common)?;
    let fmt = index_format(common);
    let mut out = String::new();
    writeln!(out, "target: {target}").unwrap();
    writeln!(out, "reference: {reference}").unwrap();
    writeln!(
        out,
        "impact_factor: {} / {}",
        fixed4(st.impact_factor),
        fixed4(sr.impact_factor)
    )
    .unwrap();
    writeln!(
        out,
        "uncited_fraction: {} / {}",
        fixed4(st.uncited_fraction),
        fixed4(sr.uncited_fraction)
    )
    .unwrap();
    writeln!(out, "articles: {} / {}", st.n_articles, sr.n_articles).unwrap();
    writeln!(out, "exact: {}", fmt.pair(forward, backward)).unwrap();
    if st.impact_factor > 0.0 && sr.impact_factor > 0.0 {
        let est_forward = estimator
            .estimate(st.impact_factor, sr.impact_factor)?
            .index
            .value;
        let est_backward = estimator
            .estimate(sr.impact_factor, st.impact_factor)?
            .index
            .value;
        writeln!(
            out,
            "estimate_{}: {}",
            estimator.mode.as_str(),
            fmt.pair(est_forward, est_backward)
        )
        .unwrap();
    } else {
        writeln!(
            out,
            "estimate_{}: undefined for a zero impact factor",
            estimator.mode.as_str()
        )
        .unwrap();
    }
    Ok(out)
}

pub fn matrix(
    common: &Common,
    corpus_path: &Path,
    ids: &[String],
    min_if: Option<f64>,
    max_if: Option<f64>,
) -> CliResult {
    let corpus = load(common, corpus_path)?;
    let selected: Vec<CitationDistribution> = if ids.is_empty() {
        corpus
            .distributions
            .iter()
            .zip(&corpus.summaries)
            .filter(|(_, s)| min_if.is_none_or(|lo| s.impact_factor >= lo))
            .filter(|(_, s)| max_if.is_none_or(|hi| s.impact_factor <= hi))
            .map(|(d, _)| d.clone())
            .collect()
    } else {
        let mut picked = ids
            .iter()
            .map(|id| journal(&corpus, id).cloned())
            .collect::<Result<Vec<_>, _>>()?;
        picked.sort_by(|a, b| a.journal_id().cmp(b.journal_id()));
        picked
    };
    if selected.len() < 2 {
        return Err(CliError::Usage(format!(
            "matrix needs at least 2 journals, selection has {}",
            selected.len()
        )));
    }

    let m = success_matrix(&selected)?;
    let fmt = index_format(common);
    let mut out = String::from("journal_id");
    for id in &m.journal_ids {
        write!(out, ",{}", field(id)).unwrap();
    }
    out.push('\n');
    for (t, id) in m.journal_ids.iter().enumerate() {
        out.push_str(&field(id));
        for r in 0..m.len() {
            write!(out, ",{}", fmt.index(m.get(t, r))).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn fit(
    common: &Common,
    corpus_path: &Path,
    output: Option<&Path>,
    reference_min_if: f64,
    min_pairs: usize,
    min_bins: usize,
) -> CliResult {
    let corpus = load(common, corpus_path)?;
    let binning = binning(common, min_pairs)?;
    let kcfg = KFitConfig {
        min_bins: min_bins.max(1),
        ..Default::default()
    };

    let uncited = fit_uncited_curve(&corpus.summaries, &UncitedFitConfig::default())
        .map_err(|e| CliError::Fit(format!("uncited-fraction fit: {e}")))?;
    let fits = fit_k_distribution(
        &corpus.distributions,
        common.adjustment,
        reference_min_if,
        &binning,
        &kcfg,
    )
    .map_err(|e| CliError::Fit(format!("k fit: {e}")))?;
    let summary = summarize_k(&fits)
        .ok_or_else(|| CliError::Fit("k fit: no reference journal produced a fit".into()))?;
    for f in &fits {
        if let Err(e) = &f.outcome {
            eprintln!(
                "warning: k fit for reference `{}` failed: {e}",
                f.reference_id
            );
        }
    }

    let fitted = ModelConstants::new(uncited.params, summary.mean_k)?;
    let mut est = Estimator::new(fitted)?;
    if common.ratio_only {
        est = est.ratio_only();
    }
    let residuals =
        estimate_matrix_residuals(&corpus.distributions, common.adjustment, &est, 0.01)?;

    let fmt = index_format(common);
    let mut out = String::new();
    out.push_str(
        "# uncited_fit\njournals,alpha,beta,q,sum_sq_residual,residual_mean,residual_std\n",
    );
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        uncited.n_journals,
        fixed6(uncited.params.alpha),
        fixed6(uncited.params.beta),
        fixed6(uncited.params.q),
        fixed6(uncited.sum_sq_residual),
        fixed6(uncited.residual_mean),
        fixed6(uncited.residual_std)
    )
    .unwrap();

    out.push_str(
        "# k_fits\nreference_id,impact_factor,k,f0_reference,bins_used,sum_sq_residual,status\n",
    );
    for f in &fits {
        match &f.outcome {
            Ok(fit) => writeln!(
                out,
                "{},{},{},{},{},{},ok",
                field(&f.reference_id),
                fixed4(f.impact_factor),
                fixed6(fit.k),
                fixed4(fit.f0_ref),
                fit.n_bins_used,
                fixed6(fit.sum_sq_residual)
            ),
            Err(_) => writeln!(
                out,
                "{},{},,,,,failed",
                field(&f.reference_id),
                fixed4(f.impact_factor)
            ),
        }
        .unwrap();
    }

    out.push_str("# k_summary\nn_fitted,n_failed,mean_k,std_k\n");
    writeln!(
        out,
        "{},{},{},{}",
        summary.n_fitted,
        summary.n_failed,
        fixed6(summary.mean_k),
        fixed6(summary.std_k)
    )
    .unwrap();

    out.push_str("# residuals\npairs,mean,std_dev,max_abs\n");
    writeln!(
        out,
        "{},{},{},{}",
        residuals.n_pairs,
        fmt.index(residuals.mean),
        fmt.index(residuals.std_dev),
        fmt.index(residuals.max_abs)
    )
    .unwrap();

    let comment = format!(
        "fitted from {} journals ({} k fits)",
        corpus.distributions.len(),
        summary.n_fitted
    );
    out.push_str("# params\n");
    out.push_str(&format_params(&fitted, None));
    if let Some(path) = output {
        write_params_file(path, &fitted, Some(&comment))?;
    }
    Ok(out)
}

pub fn estimate(common: &Common, if_target: f64, if_reference: f64) -> CliResult {
    for (name, value) in [("if_target", if_target), ("if_reference", if_reference)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(CliError::Usage(format!(
                "{name} must be a positive number, got {value}"
            )));
        }
    }
    let estimator = estimator(common)?;
    let forward = estimator.estimate(if_target, if_reference)?;
    let backward = estimator.estimate(if_reference, if_target)?;
    let fmt = index_format(common);

    let mut out = String::new();
    writeln!(out, "if_target: {}", fixed4(if_target)).unwrap();
    writeln!(out, "if_reference: {}", fixed4(if_reference)).unwrap();
    writeln!(out, "ratio_x: {}", fixed6(forward.ratio_x)).unwrap();
    writeln!(out, "f0_reference: {}", fixed4(forward.f0_reference)).unwrap();
    writeln!(out, "f0_target: {}", fixed4(backward.f0_reference)).unwrap();
    writeln!(out, "mode: {}", forward.mode.as_str()).unwrap();
    writeln!(out, "s_forward: {}", fmt.index(forward.index.value)).unwrap();
    writeln!(out, "s_backward: {}", fmt.index(backward.index.value)).unwrap();
    if forward.mode == EstimatorMode::Eq3 && forward.ratio_only_applies() {
        writeln!(
            out,
            "note: f0_reference is below 0.005, so the ratio-only curve (--ratio-only) gives nearly the same s_forward"
        )
        .unwrap();
    }
    Ok(out)
}

pub enum Articles {
    Fixed(u64),
    Range(u64, u64),
}

pub fn gen_synthetic(
    common: &Common,
    journals: usize,
    if_range: (f64, f64),
    articles: Articles,
    family: FamilyArg,
    sigma: f64,
    output: Option<&Path>,
) -> CliResult {
    let constants = constants(common)?;
    let spec = SyntheticSpec {
        n_journals: journals,
        if_range,
        articles_per_journal: match articles {
            Articles::Fixed(n) => ArticleCount::Fixed(n),
            Articles::Range(lo, hi) => ArticleCount::Range(lo, hi),
        },
        family: match family {
            FamilyArg::HurdleGeometric => Family::HurdleGeometric,
            FamilyArg::DiscreteLognormal => Family::DiscreteLognormal,
        },
        seed: common.seed,
        uncited_curve: constants.uncited(),
        lognormal_sigma: sigma,
    };
    let corpus = synthetic::distributions(&generate_synthetic_corpus(&spec)?);

    let json = output.is_some_and(|p| {
        p.extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    });
    let mut bytes = Vec::new();
    if json {
        write_corpus_json(&corpus, &mut bytes)?;
    } else {
        write_corpus_csv(&corpus, &mut bytes)?;
    }
    match output {
        Some(path) => {
            std::fs::write(path, &bytes)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(String::from_utf8(bytes).expect("corpus writers emit UTF-8")),
    }
}

pub struct PlotOptions {
    pub reference: Option<String>,
    pub journal: Option<String>,
    pub bins_per_decade: u32,
    pub min_pairs: usize,
    pub reference_min_if: f64,
    pub k_bin_width: f64,
    pub residual_bin_width: f64,
}

fn required<'a>(value: &'a Option<String>, flag: &str, kind: &str) -> Result<&'a str, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("{kind} needs --{flag}")))
}

pub fn plot_data(
    common: &Common,
    corpus_path: &Path,
    kind: PlotKind,
    opts: &PlotOptions,
) -> CliResult {
    let corpus = load(common, corpus_path)?;
    match kind {
        PlotKind::ReferenceScatter => reference_scatter(
            common,
            &corpus,
            required(&opts.reference, "reference", "reference_scatter")?,
        ),
        PlotKind::Distribution => {
            distribution(&corpus, opts.journal.as_deref(), opts.bins_per_decade)
        }
        PlotKind::SuccessCurve => success_curve(
            common,
            &corpus,
            required(&opts.reference, "reference", "success_curve")?,
            opts.min_pairs,
        ),
        PlotKind::UncitedScatter => uncited_scatter(common, &corpus),
        PlotKind::KHistogram => k_histogram(common, &corpus, opts),
        PlotKind::ResidualHistogram => residual_histogram(common, &corpus, opts.residual_bin_width),
    }
}

fn reference_scatter(common: &Common, corpus: &LoadedCorpus, reference: &str) -> CliResult {
    let r = journal(corpus, reference)?;
    let if_r = impact_factor(r, common.adjustment)?;
    if if_r <= 0.0 {
        return Err(CliError::Usage(format!(
            "reference `{reference}` has impact factor 0"
        )));
    }
    let estimator = estimator(common)?;
    let mut out = String::from("target_id,impact_factor,ratio_x,log_ratio,s_exact,s_estimate\n");
    for (t, summary) in corpus.distributions.iter().zip(&corpus.summaries) {
        if t.journal_id() == reference || summary.impact_factor <= 0.0 {
            continue;
        }
        let x = summary.impact_factor / if_r;
        let exact = success_index_exact(t, r)?.value;
        let est = estimator.estimate(summary.impact_factor, if_r)?.index.value;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            field(t.journal_id()),
            fixed6(summary.impact_factor),
            fixed6(x),
            fixed6(x.log(common.log_base)),
            fixed6(exact),
            fixed6(est)
        )
        .unwrap();
    }
    Ok(out)
}

fn distribution(corpus: &LoadedCorpus, id: Option<&str>, bins_per_decade: u32) -> CliResult {
    let journals: Vec<&CitationDistribution> = match id {
        Some(id) => vec![journal(corpus, id)?],
        None => corpus.distributions.iter().collect(),
    };
    let mut out = String::from("journal_id,lower,upper,center,width,articles,mass,density\n");
    for dist in journals {
        let binned = log_binned_histogram(dist, bins_per_decade)?;
        let name = field(dist.journal_id());
        let zero = dist.count(0);
        if zero > 0 {
            writeln!(
                out,
                "{name},0,1,0,1,{zero},{},{}",
                fixed6(binned.zero_mass),
                fixed6(binned.zero_mass)
            )
            .unwrap();
        }
        for bin in &binned.bins {
            writeln!(
                out,
                "{name},{},{},{},{},{},{},{}",
                fixed6(bin.lower),
                fixed6(bin.upper),
                fixed6(bin.center),
                bin.width,
                bin.articles,
                fixed6(bin.mass),
                fixed6(bin.density)
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn success_curve(
    common: &Common,
    corpus: &LoadedCorpus,
    reference: &str,
    min_pairs: usize,
) -> CliResult {
    let r = journal(corpus, reference)?;
    let if_r = impact_factor(r, common.adjustment)?;
    if if_r <= 0.0 {
        return Err(CliError::Usage(format!(
            "reference `{reference}` has impact factor 0"
        )));
    }
    let mut pairs = Vec::new();
    for (t, summary) in corpus.distributions.iter().zip(&corpus.summaries) {
        if t.journal_id() == reference || summary.impact_factor <= 0.0 {
            continue;
        }
        pairs.push((
            summary.impact_factor / if_r,
            success_index_exact(t, r)?.value,
        ));
    }
    if pairs.is_empty() {
        return Err(CliError::Usage(
            "no target journals with a positive impact factor".into(),
        ));
    }
    let curve = bin_success_curve(&pairs, &binning(common, min_pairs)?)?;
    let estimator = estimator(common)?;
    let mut out = String::from("reference_id,log_ratio_center,ratio_x,s_mean,pair_count,s_model\n");
    for bin in &curve.bins {
        let x = curve.ratio_at(bin);
        let model = estimator.estimate(x * if_r, if_r)?.index.value;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            field(reference),
            fixed6(bin.log_ratio_center),
            fixed6(x),
            fixed6(bin.mean_index),
            bin.pair_count,
            fixed6(model)
        )
        .unwrap();
    }
    Ok(out)
}

fn uncited_scatter(common: &Common, corpus: &LoadedCorpus) -> CliResult {
    let curve = constants(common)?.uncited();
    let mut out = String::from("journal_id,impact_factor,f0_observed,f0_model\n");
    for s in &corpus.summaries {
        writeln!(
            out,
            "{},{},{},{}",
            field(&s.journal_id),
            fixed6(s.impact_factor),
            fixed6(s.uncited_fraction),
            fixed6(curve.predict(s.impact_factor))
        )
        .unwrap();
    }
    Ok(out)
}

fn histogram_rows(values: &[f64], width: f64) -> BTreeMap<i64, u64> {
    let mut counts = BTreeMap::new();
    for v in values {
        *counts.entry((v / width).floor() as i64).or_insert(0) += 1;
    }
    counts
}

fn k_histogram(common: &Common, corpus: &LoadedCorpus, opts: &PlotOptions) -> CliResult {
    if !(opts.k_bin_width.is_finite() && opts.k_bin_width > 0.0) {
        return Err(CliError::Usage("--k-bin-width must be positive".into()));
    }
    let kcfg = KFitConfig {
        min_bins: DEFAULT_MIN_BINS,
        ..Default::default()
    };
    let fits = fit_k_distribution(
        &corpus.distributions,
        common.adjustment,
        opts.reference_min_if,
        &binning(common, opts.min_pairs)?,
        &kcfg,
    )
    .map_err(|e| CliError::Fit(format!("k fit: {e}")))?;
    let ks: Vec<f64> = fits
        .iter()
        .filter_map(|f| f.outcome.as_ref().ok().map(|fit| fit.k))
        .collect();
    if ks.is_empty() {
        return Err(CliError::Fit(
            "k fit: no reference journal produced a fit".into(),
        ));
    }
    let w = opts.k_bin_width;
    let mut out = String::from("k_lower,k_upper,count\n");
    for (slot, count) in histogram_rows(&ks, w) {
        writeln!(
            out,
            "{},{},{count}",
            fixed6(slot as f64 * w),
            fixed6((slot + 1) as f64 * w)
        )
        .unwrap();
    }
    Ok(out)
}

fn residual_histogram(common: &Common, corpus: &LoadedCorpus, width: f64) -> CliResult {
    if corpus.distributions.len() < 2 {
        return Err(CliError::Usage(
            "residual_histogram needs at least 2 journals".into(),
        ));
    }
    let stats = estimate_matrix_residuals(
        &corpus.distributions,
        common.adjustment,
        &estimator(common)?,
        width,
    )?;
    let mut out = String::from("residual_center,count\n");
    for bin in &stats.histogram {
        writeln!(out, "{},{}", fixed6(bin.center), bin.count).unwrap();
    }
    Ok(out)
}
