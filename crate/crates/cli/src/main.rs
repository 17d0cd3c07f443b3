use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use commands::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "citesuccess",
    version,
    about = "Citation success index: exact comparison of journals, model fitting and IF-only estimates",
    long_about = "Citation success index: the probability that a random article of a target \
journal has more citations than a random article of a reference journal, ties counted half.\n\n\
Corpus files are CSV with header `journal_id,citations,n_articles` (one row per citation value) \
or `journal_id,citations` (one row per article), or a `.json` array of objects with the same \
fields.\n\n\
Index values print as percentages with one decimal unless --fraction is given.\n\n\
Exit codes: 0 success, 1 I/O or parse failure, 2 usage or domain error, 3 fit failure."
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Drop journals with fewer articles than this after loading a corpus.
    #[arg(long, global = true, default_value_t = 25)]
    pub min_articles: u64,

    /// Multiplier on citations per article when computing impact factors.
    #[arg(long, global = true, default_value_t = 1.04)]
    pub adjustment: f64,

    /// Width of the log-ratio bins used to fit and plot the success curve.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub bin_width: f64,

    /// Base of the logarithm used for log-ratio bins.
    #[arg(long, global = true, default_value_t = 10.0)]
    pub log_base: f64,

    /// key=value file with alpha, beta, q and k (as written by `fit --output`).
    #[arg(long, global = true, value_name = "FILE")]
    pub params: Option<PathBuf>,

    /// Seed for synthetic generation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Print index values as fractions with four decimals instead of percentages.
    #[arg(long, global = true)]
    pub fraction: bool,

    /// Override the uncited-fraction exponent alpha.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,

    /// Override the uncited-fraction exponent beta.
    #[arg(long, global = true)]
    pub beta: Option<f64>,

    /// Override the uncited-fraction scale q.
    #[arg(long, global = true)]
    pub q: Option<f64>,

    /// Override the success-curve steepness k.
    #[arg(long, global = true)]
    pub k: Option<f64>,

    /// Estimate with the ratio-only curve, ignoring the uncited plateau.
    #[arg(long, global = true)]
    pub ratio_only: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact index of two journals in both directions, with the IF-only estimate.
    ///
    /// Output lines (`name: value`, target first, then reference):
    ///   target            target journal id
    ///   reference         reference journal id
    ///   impact_factor     IF of target / IF of reference
    ///   uncited_fraction  observed share of uncited articles, target / reference
    ///   articles          article counts, target / reference
    ///   exact             S(target over reference) / S(reference over target)
    ///   estimate_<mode>   the same two directions from the IF-only estimator;
    ///                     <mode> is eq3 (plateau curve) or eq4 (--ratio-only)
    Compare {
        /// Corpus file (CSV or JSON).
        corpus: PathBuf,
        /// Target journal id.
        target: String,
        /// Reference journal id.
        reference: String,
    },

    /// Matrix of exact indices as CSV.
    ///
    /// The header row is `journal_id` followed by the selected journal ids.
    /// Each following row starts with a journal id; the cell in column j is
    /// the index of the row journal over the column journal. The diagonal is
    /// 0.5 and cell (i, j) plus cell (j, i) is 1. Journals are sorted by id.
    Matrix {
        /// Corpus file (CSV or JSON).
        corpus: PathBuf,
        /// Comma-separated journal ids; defaults to every journal in the IF range.
        #[arg(long, value_delimiter = ',')]
        journals: Vec<String>,
        /// Keep journals with impact factor at least this value.
        #[arg(long)]
        min_if: Option<f64>,
        /// Keep journals with impact factor at most this value.
        #[arg(long)]
        max_if: Option<f64>,
    },

    /// Fit the uncited-fraction curve and the success-curve steepness k.
    ///
    /// The report has four sections, each a `# name` line followed by CSV:
    ///   # uncited_fit    journals,alpha,beta,q,sum_sq_residual,residual_mean,residual_std
    ///                    (residuals are observed minus fitted uncited fractions)
    ///   # k_fits         reference_id,impact_factor,k,f0_reference,bins_used,sum_sq_residual,status
    ///                    one row per reference journal; status is ok or failed and
    ///                    failed rows leave the numeric fit columns empty
    ///   # k_summary      n_fitted,n_failed,mean_k,std_k
    ///   # residuals      pairs,mean,std_dev,max_abs
    ///                    estimated minus exact index over every ordered pair, using
    ///                    the fitted alpha, beta, q and mean k
    ///   # params         the fitted constants in parameter-file form
    ///
    /// Failures of either fit stage exit with code 3.
    Fit {
        /// Corpus file (CSV or JSON).
        corpus: PathBuf,
        /// Write the fitted constants to this parameter file.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Only journals with impact factor above this value act as references for k.
        #[arg(long, default_value_t = 0.0)]
        reference_min_if: f64,
        /// Drop log-ratio bins with fewer target journals than this.
        #[arg(long, default_value_t = 3)]
        min_pairs: usize,
        /// Minimum number of bins a reference needs for its k fit.
        #[arg(long, default_value_t = 5)]
        min_bins: usize,
    },

    /// IF-only estimate of the index in both directions.
    ///
    /// Output lines (`name: value`):
    ///   if_target      impact factor of the target journal
    ///   if_reference   impact factor of the reference journal
    ///   ratio_x        if_target / if_reference
    ///   f0_reference   uncited fraction predicted from if_reference
    ///   f0_target      uncited fraction predicted from if_target
    ///   mode           eq3 (plateau curve) or eq4 (--ratio-only)
    ///   s_forward      estimated index of the target over the reference
    ///   s_backward     estimated index of the reference over the target
    ///   note           present when f0_reference is small enough that the
    ///                  ratio-only curve agrees with the plateau curve
    #[command(allow_negative_numbers = true)]
    Estimate {
        /// Impact factor of the target journal.
        if_target: f64,
        /// Impact factor of the reference journal.
        if_reference: f64,
    },

    /// Generate a synthetic corpus in the histogram CSV layout (JSON if the
    /// output path ends in .json).
    ///
    /// Each journal draws its impact factor log-uniformly from the range; its
    /// uncited share follows the uncited-fraction curve (--alpha, --beta, --q)
    /// and cited articles follow the chosen family. Output columns:
    /// journal_id,citations,n_articles, sorted by journal and citation count.
    GenSynthetic {
        /// Number of journals.
        #[arg(long, default_value_t = 100)]
        journals: usize,
        /// Smallest impact factor.
        #[arg(long, default_value_t = 0.3)]
        if_min: f64,
        /// Largest impact factor.
        #[arg(long, default_value_t = 30.0)]
        if_max: f64,
        /// Articles per journal.
        #[arg(long, default_value_t = 1000, conflicts_with_all = ["articles_min", "articles_max"])]
        articles: u64,
        /// Draw articles per journal uniformly from [articles-min, articles-max].
        #[arg(long, requires = "articles_max")]
        articles_min: Option<u64>,
        #[arg(long, requires = "articles_min")]
        articles_max: Option<u64>,
        /// Distribution of citations among cited articles.
        #[arg(long, value_enum, default_value_t = FamilyArg::HurdleGeometric)]
        family: FamilyArg,
        /// Log-scale spread of the discrete lognormal family.
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Output file; standard output when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },

    /// CSV series for plotting. Real-valued columns are fractions with six decimals.
    ///
    /// Columns by kind:
    ///   reference_scatter   target_id,impact_factor,ratio_x,log_ratio,s_exact,s_estimate
    ///                       every journal against --reference; log_ratio uses --log-base
    ///   distribution        journal_id,lower,upper,center,width,articles,mass,density
    ///                       logarithmic bins of --journal (all journals when absent);
    ///                       the first row of each journal holds uncited articles with
    ///                       lower=0, upper=1, center=0, width=1
    ///   success_curve       reference_id,log_ratio_center,ratio_x,s_mean,pair_count,s_model
    ///                       exact indices over --reference averaged in log-ratio bins;
    ///                       s_model is the IF-only estimate at the bin's ratio
    ///   uncited_scatter     journal_id,impact_factor,f0_observed,f0_model
    ///   k_histogram         k_lower,k_upper,count
    ///                       fitted k of every reference, in bins of --k-bin-width
    ///   residual_histogram  residual_center,count
    ///                       estimated minus exact index over all ordered pairs
    PlotData {
        /// Corpus file (CSV or JSON).
        corpus: PathBuf,
        /// Series to emit.
        #[arg(value_enum)]
        kind: PlotKind,
        /// Reference journal for reference_scatter and success_curve.
        #[arg(long)]
        reference: Option<String>,
        /// Journal for distribution.
        #[arg(long)]
        journal: Option<String>,
        /// Logarithmic bins per decade for distribution.
        #[arg(long, default_value_t = 10)]
        bins_per_decade: u32,
        /// Drop success_curve and k-fit bins with fewer target journals than this.
        #[arg(long, default_value_t = 3)]
        min_pairs: usize,
        /// Only journals with impact factor above this value act as references for k_histogram.
        #[arg(long, default_value_t = 0.0)]
        reference_min_if: f64,
        /// Bin width of k_histogram.
        #[arg(long, default_value_t = 0.05)]
        k_bin_width: f64,
        /// Bin width of residual_histogram.
        #[arg(long, default_value_t = 0.01)]
        residual_bin_width: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    HurdleGeometric,
    DiscreteLognormal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum PlotKind {
    ReferenceScatter,
    Distribution,
    SuccessCurve,
    UncitedScatter,
    KHistogram,
    ResidualHistogram,
}

fn run(cli: Cli) -> Result<String, CliError> {
    let common = &cli.common;
    match cli.command {
        Command::Compare {
            corpus,
            target,
            reference,
        } => commands::compare(common, &corpus, &target, &reference),
        Command::Matrix {
            corpus,
            journals,
            min_if,
            max_if,
        } => commands::matrix(common, &corpus, &journals, min_if, max_if),
        Command::Fit {
            corpus,
            output,
            reference_min_if,
            min_pairs,
            min_bins,
        } => commands::fit(
            common,
            &corpus,
            output.as_deref(),
            reference_min_if,
            min_pairs,
            min_bins,
        ),
        Command::Estimate {
            if_target,
            if_reference,
        } => commands::estimate(common, if_target, if_reference),
        Command::GenSynthetic {
            journals,
            if_min,
            if_max,
            articles,
            articles_min,
            articles_max,
            family,
            sigma,
            output,
        } => {
            let articles = match (articles_min, articles_max) {
                (Some(lo), Some(hi)) => commands::Articles::Range(lo, hi),
                _ => commands::Articles::Fixed(articles),
            };
            commands::gen_synthetic(
                common,
                journals,
                (if_min, if_max),
                articles,
                family,
                sigma,
                output.as_deref(),
            )
        }
        Command::PlotData {
            corpus,
            kind,
            reference,
            journal,
            bins_per_decade,
            min_pairs,
            reference_min_if,
            k_bin_width,
            residual_bin_width,
        } => commands::plot_data(
            common,
            &corpus,
            kind,
            &commands::PlotOptions {
                reference,
                journal,
                bins_per_decade,
                min_pairs,
                reference_min_if,
                k_bin_width,
                residual_bin_width,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
