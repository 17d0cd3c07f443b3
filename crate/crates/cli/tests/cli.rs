use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use citesuccess_core::{success_index_brute, CitationDistribution};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_citesuccess"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

/// Value of a `name: value` line.
fn line<'a>(text: &'a str, name: &str) -> &'a str {
    text.lines()
        .find_map(|l| {
            l.strip_prefix(name)
                .and_then(|rest| rest.strip_prefix(": "))
        })
        .unwrap_or_else(|| panic!("no `{name}` in\n{text}"))
}

fn num(text: &str, name: &str) -> f64 {
    line(text, name).parse().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Histogram CSV for journals given as (id, [(citations, articles)]).
fn corpus_csv(journals: &[(&str, &[(u64, u64)])]) -> String {
    let mut text = String::from("journal_id,citations,n_articles\n");
    for (id, bins) in journals {
        for (c, n) in *bins {
            text.push_str(&format!("{id},{c},{n}\n"));
        }
    }
    text
}

#[test]
fn estimate_equal_ifs_is_half() {
    let out = ok(&["estimate", "3.2", "3.2"]);
    assert_eq!(line(&out, "s_forward"), "50.0");
    assert_eq!(line(&out, "s_backward"), "50.0");
    assert_eq!(line(&out, "mode"), "eq3");
}

#[test]
fn estimate_published_pairs() {
    let out = ok(&["estimate", "35.5", "4.46", "--fraction"]);
    assert!((num(&out, "s_forward") - 0.93).abs() <= 0.02, "{out}");
    let out = ok(&["estimate", "5.6", "3.3", "--fraction"]);
    assert!((num(&out, "s_forward") - 0.66).abs() <= 0.04, "{out}");
}

#[test]
fn estimate_rejects_bad_numbers() {
    assert_eq!(code(&["estimate", "-1", "3"]), 2);
    assert_eq!(code(&["estimate", "abc", "3"]), 2);
    assert_eq!(code(&["estimate", "2", "0"]), 2);
    assert_eq!(code(&["estimate", "2", "3", "--k", "-1"]), 2);
}

#[test]
fn estimate_ratio_only_and_note() {
    let out = ok(&["estimate", "300", "200", "--ratio-only"]);
    assert_eq!(line(&out, "mode"), "eq4");
    let out = ok(&["estimate", "300", "200"]);
    assert!(out.contains("note: "), "{out}");
    let out = ok(&["estimate", "3", "2"]);
    assert!(!out.contains("note: "), "{out}");
}

#[test]
fn params_file_and_overrides() {
    let dir = TempDir::new().unwrap();
    let params = write(&dir, "p.txt", "# custom\nk=2.0\n");
    let default = ok(&["estimate", "4", "2", "--fraction"]);
    let from_file = ok(&["estimate", "4", "2", "--fraction", "--params", s(&params)]);
    let from_flag = ok(&["estimate", "4", "2", "--fraction", "--k", "2.0"]);
    assert_ne!(default, from_file);
    assert_eq!(from_file, from_flag);
    let overridden = ok(&["estimate", "4", "2", "--params", s(&params), "--k", "1.23"]);
    assert_eq!(overridden, ok(&["estimate", "4", "2"]));

    let broken = write(&dir, "bad.txt", "k=fast\n");
    assert_eq!(code(&["estimate", "4", "2", "--params", s(&broken)]), 1);
    assert_eq!(
        code(&["estimate", "4", "2", "--params", "/nonexistent/p.txt"]),
        1
    );
}

#[test]
fn compare_with_itself() {
    let dir = TempDir::new().unwrap();
    let corpus = write(
        &dir,
        "c.csv",
        &corpus_csv(&[("A", &[(0, 10), (3, 20), (9, 5)])]),
    );
    let out = ok(&["compare", s(&corpus), "A", "A", "--fraction"]);
    assert_eq!(line(&out, "exact"), "0.5000 / 0.5000");
    assert_eq!(line(&out, "estimate_eq3"), "0.5000 / 0.5000");
}

#[test]
fn compare_matches_brute_force() {
    let a: &[(u64, u64)] = &[(0, 7), (1, 9), (2, 4), (5, 6), (40, 1)];
    let b: &[(u64, u64)] = &[(0, 3), (1, 12), (3, 8), (4, 2), (11, 3)];
    let dir = TempDir::new().unwrap();
    let corpus = write(&dir, "c.csv", &corpus_csv(&[("A", a), ("B", b)]));
    let out = ok(&["compare", s(&corpus), "A", "B", "--fraction"]);
    let da = CitationDistribution::from_histogram("A", a.iter().copied());
    let db = CitationDistribution::from_histogram("B", b.iter().copied());
    let forward = success_index_brute(&da, &db).unwrap().value;
    let backward = success_index_brute(&db, &da).unwrap().value;
    assert_eq!(line(&out, "exact"), format!("{forward:.4} / {backward:.4}"));
    assert_eq!(line(&out, "articles"), "27 / 28");
}

#[test]
fn compare_errors() {
    let dir = TempDir::new().unwrap();
    let corpus = write(
        &dir,
        "c.csv",
        &corpus_csv(&[("A", &[(1, 30)]), ("SMALL", &[(1, 24)])]),
    );
    assert_eq!(code(&["compare", s(&corpus), "A", "MISSING"]), 2);
    let small = run(&["compare", s(&corpus), "A", "SMALL"]);
    assert_eq!(small.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&small.stderr).contains("24 articles"));
    assert_eq!(
        code(&["compare", s(&corpus), "A", "SMALL", "--min-articles", "20"]),
        0
    );

    let broken = write(&dir, "bad.csv", "journal_id,citations,n_articles\nA,x,3\n");
    let out = run(&["compare", s(&broken), "A", "A"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(code(&["compare", "/nonexistent/c.csv", "A", "A"]), 1);
}

fn parse_matrix(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let ids: Vec<String> = lines
        .next()
        .unwrap()
        .split(',')
        .skip(1)
        .map(String::from)
        .collect();
    let rows = lines
        .map(|l| l.split(',').skip(1).map(|v| v.parse().unwrap()).collect())
        .collect();
    (ids, rows)
}

#[test]
fn matrix_of_identical_journals() {
    let bins: &[(u64, u64)] = &[(0, 5), (2, 20), (7, 3)];
    let dir = TempDir::new().unwrap();
    let corpus = write(&dir, "c.csv", &corpus_csv(&[("A", bins), ("B", bins)]));
    let out = ok(&["matrix", s(&corpus), "--fraction"]);
    assert_eq!(out, "journal_id,A,B\nA,0.5000,0.5000\nB,0.5000,0.5000\n");
}

#[test]
#[allow(clippy::needless_range_loop)]
fn matrix_matches_brute_force_and_is_antisymmetric() {
    let dir = TempDir::new().unwrap();
    let corpus = dir.path().join("c.csv");
    ok(&[
        "gen-synthetic",
        "--journals",
        "5",
        "--articles",
        "60",
        "--seed",
        "11",
        "-o",
        s(&corpus),
    ]);
    let out = ok(&["matrix", s(&corpus), "--fraction"]);
    let (ids, rows) = parse_matrix(&out);
    assert_eq!(ids.len(), 5);

    let loaded = citesuccess_core::load_corpus(&corpus, &Default::default()).unwrap();
    for t in 0..5 {
        assert_eq!(rows[t][t], 0.5);
        for r in 0..5 {
            assert!((rows[t][r] + rows[r][t] - 1.0).abs() < 1.5e-4);
            let brute = success_index_brute(&loaded.distributions[t], &loaded.distributions[r])
                .unwrap()
                .value;
            assert!((rows[t][r] - brute).abs() <= 5e-5, "{t},{r}");
        }
    }
}

#[test]
fn matrix_selection() {
    let dir = TempDir::new().unwrap();
    let corpus = write(
        &dir,
        "c.csv",
        &corpus_csv(&[("A", &[(1, 30)]), ("B", &[(4, 30)]), ("C", &[(9, 30)])]),
    );
    let (ids, _) = parse_matrix(&ok(&["matrix", s(&corpus), "--journals", "C,A"]));
    assert_eq!(ids, ["A", "C"]);
    let (ids, _) = parse_matrix(&ok(&["matrix", s(&corpus), "--min-if", "2"]));
    assert_eq!(ids, ["B", "C"]);
    assert_eq!(code(&["matrix", s(&corpus), "--min-if", "5"]), 2);
    assert_eq!(code(&["matrix", s(&corpus), "--journals", "A"]), 2);
    assert_eq!(code(&["matrix", s(&corpus), "--journals", "A,Z"]), 2);
}

#[test]
fn fit_tiny_corpus_fails_cleanly() {
    let dir = TempDir::new().unwrap();
    let corpus = write(
        &dir,
        "c.csv",
        &corpus_csv(&[("A", &[(0, 10), (1, 30)]), ("B", &[(0, 2), (4, 30)])]),
    );
    let out = run(&["fit", s(&corpus)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("uncited-fraction fit"));
}

#[test]
fn fit_writes_params_used_by_estimate() {
    let dir = TempDir::new().unwrap();
    let corpus = dir.path().join("c.csv");
    let params = dir.path().join("p.txt");
    ok(&[
        "gen-synthetic",
        "--journals",
        "200",
        "--articles",
        "400",
        "--seed",
        "5",
        "-o",
        s(&corpus),
    ]);
    let report = ok(&[
        "fit",
        s(&corpus),
        "--reference-min-if",
        "3",
        "-o",
        s(&params),
    ]);
    for section in [
        "# uncited_fit",
        "# k_fits",
        "# k_summary",
        "# residuals",
        "# params",
    ] {
        assert!(report.contains(section), "{report}");
    }
    let text = std::fs::read_to_string(&params).unwrap();
    let k: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("k="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(k > 0.8 && k < 1.5, "{k}");

    let with_file = ok(&["estimate", "5", "2", "--params", s(&params)]);
    let with_flag = ok(&[
        "estimate",
        "5",
        "2",
        "--params",
        s(&params),
        "--k",
        &k.to_string(),
    ]);
    assert_eq!(with_file, with_flag);
    assert_ne!(with_file, ok(&["estimate", "5", "2"]));
}

#[test]
fn gen_synthetic_is_deterministic() {
    let a = ok(&[
        "gen-synthetic",
        "--journals",
        "7",
        "--articles",
        "50",
        "--seed",
        "9",
    ]);
    let b = ok(&[
        "gen-synthetic",
        "--journals",
        "7",
        "--articles",
        "50",
        "--seed",
        "9",
    ]);
    let c = ok(&[
        "gen-synthetic",
        "--journals",
        "7",
        "--articles",
        "50",
        "--seed",
        "10",
    ]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with("journal_id,citations,n_articles\nJ1,"));

    let dir = TempDir::new().unwrap();
    let json = dir.path().join("c.json");
    ok(&[
        "gen-synthetic",
        "--journals",
        "7",
        "--articles-min",
        "30",
        "--articles-max",
        "80",
        "--family",
        "discrete-lognormal",
        "-o",
        s(&json),
    ]);
    let loaded = citesuccess_core::load_corpus(&json, &Default::default()).unwrap();
    assert_eq!(loaded.input_journal_count(), 7);
}

#[test]
fn plot_distribution_of_uncited_journal() {
    let dir = TempDir::new().unwrap();
    let corpus = write(&dir, "c.csv", &corpus_csv(&[("Z", &[(0, 10)])]));
    let out = ok(&[
        "plot-data",
        s(&corpus),
        "distribution",
        "--min-articles",
        "1",
    ]);
    assert_eq!(
        out,
        "journal_id,lower,upper,center,width,articles,mass,density\nZ,0,1,0,1,10,1.000000,1.000000\n"
    );
}

#[test]
fn plot_success_curve_centered_at_half() {
    let bins: &[(u64, u64)] = &[(0, 4), (1, 10), (3, 10), (8, 6)];
    let journals: Vec<(String, &[(u64, u64)])> = (0..4).map(|i| (format!("J{i}"), bins)).collect();
    let refs: Vec<(&str, &[(u64, u64)])> =
        journals.iter().map(|(id, b)| (id.as_str(), *b)).collect();
    let dir = TempDir::new().unwrap();
    let corpus = write(&dir, "c.csv", &corpus_csv(&refs));
    let out = ok(&[
        "plot-data",
        s(&corpus),
        "success_curve",
        "--reference",
        "J0",
    ]);
    assert_eq!(
        out,
        "reference_id,log_ratio_center,ratio_x,s_mean,pair_count,s_model\n\
         J0,0.000000,1.000000,0.500000,3,0.500000\n"
    );
}

#[test]
fn plot_kinds_on_synthetic_corpus() {
    let dir = TempDir::new().unwrap();
    let corpus = dir.path().join("c.csv");
    ok(&[
        "gen-synthetic",
        "--journals",
        "120",
        "--articles",
        "300",
        "--seed",
        "2",
        "-o",
        s(&corpus),
    ]);
    let headers = [
        (
            "reference_scatter",
            "target_id,impact_factor,ratio_x,log_ratio,s_exact,s_estimate",
        ),
        (
            "distribution",
            "journal_id,lower,upper,center,width,articles,mass,density",
        ),
        (
            "success_curve",
            "reference_id,log_ratio_center,ratio_x,s_mean,pair_count,s_model",
        ),
        (
            "uncited_scatter",
            "journal_id,impact_factor,f0_observed,f0_model",
        ),
        ("k_histogram", "k_lower,k_upper,count"),
        ("residual_histogram", "residual_center,count"),
    ];
    for (kind, header) in headers {
        let out = ok(&[
            "plot-data",
            s(&corpus),
            kind,
            "--reference",
            "J001",
            "--reference-min-if",
            "3",
        ]);
        assert_eq!(out.lines().next(), Some(header), "{kind}");
        assert!(out.lines().count() > 1, "{kind}");
        let again = ok(&[
            "plot-data",
            s(&corpus),
            kind,
            "--reference",
            "J001",
            "--reference-min-if",
            "3",
        ]);
        assert_eq!(out, again, "{kind} not deterministic");
    }

    let scatter = ok(&["plot-data", s(&corpus), "uncited_scatter"]);
    for row in scatter.lines().skip(1) {
        let cells: Vec<f64> = row.split(',').skip(2).map(|c| c.parse().unwrap()).collect();
        assert!((cells[0] - cells[1]).abs() < 0.08, "{row}");
    }

    assert_eq!(code(&["plot-data", s(&corpus), "bogus"]), 2);
    assert_eq!(code(&["plot-data", s(&corpus), "reference_scatter"]), 2);
}

#[test]
fn help_documents_columns() {
    let cases = [
        (
            "compare",
            vec!["exact", "uncited_fraction", "estimate_<mode>"],
        ),
        ("matrix", vec!["journal_id", "diagonal"]),
        (
            "fit",
            vec!["reference_id", "mean_k", "residual_std", "# params"],
        ),
        (
            "estimate",
            vec!["s_forward", "s_backward", "f0_reference", "ratio_x", "mode"],
        ),
        (
            "gen-synthetic",
            vec!["journal_id,citations,n_articles", "--seed"],
        ),
        (
            "plot-data",
            vec![
                "target_id,impact_factor",
                "residual_center,count",
                "k_lower,k_upper,count",
            ],
        ),
    ];
    for (sub, needles) in cases {
        let help = ok(&[sub, "--help"]);
        for flag in [
            "--min-articles",
            "--adjustment",
            "--bin-width",
            "--log-base",
            "--params",
            "--fraction",
        ] {
            assert!(help.contains(flag), "{sub} help lacks {flag}");
        }
        for needle in needles {
            assert!(help.contains(needle), "{sub} help lacks {needle}");
        }
    }
}

#[test]
fn estimate_prints_the_library_values() {
    use citesuccess_core::{Estimator, ModelConstants};
    let estimator = Estimator::new(ModelConstants {
        k: 1.4,
        ..Default::default()
    })
    .unwrap();
    for (t, r) in [(5.6, 3.3), (0.2, 40.0), (12.0, 1.1)] {
        let out = ok(&[
            "estimate",
            &t.to_string(),
            &r.to_string(),
            "--fraction",
            "--k",
            "1.4",
        ]);
        let forward = estimator.estimate(t, r).unwrap();
        let backward = estimator.estimate(r, t).unwrap();
        assert_eq!(
            line(&out, "s_forward"),
            format!("{:.4}", forward.index.value)
        );
        assert_eq!(
            line(&out, "s_backward"),
            format!("{:.4}", backward.index.value)
        );
        assert_eq!(
            line(&out, "f0_reference"),
            format!("{:.4}", forward.f0_reference)
        );
    }
}
