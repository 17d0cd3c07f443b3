use citesuccess_core::{
    ccdf, impact_factor, log_binned_histogram, pmf, success_index_brute, success_index_exact,
    success_matrix, uncited_fraction, CitationDistribution,
};
use proptest::prelude::*;

fn distribution(id: &'static str) -> impl Strategy<Value = CitationDistribution> {
    prop::collection::vec((0u64..=50, 1u64..=10), 1..12)
        .prop_map(move |bins| CitationDistribution::from_histogram(id, bins))
        .prop_filter("at most 100 articles", |d| d.n_articles() <= 100)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn exact_matches_brute_force(t in distribution("t"), r in distribution("r")) {
        let exact = success_index_exact(&t, &r).unwrap().value;
        let brute = success_index_brute(&t, &r).unwrap().value;
        prop_assert!((exact - brute).abs() < 1e-12);
    }

    #[test]
    fn antisymmetric_and_reflexive(t in distribution("t"), r in distribution("r")) {
        let forward = success_index_exact(&t, &r).unwrap().value;
        let backward = success_index_exact(&r, &t).unwrap().value;
        prop_assert!((forward + backward - 1.0).abs() < 1e-12);
        prop_assert_eq!(success_index_exact(&t, &t).unwrap().value, 0.5);
        prop_assert!((0.0..=1.0).contains(&forward));
    }

    #[test]
    fn dominance(t in distribution("t"), r in distribution("r")) {
        let gap = r.max_citations().unwrap() + 1 - t.min_citations().unwrap().min(r.max_citations().unwrap() + 1);
        let lifted = t.shifted(gap);
        prop_assert_eq!(success_index_exact(&lifted, &r).unwrap().value, 1.0);
        prop_assert_eq!(success_index_exact(&r, &lifted).unwrap().value, 0.0);
    }

    #[test]
    fn shifting_target_up_never_hurts(t in distribution("t"), r in distribution("r")) {
        let before = success_index_exact(&t, &r).unwrap().value;
        let after = success_index_exact(&t.shifted(1), &r).unwrap().value;
        prop_assert!(after >= before);
    }

    #[test]
    fn scale_invariance(t in distribution("t"), r in distribution("r"), factor in 2u64..50) {
        let s = success_index_exact(&t, &r).unwrap().value;
        let scaled = success_index_exact(&t.scaled(factor), &r.scaled(factor + 1)).unwrap().value;
        prop_assert!((s - scaled).abs() < 1e-12);
        let if_a = impact_factor(&t, 1.04).unwrap();
        let if_b = impact_factor(&t.scaled(factor), 1.04).unwrap();
        prop_assert!((if_a - if_b).abs() <= 1e-12 * if_a.max(1.0));
        prop_assert_eq!(uncited_fraction(&t).unwrap(), uncited_fraction(&t.scaled(factor)).unwrap());
    }

    #[test]
    fn ccdf_is_monotone_and_pmf_sums_to_one(d in distribution("d")) {
        let max = d.max_citations().unwrap();
        let mut previous = 1.0;
        let mut total = 0.0;
        for c in 0..=max + 1 {
            let above = ccdf(&d, c).unwrap();
            prop_assert!(above <= previous);
            previous = above;
            total += pmf(&d, c).unwrap();
            // P(> c-1) = P(c) + P(> c)
            if c > 0 {
                let lhs = ccdf(&d, c - 1).unwrap();
                prop_assert!((lhs - pmf(&d, c).unwrap() - above).abs() < 1e-12);
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert_eq!(ccdf(&d, max).unwrap(), 0.0);
    }

    #[test]
    fn log_binning_conserves_mass(d in distribution("d"), bpd in 1u32..20) {
        let h = log_binned_histogram(&d, bpd).unwrap();
        prop_assert!((h.total_mass() - 1.0).abs() < 1e-9);
        let density_mass: f64 = h.bins.iter().map(|b| b.density * b.width as f64).sum();
        prop_assert!((density_mass + h.zero_mass - 1.0).abs() < 1e-9);
        for pair in h.bins.windows(2) {
            prop_assert!(pair[0].upper <= pair[1].lower + 1e-9);
        }
    }

    #[test]
    fn matrix_is_complementary(a in distribution("a"), b in distribution("b"), c in distribution("c")) {
        let journals = [a, b.renamed("b"), c.renamed("c")];
        let m = success_matrix(&journals).unwrap();
        for i in 0..3 {
            prop_assert_eq!(m.get(i, i), 0.5);
            for j in 0..3 {
                prop_assert_eq!(m.get(i, j) + m.get(j, i), 1.0);
                if i != j {
                    let oracle = success_index_brute(&journals[i], &journals[j]).unwrap().value;
                    prop_assert!((m.get(i, j) - oracle).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn large_journals_use_the_merge_path() {
    // ~10^12 article pairs: far beyond brute force, instant with the merge
    let a = CitationDistribution::from_histogram("a", (0..2000).map(|c| (c, 500)));
    let b = CitationDistribution::from_histogram("b", (0..2000).map(|c| (c * 2, 500)));
    let s = success_index_exact(&a, &b).unwrap().value;
    assert!(success_index_brute(&a, &b).is_err());
    assert!(s > 0.2 && s < 0.3, "{s}");
    assert!((s + success_index_exact(&b, &a).unwrap().value - 1.0).abs() < 1e-12);
}
