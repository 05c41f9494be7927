mod common;

use ck_core::analysis::{coverage_study, wilcoxon_signed_rank, StudyCorpus, TestMethod, WilcoxonError};
use common::wilcoxon_p_enumerated;
use proptest::prelude::*;
use std::collections::BTreeMap;

/// Paired samples with small integer-ish values so ties occur.
fn pairs(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-20i32..20, -20i32..20).prop_map(|(a, b)| (a as f64 / 4.0, b as f64 / 4.0)), n)
}

/// Continuous samples, ties with probability zero.
fn tie_free(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), n)
}

#[test]
fn seven_videos_all_one_direction() {
    let pairs: Vec<(f64, f64)> = [0.82, 0.77, 0.91, 0.64, 0.70, 0.88, 0.75].iter().zip([0.41, 0.52, 0.38, 0.55, 0.47, 0.60, 0.33]).map(|(a, b)| (*a, b)).collect();
    let r = wilcoxon_signed_rank(&pairs).unwrap();
    assert_eq!(r.method, TestMethod::Exact);
    assert_eq!(r.p_two_sided, 2.0 / 128.0);
    assert_eq!(format!("{:.3}", r.p_two_sided), "0.016");
    assert_eq!(r.w, 0.0);
    assert_eq!(r.effect_size, 1.0);
}

#[test]
fn textbook_ten_pairs_match_enumeration() {
    // before/after measurements with one tie in |d| and one zero difference
    let pairs = [(125.0, 110.0), (115.0, 122.0), (130.0, 125.0), (140.0, 120.0), (140.0, 140.0), (115.0, 124.0), (140.0, 123.0), (125.0, 137.0), (140.0, 135.0), (135.0, 145.0)];
    let r = wilcoxon_signed_rank(&pairs).unwrap();
    assert_eq!(r.n_effective, 9);
    assert_eq!(r.zeros_dropped, 1);
    assert_eq!((r.w_plus, r.w_minus), (27.0, 18.0));
    assert!((r.p_two_sided - wilcoxon_p_enumerated(&pairs).unwrap()).abs() < 1e-12);
}

#[test]
fn study_of_seven_synthetic_corpora() {
    let entities: Vec<String> = ["nitrogen", "rhizobia", "nodule", "legume", "ammonia", "enzyme", "oxygen", "soil"].map(String::from).to_vec();
    let corpora: Vec<StudyCorpus> = (0..7)
        .map(|i| StudyCorpus {
            video_id: format!("v{i}"),
            entities: entities.clone(),
            danmaku: entities[..7 - i % 3].iter().map(|e| format!("so the {e} matters")).collect(),
            comments: entities[..3 - i % 3].iter().map(|e| format!("{e}?")).collect(),
            aliases: BTreeMap::new(),
        })
        .collect();
    let st = coverage_study(&corpora).unwrap();
    let t = st.test.as_ref().unwrap();
    assert_eq!(t.p_two_sided, 0.015625);
    assert_eq!(st.direction, "danmaku higher");
    assert!(st.render_table().contains("0.016"));
}

#[test]
fn degenerate_is_an_error() {
    assert_eq!(wilcoxon_signed_rank(&[(1.0, 1.0), (2.0, 2.0)]), Err(WilcoxonError::Degenerate(2)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn exact_p_matches_enumeration(ps in pairs(1..=12)) {
        match (wilcoxon_signed_rank(&ps), wilcoxon_p_enumerated(&ps)) {
            (Ok(r), Some(p)) => {
                prop_assert_eq!(r.method, TestMethod::Exact);
                prop_assert!((r.p_two_sided - p).abs() < 1e-12, "{} vs {}", r.p_two_sided, p);
            }
            (Err(WilcoxonError::Degenerate(_)), None) => {}
            (r, p) => prop_assert!(false, "{:?} vs {:?}", r, p),
        }
    }

    #[test]
    fn p_in_unit_interval_and_effect_rule(ps in pairs(1..=30)) {
        if let Ok(r) = wilcoxon_signed_rank(&ps) {
            prop_assert!((0.0..=1.0).contains(&r.p_two_sided));
            prop_assert!((0.0..=1.0).contains(&r.p_normal));
            prop_assert_eq!(r.w, r.w_plus.min(r.w_minus));
            let n = r.n_effective as f64;
            prop_assert!((r.w_plus + r.w_minus - n * (n + 1.0) / 2.0).abs() < 1e-9);
            match r.method {
                TestMethod::NormalApprox => prop_assert!((r.effect_size - r.z.abs() / n.sqrt()).abs() < 1e-12),
                TestMethod::Exact => prop_assert!((r.effect_size - (r.w_plus - r.w_minus) / (r.w_plus + r.w_minus)).abs() < 1e-12),
            }
        }
    }

    #[test]
    fn swapping_sides_negates_z_and_keeps_p(ps in pairs(1..=30)) {
        let swapped: Vec<(f64, f64)> = ps.iter().map(|(a, b)| (*b, *a)).collect();
        match (wilcoxon_signed_rank(&ps), wilcoxon_signed_rank(&swapped)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.z, -b.z);
                prop_assert_eq!(a.p_two_sided, b.p_two_sided);
                prop_assert_eq!(a.p_normal, b.p_normal);
            }
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn p_invariant_under_monotone_transform(ps in tie_free(1..=12)) {
        // exp(x / 50) is strictly increasing; apply to both sides and compare
        // against the oracle on the transformed values
        let tr: Vec<(f64, f64)> = ps.iter().map(|(a, b)| ((a / 50.0).exp(), (b / 50.0).exp())).collect();
        let orig = wilcoxon_signed_rank(&ps).unwrap();
        let moved = wilcoxon_signed_rank(&tr).unwrap();
        prop_assert_eq!(moved.p_two_sided, wilcoxon_p_enumerated(&tr).unwrap());
        // the signs of the differences are preserved, the ranks may not be;
        // with one-sign data both are maximal
        if ps.iter().all(|(a, b)| a > b) {
            prop_assert_eq!(orig.p_two_sided, moved.p_two_sided);
        }
        // a positive affine map keeps the order of |d|, hence p
        let affine: Vec<(f64, f64)> = ps.iter().map(|(a, b)| (3.0 * a + 7.0, 3.0 * b + 7.0)).collect();
        prop_assert_eq!(orig.p_two_sided, wilcoxon_signed_rank(&affine).unwrap().p_two_sided);
    }

    #[test]
    fn normal_close_to_exact_for_n_7_to_12(ps in tie_free(7..=12)) {
        let r = wilcoxon_signed_rank(&ps).unwrap();
        prop_assert!((r.p_normal - r.p_exact.unwrap()).abs() <= 0.03, "n={} exact={} normal={}", r.n_effective, r.p_exact.unwrap(), r.p_normal);
    }

    #[test]
    fn coverage_monotone_in_texts(extra in prop::collection::vec("[a-z ]{0,12}", 0..5)) {
        let entities: Vec<String> = ["ab", "cd", "efg", "h"].map(String::from).to_vec();
        let base: Vec<String> = vec!["ab and h".into()];
        let mut more = base.clone();
        more.extend(extra);
        let aliases = BTreeMap::new();
        prop_assert!(ck_core::analysis::entity_coverage(&entities, &more, &aliases) >= ck_core::analysis::entity_coverage(&entities, &base, &aliases));
    }
}
