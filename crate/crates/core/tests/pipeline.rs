//! End-to-end checks through the public API: simulate, fit, plan, compose, account.

use proptest::prelude::*;
use ratioplan_core::planner::implied_builds;
use ratioplan_core::simulator::oracle_argmin;
use ratioplan_core::{
    account_samples, cluster_relabel, fit_from_records, nested_compose, plan_extrapolation,
    plan_theo_optimal, simulate_records, BoundTerms, Build, ClassBudget, ClassInventory,
    DatasetManifest, DedupMode, ExperimentGrid, Method, OracleKind, OracleSpec, PlanResult,
};

fn pilot_grid() -> ExperimentGrid {
    ExperimentGrid {
        n_values: vec![5_000],
        k_values: vec![10, 50, 200],
        replicates: 5,
    }
}

#[test]
fn noiseless_pilot_extrapolates_to_oracle_argmin() {
    let terms = BoundTerms::new(0.9, 1.7, 0.5, 20.0).unwrap();
    let oracle = OracleSpec::new(OracleKind::TwoStep(terms), 0.0, 1);
    let budget = ClassBudget::imagenet();
    let pilot = simulate_records(&oracle, &pilot_grid(), &budget).unwrap();
    assert!(pilot.skipped.is_empty());
    for target in [5_000u64, 20_000, 100_000, 500_000] {
        let plan = plan_extrapolation(&pilot.records, target, &budget).unwrap();
        let (best, _) = oracle_argmin(&oracle.kind, target, &budget).unwrap();
        assert!(
            plan.k.abs_diff(best) <= 1,
            "N={target}: planned {} vs argmin {best}",
            plan.k
        );
        assert_eq!(plan.method, Method::Extrapolation);
        assert_eq!(plan.predicted_error.is_some(), target == 5_000);
    }
}

#[test]
fn theo_optimal_at_target_matches_extrapolation_from_same_records() {
    let terms = BoundTerms::new(2.0, 1.0, 3.0, 10.0).unwrap();
    let oracle = OracleSpec::new(OracleKind::TwoStep(terms), 0.0, 0);
    let budget = ClassBudget::imagenet();
    let records = simulate_records(&oracle, &pilot_grid(), &budget)
        .unwrap()
        .records;
    let theo = plan_theo_optimal(&records, 5_000, &budget).unwrap();
    let extra = plan_extrapolation(&records, 5_000, &budget).unwrap();
    assert_eq!(theo.k, extra.k);
    assert_eq!(theo.predicted_error, extra.predicted_error);

    let builds: Vec<_> = implied_builds(&records, &theo)
        .into_iter()
        .map(|(n_total, k)| Build::Size { n_total, k })
        .collect();
    assert_eq!(
        account_samples(&builds, DedupMode::DisjointSum)
            .unwrap()
            .total_samples,
        4 * 5_000
    );
}

#[test]
fn plan_and_manifest_survive_json() {
    let terms = BoundTerms::new(0.9, 1.7, 0.5, 20.0).unwrap();
    let oracle = OracleSpec::new(OracleKind::TwoStep(terms), 0.3, 9);
    let budget = ClassBudget::imagenet();
    let records = simulate_records(&oracle, &pilot_grid(), &budget)
        .unwrap()
        .records;
    let plan = plan_extrapolation(&records, 100_000, &budget).unwrap();
    let back: PlanResult = serde_json::from_str(&serde_json::to_string(&plan).unwrap()).unwrap();
    assert_eq!(back, plan);

    let inv = ClassInventory::from_pairs(
        (0..5).flat_map(|c| (0..9).map(move |i| (c.to_string(), format!("{c}/{i}")))),
    )
    .unwrap();
    let chain = nested_compose(&inv, &[6, 12, 27], 3, 4).unwrap();
    for m in &chain {
        let back: DatasetManifest =
            serde_json::from_str(&serde_json::to_string(m).unwrap()).unwrap();
        assert_eq!(&back, m);
    }
    let builds: Vec<_> = chain.iter().map(Build::Manifest).collect();
    let union = account_samples(&builds, DedupMode::UnionUnique).unwrap();
    let sum = account_samples(&builds, DedupMode::DisjointSum).unwrap();
    assert_eq!(union.total_samples, 27);
    assert_eq!(sum.total_samples, 45);
}

#[test]
fn clustering_then_counting_classes() {
    let points: Vec<Vec<f64>> = (0..60)
        .map(|i| {
            vec![
                (i % 3) as f64 * 100.0 + (i as f64) * 0.01,
                (i % 3) as f64 * -50.0,
            ]
        })
        .collect();
    let labeled = cluster_relabel(&points, 3, 5, 100, 0.0).unwrap();
    let mut sizes = [0usize; 3];
    for &l in &labeled.labels {
        sizes[l] += 1;
    }
    assert_eq!(sizes, [20, 20, 20]);
    for (i, &l) in labeled.labels.iter().enumerate() {
        assert_eq!(l, labeled.labels[i % 3]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn noiseless_records_recover_optimal_ratio(
        a in 0.2f64..5.0, b in 0.2f64..5.0, c in 0.0f64..5.0, d in 0.0f64..40.0, seed in any::<u64>(),
    ) {
        let terms = BoundTerms::new(a, b, c, d).unwrap();
        let oracle = OracleSpec::new(OracleKind::TwoStep(terms), 0.0, seed);
        let records = simulate_records(&oracle, &pilot_grid(), &ClassBudget::imagenet()).unwrap().records;
        let fit = fit_from_records(&records, 5_000).unwrap();
        let x_bar = fit.law.optimal_ratio().unwrap();
        prop_assert!((x_bar - b * b / (a * a)).abs() <= 1e-8 * (b * b / (a * a)).max(1.0));
    }
}
