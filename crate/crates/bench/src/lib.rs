//! Fixtures shared by the planning benchmarks.

use ratioplan_core::rng::SplitMix64;
use ratioplan_core::{
    eval_bound, feasible_k_range, BoundTerms, ClassBudget, ClassInventory, Observation,
    ObservationSet,
};

/// `classes` classes with `per_class` samples each.
pub fn inventory(classes: usize, per_class: usize) -> ClassInventory {
    let pairs = (0..classes)
        .flat_map(|c| (0..per_class).map(move |i| (format!("n{c:05}"), format!("n{c:05}_{i:05}"))));
    ClassInventory::from_pairs(pairs).expect("non-empty inventory")
}

/// Noiseless three-point pilot at N=5000.
pub fn pilot(terms: &BoundTerms) -> ObservationSet {
    let n_total = 5_000;
    let points = [10u64, 50, 200]
        .iter()
        .map(|&k| {
            let x = (k * k) as f64 / n_total as f64;
            Observation::new(x, eval_bound(terms, n_total, k).expect("valid cell"))
        })
        .collect();
    ObservationSet::new(n_total, points)
}

/// Exhaustive argmin of the bound over every feasible class count.
pub fn brute_force_k(terms: &BoundTerms, n_total: u64, budget: &ClassBudget) -> u64 {
    let (lo, hi) = feasible_k_range(n_total, budget).expect("feasible size");
    (lo..=hi)
        .map(|k| (k, eval_bound(terms, n_total, k).expect("valid cell")))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(k, _)| k)
        .expect("non-empty range")
}

/// Gaussian blobs around `centers` random centres in `dim` dimensions.
pub fn blobs(points: usize, centers: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = SplitMix64::new(seed);
    let means: Vec<Vec<f64>> = (0..centers)
        .map(|_| (0..dim).map(|_| 10.0 * rng.next_f64()).collect())
        .collect();
    (0..points)
        .map(|i| {
            means[i % centers]
                .iter()
                .map(|m| m + 0.5 * rng.next_gaussian())
                .collect()
        })
        .collect()
}
