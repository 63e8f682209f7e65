//! Choosing the number of pre-training classes for a target dataset size.
//!
//! Five selection methods are provided: the fixed standard choice, grid
//! search over measured records, the analytic optimum of a law fitted at the
//! target size, its empirical re-measurement, and extrapolation of the
//! optimal ratio from a small pilot size.

use std::collections::{BTreeMap, HashSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::composer::DatasetManifest;
use crate::error::{Error, Result};
use crate::fitting::{fit_from_records, FitReport};
use crate::scaling_law::{eval_ratio_law, RatioLaw};

/// One downstream error measurement for a `(task, N, K)` configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceRecord {
    pub task: String,
    #[serde(rename = "N")]
    pub n_total: u64,
    #[serde(rename = "K")]
    pub k: u64,
    pub replicate: u32,
    pub error_percent: f64,
}

impl PerformanceRecord {
    pub fn new(
        task: impl Into<String>,
        n_total: u64,
        k: u64,
        error_percent: f64,
        replicate: u32,
    ) -> Self {
        Self {
            task: task.into(),
            n_total,
            k,
            replicate,
            error_percent,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_total == 0 || self.k == 0 {
            return Err(Error::NonPositive {
                what: if self.k == 0 { "K" } else { "N" },
                value: 0.0,
            });
        }
        if self.k > self.n_total {
            return Err(Error::SamplesPerClassBelowOne {
                n: self.n_total,
                k: self.k,
            });
        }
        if !(0.0..=100.0).contains(&self.error_percent) {
            return Err(Error::InvalidArgument(format!(
                "error_percent {} outside [0, 100]",
                self.error_percent
            )));
        }
        Ok(())
    }
}

/// Replicate statistics for one class count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KGroup {
    pub k: u64,
    pub mean: f64,
    /// Sample standard deviation; zero for a single replicate.
    pub std: f64,
    pub count: usize,
}

/// Groups records by `K` (ascending) with per-group mean and spread.
///
/// Callers are responsible for passing records of a single `N`.
pub fn aggregate_by_k(records: &[PerformanceRecord]) -> Result<Vec<KGroup>> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let mut groups: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for r in records {
        groups.entry(r.k).or_default().push(r.error_percent);
    }
    Ok(groups
        .into_iter()
        .map(|(k, values)| {
            let count = values.len();
            let mean = values.iter().sum::<f64>() / count as f64;
            let std = if count > 1 {
                (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
            } else {
                0.0
            };
            KGroup {
                k,
                mean,
                std,
                count,
            }
        })
        .collect())
}

/// Class inventory limits: how many classes exist and how deep each one is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassBudget {
    pub total_classes: u64,
    pub max_per_class: u64,
}

impl ClassBudget {
    pub fn new(total_classes: u64, max_per_class: u64) -> Result<Self> {
        if total_classes == 0 || max_per_class == 0 {
            return Err(Error::NonPositive {
                what: if total_classes == 0 {
                    "total_classes"
                } else {
                    "max_per_class"
                },
                value: 0.0,
            });
        }
        Ok(Self {
            total_classes,
            max_per_class,
        })
    }

    /// 1000 classes with at most 1300 images each.
    pub fn imagenet() -> Self {
        Self {
            total_classes: 1000,
            max_per_class: 1300,
        }
    }

    pub fn is_feasible(&self, n_total: u64, k: u64) -> bool {
        k >= 1
            && k <= self.total_classes
            && k <= n_total
            && n_total.div_ceil(k) <= self.max_per_class
    }
}

/// Inclusive range of class counts that can realize `n_total` samples.
pub fn feasible_k_range(n_total: u64, budget: &ClassBudget) -> Result<(u64, u64)> {
    if n_total == 0 {
        return Err(Error::NonPositive {
            what: "N",
            value: 0.0,
        });
    }
    let k_min = n_total.div_ceil(budget.max_per_class).max(1);
    let k_max = budget.total_classes.min(n_total);
    if k_min > k_max {
        return Err(Error::Infeasible {
            n: n_total,
            k_min,
            k_max,
        });
    }
    Ok((k_min, k_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Standard,
    GridSearch,
    TheoOptimal,
    EmpOptimal,
    Extrapolation,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Standard => "standard",
            Method::GridSearch => "grid_search",
            Method::TheoOptimal => "theo_optimal",
            Method::EmpOptimal => "emp_optimal",
            Method::Extrapolation => "extrapolation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanWarning {
    /// Fitted law has no interior optimum; K sits on the descending boundary.
    MonotoneRegime,
    /// Rounded optimum fell outside the feasible range and was clamped.
    ClampedToBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub method: Method,
    pub target_n: u64,
    pub k: u64,
    /// Samples per class, `target_n / k`.
    pub n_nominal: Ratio<u64>,
    pub predicted_error: Option<f64>,
    pub clamped: bool,
    pub law_used: Option<RatioLaw>,
    /// Optimal class-to-sample ratio behind an analytic choice.
    pub optimal_ratio: Option<f64>,
    /// Unrounded analytic class count.
    pub k_unrounded: Option<f64>,
    pub warnings: Vec<PlanWarning>,
}

impl PlanResult {
    fn simple(method: Method, target_n: u64, k: u64, predicted_error: Option<f64>) -> Self {
        Self {
            method,
            target_n,
            k,
            n_nominal: Ratio::new(target_n, k),
            predicted_error,
            clamped: false,
            law_used: None,
            optimal_ratio: None,
            k_unrounded: None,
            warnings: Vec::new(),
        }
    }
}

/// Use every class in the inventory.
pub fn plan_standard(budget: &ClassBudget, target_n: u64) -> Result<PlanResult> {
    let (k_min, k_max) = feasible_k_range(target_n, budget)?;
    let k = budget.total_classes;
    if k > k_max {
        return Err(Error::Infeasible {
            n: target_n,
            k_min,
            k_max,
        });
    }
    if !budget.is_feasible(target_n, k) {
        return Err(Error::Infeasible {
            n: target_n,
            k_min,
            k_max: k,
        });
    }
    Ok(PlanResult::simple(Method::Standard, target_n, k, None))
}

fn single_size(records: &[PerformanceRecord]) -> Result<u64> {
    let first = records.first().ok_or(Error::EmptyRecords)?;
    for r in records {
        if r.n_total != first.n_total {
            return Err(Error::MixedN(first.n_total, r.n_total));
        }
        if r.task != first.task {
            return Err(Error::MixedTask(first.task.clone(), r.task.clone()));
        }
    }
    Ok(first.n_total)
}

/// The measured class count with the lowest mean error. Ties go to the smaller `K`.
pub fn plan_grid_search(records: &[PerformanceRecord]) -> Result<PlanResult> {
    let n_total = single_size(records)?;
    let groups = aggregate_by_k(records)?;
    // Groups are ascending in K, so strict < keeps the smaller K on ties.
    let best = groups
        .iter()
        .fold(None::<&KGroup>, |best, g| match best {
            Some(b) if b.mean <= g.mean => Some(b),
            _ => Some(g),
        })
        .ok_or(Error::EmptyRecords)?;
    Ok(PlanResult::simple(
        Method::GridSearch,
        n_total,
        best.k,
        Some(best.mean),
    ))
}

/// Rounds (half to even) and clamps an analytic class count into the feasible range.
///
/// Returns the chosen K and whether clamping moved it.
pub fn round_and_clamp(k_real: f64, target_n: u64, budget: &ClassBudget) -> Result<(u64, bool)> {
    let (k_min, k_max) = feasible_k_range(target_n, budget)?;
    let rounded = k_real.round_ties_even().max(1.0);
    let rounded = if rounded >= u64::MAX as f64 {
        u64::MAX
    } else {
        rounded as u64
    };
    let k = rounded.clamp(k_min, k_max);
    Ok((k, k != rounded))
}

/// Picks the boundary K with the lower law value when there is no interior optimum.
fn monotone_boundary(law: &RatioLaw, target_n: u64, budget: &ClassBudget) -> Result<(u64, f64)> {
    let (k_min, k_max) = feasible_k_range(target_n, budget)?;
    let at = |k: u64| eval_ratio_law(law, (k as f64) * (k as f64) / target_n as f64, target_n);
    let (lo, hi) = (at(k_min)?, at(k_max)?);
    Ok(if hi < lo { (k_max, hi) } else { (k_min, lo) })
}

/// Chooses K from a law valid at `target_n` (its `c` matches that size).
fn plan_from_law(
    method: Method,
    law: RatioLaw,
    target_n: u64,
    budget: &ClassBudget,
) -> Result<PlanResult> {
    if law.is_monotone_regime() {
        let (k, value) = monotone_boundary(&law, target_n, budget)?;
        return Ok(PlanResult {
            predicted_error: Some(value),
            clamped: true,
            law_used: Some(law),
            warnings: vec![PlanWarning::MonotoneRegime],
            ..PlanResult::simple(method, target_n, k, None)
        });
    }
    let x_bar = law.optimal_ratio()?;
    let k_real = law.optimal_classes(target_n)?;
    let (k, clamped) = round_and_clamp(k_real, target_n, budget)?;
    let predicted = if clamped {
        eval_ratio_law(&law, (k as f64) * (k as f64) / target_n as f64, target_n)?
    } else {
        law.predicted_min_error(target_n)?
    };
    Ok(PlanResult {
        predicted_error: Some(predicted),
        clamped,
        law_used: Some(law),
        optimal_ratio: Some(x_bar),
        k_unrounded: Some(k_real),
        warnings: if clamped {
            vec![PlanWarning::ClampedToBudget]
        } else {
            Vec::new()
        },
        ..PlanResult::simple(method, target_n, k, None)
    })
}

/// Fits the ratio law on records measured at the target size and takes its optimum.
///
/// `predicted_error` is the fitted law's minimum, an estimate rather than a measurement.
pub fn plan_theo_optimal(
    records: &[PerformanceRecord],
    target_n: u64,
    budget: &ClassBudget,
) -> Result<PlanResult> {
    single_size(records)?;
    let fit = fit_from_records(records, target_n)?;
    plan_from_law(Method::TheoOptimal, fit.law, target_n, budget)
}

/// Theo-Optimal's class count, re-measured.
///
/// `measure(N, K)` builds and evaluates the dataset (or asks a simulator to).
pub fn plan_emp_optimal<F>(
    records: &[PerformanceRecord],
    target_n: u64,
    budget: &ClassBudget,
    measure: F,
) -> Result<PlanResult>
where
    F: FnOnce(u64, u64) -> Result<f64>,
{
    let theo = plan_theo_optimal(records, target_n, budget)?;
    let measured = measure(target_n, theo.k)?;
    Ok(PlanResult {
        method: Method::EmpOptimal,
        predicted_error: Some(measured),
        ..theo
    })
}

/// Reuses a known optimal ratio for a new target size: `K = round(√(x̄·N))`.
pub fn plan_from_ratio(x_bar: f64, target_n: u64, budget: &ClassBudget) -> Result<PlanResult> {
    if !(x_bar.is_finite() && x_bar > 0.0) {
        return Err(Error::NonPositive {
            what: "optimal ratio",
            value: x_bar,
        });
    }
    let k_real = (x_bar * target_n as f64).sqrt();
    let (k, clamped) = round_and_clamp(k_real, target_n, budget)?;
    Ok(PlanResult {
        clamped,
        optimal_ratio: Some(x_bar),
        k_unrounded: Some(k_real),
        warnings: if clamped {
            vec![PlanWarning::ClampedToBudget]
        } else {
            Vec::new()
        },
        ..PlanResult::simple(Method::Extrapolation, target_n, k, None)
    })
}

/// Fits at the pilot size, then scales the optimal ratio to `target_n`.
///
/// A predicted error is only reported when the target equals the pilot size,
/// since the fitted offset `c` depends on N.
pub fn plan_extrapolation(
    pilot_records: &[PerformanceRecord],
    target_n: u64,
    budget: &ClassBudget,
) -> Result<PlanResult> {
    let pilot_n = single_size(pilot_records)?;
    let fit = fit_from_records(pilot_records, pilot_n)?;
    plan_extrapolation_from_fit(&fit, target_n, budget)
}

pub fn plan_extrapolation_from_fit(
    fit: &FitReport,
    target_n: u64,
    budget: &ClassBudget,
) -> Result<PlanResult> {
    let law = fit.law;
    if law.is_monotone_regime() {
        // Direction of descent in x does not depend on N, only c does.
        let (k, value) = monotone_boundary(&law, target_n, budget)?;
        return Ok(PlanResult {
            predicted_error: (target_n == law.fitted_at_n).then_some(value),
            clamped: true,
            law_used: Some(law),
            warnings: vec![PlanWarning::MonotoneRegime],
            ..PlanResult::simple(Method::Extrapolation, target_n, k, None)
        });
    }
    let mut plan = plan_from_ratio(law.optimal_ratio()?, target_n, budget)?;
    plan.law_used = Some(law);
    if target_n == law.fitted_at_n {
        plan.predicted_error = Some(if plan.clamped {
            eval_ratio_law(&law, (plan.k as f64).powi(2) / target_n as f64, target_n)?
        } else {
            law.predicted_min_error(target_n)?
        });
    }
    Ok(plan)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DedupMode {
    /// Builds are drawn independently; sizes add up.
    DisjointSum,
    /// Shared `(class, sample)` pairs are counted once.
    #[default]
    UnionUnique,
}

/// A dataset build entering the sample account.
#[derive(Debug, Clone, Copy)]
pub enum Build<'a> {
    Manifest(&'a DatasetManifest),
    Size { n_total: u64, k: u64 },
}

impl Build<'_> {
    fn summary(&self) -> BuildSummary {
        match self {
            Build::Manifest(m) => BuildSummary {
                n_total: m.n_total,
                k: m.k,
                size: m.len() as u64,
            },
            Build::Size { n_total, k } => BuildSummary {
                n_total: *n_total,
                k: *k,
                size: *n_total,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildSummary {
    #[serde(rename = "N")]
    pub n_total: u64,
    #[serde(rename = "K")]
    pub k: u64,
    pub size: u64,
}

/// Total samples drawn to produce a set of builds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleAccount {
    pub builds: Vec<BuildSummary>,
    pub dedup_mode: DedupMode,
    pub total_samples: u64,
}

pub fn account_samples(builds: &[Build<'_>], mode: DedupMode) -> Result<SampleAccount> {
    if builds.is_empty() {
        return Err(Error::EmptyBuilds);
    }
    let summaries: Vec<_> = builds.iter().map(Build::summary).collect();
    let total_samples = match mode {
        DedupMode::DisjointSum => summaries.iter().map(|b| b.size).sum(),
        DedupMode::UnionUnique => {
            let mut seen: HashSet<(&str, &str)> = HashSet::new();
            for b in builds {
                let Build::Manifest(m) = b else {
                    return Err(Error::UnionNeedsManifests);
                };
                for (class, sample) in m.pairs() {
                    seen.insert((class, sample));
                }
            }
            seen.len() as u64
        }
    };
    Ok(SampleAccount {
        builds: summaries,
        dedup_mode: mode,
        total_samples,
    })
}

/// Builds implied by a method: the measured configurations it needed plus the final dataset.
///
/// Configurations are keyed by `(N, K)`; the final build is only added when
/// it was not already measured.
pub fn implied_builds(records: &[PerformanceRecord], plan: &PlanResult) -> Vec<(u64, u64)> {
    let mut builds: Vec<(u64, u64)> = records.iter().map(|r| (r.n_total, r.k)).collect();
    builds.sort_unstable();
    builds.dedup();
    let fresh_measurement = plan.method == Method::EmpOptimal;
    if fresh_measurement || !builds.contains(&(plan.target_n, plan.k)) {
        builds.push((plan.target_n, plan.k));
    }
    builds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scaling_law::{eval_bound, BoundTerms};
    use proptest::prelude::*;

    fn rec(n: u64, k: u64, err: f64) -> PerformanceRecord {
        PerformanceRecord::new("cifar10", n, k, err, 0)
    }

    fn noiseless_records(law: &RatioLaw, n_total: u64, ks: &[u64]) -> Vec<PerformanceRecord> {
        ks.iter()
            .map(|&k| {
                let x = (k * k) as f64 / n_total as f64;
                rec(n_total, k, eval_ratio_law(law, x, n_total).unwrap())
            })
            .collect()
    }

    #[test]
    fn feasible_range_examples() {
        assert_eq!(
            feasible_k_range(10_000, &ClassBudget::imagenet()),
            Ok((8, 1000))
        );
        assert_eq!(
            feasible_k_range(4, &ClassBudget::new(2, 2).unwrap()),
            Ok((2, 2))
        );
        assert_eq!(
            feasible_k_range(1_000_000, &ClassBudget::new(500, 1300).unwrap()),
            Err(Error::Infeasible {
                n: 1_000_000,
                k_min: 770,
                k_max: 500
            })
        );
    }

    #[test]
    fn standard_uses_every_class() {
        let plan = plan_standard(&ClassBudget::imagenet(), 50_000).unwrap();
        assert_eq!(plan.k, 1000);
        assert_eq!(plan.n_nominal, Ratio::from_integer(50));
        assert_eq!(
            plan_standard(&ClassBudget::new(2, 2).unwrap(), 4)
                .unwrap()
                .k,
            2
        );
        assert!(matches!(
            plan_standard(&ClassBudget::imagenet(), 2_000_000),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn standard_rejects_more_classes_than_samples() {
        assert!(plan_standard(&ClassBudget::imagenet(), 500).is_err());
    }

    #[test]
    fn grid_search_picks_lowest_error() {
        let plan = plan_grid_search(&[rec(50_000, 200, 26.24), rec(50_000, 1000, 29.19)]).unwrap();
        assert_eq!(plan.k, 200);
        assert_eq!(plan.predicted_error, Some(26.24));
    }

    #[test]
    fn grid_search_ties_go_to_smaller_k() {
        let plan = plan_grid_search(&[rec(1000, 10, 10.0), rec(1000, 5, 10.0)]).unwrap();
        assert_eq!(plan.k, 5);
    }

    #[test]
    fn grid_search_rejects_bad_input() {
        assert_eq!(plan_grid_search(&[]), Err(Error::EmptyRecords));
        assert_eq!(
            plan_grid_search(&[rec(1000, 10, 1.0), rec(2000, 10, 1.0)]),
            Err(Error::MixedN(1000, 2000))
        );
        let mut other = rec(1000, 20, 1.0);
        other.task = "mit67".into();
        assert!(matches!(
            plan_grid_search(&[rec(1000, 10, 1.0), other]),
            Err(Error::MixedTask(..))
        ));
    }

    #[test]
    fn grid_search_matches_exhaustive_scan() {
        let terms = BoundTerms::new(0.9, 1.7, 0.5, 20.0).unwrap();
        let ks = [5u64, 20, 50, 100, 400];
        let records: Vec<_> = ks
            .iter()
            .map(|&k| rec(5000, k, eval_bound(&terms, 5000, k).unwrap()))
            .collect();
        let best = *ks
            .iter()
            .min_by(|&&a, &&b| {
                eval_bound(&terms, 5000, a)
                    .unwrap()
                    .total_cmp(&eval_bound(&terms, 5000, b).unwrap())
            })
            .unwrap();
        assert_eq!(plan_grid_search(&records).unwrap().k, best);
    }

    #[test]
    fn theo_optimal_recovers_planted_optimum() {
        let n = 50_000;
        let law = RatioLaw::new(1.0, 169.0 / (n as f64).sqrt(), 25.0, n).unwrap();
        let records = noiseless_records(&law, n, &[20, 100, 500, 1000]);
        let plan = plan_theo_optimal(&records, n, &ClassBudget::imagenet()).unwrap();
        assert_eq!(plan.k, 169);
        assert!(!plan.clamped);
        let expected = law.predicted_min_error(n).unwrap();
        assert!((plan.predicted_error.unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn theo_optimal_symmetric_law_gives_sqrt_n() {
        let n = 40_000;
        let law = RatioLaw::new(3.0, 3.0, 10.0, n).unwrap();
        let records = noiseless_records(&law, n, &[50, 200, 800]);
        let plan = plan_theo_optimal(&records, n, &ClassBudget::imagenet()).unwrap();
        assert_eq!(plan.k, 200);
    }

    #[test]
    fn theo_optimal_clamps_to_budget() {
        let n = 1_000_000;
        // K̄ = 1.2 · 1000 = 1200 > 1000 classes.
        let law = RatioLaw::new(1.0, 1.2, 5.0, n).unwrap();
        let records = noiseless_records(&law, n, &[800, 1000, 1200]);
        let plan = plan_theo_optimal(&records, n, &ClassBudget::imagenet()).unwrap();
        assert_eq!(plan.k, 1000);
        assert!(plan.clamped);
        assert_eq!(plan.warnings, vec![PlanWarning::ClampedToBudget]);
        assert!((plan.k_unrounded.unwrap() - 1200.0).abs() < 1e-6);
    }

    #[test]
    fn theo_optimal_monotone_regime_takes_descending_boundary() {
        let n = 10_000;
        // A < 0: error keeps decreasing with more classes.
        let records = vec![rec(n, 10, 40.0), rec(n, 100, 35.0), rec(n, 1000, 33.0)];
        let plan = plan_theo_optimal(&records, n, &ClassBudget::imagenet()).unwrap();
        assert!(plan.law_used.unwrap().is_monotone_regime());
        assert_eq!(plan.k, 1000);
        assert!(plan.clamped);
        assert_eq!(plan.warnings, vec![PlanWarning::MonotoneRegime]);

        // B < 0: error grows with more classes.
        let records = vec![rec(n, 10, 30.0), rec(n, 100, 35.0), rec(n, 1000, 45.0)];
        let plan = plan_theo_optimal(&records, n, &ClassBudget::imagenet()).unwrap();
        assert_eq!(plan.k, 8);
    }

    #[test]
    fn extrapolation_reuses_ratio() {
        let x_bar = 190.0f64.powi(2) / 50_000.0;
        let budget = ClassBudget::imagenet();
        assert_eq!(plan_from_ratio(x_bar, 50_000, &budget).unwrap().k, 190);
        assert_eq!(plan_from_ratio(x_bar, 100_000, &budget).unwrap().k, 269);
        assert_eq!(plan_from_ratio(1.0, 10_000, &budget).unwrap().k, 100);
    }

    #[test]
    fn extrapolation_from_noiseless_pilot_matches_brute_force() {
        let terms = BoundTerms::new(0.9, 1.7, 0.5, 20.0).unwrap();
        let pilot: Vec<_> = [10u64, 50, 200]
            .iter()
            .map(|&k| rec(5000, k, eval_bound(&terms, 5000, k).unwrap()))
            .collect();
        let budget = ClassBudget::imagenet();
        for target in [20_000u64, 50_000, 100_000] {
            let plan = plan_extrapolation(&pilot, target, &budget).unwrap();
            let (lo, hi) = feasible_k_range(target, &budget).unwrap();
            let brute = (lo..=hi)
                .min_by(|&a, &b| {
                    eval_bound(&terms, target, a)
                        .unwrap()
                        .total_cmp(&eval_bound(&terms, target, b).unwrap())
                })
                .unwrap();
            assert!(
                plan.k.abs_diff(brute) <= 1,
                "target {target}: {} vs {brute}",
                plan.k
            );
            assert_eq!(plan.predicted_error, None);
        }
    }

    #[test]
    fn extrapolation_rejects_underdetermined_pilot() {
        let pilot = vec![rec(5000, 10, 30.0), rec(5000, 50, 27.0)];
        assert_eq!(
            plan_extrapolation(&pilot, 50_000, &ClassBudget::imagenet()),
            Err(Error::Underdetermined(2))
        );
    }

    #[test]
    fn emp_optimal_keeps_theo_k() {
        let n = 50_000;
        let law = RatioLaw::new(1.0, 169.0 / (n as f64).sqrt(), 25.0, n).unwrap();
        let records = noiseless_records(&law, n, &[20, 100, 500]);
        let plan = plan_emp_optimal(&records, n, &ClassBudget::imagenet(), |nn, k| {
            assert_eq!((nn, k), (n, 169));
            Ok(26.25)
        })
        .unwrap();
        assert_eq!(plan.method, Method::EmpOptimal);
        assert_eq!(plan.k, 169);
        assert_eq!(plan.predicted_error, Some(26.25));
    }

    #[test]
    fn accounting_table_values() {
        let one = account_samples(
            &[Build::Size {
                n_total: 50_000,
                k: 1000,
            }],
            DedupMode::DisjointSum,
        )
        .unwrap();
        assert_eq!(one.total_samples, 50_000);
        let grid: Vec<_> = [200u64, 500, 1000]
            .iter()
            .map(|&k| Build::Size { n_total: 50_000, k })
            .collect();
        assert_eq!(
            account_samples(&grid, DedupMode::DisjointSum)
                .unwrap()
                .total_samples,
            150_000
        );
        assert_eq!(
            account_samples(&grid, DedupMode::UnionUnique),
            Err(Error::UnionNeedsManifests)
        );
        assert_eq!(
            account_samples(&[], DedupMode::DisjointSum),
            Err(Error::EmptyBuilds)
        );
    }

    #[test]
    fn implied_builds_for_grid_search_do_not_double_count() {
        let records = vec![
            rec(50_000, 200, 26.2),
            rec(50_000, 500, 27.0),
            rec(50_000, 1000, 29.2),
        ];
        let plan = plan_grid_search(&records).unwrap();
        assert_eq!(implied_builds(&records, &plan).len(), 3);
    }

    proptest! {
        #[test]
        fn plans_are_feasible_or_clamped(
            a in 0.1f64..10.0, b in 0.1f64..10.0, target in 1_000u64..2_000_000,
        ) {
            let budget = ClassBudget::imagenet();
            let law = RatioLaw::new(a, b, 10.0, 5000).unwrap();
            let Ok(x_bar) = law.optimal_ratio() else { unreachable!() };
            match plan_from_ratio(x_bar, target, &budget) {
                Ok(plan) => prop_assert!(budget.is_feasible(target, plan.k)),
                Err(e) => prop_assert!(matches!(e, Error::Infeasible { .. }), "unexpected {:?}", e),
            }
        }

        #[test]
        fn extrapolation_scales_with_sqrt_n(x_bar in 0.01f64..10.0, target in 100u64..100_000) {
            let budget = ClassBudget::new(u64::MAX / 8, u64::MAX / 8).unwrap();
            let k1 = plan_from_ratio(x_bar, target, &budget).unwrap().k;
            let k4 = plan_from_ratio(x_bar, 4 * target, &budget).unwrap().k;
            prop_assert!(k4.abs_diff(2 * k1) <= 1, "{} vs {}", k4, k1);
        }

        #[test]
        fn grid_search_equals_scan_of_means(
            errors in proptest::collection::vec((0usize..6, 0.0f64..100.0), 1..30),
        ) {
            let ks = [2u64, 5, 10, 20, 50, 100];
            let records: Vec<_> = errors.iter().map(|&(i, e)| rec(1000, ks[i], e)).collect();
            let plan = plan_grid_search(&records).unwrap();
            let groups = aggregate_by_k(&records).unwrap();
            let min = groups.iter().map(|g| g.mean).fold(f64::INFINITY, f64::min);
            let expected = groups.iter().find(|g| g.mean == min).unwrap().k;
            prop_assert_eq!(plan.k, expected);
        }
    }
}
