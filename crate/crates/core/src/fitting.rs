//! Estimating a [`RatioLaw`] from `(x, error)` observations at one dataset size.
//!
//! With `t = x^(1/4)` the law is linear in its unknowns,
//! `U = α·t + β/t + c` where `α = A·N^(-1/4)` and `β = B·N^(-1/4)`,
//! so three distinct ratios determine it exactly and more points give a
//! weighted linear least-squares problem.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planner::{aggregate_by_k, PerformanceRecord};
use crate::scaling_law::RatioLaw;

/// Design condition above which a fit is refused.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    /// Class-to-sample ratio `K²/N`.
    pub x: f64,
    /// Downstream error, percent.
    pub error: f64,
    pub weight: f64,
}

impl Observation {
    pub fn new(x: f64, error: f64) -> Self {
        Self {
            x,
            error,
            weight: 1.0,
        }
    }

    pub fn weighted(x: f64, error: f64, weight: f64) -> Self {
        Self { x, error, weight }
    }
}

/// Observations that all share the same pre-training dataset size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationSet {
    pub n_total: u64,
    pub points: Vec<Observation>,
}

impl ObservationSet {
    pub fn new(n_total: u64, points: Vec<Observation>) -> Self {
        Self { n_total, points }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub law: RatioLaw,
    /// Weighted RMS of the residuals `U - U_fit`.
    pub residual_rms: f64,
    pub max_abs_residual: f64,
    /// Ratio of extreme singular values of the weighted design matrix.
    pub design_condition: f64,
    pub monotone_regime: bool,
}

/// Weighted least-squares fit of the ratio law.
///
/// Coefficients are left unconstrained; a non-positive `A` or `B` is
/// reported through `monotone_regime`.
pub fn fit_ratio_law(obs: &ObservationSet) -> Result<FitReport> {
    if obs.n_total == 0 {
        return Err(Error::NonPositive {
            what: "N",
            value: 0.0,
        });
    }
    if obs.points.len() < 3 {
        return Err(Error::Underdetermined(obs.points.len()));
    }
    for p in &obs.points {
        if !(p.x.is_finite() && p.x > 0.0) {
            return Err(Error::NonPositive {
                what: "class-to-sample ratio",
                value: p.x,
            });
        }
        if !(p.weight.is_finite() && p.weight > 0.0) {
            return Err(Error::NonPositive {
                what: "weight",
                value: p.weight,
            });
        }
        if !p.error.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "non-finite error value at x={}",
                p.x
            )));
        }
    }

    // Canonical order makes the result independent of input order, bit for bit.
    let mut points = obs.points.clone();
    points.sort_by(|a, b| {
        a.x.total_cmp(&b.x)
            .then(a.error.total_cmp(&b.error))
            .then(a.weight.total_cmp(&b.weight))
    });
    if let Some(pair) = points.windows(2).find(|w| w[0].x == w[1].x) {
        return Err(Error::SingularDesign(pair[0].x));
    }

    let m = points.len();
    let mut design = DMatrix::<f64>::zeros(m, 3);
    let mut rhs = DVector::<f64>::zeros(m);
    for (i, p) in points.iter().enumerate() {
        let sw = p.weight.sqrt();
        let t = p.x.powf(0.25);
        design[(i, 0)] = sw * t;
        design[(i, 1)] = sw / t;
        design[(i, 2)] = sw;
        rhs[i] = sw * p.error;
    }

    let svd = design.svd(true, true);
    let sv = &svd.singular_values;
    let s_max = sv.max();
    let s_min = sv.min();
    if s_min <= 0.0 {
        return Err(Error::IllConditioned(f64::INFINITY));
    }
    let condition = s_max / s_min;
    if condition > MAX_CONDITION {
        return Err(Error::IllConditioned(condition));
    }
    let coef = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let (alpha, beta, c) = (coef[0], coef[1], coef[2]);

    let mut weighted_sq = 0.0;
    let mut weight_sum = 0.0;
    let mut max_abs: f64 = 0.0;
    for p in &points {
        let t = p.x.powf(0.25);
        let r = p.error - (alpha * t + beta / t + c);
        weighted_sq += p.weight * r * r;
        weight_sum += p.weight;
        max_abs = max_abs.max(r.abs());
    }

    let scale = (obs.n_total as f64).powf(0.25);
    let law = RatioLaw::new(alpha * scale, beta * scale, c, obs.n_total)?;
    Ok(FitReport {
        monotone_regime: law.is_monotone_regime(),
        law,
        residual_rms: (weighted_sq / weight_sum).sqrt(),
        max_abs_residual: max_abs,
        design_condition: condition,
    })
}

/// Builds the observation set from raw records at size `n_total`.
///
/// Replicates of one `K` are averaged and weighted by their count.
pub fn observations_from_records(
    records: &[PerformanceRecord],
    n_total: u64,
) -> Result<ObservationSet> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    if let Some(other) = records.iter().find(|r| r.n_total != n_total) {
        return Err(Error::MixedN(n_total, other.n_total));
    }
    let groups = aggregate_by_k(records)?;
    if groups.len() < 3 {
        return Err(Error::Underdetermined(groups.len()));
    }
    let points = groups
        .iter()
        .map(|g| {
            Observation::weighted(
                (g.k as f64) * (g.k as f64) / n_total as f64,
                g.mean,
                g.count as f64,
            )
        })
        .collect();
    Ok(ObservationSet::new(n_total, points))
}

pub fn fit_from_records(records: &[PerformanceRecord], n_total: u64) -> Result<FitReport> {
    fit_ratio_law(&observations_from_records(records, n_total)?)
}
