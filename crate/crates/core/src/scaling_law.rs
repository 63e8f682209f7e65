//! Closed-form downstream-error bounds and their analytic optimum.
//!
//! The simplified two-step bound is `U = A/√n + B/√K + C/√N + D` with
//! `N = K·n`. At fixed `N` it collapses to the ratio law
//! `U(x) = N^(-1/4)·(A·x^(1/4) + B·x^(-1/4)) + c` in the class-to-sample
//! ratio `x = K/n = K²/N`, minimized at `x̄ = B²/A²` for every `N`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the simplified bound. Values are in error-percent units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundTerms {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl BoundTerms {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        for (what, value) in [("A", a), ("B", b), ("C", c), ("D", d)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidConstant { what, value });
            }
        }
        Ok(Self { a, b, c, d })
    }

    /// Same as [`eval_bound`].
    pub fn eval(&self, n_total: u64, k: u64) -> Result<f64> {
        eval_bound(self, n_total, k)
    }

    /// The ratio law this bound reduces to at a fixed dataset size.
    pub fn ratio_law_at(&self, n_total: u64) -> RatioLaw {
        RatioLaw {
            a: self.a,
            b: self.b,
            c: self.c / (n_total as f64).sqrt() + self.d,
            fitted_at_n: n_total,
        }
    }
}

/// Ratio-form law `U(x) = N^(-1/4)·(A·x^(1/4) + B·x^(-1/4)) + c`.
///
/// `c` absorbs `C/√N + D` and is therefore tied to `fitted_at_n`; `A` and `B`
/// are size-independent. Non-positive `A` or `B` is representable, but such a
/// law has no interior optimum and the optimum methods reject it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioLaw {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub fitted_at_n: u64,
}

impl RatioLaw {
    pub fn new(a: f64, b: f64, c: f64, fitted_at_n: u64) -> Result<Self> {
        for (what, value) in [("A", a), ("B", b), ("c", c)] {
            if !value.is_finite() {
                return Err(Error::InvalidConstant { what, value });
            }
        }
        if fitted_at_n == 0 {
            return Err(Error::NonPositive {
                what: "fitted_at_N",
                value: 0.0,
            });
        }
        Ok(Self {
            a,
            b,
            c,
            fitted_at_n,
        })
    }

    pub fn is_monotone_regime(&self) -> bool {
        !(self.a > 0.0 && self.b > 0.0)
    }

    pub fn eval(&self, x: f64, n_total: u64) -> Result<f64> {
        eval_ratio_law(self, x, n_total)
    }

    pub fn optimal_ratio(&self) -> Result<f64> {
        optimal_ratio(self)
    }

    pub fn optimal_classes(&self, n_total: u64) -> Result<f64> {
        optimal_classes(self, n_total)
    }

    pub fn predicted_min_error(&self, n_total: u64) -> Result<f64> {
        predicted_min_error(self, n_total)
    }

    fn require_interior(&self) -> Result<()> {
        if self.is_monotone_regime() {
            Err(Error::MonotoneRegime {
                a: self.a,
                b: self.b,
            })
        } else {
            Ok(())
        }
    }
}

/// A concrete `(N, K)` configuration with its exact derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiversityPoint {
    pub n_total: u64,
    pub k: u64,
}

impl DiversityPoint {
    pub fn new(n_total: u64, k: u64) -> Result<Self> {
        if n_total == 0 {
            return Err(Error::NonPositive {
                what: "N",
                value: 0.0,
            });
        }
        if k == 0 {
            return Err(Error::NonPositive {
                what: "K",
                value: 0.0,
            });
        }
        Ok(Self { n_total, k })
    }

    /// Samples per class, `n = N/K`.
    pub fn samples_per_class(&self) -> Ratio<u128> {
        Ratio::new(u128::from(self.n_total), u128::from(self.k))
    }

    /// Class-to-sample ratio, `x = K/n = K²/N`.
    pub fn ratio(&self) -> Ratio<u128> {
        let k = u128::from(self.k);
        Ratio::new(k * k, u128::from(self.n_total))
    }

    pub fn samples_per_class_f64(&self) -> f64 {
        ratio_to_f64(self.samples_per_class())
    }

    pub fn ratio_f64(&self) -> f64 {
        ratio_to_f64(self.ratio())
    }
}

fn ratio_to_f64(r: Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Constants of the two-step generalization bound (probability `1 - delta`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Constants {
    pub m_loss: f64,
    pub g: f64,
    pub l_loss: f64,
    pub delta: f64,
    pub nu0: f64,
    pub nu1: f64,
    pub m0: f64,
    pub m1: f64,
    pub c0: f64,
    pub c1: f64,
}

impl Theorem1Constants {
    pub fn validate(&self) -> Result<()> {
        validate_common(self.m_loss, self.g, self.l_loss, self.delta)?;
        for (what, value) in [
            ("nu0", self.nu0),
            ("nu1", self.nu1),
            ("M0", self.m0),
            ("M1", self.m1),
            ("C0", self.c0),
            ("C1", self.c1),
        ] {
            require_nonnegative(what, value)?;
        }
        Ok(())
    }
}

/// Constants of the cluster-relabel bound (probability `1 - delta`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Constants {
    pub m_loss: f64,
    pub g: f64,
    pub l_loss: f64,
    pub delta: f64,
    pub nu0_px: f64,
    pub nu1_px: f64,
    pub c0: f64,
    pub c1: f64,
}

impl Theorem2Constants {
    pub fn validate(&self) -> Result<()> {
        validate_common(self.m_loss, self.g, self.l_loss, self.delta)?;
        for (what, value) in [
            ("nu0", self.nu0_px),
            ("nu1", self.nu1_px),
            ("C0", self.c0),
            ("C1", self.c1),
        ] {
            require_nonnegative(what, value)?;
        }
        Ok(())
    }
}

fn validate_common(m_loss: f64, g: f64, l_loss: f64, delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    for (what, value) in [("M_loss", m_loss), ("G", g), ("L_loss", l_loss)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositive { what, value });
        }
    }
    Ok(())
}

fn require_nonnegative(what: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidConstant { what, value })
    }
}

/// `A/√(N/K) + B/√K + C/√N + D`.
pub fn eval_bound(terms: &BoundTerms, n_total: u64, k: u64) -> Result<f64> {
    let point = DiversityPoint::new(n_total, k)?;
    if k > n_total {
        return Err(Error::SamplesPerClassBelowOne { n: n_total, k });
    }
    let n = point.samples_per_class_f64();
    Ok(terms.a / n.sqrt()
        + terms.b / (k as f64).sqrt()
        + terms.c / (n_total as f64).sqrt()
        + terms.d)
}

/// `N^(-1/4)·(A·x^(1/4) + B·x^(-1/4)) + c`.
pub fn eval_ratio_law(law: &RatioLaw, x: f64, n_total: u64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::NonPositive {
            what: "class-to-sample ratio",
            value: x,
        });
    }
    if n_total == 0 {
        return Err(Error::NonPositive {
            what: "N",
            value: 0.0,
        });
    }
    let t = x.powf(0.25);
    Ok((law.a * t + law.b / t) / (n_total as f64).powf(0.25) + law.c)
}

/// `x̄ = B²/A²`, independent of N.
pub fn optimal_ratio(law: &RatioLaw) -> Result<f64> {
    law.require_interior()?;
    let r = law.b / law.a;
    Ok(r * r)
}

/// `K̄ = (B/A)·√N`, unrounded.
pub fn optimal_classes(law: &RatioLaw, n_total: u64) -> Result<f64> {
    law.require_interior()?;
    if n_total == 0 {
        return Err(Error::NonPositive {
            what: "N",
            value: 0.0,
        });
    }
    Ok(law.b / law.a * (n_total as f64).sqrt())
}

/// Ratio law at its minimizer: `2√(A·B)/N^(1/4) + c`.
pub fn predicted_min_error(law: &RatioLaw, n_total: u64) -> Result<f64> {
    law.require_interior()?;
    if n_total == 0 {
        return Err(Error::NonPositive {
            what: "N",
            value: 0.0,
        });
    }
    Ok(2.0 * (law.a * law.b).sqrt() / (n_total as f64).powf(0.25) + law.c)
}

/// Two-step generalization bound with `K` classes of `n` samples each.
pub fn theorem1_bound(consts: &Theorem1Constants, k: u64, n: u64) -> Result<f64> {
    consts.validate()?;
    if k == 0 || n == 0 {
        return Err(Error::NonPositive {
            what: if k == 0 { "K" } else { "n" },
            value: 0.0,
        });
    }
    let log_term = (4.0 / consts.delta).ln();
    let k = k as f64;
    let n = n as f64;
    let class_conc = (log_term / (2.0 * k)).sqrt();
    let transfer = consts.nu1 + consts.m1 * class_conc + consts.c1 / k.sqrt();
    let estimation = 5.0 * consts.m_loss * (log_term / (2.0 * n)).sqrt()
        + 2.0 * consts.g * consts.l_loss / n.sqrt();
    Ok(transfer * estimation + consts.nu0 + consts.m0 * class_conc + consts.c0 / k.sqrt())
}

/// Cluster-relabel bound: `N` fixed samples labelled into `K` clusters.
///
/// `nu0_px` multiplies the estimation term and `nu1_px` is additive, in the
/// printed arrangement of the bound.
pub fn theorem2_bound(consts: &Theorem2Constants, n_total: u64, k: u64) -> Result<f64> {
    consts.validate()?;
    if k == 0 || n_total == 0 {
        return Err(Error::NonPositive {
            what: if k == 0 { "K" } else { "N" },
            value: 0.0,
        });
    }
    let log_term = (2.0 / consts.delta).ln();
    let k = k as f64;
    let n = n_total as f64;
    let estimation = 5.0 * consts.m_loss * (log_term / (2.0 * n)).sqrt()
        + 2.0 * consts.g * consts.l_loss / n.sqrt();
    Ok((consts.nu0_px + consts.c0 / k.sqrt()) * estimation + consts.nu1_px + consts.c1 / k.sqrt())
}
