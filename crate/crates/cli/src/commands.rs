//! Command-line surface.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ratioplan_core::planner::{implied_builds, round_and_clamp};
use ratioplan_core::simulator::{tradeoff_table, TradeoffRow};
use ratioplan_core::{
    account_samples, compose_manifest, eval_bound, eval_ratio_law, evaluate_planner,
    fit_from_records, plan_emp_optimal, plan_extrapolation, plan_grid_search, plan_standard,
    plan_theo_optimal, simulate_records, sweep_tradeoff, theorem1_bound, theorem2_bound,
    BoundTerms, Build, ClassBudget, DatasetManifest, DedupMode, Error, ExperimentGrid, FitReport,
    OracleKind, OracleSpec, PerformanceRecord, PilotDesign, PlanResult, Theorem1Constants,
    Theorem2Constants,
};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::formats::{
    read_budget, read_inventory, read_manifest, read_model, read_records, read_table, table_to_csv,
    write_json, write_records, ModelFile, PlanDocument,
};
use crate::svg::render_tradeoff_svg;

#[derive(Debug, Parser)]
#[command(
    name = "ratioplan",
    version,
    about = "Plan pre-training datasets around the class-to-sample ratio"
)]
pub struct Cli {
    /// Seed for every random choice made by the command.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the ratio law to records measured at one dataset size.
    Fit {
        #[arg(long)]
        records: PathBuf,
        /// Dataset size the records were measured at.
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Optimal ratio and class count for a target size from a fitted model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        target_n: u64,
        #[arg(long)]
        budget: Option<PathBuf>,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Choose K with one of the planning methods and account for the samples used.
    Plan {
        #[arg(long, value_enum)]
        method: PlanMethod,
        #[arg(long)]
        target_n: Option<u64>,
        /// Measured records: pilot runs for extrapolation, target-size runs otherwise.
        #[arg(long)]
        records: Option<PathBuf>,
        /// Re-measurements at the target size, for emp-optimal.
        #[arg(long)]
        measurements: Option<PathBuf>,
        #[arg(long)]
        budget: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a seeded, class-balanced manifest from an inventory.
    Compose {
        /// CSV with `class_id,sample_id` rows.
        #[arg(long)]
        inventory: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate records from a synthetic oracle.
    Simulate {
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        budget: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Error-versus-ratio table, from records or from an oracle.
    Sweep {
        /// Aggregate these records instead of simulating.
        #[arg(long, conflicts_with = "oracle")]
        records: Option<PathBuf>,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        budget: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a trade-off table as an SVG line chart.
    Plot {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Count the samples consumed by a set of builds.
    Account {
        /// Builds given by size, as `N:K` pairs.
        #[arg(long, value_delimiter = ',', conflicts_with = "manifests")]
        sizes: Vec<SizeArg>,
        /// Builds given as manifest files.
        #[arg(long, num_args = 1..)]
        manifests: Vec<PathBuf>,
        /// Defaults to union-unique for manifests and disjoint-sum for sizes.
        #[arg(long, value_enum)]
        mode: Option<AccountMode>,
    },
    /// Evaluate a bound formula.
    Bound(BoundArgs),
    /// Monte Carlo check of the extrapolation planner against an oracle.
    Evaluate {
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, default_value_t = 5_000)]
        pilot_n: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [10u64, 50, 200])]
        pilot_k: Vec<u64>,
        #[arg(long, default_value_t = 5)]
        replicates: u32,
        #[arg(long)]
        target_n: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        budget: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlanMethod {
    Standard,
    GridSearch,
    TheoOptimal,
    EmpOptimal,
    Extrapolation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AccountMode {
    DisjointSum,
    UnionUnique,
}

impl From<AccountMode> for DedupMode {
    fn from(m: AccountMode) -> Self {
        match m {
            AccountMode::DisjointSum => DedupMode::DisjointSum,
            AccountMode::UnionUnique => DedupMode::UnionUnique,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeArg {
    pub n_total: u64,
    pub k: u64,
}

impl std::str::FromStr for SizeArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (n, k) = s
            .split_once(':')
            .ok_or_else(|| format!("expected N:K, got {s:?}"))?;
        let n_total = n
            .trim()
            .parse()
            .map_err(|e| format!("bad N in {s:?}: {e}"))?;
        let k = k
            .trim()
            .parse()
            .map_err(|e| format!("bad K in {s:?}: {e}"))?;
        Ok(SizeArg { n_total, k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleChoice {
    /// `A/√n + B/√K + C/√N + D`.
    TwoStep,
    /// `a/√N + b/√K + c0`.
    Cluster,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub oracle: Option<OracleChoice>,
    #[arg(long = "A", default_value_t = 0.0)]
    pub a: f64,
    #[arg(long = "B", default_value_t = 0.0)]
    pub b: f64,
    #[arg(long = "C", default_value_t = 0.0)]
    pub c: f64,
    #[arg(long = "D", default_value_t = 0.0)]
    pub d: f64,
    /// Constant term of the cluster oracle.
    #[arg(long, default_value_t = 0.0)]
    pub c0: f64,
    /// Noise standard deviation per replicate, in error-percent.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value = "synthetic")]
    pub task: String,
}

impl OracleArgs {
    fn spec(&self, seed: u64) -> Result<OracleSpec> {
        let kind = match self.oracle {
            Some(OracleChoice::TwoStep) => {
                OracleKind::TwoStep(BoundTerms::new(self.a, self.b, self.c, self.d)?)
            }
            Some(OracleChoice::Cluster) => OracleKind::Cluster {
                a: self.a,
                b: self.b,
                c0: self.c0,
            },
            None => return Err(CliError::Validation("--oracle is required".into())),
        };
        Ok(OracleSpec {
            task: self.task.clone(),
            ..OracleSpec::new(kind, self.sigma, seed)
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, value_delimiter = ',', default_values_t = ExperimentGrid::default().n_values)]
    pub n_values: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = ExperimentGrid::default().k_values)]
    pub k_values: Vec<u64>,
    #[arg(long, default_value_t = 5)]
    pub replicates: u32,
}

impl GridArgs {
    fn grid(&self) -> ExperimentGrid {
        ExperimentGrid {
            n_values: self.n_values.clone(),
            k_values: self.k_values.clone(),
            replicates: self.replicates,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    /// Two-step bound in `(K, n)`.
    #[value(name = "1")]
    TwoStep,
    /// Cluster-relabel bound in `(N, K)`.
    #[value(name = "2")]
    ClusterRelabel,
    /// `A/√n + B/√K + C/√N + D`.
    Simplified,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub theorem: BoundKind,
    /// Number of classes.
    #[arg(long)]
    pub k: u64,
    /// Samples per class (theorem 1).
    #[arg(long)]
    pub n: Option<u64>,
    /// Total dataset size (theorem 2 and simplified).
    #[arg(long)]
    pub n_total: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    pub m_loss: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long, default_value_t = 1.0)]
    pub l_loss: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub nu0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub nu1: f64,
    #[arg(long = "M0", default_value_t = 0.0)]
    pub m0: f64,
    #[arg(long = "M1", default_value_t = 0.0)]
    pub m1: f64,
    #[arg(long = "C0", default_value_t = 0.0)]
    pub c0: f64,
    #[arg(long = "C1", default_value_t = 0.0)]
    pub c1: f64,
    #[arg(long = "A", default_value_t = 0.0)]
    pub a: f64,
    #[arg(long = "B", default_value_t = 0.0)]
    pub b: f64,
    #[arg(long = "C", default_value_t = 0.0)]
    pub c: f64,
    #[arg(long = "D", default_value_t = 0.0)]
    pub d: f64,
}

/// Shortest decimal at 12 significant digits, always with a fractional part.
pub fn fmt_num(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    format!("{rounded:?}")
}

fn budget_or_default(path: Option<&Path>) -> Result<ClassBudget> {
    path.map_or(Ok(ClassBudget::imagenet()), read_budget)
}

fn records_at(records: &[PerformanceRecord], n_total: u64) -> Result<()> {
    match records.iter().find(|r| r.n_total != n_total) {
        Some(r) => Err(Error::MixedN(n_total, r.n_total).into()),
        None => Ok(()),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

/// Report printed and optionally written by `predict`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictReport {
    #[serde(rename = "target_N")]
    pub target_n: u64,
    pub optimal_ratio: f64,
    pub k_real: f64,
    #[serde(rename = "K")]
    pub k: u64,
    pub clamped: bool,
    /// Law value at the chosen K, with `c` held at its fitted value.
    pub predicted_error: f64,
    #[serde(rename = "c_fitted_at_N")]
    pub c_fitted_at_n: u64,
}

pub fn predict(model: &ModelFile, target_n: u64, budget: &ClassBudget) -> Result<PredictReport> {
    let law = model.law()?;
    let x_bar = law.optimal_ratio()?;
    let k_real = law.optimal_classes(target_n)?;
    let (k, clamped) = round_and_clamp(k_real, target_n, budget)?;
    let predicted_error =
        eval_ratio_law(&law, (k as f64) * (k as f64) / target_n as f64, target_n)?;
    Ok(PredictReport {
        target_n,
        optimal_ratio: x_bar,
        k_real,
        k,
        clamped,
        predicted_error,
        c_fitted_at_n: law.fitted_at_n,
    })
}

fn mean_measurement(records: &[PerformanceRecord], n_total: u64, k: u64) -> Result<f64> {
    let values: Vec<f64> = records
        .iter()
        .filter(|r| r.n_total == n_total && r.k == k)
        .map(|r| r.error_percent)
        .collect();
    if values.is_empty() {
        return Err(CliError::Validation(format!(
            "no measurement for N={n_total}, K={k}; run it and pass --measurements"
        )));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

fn plan(
    method: PlanMethod,
    target_n: Option<u64>,
    records: &[PerformanceRecord],
    measurements: &[PerformanceRecord],
    budget: &ClassBudget,
) -> Result<PlanResult> {
    let need_target =
        || target_n.ok_or_else(|| CliError::Validation("--target-n is required".into()));
    let need_records = || {
        if records.is_empty() {
            Err(CliError::Validation(
                "--records is required and must not be empty".into(),
            ))
        } else {
            Ok(())
        }
    };
    match method {
        PlanMethod::Standard => Ok(plan_standard(budget, need_target()?)?),
        PlanMethod::GridSearch => {
            need_records()?;
            if let Some(n) = target_n {
                records_at(records, n)?;
            }
            Ok(plan_grid_search(records)?)
        }
        PlanMethod::TheoOptimal => {
            need_records()?;
            Ok(plan_theo_optimal(records, need_target()?, budget)?)
        }
        PlanMethod::EmpOptimal => {
            need_records()?;
            let target = need_target()?;
            let mut missing = None;
            let result = plan_emp_optimal(records, target, budget, |n, k| {
                match mean_measurement(measurements, n, k) {
                    Ok(v) => Ok(v),
                    Err(e) => {
                        missing = Some(e);
                        Err(Error::EmptyRecords)
                    }
                }
            });
            match (result, missing) {
                (_, Some(e)) => Err(e),
                (r, None) => Ok(r?),
            }
        }
        PlanMethod::Extrapolation => {
            need_records()?;
            Ok(plan_extrapolation(records, need_target()?, budget)?)
        }
    }
}

fn plan_report(p: &PlanResult) -> String {
    let mut s = format!(
        "method: {}\ntarget_N: {}\nK: {}\nsamples per class: {} ({})\n",
        p.method.as_str(),
        p.target_n,
        p.k,
        fmt_num(*p.n_nominal.numer() as f64 / *p.n_nominal.denom() as f64),
        p.n_nominal
    );
    if let Some(x) = p.optimal_ratio {
        s += &format!("optimal ratio: {}\n", fmt_num(x));
    }
    if let Some(e) = p.predicted_error {
        s += &format!("predicted error: {}\n", fmt_num(e));
    }
    if p.clamped {
        s += "clamped to budget: yes\n";
    }
    s
}

fn fit_report(fit: &FitReport) -> String {
    let law = &fit.law;
    let mut s = format!(
        "A: {}\nB: {}\nc: {}\nfitted at N: {}\nresidual rms: {}\n",
        fmt_num(law.a),
        fmt_num(law.b),
        fmt_num(law.c),
        law.fitted_at_n,
        fmt_num(fit.residual_rms)
    );
    if fit.monotone_regime {
        s += "warning: fitted law is monotone in the ratio; no interior optimum\n";
    } else if let Ok(x) = law.optimal_ratio() {
        s += &format!("optimal ratio: {}\n", fmt_num(x));
    }
    s
}

fn bound(args: &BoundArgs) -> Result<f64> {
    let need = |v: Option<u64>, flag: &str| {
        v.ok_or_else(|| CliError::Validation(format!("{flag} is required")))
    };
    match args.theorem {
        BoundKind::TwoStep => {
            let consts = Theorem1Constants {
                m_loss: args.m_loss,
                g: args.g,
                l_loss: args.l_loss,
                delta: args.delta,
                nu0: args.nu0,
                nu1: args.nu1,
                m0: args.m0,
                m1: args.m1,
                c0: args.c0,
                c1: args.c1,
            };
            Ok(theorem1_bound(&consts, args.k, need(args.n, "--n")?)?)
        }
        BoundKind::ClusterRelabel => {
            let consts = Theorem2Constants {
                m_loss: args.m_loss,
                g: args.g,
                l_loss: args.l_loss,
                delta: args.delta,
                nu0_px: args.nu0,
                nu1_px: args.nu1,
                c0: args.c0,
                c1: args.c1,
            };
            Ok(theorem2_bound(
                &consts,
                need(args.n_total, "--n-total")?,
                args.k,
            )?)
        }
        BoundKind::Simplified => {
            let terms = BoundTerms::new(args.a, args.b, args.c, args.d)?;
            Ok(eval_bound(
                &terms,
                need(args.n_total, "--n-total")?,
                args.k,
            )?)
        }
    }
}

fn skipped_report(skipped: &[(u64, u64)]) -> String {
    if skipped.is_empty() {
        return String::new();
    }
    let cells: Vec<String> = skipped
        .iter()
        .map(|(n, k)| format!("N={n},K={k}"))
        .collect();
    format!("skipped infeasible cells: {}\n", cells.join(" "))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let seed = cli.seed;
    match cli.command {
        Command::Fit {
            records,
            n,
            out: path,
        } => {
            let records = read_records(&records)?;
            let fit = fit_from_records(&records, n)?;
            write_json(&path, &ModelFile::from_fit(&fit))?;
            emit(out, &fit_report(&fit))
        }
        Command::Predict {
            model,
            target_n,
            budget,
            out: path,
        } => {
            let model = read_model(&model)?;
            let budget = budget_or_default(budget.as_deref())?;
            let report = predict(&model, target_n, &budget)?;
            if let Some(path) = path {
                write_json(&path, &report)?;
            }
            emit(
                out,
                &format!(
                    "optimal ratio: {}\noptimal classes (real): {}\nK: {}{}\npredicted error: {}\n",
                    fmt_num(report.optimal_ratio),
                    fmt_num(report.k_real),
                    report.k,
                    if report.clamped {
                        " (clamped to budget)"
                    } else {
                        ""
                    },
                    fmt_num(report.predicted_error)
                ),
            )
        }
        Command::Plan {
            method,
            target_n,
            records,
            measurements,
            budget,
            out: path,
        } => {
            let records = records
                .as_deref()
                .map(read_records)
                .transpose()?
                .unwrap_or_default();
            let measurements = measurements
                .as_deref()
                .map(read_records)
                .transpose()?
                .unwrap_or_default();
            let budget = budget_or_default(budget.as_deref())?;
            let result = plan(method, target_n, &records, &measurements, &budget)?;
            let sizes = implied_builds(&records, &result);
            let builds: Vec<Build> = sizes
                .iter()
                .map(|&(n_total, k)| Build::Size { n_total, k })
                .collect();
            let accounting = account_samples(&builds, DedupMode::DisjointSum)?;
            let total = accounting.total_samples;
            write_json(&path, &PlanDocument::new(&result, accounting))?;
            emit(
                out,
                &format!("{}samples used: {total}\n", plan_report(&result)),
            )
        }
        Command::Compose {
            inventory,
            n,
            k,
            out: path,
        } => {
            let inventory = read_inventory(&inventory)?;
            let manifest = compose_manifest(&inventory, n, k, seed)?;
            write_json(&path, &manifest)?;
            emit(
                out,
                &format!(
                    "composed {} samples over {} classes (seed {seed})\n",
                    manifest.len(),
                    manifest.k
                ),
            )
        }
        Command::Simulate {
            oracle,
            grid,
            budget,
            out: path,
        } => {
            let spec = oracle.spec(seed)?;
            let budget = budget_or_default(budget.as_deref())?;
            let sim = simulate_records(&spec, &grid.grid(), &budget)?;
            write_records(&path, &sim.records)?;
            emit(
                out,
                &format!(
                    "wrote {} records\n{}",
                    sim.records.len(),
                    skipped_report(&sim.skipped)
                ),
            )
        }
        Command::Sweep {
            records,
            oracle,
            grid,
            budget,
            out: path,
        } => {
            let rows: Vec<TradeoffRow> = match records {
                Some(records) => tradeoff_table(&read_records(&records)?),
                None => {
                    let budget = budget_or_default(budget.as_deref())?;
                    sweep_tradeoff(&oracle.spec(seed)?, &grid.grid(), &budget)?
                }
            };
            std::fs::write(&path, table_to_csv(&rows)).map_err(|e| CliError::io(&path, e))?;
            emit(out, &format!("wrote {} rows\n", rows.len()))
        }
        Command::Plot { table, out: path } => {
            let rows = read_table(&table)?;
            let svg = render_tradeoff_svg(&rows)?;
            std::fs::write(&path, svg).map_err(|e| CliError::io(&path, e))?;
            let series = rows
                .iter()
                .map(|r| r.n_total)
                .collect::<std::collections::BTreeSet<_>>()
                .len();
            emit(
                out,
                &format!("plotted {} points in {series} series\n", rows.len()),
            )
        }
        Command::Account {
            sizes,
            manifests,
            mode,
        } => {
            let loaded: Vec<DatasetManifest> = manifests
                .iter()
                .map(|p| read_manifest(p))
                .collect::<Result<_>>()?;
            let builds: Vec<Build> = if loaded.is_empty() {
                sizes
                    .iter()
                    .map(|s| Build::Size {
                        n_total: s.n_total,
                        k: s.k,
                    })
                    .collect()
            } else {
                loaded.iter().map(Build::Manifest).collect()
            };
            let mode = match mode {
                Some(m) => m.into(),
                None if loaded.is_empty() => DedupMode::DisjointSum,
                None => DedupMode::UnionUnique,
            };
            let account = account_samples(&builds, mode)?;
            let mut s = String::new();
            for b in &account.builds {
                s += &format!("build N={} K={} size={}\n", b.n_total, b.k, b.size);
            }
            s += &format!("total samples: {}\n", account.total_samples);
            emit(out, &s)
        }
        Command::Bound(args) => {
            let value = bound(&args)?;
            emit(out, &format!("{}\n", fmt_num(value)))
        }
        Command::Evaluate {
            oracle,
            pilot_n,
            pilot_k,
            replicates,
            target_n,
            trials,
            budget,
            out: path,
        } => {
            let spec = oracle.spec(seed)?;
            let budget = budget_or_default(budget.as_deref())?;
            let pilot = PilotDesign {
                n_total: pilot_n,
                k_values: pilot_k,
                replicates,
            };
            let eval = evaluate_planner(&spec, &pilot, target_n, trials, &budget)?;
            if let Some(path) = path {
                write_json(&path, &eval)?;
            }
            let within = eval.within_relative(0.15);
            let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), fmt_num);
            emit(
                out,
                &format!(
                    "true argmin K: {}\ntrials: {}\nfailures: {}\nwithin 15% of argmin: {within}\nmedian relative K error: {}\nmedian regret: {}\n",
                    eval.true_argmin_k,
                    eval.trials.len(),
                    eval.failures,
                    opt(eval.median_rel_k_error),
                    opt(eval.median_regret)
                ),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_print_at_twelve_digits() {
        assert_eq!(fmt_num(7.0), "7.0");
        assert_eq!(fmt_num(7.000000000000001), "7.0");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(268.7005768508881), "268.700576851");
        assert_eq!(fmt_num(1e-13), "1e-13");
    }

    #[test]
    fn size_args_parse() {
        assert_eq!(
            "50000:1000".parse::<SizeArg>(),
            Ok(SizeArg {
                n_total: 50000,
                k: 1000
            })
        );
        assert!("50000".parse::<SizeArg>().is_err());
        assert!("a:1".parse::<SizeArg>().is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
