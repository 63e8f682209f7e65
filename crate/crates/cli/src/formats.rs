//! On-disk formats.
//!
//! CSV for records, inventories and trade-off tables; pretty JSON for models,
//! plans, budgets and manifests.

use std::fs;
use std::io::Read;
use std::path::Path;

use ratioplan_core::planner::{PlanWarning, SampleAccount};
use ratioplan_core::simulator::TradeoffRow;
use ratioplan_core::{
    ClassBudget, ClassInventory, DatasetManifest, FitReport, Method, PerformanceRecord, PlanResult,
    RatioLaw,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const MODEL_SCHEMA_VERSION: u32 = 1;
pub const RECORDS_HEADER: [&str; 5] = ["task", "N", "K", "replicate", "error_percent"];

fn read_to_string(path: &Path) -> Result<String> {
    let mut s = String::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|e| CliError::io(path, e))?;
    Ok(s)
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_to_string(path)?).map_err(|e| CliError::parse(path, e.to_string()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable document");
    bytes.push(b'\n');
    write_bytes(path, &bytes)
}

fn csv_line(err: &csv::Error) -> String {
    err.position()
        .map(|p| format!("line {}: ", p.line()))
        .unwrap_or_default()
}

fn check_header(path: &Path, found: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    if found.iter().map(str::trim).ne(expected.iter().copied()) {
        return Err(CliError::parse(
            path,
            format!(
                "line 1: expected header {}, found {}",
                expected.join(","),
                found.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    Ok(())
}

pub fn parse_records(path: &Path, text: &str) -> Result<Vec<PerformanceRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CliError::parse(path, format!("{}{e}", csv_line(&e))))?
        .clone();
    check_header(path, &header, &RECORDS_HEADER)?;
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| CliError::parse(path, format!("{}{e}", csv_line(&e))))?;
        let line = row.position().map_or(0, |p| p.line());
        let record: PerformanceRecord = row
            .deserialize(Some(&header))
            .map_err(|e| CliError::parse(path, format!("line {line}: {e}")))?;
        record
            .validate()
            .map_err(|e| CliError::parse(path, format!("line {line}: {e}")))?;
        records.push(record);
    }
    Ok(records)
}

pub fn read_records(path: &Path) -> Result<Vec<PerformanceRecord>> {
    parse_records(path, &read_to_string(path)?)
}

pub fn records_to_csv(records: &[PerformanceRecord]) -> Vec<u8> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    writer
        .write_record(RECORDS_HEADER)
        .expect("in-memory write");
    for r in records {
        writer.serialize(r).expect("in-memory write");
    }
    writer.into_inner().expect("in-memory flush")
}

pub fn write_records(path: &Path, records: &[PerformanceRecord]) -> Result<()> {
    write_bytes(path, &records_to_csv(records))
}

#[derive(Debug, Deserialize)]
struct InventoryRow {
    class_id: String,
    sample_id: String,
}

/// `class_id,sample_id` rows.
pub fn read_inventory(path: &Path) -> Result<ClassInventory> {
    let text = read_to_string(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CliError::parse(path, format!("{}{e}", csv_line(&e))))?
        .clone();
    check_header(path, &header, &["class_id", "sample_id"])?;
    let mut pairs = Vec::new();
    for row in reader.deserialize::<InventoryRow>() {
        let row = row.map_err(|e| CliError::parse(path, format!("{}{e}", csv_line(&e))))?;
        pairs.push((row.class_id, row.sample_id));
    }
    ClassInventory::from_pairs(pairs).map_err(|e| CliError::parse(path, e.to_string()))
}

pub const TABLE_HEADER: [&str; 6] = ["N", "K", "x", "mean_error", "std_error", "replicates"];

pub fn table_to_csv(rows: &[TradeoffRow]) -> Vec<u8> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    writer.write_record(TABLE_HEADER).expect("in-memory write");
    for r in rows {
        writer.serialize(r).expect("in-memory write");
    }
    writer.into_inner().expect("in-memory flush")
}

pub fn read_table(path: &Path) -> Result<Vec<TradeoffRow>> {
    let text = read_to_string(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CliError::parse(path, format!("{}{e}", csv_line(&e))))?
        .clone();
    check_header(path, &header, &TABLE_HEADER)?;
    let mut rows = Vec::new();
    for raw in reader.records() {
        let raw = raw.map_err(|e| CliError::parse(path, format!("{}{e}", csv_line(&e))))?;
        let line = raw.position().map_or(0, |p| p.line());
        let row: TradeoffRow = raw
            .deserialize(Some(&header))
            .map_err(|e| CliError::parse(path, format!("line {line}: {e}")))?;
        if !(row.x > 0.0 && row.x.is_finite() && row.mean_error.is_finite() && row.std_error >= 0.0)
        {
            return Err(CliError::parse(
                path,
                format!("line {line}: x must be positive and errors finite"),
            ));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Fitted ratio law as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u32,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub c: f64,
    #[serde(rename = "fitted_at_N")]
    pub fitted_at_n: u64,
    pub residual_rms: f64,
    pub monotone_regime: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_abs_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design_condition: Option<f64>,
}

impl ModelFile {
    pub fn from_fit(fit: &FitReport) -> Self {
        Self {
            schema_version: MODEL_SCHEMA_VERSION,
            a: fit.law.a,
            b: fit.law.b,
            c: fit.law.c,
            fitted_at_n: fit.law.fitted_at_n,
            residual_rms: fit.residual_rms,
            monotone_regime: fit.monotone_regime,
            max_abs_residual: Some(fit.max_abs_residual),
            design_condition: Some(fit.design_condition),
        }
    }

    pub fn law(&self) -> Result<RatioLaw> {
        Ok(RatioLaw::new(self.a, self.b, self.c, self.fitted_at_n)?)
    }
}

pub fn read_model(path: &Path) -> Result<ModelFile> {
    let model: ModelFile = read_json(path)?;
    if model.schema_version != MODEL_SCHEMA_VERSION {
        return Err(CliError::parse(
            path,
            format!("unsupported schema_version {}", model.schema_version),
        ));
    }
    Ok(model)
}

pub fn read_budget(path: &Path) -> Result<ClassBudget> {
    let budget: ClassBudget = read_json(path)?;
    Ok(ClassBudget::new(
        budget.total_classes,
        budget.max_per_class,
    )?)
}

pub fn read_manifest(path: &Path) -> Result<DatasetManifest> {
    read_json(path)
}

/// Plan output: the chosen K plus the samples the method consumed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub method: Method,
    #[serde(rename = "target_N")]
    pub target_n: u64,
    #[serde(rename = "K")]
    pub k: u64,
    pub n_nominal: f64,
    /// `target_N/K` in lowest terms.
    pub n_nominal_exact: String,
    pub predicted_error: Option<f64>,
    pub clamped: bool,
    pub warnings: Vec<PlanWarning>,
    pub optimal_ratio: Option<f64>,
    pub k_unrounded: Option<f64>,
    pub law_used: Option<RatioLaw>,
    pub accounting: SampleAccount,
}

impl PlanDocument {
    pub fn new(plan: &PlanResult, accounting: SampleAccount) -> Self {
        Self {
            method: plan.method,
            target_n: plan.target_n,
            k: plan.k,
            n_nominal: *plan.n_nominal.numer() as f64 / *plan.n_nominal.denom() as f64,
            n_nominal_exact: plan.n_nominal.to_string(),
            predicted_error: plan.predicted_error,
            clamped: plan.clamped,
            warnings: plan.warnings.clone(),
            optimal_ratio: plan.optimal_ratio,
            k_unrounded: plan.k_unrounded,
            law_used: plan.law_used,
            accounting,
        }
    }
}
