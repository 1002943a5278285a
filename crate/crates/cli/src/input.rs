//! CSV ingestion for measured branches and bolometer sweeps.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use mesa_core::VoltageFrequency;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Raw file bytes plus their SHA-256, so outputs can cite the exact input.
pub struct InputFile {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
}

impl InputFile {
    pub fn read(path: &Path) -> CliResult<Self> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        Ok(Self { path: path.to_path_buf(), bytes })
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }

    fn error(&self, line: u64, message: impl Into<String>) -> CliError {
        CliError::Input {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }
}

struct Table {
    columns: Vec<String>,
    /// (1-based line number, fields)
    rows: Vec<(u64, Vec<String>)>,
}

impl Table {
    fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

fn read_table(file: &InputFile) -> CliResult<Table> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file.bytes.as_slice());
    let line_of = |e: &csv::Error| e.position().map_or(0, |p| p.line());
    let columns = rdr
        .headers()
        .map_err(|e| file.error(line_of(&e), e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect::<Vec<_>>();
    if columns.iter().all(|c| c.is_empty()) {
        return Err(file.error(1, "missing header row"));
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let msg = match e.kind() {
                csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
                    format!("expected {expected_len} fields, found {len}")
                }
                _ => e.to_string(),
            };
            file.error(line_of(&e), msg)
        })?;
        let line = record.position().map_or(0, |p| p.line());
        rows.push((line, record.iter().map(str::to_string).collect()));
    }
    Ok(Table { columns, rows })
}

fn required(file: &InputFile, table: &Table, name: &str) -> CliResult<usize> {
    table
        .column(name)
        .ok_or_else(|| file.error(1, format!("missing required column `{name}` (found: {})", table.columns.join(", "))))
}

fn number(file: &InputFile, line: u64, column: &str, text: &str) -> CliResult<f64> {
    let v: f64 = text
        .parse()
        .map_err(|_| file.error(line, format!("column `{column}`: `{text}` is not a number")))?;
    if !v.is_finite() {
        return Err(file.error(line, format!("column `{column}`: value must be finite")));
    }
    Ok(v)
}

fn optional_number(file: &InputFile, line: u64, column: &str, text: Option<&String>) -> CliResult<Option<f64>> {
    match text.map(String::as_str) {
        None | Some("") => Ok(None),
        Some(t) => number(file, line, column, t).map(Some),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub id: String,
    pub points: Vec<VoltageFrequency>,
    pub temperatures_k: Vec<f64>,
}

/// Emission points grouped by `branch_id` (sorted); a file without that
/// column is one branch called `all`.
pub fn read_branches(file: &InputFile) -> CliResult<Vec<Branch>> {
    let table = read_table(file)?;
    let iv = required(file, &table, "voltage_V")?;
    let i_f = required(file, &table, "frequency_GHz")?;
    let it = table.column("temperature_K");
    let ib = table.column("branch_id");

    let mut branches: BTreeMap<String, Branch> = BTreeMap::new();
    for (line, row) in &table.rows {
        let voltage = number(file, *line, "voltage_V", &row[iv])?;
        let frequency_ghz = number(file, *line, "frequency_GHz", &row[i_f])?;
        if voltage <= 0.0 || frequency_ghz <= 0.0 {
            return Err(file.error(*line, "voltage_V and frequency_GHz must be > 0"));
        }
        let temperature = optional_number(file, *line, "temperature_K", it.map(|i| &row[i]))?;
        let id = match ib {
            Some(i) if row[i].is_empty() => return Err(file.error(*line, "empty branch_id")),
            Some(i) => row[i].clone(),
            None => "all".to_string(),
        };
        let entry = branches.entry(id.clone()).or_insert_with(|| Branch {
            id,
            points: Vec::new(),
            temperatures_k: Vec::new(),
        });
        entry.points.push(VoltageFrequency { voltage, frequency_ghz });
        entry.temperatures_k.extend(temperature);
    }
    if branches.is_empty() {
        return Err(file.error(1, "no data rows"));
    }
    Ok(branches.into_values().collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub bias_voltage: f64,
    pub output_voltage_mv: f64,
    pub temperature_k: Option<f64>,
}

/// Bolometer sweep rows: `bias_voltage`, `output_voltage_mV`, optional `temperature_K`.
pub fn read_sweep(file: &InputFile) -> CliResult<Vec<SweepPoint>> {
    let table = read_table(file)?;
    let ib = required(file, &table, "bias_voltage")?;
    let io = required(file, &table, "output_voltage_mV")?;
    let it = table.column("temperature_K");
    let mut out = Vec::with_capacity(table.rows.len());
    for (line, row) in &table.rows {
        let output_voltage_mv = number(file, *line, "output_voltage_mV", &row[io])?;
        if output_voltage_mv < 0.0 {
            return Err(file.error(*line, "output_voltage_mV must be >= 0"));
        }
        out.push(SweepPoint {
            bias_voltage: number(file, *line, "bias_voltage", &row[ib])?,
            output_voltage_mv,
            temperature_k: optional_number(file, *line, "temperature_K", it.map(|i| &row[i]))?,
        });
    }
    if out.is_empty() {
        return Err(file.error(1, "no data rows"));
    }
    Ok(out)
}
