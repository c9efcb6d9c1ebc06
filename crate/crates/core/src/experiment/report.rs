//! Deterministic JSON + CSV output.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::ExperimentKind;
use crate::error::Result;
use crate::io::{round_sig, write_table};

/// A numeric table, written as `<name>.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str], rows: Vec<Vec<f64>>) -> Table {
        Table {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub kind: ExperimentKind,
    pub claim: String,
    /// The predicted exponent or bound the measurement is compared with.
    pub predicted: f64,
    /// How `measured` is compared with `predicted`, in words.
    pub criterion: String,
    pub measured: f64,
    pub pass: bool,
    pub note: String,
    /// Secondary figures, e.g. both grid estimates of a stability check.
    pub extra: BTreeMap<String, f64>,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => serde_json::Number::from_f64(round_sig(x))
                .map(Value::Number)
                .unwrap_or(Value::Null),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

/// `{"results": [...]}` with keys sorted and floats cut to 12 significant
/// digits, so equal inputs give equal bytes.
pub fn report_json(results: &[ExperimentResult]) -> Result<String> {
    let value = rounded(serde_json::json!({ "results": results }));
    let mut s = serde_json::to_string_pretty(&value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `report.json` and one CSV per table into `dir`; returns the paths.
pub fn emit_report(results: &[ExperimentResult], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let path = dir.join("report.json");
    fs::write(&path, report_json(results)?)?;
    written.push(path);
    for table in results.iter().flat_map(|r| &r.tables) {
        let path = dir.join(format!("{}.csv", table.name));
        let header: Vec<&str> = table.header.iter().map(String::as_str).collect();
        write_table(&path, &header, &table.rows)?;
        written.push(path);
    }
    Ok(written)
}
