//! Text tables, result files and trace CSVs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use qcolor_core::cases::default_color_labels;
use qcolor_core::optimize::OptimizerTrace;
use qcolor_core::{BitVector, CaseStudy};
use serde::Serialize;

use crate::CliError;

/// Solution table with one `O R G` block per node, as in the published
/// solution tables:
///
/// ```text
/// node   | A     | B     | C
/// color  | O R G | O R G | O R G
/// x      | 0 0 1 | 1 0 0 | 0 1 0
/// ```
pub fn solution_table(case: &CaseStudy, k: usize, bits: &BitVector) -> String {
    let labels = color_labels(case, k);
    let block = labels.join(" ");
    let width = case
        .graph
        .nodes()
        .iter()
        .map(String::len)
        .chain([block.len()])
        .max()
        .unwrap_or(1);
    let mut rows = [String::from("node  "), String::from("color "), String::from("x     ")];
    for (i, node) in case.graph.nodes().iter().enumerate() {
        let x: Vec<String> = (0..k).map(|c| bits.bits()[i * k + c].to_string()).collect();
        for (row, cell) in rows.iter_mut().zip([node.clone(), block.clone(), x.join(" ")]) {
            row.push_str(&format!(" | {cell:<width$}"));
        }
    }
    rows.iter().map(|r| r.trim_end().to_string() + "\n").collect()
}

/// The case's color labels, extended with defaults when `k` exceeds them.
pub fn color_labels(case: &CaseStudy, k: usize) -> Vec<String> {
    let defaults = default_color_labels(k);
    (0..k)
        .map(|c| case.colors.get(c).cloned().unwrap_or_else(|| defaults[c].clone()))
        .collect()
}

/// Contents of a `solve` result file.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ResultFile {
    pub case: String,
    pub method: String,
    pub k: usize,
    pub penalty: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_bitstring: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_sampled_energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub most_probable: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winning_restart: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub termination: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    /// Number of proper colorings (brute force only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solutions: Option<u64>,
    pub proper: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colors_used: Option<usize>,
    /// Human-readable problems with the best bitstring when it is not a
    /// proper coloring.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub defects: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub assignment: BTreeMap<String, String>,
}

impl ResultFile {
    pub fn new(case: &CaseStudy, method: &str, k: usize, penalty: f64) -> Self {
        Self {
            case: case.name.clone(),
            method: method.to_string(),
            k,
            penalty,
            depth: None,
            p: None,
            optimizer: None,
            seed: None,
            restarts: None,
            shots: None,
            max_iter: None,
            best_energy: None,
            best_bitstring: None,
            best_sampled_energy: None,
            most_probable: None,
            winning_restart: None,
            iterations: None,
            evaluations: None,
            termination: None,
            trace: None,
            solutions: None,
            proper: false,
            colors_used: None,
            defects: Vec::new(),
            assignment: BTreeMap::new(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("result serializes")
    }
}

/// One CSV row of a convergence trace.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TraceRow {
    pub config: String,
    pub iteration: usize,
    pub current_energy: f64,
    pub best_energy: f64,
}

pub fn trace_rows(config: &str, trace: &OptimizerTrace) -> Vec<TraceRow> {
    trace
        .points
        .iter()
        .map(|pt| TraceRow {
            config: config.to_string(),
            iteration: pt.iteration,
            current_energy: pt.value,
            best_energy: pt.best,
        })
        .collect()
}

pub fn write_trace_csv(path: &Path, rows: &[TraceRow]) -> Result<(), CliError> {
    create_parent(path)?;
    let mut writer = csv::Writer::from_path(path).map_err(|e| CliError::csv(path, e))?;
    for row in rows {
        writer.serialize(row).map_err(|e| CliError::csv(path, e))?;
    }
    if rows.is_empty() {
        writer
            .write_record(["config", "iteration", "current_energy", "best_energy"])
            .map_err(|e| CliError::csv(path, e))?;
    }
    writer.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    create_parent(path)?;
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn create_parent(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
        }
        _ => Ok(()),
    }
}

/// `explicit` if given, else `dir/default_name`.
pub fn output_path(explicit: Option<&PathBuf>, dir: &Path, default_name: &str) -> PathBuf {
    explicit.cloned().unwrap_or_else(|| dir.join(default_name))
}
