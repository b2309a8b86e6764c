//! Run files and the comparison tables built from them.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ga::Chromosome;
use crate::metrics::{jaccard, MetricReport};

/// Display order of algorithms in tables; unknown names follow, sorted.
pub const ALGORITHM_ORDER: [&str; 5] = ["ga-par", "ga-seq", "random", "rfs", "baseline"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_id: String,
    pub dataset_name: String,
    pub model_kind: String,
    pub algorithm: String,
    /// Flat settings sufficient to replay the run.
    pub config: BTreeMap<String, String>,
    pub best_chromosome: Chromosome,
    pub val_metrics: MetricReport,
    pub test_metrics: MetricReport,
    pub mean_gen_seconds: f64,
    pub total_seconds: f64,
    pub trace_path: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunFile {
    run_id: String,
    dataset_name: String,
    model_kind: String,
    algorithm: String,
    config: BTreeMap<String, String>,
    best_chromosome_hex: String,
    chromosome_len: usize,
    val_metrics: MetricReport,
    test_metrics: MetricReport,
    mean_gen_seconds: f64,
    total_seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trace_path: Option<String>,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        let file = RunFile {
            run_id: self.run_id.clone(),
            dataset_name: self.dataset_name.clone(),
            model_kind: self.model_kind.clone(),
            algorithm: self.algorithm.clone(),
            config: self.config.clone(),
            best_chromosome_hex: self.best_chromosome.to_hex(),
            chromosome_len: self.best_chromosome.len(),
            val_metrics: self.val_metrics,
            test_metrics: self.test_metrics,
            mean_gen_seconds: self.mean_gen_seconds,
            total_seconds: self.total_seconds,
            trace_path: self.trace_path.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("run record serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let file: RunFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let best_chromosome = Chromosome::from_hex(&file.best_chromosome_hex, file.chromosome_len)
            .map_err(|e| e.to_string())?;
        Ok(Self {
            run_id: file.run_id,
            dataset_name: file.dataset_name,
            model_kind: file.model_kind,
            algorithm: file.algorithm,
            config: file.config,
            best_chromosome,
            val_metrics: file.val_metrics,
            test_metrics: file.test_metrics,
            mean_gen_seconds: file.mean_gen_seconds,
            total_seconds: file.total_seconds,
            trace_path: file.trace_path,
        })
    }
}

/// Write `<out_dir>/<run_id>.json`, replacing any earlier file of that run.
pub fn write_run(record: &RunRecord, out_dir: impl AsRef<Path>) -> Result<PathBuf> {
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let path = out_dir.join(format!("{}.json", record.run_id));
    std::fs::write(&path, record.to_json()).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

pub fn read_run(path: impl AsRef<Path>) -> Result<RunRecord> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    RunRecord::from_json(&text).map_err(|e| Error::Report(format!("{}: {e}", path.display())))
}

/// Every `*.json` run file in `dir`, sorted by file name.
pub fn read_run_dir(dir: impl AsRef<Path>) -> Result<Vec<(PathBuf, RunRecord)>> {
    let dir = dir.as_ref();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| read_run(&p).map(|r| (p, r)))
        .collect()
}

fn algorithm_key(name: &str) -> (usize, String) {
    let pos = ALGORITHM_ORDER
        .iter()
        .position(|a| *a == name)
        .unwrap_or(ALGORITHM_ORDER.len());
    (pos, name.to_string())
}

fn format_cell(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".to_string(), |x| format!("{x:.3}"))
}

/// `(model, algorithm)`.
pub type RowKey = (String, String);

/// Rows keyed by `(model, algorithm)`; missing cells are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<(RowKey, Vec<Option<f64>>)>,
}

impl ResultTable {
    pub fn cell(&self, model: &str, algorithm: &str, column: &str) -> Option<f64> {
        let c = self.columns.iter().position(|x| x == column)?;
        self.rows
            .iter()
            .find(|((m, a), _)| m == model && a == algorithm)
            .and_then(|(_, cells)| cells[c])
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("model,algorithm,{}\n", self.columns.join(","));
        for ((model, alg), cells) in &self.rows {
            let cells: Vec<String> = cells.iter().map(|&c| format_cell(c)).collect();
            out.push_str(&format!("{model},{alg},{}\n", cells.join(",")));
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut header = vec!["model".to_string(), "algorithm".to_string()];
        header.extend(self.columns.iter().cloned());
        let body = self
            .rows
            .iter()
            .map(|((m, a), cells)| {
                let mut r = vec![m.clone(), a.clone()];
                r.extend(cells.iter().map(|&c| format_cell(c)));
                r
            })
            .collect::<Vec<_>>();
        markdown(&header, &body)
    }
}

fn markdown(header: &[String], body: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            body.iter()
                .map(|r| r[c].len())
                .chain(std::iter::once(header[c].len()))
                .max()
                .unwrap_or(0)
                .max(3)
        })
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        format!("| {} |\n", padded.join(" | "))
    };
    let mut out = line(header);
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&format!("|-{}-|\n", rule.join("-|-")));
    for r in body {
        out.push_str(&line(r));
    }
    out
}

/// Build a `(model, algorithm) x column` table, averaging duplicate records.
fn pivot<F>(records: &[RunRecord], columns: Vec<String>, values: F) -> ResultTable
where
    F: Fn(&RunRecord) -> Vec<(String, f64)>,
{
    // (model, algorithm sort key) -> column -> (sum, count)
    type Cells = BTreeMap<String, (f64, usize)>;
    let mut groups: BTreeMap<(String, (usize, String)), Cells> = BTreeMap::new();
    for r in records {
        let cells = groups
            .entry((r.model_kind.clone(), algorithm_key(&r.algorithm)))
            .or_default();
        for (col, v) in values(r) {
            let e = cells.entry(col).or_insert((0.0, 0));
            e.0 += v;
            e.1 += 1;
        }
    }
    let rows = groups
        .into_iter()
        .map(|((model, (_, alg)), cells)| {
            let row = columns
                .iter()
                .map(|c| cells.get(c).map(|&(sum, n)| sum / n as f64))
                .collect();
            ((model, alg), row)
        })
        .collect();
    ResultTable { columns, rows }
}

fn datasets(records: &[RunRecord]) -> Vec<String> {
    records
        .iter()
        .map(|r| r.dataset_name.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Mean seconds per generation, one column per dataset.
pub fn runtime_table(records: &[RunRecord]) -> Result<ResultTable> {
    if records.is_empty() {
        return Err(Error::Report("no run records".into()));
    }
    Ok(pivot(records, datasets(records), |r| {
        vec![(r.dataset_name.clone(), r.mean_gen_seconds)]
    }))
}

pub const METRIC_COLUMNS: [&str; 3] = ["accuracy", "f1", "roc_auc"];

/// Test-split accuracy, F1 and ROC AUC per dataset.
pub fn metrics_table(records: &[RunRecord]) -> Result<ResultTable> {
    if records.is_empty() {
        return Err(Error::Report("no run records".into()));
    }
    let columns = datasets(records)
        .iter()
        .flat_map(|d| METRIC_COLUMNS.iter().map(move |m| format!("{d}:{m}")))
        .collect();
    Ok(pivot(records, columns, |r| {
        let t = &r.test_metrics;
        let d = &r.dataset_name;
        vec![
            (format!("{d}:accuracy"), t.accuracy),
            (format!("{d}:f1"), t.f1),
            (format!("{d}:roc_auc"), t.roc_auc),
        ]
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct JaccardMatrix {
    pub labels: Vec<String>,
    /// `None` where either side has no record.
    pub values: Vec<Vec<Option<f64>>>,
}

impl JaccardMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        self.values[i][j]
    }

    fn rendered(&self) -> Vec<Vec<String>> {
        self.labels
            .iter()
            .zip(&self.values)
            .map(|(l, row)| {
                std::iter::once(l.clone())
                    .chain(
                        row.iter()
                            .map(|v| v.map_or_else(String::new, |x| format!("{x:.3}"))),
                    )
                    .collect()
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!(",{}\n", self.labels.join(","));
        for r in self.rendered() {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut header = vec![String::new()];
        header.extend(self.labels.iter().cloned());
        markdown(&header, &self.rendered())
    }
}

/// Pairwise Jaccard overlap of best chromosomes within one
/// `(model, dataset)` group. `algorithms` fixes the row order and may name
/// algorithms without a record; their cells stay blank. With several
/// records for one algorithm, the lowest `run_id` is used.
pub fn jaccard_matrix(records: &[&RunRecord], algorithms: &[String]) -> Result<JaccardMatrix> {
    if records.is_empty() {
        return Err(Error::Report("no run records".into()));
    }
    let len = records[0].best_chromosome.len();
    if let Some(bad) = records.iter().find(|r| r.best_chromosome.len() != len) {
        return Err(Error::Report(format!(
            "chromosome length mismatch: {}.json has {} genes, {}.json has {}",
            records[0].run_id,
            len,
            bad.run_id,
            bad.best_chromosome.len()
        )));
    }
    let mut labels: Vec<String> = algorithms.to_vec();
    for r in records {
        if !labels.contains(&r.algorithm) {
            labels.push(r.algorithm.clone());
        }
    }
    labels.sort_by_key(|a| algorithm_key(a));
    labels.dedup();

    let pick: Vec<Option<&RunRecord>> = labels
        .iter()
        .map(|l| {
            records
                .iter()
                .filter(|r| &r.algorithm == l)
                .min_by(|a, b| a.run_id.cmp(&b.run_id))
                .copied()
        })
        .collect();
    let mut values = vec![vec![None; labels.len()]; labels.len()];
    for (i, a) in pick.iter().enumerate() {
        for (j, b) in pick.iter().enumerate() {
            if let (Some(a), Some(b)) = (a, b) {
                values[i][j] = Some(jaccard(&a.best_chromosome, &b.best_chromosome)?);
            }
        }
    }
    Ok(JaccardMatrix { labels, values })
}
