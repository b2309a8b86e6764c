use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::Path;

use super::{Dataset, Matrix};
use crate::error::{Error, Result};

/// Load a headered, comma-delimited CSV. Every column other than
/// `label_column` must be numeric.
///
/// Labels are mapped to `{0,1}`: numeric labels by numeric order (so
/// `{-1,+1}` gives `-1 -> 0`), anything else by lexicographic order.
pub fn load_csv(path: impl AsRef<Path>, label_column: &str) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    load_csv_reader(file, &name, label_column).map_err(|e| match e {
        Error::Csv { source, .. } => Error::Csv {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

pub fn load_csv_reader<R: Read>(reader: R, name: &str, label_column: &str) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let csv_err = |source| Error::Csv {
        path: name.into(),
        source,
    };
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::MissingLabelColumn(label_column.to_string()))?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != label_idx)
        .map(|(_, h)| h.to_string())
        .collect();

    let mut data = Vec::new();
    let mut raw_labels = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_err)?;
        let row = record.position().map_or(0, |p| p.line());
        for (j, cell) in record.iter().enumerate() {
            if j == label_idx {
                raw_labels.push(cell.to_string());
                continue;
            }
            let column = headers.get(j).unwrap_or_default().to_string();
            let v: f64 = cell.parse().map_err(|_| Error::NonNumericCell {
                row,
                column: column.clone(),
                value: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFiniteCell { row, column });
            }
            data.push(v);
        }
    }
    if raw_labels.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let labels = map_labels(&raw_labels)?;
    let features = Matrix::from_vec(raw_labels.len(), feature_names.len(), data);
    Dataset::new(name, features, labels, feature_names)
}

fn map_labels(raw: &[String]) -> Result<Vec<u8>> {
    let distinct: BTreeSet<&str> = raw.iter().map(String::as_str).collect();
    let numeric: Option<Vec<f64>> = distinct.iter().map(|s| s.parse::<f64>().ok()).collect();
    let classes: Vec<String> = match numeric {
        Some(mut values) => {
            values.sort_by(f64::total_cmp);
            values.dedup();
            if values.len() != 2 {
                return Err(Error::LabelCardinality(values.len()));
            }
            return Ok(raw
                .iter()
                .map(|s| u8::from(s.parse::<f64>().expect("checked above") == values[1]))
                .collect());
        }
        None => distinct.iter().map(|s| s.to_string()).collect(),
    };
    if classes.len() != 2 {
        return Err(Error::LabelCardinality(classes.len()));
    }
    Ok(raw.iter().map(|s| u8::from(*s == classes[1])).collect())
}

/// Write a dataset as CSV with the label in the last column.
pub fn write_csv(data: &Dataset, path: impl AsRef<Path>, label_column: &str) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    let io = |e| Error::io(path, e);
    let mut header = data.feature_names().join(",");
    header.push(',');
    header.push_str(label_column);
    writeln!(out, "{header}").map_err(io)?;
    for i in 0..data.n_samples() {
        for v in data.features().row(i) {
            write!(out, "{v},").map_err(io)?;
        }
        writeln!(out, "{}", data.labels()[i]).map_err(io)?;
    }
    out.flush().map_err(io)
}
