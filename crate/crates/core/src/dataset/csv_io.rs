use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{Column, ColumnSource, Dataset, FeatureKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnType {
    Numeric,
    Categorical,
}

/// Per-column type hints; columns without a hint are inferred.
pub type Schema = HashMap<String, ColumnType>;

/// Parses `name: numeric|categorical` lines. Blank lines and `#` comments
/// are skipped.
pub fn parse_schema(text: &str) -> Result<Schema> {
    let mut schema = Schema::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, kind) = line.rsplit_once(':').ok_or_else(|| Error::Schema {
            line: lineno + 1,
            reason: "expected `name: type`".into(),
        })?;
        let kind = match kind.trim().to_ascii_lowercase().as_str() {
            "numeric" => ColumnType::Numeric,
            "categorical" => ColumnType::Categorical,
            other => {
                return Err(Error::Schema {
                    line: lineno + 1,
                    reason: format!("unknown column type `{other}`"),
                })
            }
        };
        schema.insert(name.trim().to_string(), kind);
    }
    Ok(schema)
}

pub fn load_csv(path: impl AsRef<Path>, target: &str, schema: Option<&Schema>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path)?;
    read_csv(file, target, schema).map_err(|e| match e {
        Error::EmptyFile { .. } => Error::EmptyFile { path: path.to_path_buf() },
        other => other,
    })
}

/// Reads a headed CSV. Categorical columns are one-hot expanded into
/// `name=level` indicator columns (levels in first-appearance order), numeric
/// columns holding only 0 and 1 become indicators, and target values map to
/// class indices in first-appearance order.
pub fn read_csv<R: Read>(reader: R, target: &str, schema: Option<&Schema>) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::EmptyFile { path: Default::default() });
    }
    let target_idx = header
        .iter()
        .position(|h| h == target)
        .ok_or_else(|| Error::UnknownTarget(target.to_string()))?;

    let mut records: Vec<Vec<String>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row: Vec<String> = rec.iter().map(|c| c.trim().to_string()).collect();
        if let Some(j) = row.iter().position(String::is_empty) {
            return Err(Error::MissingCell {
                row: records.len() + 1,
                column: header[j].clone(),
            });
        }
        records.push(row);
    }
    if records.is_empty() {
        return Err(Error::EmptyFile { path: Default::default() });
    }
    let n = records.len();

    let mut class_names: Vec<String> = Vec::new();
    let mut class_index: HashMap<&str, usize> = HashMap::new();
    let mut labels = Vec::with_capacity(n);
    for row in &records {
        let v = row[target_idx].as_str();
        let next = class_index.len();
        let idx = *class_index.entry(v).or_insert_with(|| {
            class_names.push(v.to_string());
            next
        });
        labels.push(idx);
    }
    if class_names.len() < 2 {
        return Err(Error::SingleClassTarget(target.to_string()));
    }

    // Column-major build, transposed at the end.
    let mut columns = Vec::new();
    let mut data: Vec<Vec<f64>> = Vec::new();
    for (j, name) in header.iter().enumerate() {
        if j == target_idx {
            continue;
        }
        let hint = schema.and_then(|s| s.get(name)).copied();
        let parsed: Option<Vec<f64>> = if hint == Some(ColumnType::Categorical) {
            None
        } else {
            records.iter().map(|r| r[j].parse::<f64>().ok()).collect()
        };
        match parsed {
            Some(values) => {
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::SchemaMismatch {
                        column: name.clone(),
                        reason: "non-finite numeric value".into(),
                    });
                }
                let binary = values.iter().all(|&v| v == 0.0 || v == 1.0);
                columns.push(if binary {
                    Column::indicator(name.as_str())
                } else {
                    Column::numeric(name.as_str())
                });
                data.push(values);
            }
            None if hint == Some(ColumnType::Numeric) => {
                return Err(Error::SchemaMismatch {
                    column: name.clone(),
                    reason: "declared numeric but holds non-numeric values".into(),
                });
            }
            None => {
                let mut levels: Vec<&str> = Vec::new();
                for r in &records {
                    if !levels.contains(&r[j].as_str()) {
                        levels.push(&r[j]);
                    }
                }
                for level in levels {
                    columns.push(Column::level(name, level));
                    data.push(records.iter().map(|r| f64::from(u8::from(r[j] == level))).collect());
                }
            }
        }
    }
    if columns.is_empty() {
        return Err(Error::InvalidDataset("no feature columns besides the target".into()));
    }
    let rows = (0..n).map(|i| data.iter().map(|col| col[i]).collect()).collect();
    Dataset::new(rows, labels, columns, class_names)
}

/// Encodes the rows of a headed CSV into the given feature columns. Extra
/// columns (including a target) are ignored.
pub fn encode_rows<R: Read>(reader: R, columns: &[Column]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let mut positions = Vec::with_capacity(columns.len());
    for col in columns {
        let src = match &col.source {
            ColumnSource::Raw { column } | ColumnSource::Level { column, .. } => column,
        };
        let pos = header.iter().position(|h| h == src).ok_or_else(|| Error::SchemaMismatch {
            column: src.clone(),
            reason: "column missing from input".into(),
        })?;
        positions.push(pos);
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let mut row = Vec::with_capacity(columns.len());
        for (col, &pos) in columns.iter().zip(&positions) {
            let cell = rec.get(pos).map(str::trim).unwrap_or("");
            if cell.is_empty() {
                return Err(Error::MissingCell { row: i + 1, column: header[pos].clone() });
            }
            let v = match &col.source {
                ColumnSource::Level { level, .. } => f64::from(u8::from(cell == level)),
                ColumnSource::Raw { .. } => {
                    let v: f64 = cell.parse().map_err(|_| Error::SchemaMismatch {
                        column: col.name.clone(),
                        reason: format!("`{cell}` is not numeric"),
                    })?;
                    if col.kind == FeatureKind::Indicator && v != 0.0 && v != 1.0 {
                        return Err(Error::SchemaMismatch {
                            column: col.name.clone(),
                            reason: format!("indicator column holds {v}"),
                        });
                    }
                    v
                }
            };
            row.push(v);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Writes the feature columns (by name) followed by the target column.
/// Values use the shortest representation that parses back exactly.
pub fn write_csv<W: Write>(ds: &Dataset, writer: W, target: &str) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = ds.columns().iter().map(|c| c.name.as_str()).collect();
    header.push(target);
    w.write_record(&header)?;
    for i in 0..ds.n_rows() {
        let mut rec: Vec<String> = ds.row(i).iter().map(f64::to_string).collect();
        rec.push(ds.class_names()[ds.labels()[i]].clone());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
