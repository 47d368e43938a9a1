use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use farm_sim::DroneMode;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::schema::{label_name, parse_label};
use crate::{Dataset, Provenance, Sample, Schema};

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected {want} columns, got {got}")]
    ColumnCount { line: usize, want: usize, got: usize },
    #[error("header mismatch: missing column {missing:?}")]
    HeaderMismatch { missing: String },
    #[error("line {line}, column {column}: cannot parse {value:?}")]
    BadValue { line: usize, column: String, value: String },
    #[error("metadata sidecar: {0}")]
    Sidecar(String),
}

/// JSON sidecar stored next to every dataset file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub schema: Schema,
    pub schema_hash: String,
    pub provenance: Provenance,
    pub samples: usize,
    pub histograms: Vec<Vec<u64>>,
}

fn meta_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    std::path::PathBuf::from(s)
}

fn format_row(schema: &Schema, sample: &Sample, out: &mut String) {
    for (col, &v) in sample.features.iter().enumerate() {
        if col > 0 {
            out.push(',');
        }
        if schema.is_flag_column(col) {
            let _ = write!(out, "{}", v as u8);
        } else if schema.is_mode_column(col) {
            let mode = DroneMode::from_ordinal(v as u8).expect("recorded modes are valid");
            out.push_str(mode.name());
        } else {
            let _ = write!(out, "{v}");
        }
    }
    for &label in &sample.labels {
        out.push(',');
        out.push_str(&label_name(label));
    }
    out.push('\n');
}

/// Writes the dataset CSV plus its `<path>.meta.json` sidecar. Output is a
/// pure function of the dataset, so equal datasets give byte-equal files.
pub fn write_dataset(dataset: &Dataset, path: &Path) -> Result<(), CsvError> {
    let io_err = |source| CsvError::Io { path: path.display().to_string(), source };
    let file = fs::File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    let mut buf = dataset.schema.column_names().join(",");
    buf.push('\n');
    for sample in &dataset.samples {
        format_row(&dataset.schema, sample, &mut buf);
        if buf.len() > 1 << 20 {
            w.write_all(buf.as_bytes()).map_err(io_err)?;
            buf.clear();
        }
    }
    w.write_all(buf.as_bytes()).map_err(io_err)?;
    w.flush().map_err(io_err)?;

    let meta = DatasetMeta {
        schema: dataset.schema.clone(),
        schema_hash: dataset.schema.hash(),
        provenance: dataset.provenance.clone(),
        samples: dataset.samples.len(),
        histograms: dataset.histograms(),
    };
    let json = serde_json::to_string_pretty(&meta).map_err(|e| CsvError::Sidecar(e.to_string()))?;
    fs::write(meta_path(path), json + "\n")
        .map_err(|source| CsvError::Io { path: meta_path(path).display().to_string(), source })?;
    Ok(())
}

/// Reads a dataset CSV written by [`write_dataset`]. The expected schema is
/// inferred from the sidecar when present, otherwise from the header column
/// count against the default farm schema.
pub fn read_dataset(path: &Path) -> Result<Dataset, CsvError> {
    let io_err = |source| CsvError::Io { path: path.display().to_string(), source };
    let text = fs::read_to_string(path).map_err(io_err)?;

    let (schema, provenance) = match fs::read_to_string(meta_path(path)) {
        Ok(json) => {
            let meta: DatasetMeta =
                serde_json::from_str(&json).map_err(|e| CsvError::Sidecar(e.to_string()))?;
            (meta.schema, meta.provenance)
        }
        Err(_) => (Schema::default_farm(), Provenance::default()),
    };

    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(CsvError::ColumnCount {
        line: 1,
        want: schema.column_count(),
        got: 0,
    })?;
    let have: Vec<&str> = header.split(',').collect();
    for want in schema.column_names() {
        if !have.contains(&want.as_str()) {
            return Err(CsvError::HeaderMismatch { missing: want });
        }
    }
    if have.len() != schema.column_count() {
        return Err(CsvError::ColumnCount {
            line: 1,
            want: schema.column_count(),
            got: have.len(),
        });
    }

    let mut samples = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != schema.column_count() {
            return Err(CsvError::ColumnCount {
                line: line_no,
                want: schema.column_count(),
                got: cells.len(),
            });
        }
        let bad = |column: &str, value: &str| CsvError::BadValue {
            line: line_no,
            column: column.to_string(),
            value: value.to_string(),
        };
        let names = schema.column_names();
        let mut features = Vec::with_capacity(schema.feature_count());
        for (col, cell) in cells.iter().take(schema.feature_count()).enumerate() {
            if schema.is_mode_column(col) {
                let mode = DroneMode::from_name(cell).ok_or_else(|| bad(&names[col], cell))?;
                features.push(f64::from(mode.ordinal()));
            } else {
                features.push(cell.parse::<f64>().map_err(|_| bad(&names[col], cell))?);
            }
        }
        let mut labels = Vec::with_capacity(schema.label_count());
        for (k, cell) in cells.iter().skip(schema.feature_count()).enumerate() {
            let label = parse_label(cell, schema.classes())
                .ok_or_else(|| bad(&names[schema.feature_count() + k], cell))?;
            labels.push(label);
        }
        samples.push(Sample { features, labels });
    }
    Ok(Dataset { schema, samples, provenance })
}
