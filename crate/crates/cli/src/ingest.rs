//! Reading instances from CSV or JSON Lines.
//!
//! Every data row becomes one instance whose id is the 0-based row ordinal
//! (the header, if any, is not counted).

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read};
use std::path::PathBuf;

use quist_core::Instance;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Path(PathBuf),
    Stdin,
}

impl Source {
    /// `-` means standard input.
    pub fn from_arg(arg: &str) -> Self {
        if arg == "-" {
            Source::Stdin
        } else {
            Source::Path(PathBuf::from(arg))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Name(String),
    Index(usize),
}

impl ColumnSelector {
    /// All-digit arguments select by index, anything else by name.
    pub fn from_arg(arg: &str) -> Self {
        match arg.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(arg.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestOptions {
    pub source: Source,
    pub format: InputFormat,
    pub column: Option<ColumnSelector>,
    pub has_header: bool,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("row {row}: cannot parse {content:?} as a number")]
    Parse { row: usize, content: String },
    #[error("column {0} not found")]
    MissingColumn(String),
    #[error("input contains no data rows")]
    EmptyInput,
    #[error("row {row}: value {value} is not finite")]
    NonFiniteValue { row: usize, value: f64 },
    #[error("{0}")]
    InvalidOptions(String),
}

impl IngestError {
    /// Option errors are configuration problems, everything else is bad input.
    pub fn is_config_error(&self) -> bool {
        matches!(self, IngestError::InvalidOptions(_))
    }
}

pub fn ingest(opts: &IngestOptions) -> Result<Vec<Instance>, IngestError> {
    let (name, reader): (String, Box<dyn Read>) = match &opts.source {
        Source::Stdin => ("<stdin>".into(), Box::new(io::stdin())),
        Source::Path(p) => {
            let file = File::open(p).map_err(|source| IngestError::Io {
                path: p.display().to_string(),
                source,
            })?;
            (p.display().to_string(), Box::new(file))
        }
    };
    ingest_reader(reader, &name, opts)
}

/// Same as [`ingest`] but reading from an arbitrary source; `name` is used in
/// I/O error messages.
pub fn ingest_reader<R: Read>(
    reader: R,
    name: &str,
    opts: &IngestOptions,
) -> Result<Vec<Instance>, IngestError> {
    let values = match opts.format {
        InputFormat::Csv => read_csv(reader, name, opts)?,
        InputFormat::Jsonl => read_jsonl(reader, name, opts)?,
    };
    if values.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(id, v)| Instance::new(id, v))
        .collect())
}

fn parse_value(row: usize, raw: &str) -> Result<f64, IngestError> {
    let trimmed = raw.trim();
    let value: f64 = trimmed.parse().map_err(|_| IngestError::Parse {
        row,
        content: raw.to_string(),
    })?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(IngestError::NonFiniteValue { row, value })
    }
}

fn read_csv<R: Read>(reader: R, name: &str, opts: &IngestOptions) -> Result<Vec<f64>, IngestError> {
    let io_err = |e: csv::Error| -> IngestError {
        match e.into_kind() {
            csv::ErrorKind::Io(source) => IngestError::Io {
                path: name.to_string(),
                source,
            },
            other => IngestError::Io {
                path: name.to_string(),
                source: io::Error::new(io::ErrorKind::InvalidData, format!("{other:?}")),
            },
        }
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(opts.has_header)
        .flexible(true)
        .from_reader(reader);

    let index = match &opts.column {
        None => 0,
        Some(ColumnSelector::Index(i)) => *i,
        Some(ColumnSelector::Name(col)) => {
            if !opts.has_header {
                return Err(IngestError::InvalidOptions(format!(
                    "column {col:?} is selected by name, which needs --header"
                )));
            }
            let headers = rdr.headers().map_err(io_err)?;
            headers
                .iter()
                .position(|h| h.trim() == col)
                .ok_or_else(|| IngestError::MissingColumn(col.clone()))?
        }
    };

    let mut values = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(io_err)?;
        let field = record.get(index).ok_or_else(|| IngestError::Parse {
            row,
            content: record.iter().collect::<Vec<_>>().join(","),
        })?;
        values.push(parse_value(row, field)?);
    }
    Ok(values)
}

fn read_jsonl<R: Read>(
    reader: R,
    name: &str,
    opts: &IngestOptions,
) -> Result<Vec<f64>, IngestError> {
    use serde_json::Value;

    let field = match &opts.column {
        None | Some(ColumnSelector::Index(0)) => None,
        Some(ColumnSelector::Name(n)) => Some(n.as_str()),
        Some(ColumnSelector::Index(i)) => {
            return Err(IngestError::InvalidOptions(format!(
                "JSON Lines input selects fields by name, not index {i}"
            )))
        }
    };

    let mut values = Vec::new();
    for line in BufReader::new(reader).lines() {
        let line = line.map_err(|source| IngestError::Io {
            path: name.to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let row = values.len();
        let parse_err = || IngestError::Parse {
            row,
            content: line.clone(),
        };
        let parsed: Value = serde_json::from_str(&line).map_err(|_| parse_err())?;
        let number = match &parsed {
            Value::Number(_) => parsed.clone(),
            Value::Object(map) => match field {
                Some(f) => map
                    .get(f)
                    .cloned()
                    .ok_or_else(|| IngestError::MissingColumn(f.to_string()))?,
                None if map.len() == 1 => map.values().next().cloned().expect("one field"),
                None => {
                    return Err(IngestError::InvalidOptions(format!(
                        "row {row} has {} fields; pick one with --column",
                        map.len()
                    )))
                }
            },
            _ => return Err(parse_err()),
        };
        let value = number.as_f64().ok_or_else(parse_err)?;
        if !value.is_finite() {
            return Err(IngestError::NonFiniteValue { row, value });
        }
        values.push(value);
    }
    Ok(values)
}
