//! CSV layout for data sources and result tables.
//!
//! Files hold one sampling time per line: the first column is the integer time
//! index, the remaining columns are variables. A column whose header starts
//! with `factor:` is a factor series; blank cells in it repeat the previous
//! reading, so factors sampled on a coarser grid can share the file.
//! Internally the matrix is transposed to variables × times.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rmtcorr_core::nalgebra::DMatrix;
use rmtcorr_core::pipeline::{DataSource, FactorSeries};

pub const FACTOR_PREFIX: &str = "factor:";

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("missing header row")]
    MissingHeader,
    #[error("no data rows")]
    Empty,
    #[error("header needs a time column and at least one variable")]
    NoVariables,
    #[error("line {line}: expected {expected} fields, found {found}")]
    Ragged { line: u64, expected: usize, found: usize },
    #[error("line {line}, column {column} ({label}): cannot parse {value:?} as a number")]
    NonNumeric {
        line: u64,
        column: usize,
        label: String,
        value: String,
    },
    #[error("line {line}: duplicate time index {time}")]
    DuplicateTime { line: u64, time: usize },
    #[error("line {line}: time index {time} is not after the previous one")]
    UnorderedTime { line: u64, time: usize },
    #[error("line {line}: status column {label} is blank")]
    BlankStatus { line: u64, label: String },
    #[error("factor column {label} has no reading before line {line}")]
    LeadingBlank { line: u64, label: String },
    #[error(transparent)]
    Core(#[from] rmtcorr_core::Error),
}

fn open(path: &Path) -> Result<File, IoError> {
    File::open(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn create(path: &Path) -> Result<File, IoError> {
    File::create(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

pub fn ingest_csv(path: &Path) -> Result<DataSource, IoError> {
    read_source(open(path)?)
}

pub fn read_source<R: Read>(reader: R) -> Result<DataSource, IoError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = records.next().ok_or(IoError::MissingHeader)??;
    if header.len() < 2 {
        return Err(IoError::NoVariables);
    }
    let labels: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let is_factor: Vec<bool> = labels.iter().map(|l| l.starts_with(FACTOR_PREFIX)).collect();

    let mut times: Vec<usize> = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); labels.len()];
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(IoError::Ragged {
                line,
                expected: header.len(),
                found: record.len(),
            });
        }
        let time_cell = &record[0];
        let time: usize = time_cell.parse().map_err(|_| IoError::NonNumeric {
            line,
            column: 1,
            label: header[0].to_owned(),
            value: time_cell.to_owned(),
        })?;
        if let Some(&prev) = times.last() {
            if time <= prev {
                return Err(if times.contains(&time) {
                    IoError::DuplicateTime { line, time }
                } else {
                    IoError::UnorderedTime { line, time }
                });
            }
        }
        times.push(time);
        for (j, cell) in record.iter().skip(1).enumerate() {
            let value = if cell.is_empty() {
                if !is_factor[j] {
                    return Err(IoError::BlankStatus {
                        line,
                        label: labels[j].clone(),
                    });
                }
                *columns[j].last().ok_or_else(|| IoError::LeadingBlank {
                    line,
                    label: labels[j].clone(),
                })?
            } else {
                cell.parse::<f64>().map_err(|_| IoError::NonNumeric {
                    line,
                    column: j + 2,
                    label: labels[j].clone(),
                    value: cell.to_owned(),
                })?
            };
            columns[j].push(value);
        }
    }
    if times.is_empty() {
        return Err(IoError::Empty);
    }

    let mut variables = Vec::new();
    let mut status = Vec::new();
    let mut factors = Vec::new();
    for ((label, column), factor) in labels.into_iter().zip(columns).zip(is_factor) {
        if factor {
            factors.push(FactorSeries {
                name: label[FACTOR_PREFIX.len()..].to_owned(),
                values: column,
            });
        } else {
            variables.push(label);
            status.push(column);
        }
    }
    if variables.is_empty() {
        return Err(IoError::NoVariables);
    }
    let values = DMatrix::from_fn(status.len(), times.len(), |i, j| status[i][j]);
    Ok(DataSource::new(variables, times, values, factors)?)
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

pub fn write_source(path: &Path, ds: &DataSource) -> Result<(), IoError> {
    write_source_to(create(path)?, ds)
}

pub fn write_source_to<W: Write>(writer: W, ds: &DataSource) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["time".to_owned()];
    header.extend(ds.variables().iter().cloned());
    header.extend(ds.factors().iter().map(|f| format!("{FACTOR_PREFIX}{}", f.name)));
    w.write_record(&header)?;
    for (j, time) in ds.times().iter().enumerate() {
        let mut row = vec![time.to_string()];
        row.extend(ds.values().column(j).iter().map(|v| fmt_f64(*v)));
        row.extend(ds.factors().iter().map(|f| fmt_f64(f.values[j])));
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| IoError::File {
        path: PathBuf::from("<output>"),
        source,
    })?;
    Ok(())
}

/// Header plus rows, written as CSV.
pub fn write_table<I>(path: &Path, header: &[String], rows: I) -> Result<(), IoError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}
