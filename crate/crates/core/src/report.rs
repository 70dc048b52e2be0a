//! CSV and JSON output for cross-validation and scaling reports.
//!
//! CSV files carry one row per fold (or per grid point) with a fixed column
//! order, listed in [`CV_CSV_HEADER`] and [`SCALING_CSV_HEADER`]. The leading
//! `method` column is always `GraphHD`, so rows for other methods can be
//! appended from external sources before plotting. JSON documents carry a
//! `schema` name and `schema_version`; the matching JSON Schemas ship in
//! `schemas/`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::encoder::EncoderConfig;
use crate::error::{Error, Result};
use crate::eval::{CvConfig, CvReport, FoldRecord, ScalingPoint, ScalingReport};

pub const METHOD: &str = "GraphHD";
pub const SCHEMA_VERSION: u32 = 1;
pub const CV_SCHEMA: &str = "graphhd.cv_report";
pub const SCALING_SCHEMA: &str = "graphhd.scaling_report";

pub const CV_CSV_HEADER: [&str; 10] = [
    "method",
    "dataset",
    "repetition",
    "fold",
    "train_size",
    "test_size",
    "accuracy",
    "train_seconds",
    "test_seconds",
    "inference_seconds_per_graph",
];

pub const SCALING_CSV_HEADER: [&str; 5] = [
    "method",
    "n_vertices",
    "mean_edges",
    "mean_train_seconds_per_fold",
    "mean_inference_seconds_per_graph",
];

/// Columns that hold wall-clock measurements and differ between runs.
pub const TIMING_COLUMNS: [&str; 5] = [
    "train_seconds",
    "test_seconds",
    "inference_seconds_per_graph",
    "mean_train_seconds_per_fold",
    "mean_inference_seconds_per_graph",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidArgument(format!("unknown report format {other:?}"))),
        }
    }
}

#[derive(Serialize)]
struct CvRow<'a> {
    method: &'a str,
    dataset: &'a str,
    repetition: usize,
    fold: usize,
    train_size: usize,
    test_size: usize,
    accuracy: f64,
    train_seconds: f64,
    test_seconds: f64,
    inference_seconds_per_graph: f64,
}

impl<'a> CvRow<'a> {
    fn new(dataset: &'a str, r: &FoldRecord) -> Self {
        Self {
            method: METHOD,
            dataset,
            repetition: r.repetition,
            fold: r.fold,
            train_size: r.train_size,
            test_size: r.test_size,
            accuracy: r.accuracy,
            train_seconds: r.train_seconds,
            test_seconds: r.test_seconds,
            inference_seconds_per_graph: r.inference_seconds_per_graph(),
        }
    }
}

#[derive(Serialize)]
struct ScalingRow<'a> {
    method: &'a str,
    n_vertices: usize,
    mean_edges: f64,
    mean_train_seconds_per_fold: f64,
    mean_inference_seconds_per_graph: f64,
}

#[derive(Serialize)]
struct CvSummary {
    mean_accuracy: f64,
    std_accuracy: f64,
    mean_train_seconds_per_fold: f64,
    mean_inference_seconds_per_graph: f64,
}

#[derive(Serialize)]
struct CvDocument<'a> {
    schema: &'a str,
    schema_version: u32,
    method: &'a str,
    dataset: &'a str,
    encoder: &'a EncoderConfig,
    cv: &'a CvConfig,
    summary: CvSummary,
    folds: Vec<CvRow<'a>>,
}

#[derive(Serialize)]
struct ScalingDocument<'a> {
    schema: &'a str,
    schema_version: u32,
    method: &'a str,
    edge_prob: f64,
    graphs: usize,
    classes: usize,
    encoder: &'a EncoderConfig,
    cv: &'a CvConfig,
    points: &'a [ScalingPoint],
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Report(format!("{}: {other:?}", path.display())),
    }
}

fn write_csv<T: Serialize>(out: impl Write, path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(mut out: impl Write, path: &Path, doc: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, doc).map_err(|e| Error::Report(format!("{}: {e}", path.display())))?;
    writeln!(out).and_then(|_| out.flush()).map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

/// Writes a cross-validation report to `out`; `path` is only used to label
/// errors.
pub fn write_cv_report(report: &CvReport, format: ReportFormat, out: impl Write, path: &Path) -> Result<()> {
    let rows = report.records.iter().map(|r| CvRow::new(&report.dataset, r));
    match format {
        ReportFormat::Csv => write_csv(out, path, rows),
        ReportFormat::Json => write_json(
            out,
            path,
            &CvDocument {
                schema: CV_SCHEMA,
                schema_version: SCHEMA_VERSION,
                method: METHOD,
                dataset: &report.dataset,
                encoder: &report.encoder,
                cv: &report.cv,
                summary: CvSummary {
                    mean_accuracy: report.mean_accuracy,
                    std_accuracy: report.std_accuracy,
                    mean_train_seconds_per_fold: report.mean_train_time_per_fold,
                    mean_inference_seconds_per_graph: report.mean_inference_time_per_graph,
                },
                folds: rows.collect(),
            },
        ),
    }
}

pub fn write_scaling_report(report: &ScalingReport, format: ReportFormat, out: impl Write, path: &Path) -> Result<()> {
    match format {
        ReportFormat::Csv => write_csv(
            out,
            path,
            report.points.iter().map(|p| ScalingRow {
                method: METHOD,
                n_vertices: p.n_vertices,
                mean_edges: p.mean_edges,
                mean_train_seconds_per_fold: p.mean_train_time_per_fold,
                mean_inference_seconds_per_graph: p.mean_inference_time_per_graph,
            }),
        ),
        ReportFormat::Json => write_json(
            out,
            path,
            &ScalingDocument {
                schema: SCALING_SCHEMA,
                schema_version: SCHEMA_VERSION,
                method: METHOD,
                edge_prob: report.edge_prob,
                graphs: report.graphs,
                classes: report.classes,
                encoder: &report.encoder,
                cv: &report.cv,
                points: &report.points,
            },
        ),
    }
}

/// Writes a cross-validation report to the file at `path`.
pub fn emit_cv_report(report: &CvReport, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_cv_report(report, format, create(path)?, path)
}

/// Writes a scaling report to the file at `path`.
pub fn emit_scaling_report(report: &ScalingReport, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_scaling_report(report, format, create(path)?, path)
}
