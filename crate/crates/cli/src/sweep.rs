//! θ-grid sweeps.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};

use qfi_core::{Model, QfiReport};
use serde_json::{Map, Value};

use crate::config::{Format, SweepConfig};
use crate::families::Instance;

pub const COLUMNS: [&str; 12] = [
    "theta",
    "qfi_bvn",
    "qfi_ld1",
    "qfi_ld2",
    "qfi_sld",
    "i1",
    "i2_bvn",
    "i2_ld1",
    "i2_ld2",
    "i2_sld",
    "kmb_residual",
    "max_zero_expectation",
];

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("at theta = {theta}: {source}")]
    Model { theta: f64, source: qfi_core::Error },
    #[error("{0}")]
    Config(#[from] crate::config::ConfigError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// One output row: the report plus the swept family parameter, if any.
#[derive(Debug, Clone)]
pub struct Row {
    pub report: QfiReport,
    pub param_value: Option<f64>,
}

/// Worker count from `QFI_THREADS`, else the machine's parallelism.
pub fn thread_count() -> usize {
    std::env::var("QFI_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

pub fn run(cfg: &SweepConfig, threads: usize) -> Result<Vec<Row>, SweepError> {
    let rows = cfg.rows();
    let mut jobs = Vec::with_capacity(rows.len());
    let mut shared: Option<Instance> = None;
    for &(theta, g) in &rows {
        let inst = match (&cfg.param, &shared) {
            (None, Some(i)) => i.clone(),
            _ => {
                let spec = cfg.family_spec(g)?;
                let i = spec.instantiate().map_err(|source| SweepError::Model { theta, source })?;
                if cfg.param.is_none() {
                    shared = Some(i.clone());
                }
                i
            }
        };
        jobs.push((theta, g, inst));
    }

    let evaluate = |(theta, g, inst): &(f64, f64, Instance)| -> Result<Row, SweepError> {
        let fam = inst.at(*theta).map_err(|source| SweepError::Model { theta: *theta, source })?;
        let report = QfiReport::compute(&fam.with_mode(cfg.derivative), *theta)
            .map_err(|source| SweepError::Model { theta: *theta, source })?;
        Ok(Row { report, param_value: cfg.param.as_ref().map(|_| *g) })
    };

    let workers = threads.clamp(1, jobs.len().max(1));
    let mut results: Vec<Option<Result<Row, SweepError>>> = (0..jobs.len()).map(|_| None).collect();
    if workers == 1 {
        for (slot, job) in results.iter_mut().zip(&jobs) {
            *slot = Some(evaluate(job));
        }
    } else {
        let next = AtomicUsize::new(0);
        let done: Vec<Vec<(usize, Result<Row, SweepError>)>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    s.spawn(|| {
                        let mut mine = Vec::new();
                        loop {
                            let i = next.fetch_add(1, Ordering::Relaxed);
                            if i >= jobs.len() {
                                break mine;
                            }
                            mine.push((i, evaluate(&jobs[i])));
                        }
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
        });
        for (i, r) in done.into_iter().flatten() {
            results[i] = Some(r);
        }
    }
    results.into_iter().map(|r| r.expect("every grid point evaluated")).collect()
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn row_values(row: &Row, models: &[Model]) -> Vec<Option<f64>> {
    let r = &row.report;
    let pick = |m: Model, v: f64| models.contains(&m).then_some(v);
    let mut out = vec![Some(r.theta)];
    out.extend(Model::ALL.map(|m| pick(m, r.qfi(m))));
    out.push(Some(r.i1));
    out.extend(Model::ALL.map(|m| pick(m, r.i2(m))));
    out.push(Some(r.kmb_residual));
    let zero = models.iter().map(|m| r.zero_expectation[m.index()].abs()).fold(0.0, f64::max);
    out.push(Some(zero));
    out.push(row.param_value);
    out
}

fn header(cfg: &SweepConfig) -> Vec<String> {
    let mut h: Vec<String> = COLUMNS.iter().map(|s| s.to_string()).collect();
    if let Some(p) = &cfg.param {
        h.push(p.clone());
    }
    h
}

pub fn write_csv(cfg: &SweepConfig, rows: &[Row], out: impl Write) -> Result<(), SweepError> {
    let mut w = csv::Writer::from_writer(out);
    let head = header(cfg);
    w.write_record(&head)?;
    for row in rows {
        let vals = row_values(row, &cfg.models);
        let cells = vals[..head.len()].iter().map(|v| v.map(format_number).unwrap_or_default());
        w.write_record(cells)?;
    }
    w.flush()?;
    Ok(())
}

/// The same numbers as the CSV, each parsed back from its decimal rendering.
pub fn to_json(cfg: &SweepConfig, rows: &[Row]) -> Value {
    let head = header(cfg);
    let records: Vec<Value> = rows
        .iter()
        .map(|row| {
            let vals = row_values(row, &cfg.models);
            let mut obj = Map::new();
            for (k, v) in head.iter().zip(vals) {
                let num = v.map(|x| format_number(x).parse::<f64>().expect("rendered float parses"));
                obj.insert(k.clone(), num.map_or(Value::Null, Value::from));
            }
            Value::Object(obj)
        })
        .collect();
    let mut top = Map::new();
    top.insert("family".into(), Value::from(cfg.family_name.clone()));
    top.insert("models".into(), Value::from(cfg.models.iter().map(|m| m.name()).collect::<Vec<_>>()));
    top.insert("rows".into(), Value::Array(records));
    Value::Object(top)
}

pub fn write(cfg: &SweepConfig, rows: &[Row], format: Format, mut out: impl Write) -> Result<(), SweepError> {
    match format {
        Format::Csv => write_csv(cfg, rows, out),
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &to_json(cfg, rows))?;
            writeln!(out)?;
            Ok(())
        }
    }
}
