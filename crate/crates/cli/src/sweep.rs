//! Batch tables over parameter grids, evaluated in parallel and emitted in a
//! fixed row order.

use crate::cache::Cache;
use crate::CliError;
use pgk_core::filtered::build_dkap;
use pgk_core::modp::{buzzard_monitor, reduce_crystalline};
use pgk_core::{PadicScalar, Q};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

pub const SWEEP_SCHEMA: &str = "pgk.sweep/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Table {
    Reduction,
    Admissibility,
}

impl Table {
    pub fn name(self) -> &'static str {
        match self {
            Table::Reduction => "reduction",
            Table::Admissibility => "admissibility",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Table::Reduction => &["p", "k", "val", "kind", "result", "case", "buzzard", "error"],
            Table::Admissibility => &["p", "k", "val", "verdict", "t_h", "t_n", "error"],
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepJob {
    pub table: Table,
    pub p: u64,
    pub ks: Vec<i64>,
    pub vals: Vec<Q>,
    pub prec: u32,
}

fn error_code(e: &pgk_core::Error) -> &'static str {
    match e {
        pgk_core::Error::InsufficientPrecision(_) => "INSUFFICIENT_PRECISION",
        pgk_core::Error::BadWeight(_) => "BAD_WEIGHT",
        pgk_core::Error::Precondition(_) => "PRECONDITION",
        pgk_core::Error::ResidueFieldTooSmall(_) => "RESIDUE_FIELD_TOO_SMALL",
        _ => "ERROR",
    }
}

fn row(job: &SweepJob, k: i64, v: Q) -> Map<String, Value> {
    let p = job.p;
    let mut r = Map::new();
    for c in job.table.columns() {
        r.insert((*c).into(), Value::String(String::new()));
    }
    let set = |r: &mut Map<String, Value>, c: &str, s: String| {
        r.insert(c.into(), Value::String(s));
    };
    set(&mut r, "p", p.to_string());
    set(&mut r, "k", k.to_string());
    set(&mut r, "val", v.to_string());
    let a_p = PadicScalar::p_power(p, v, job.prec);
    match job.table {
        Table::Reduction => match reduce_crystalline(p, k, &a_p, None) {
            Ok(red) => {
                let (kind, case) = crate::commands::reduction_kind(&red);
                set(&mut r, "kind", kind.into());
                set(&mut r, "result", red.to_string().split("  [").next().unwrap_or_default().to_string());
                set(&mut r, "case", case);
                set(&mut r, "buzzard", crate::commands::buzzard_text(buzzard_monitor(k, &a_p, &red)));
            }
            Err(e) => set(&mut r, "error", error_code(&e).into()),
        },
        Table::Admissibility => match build_dkap(p, k, a_p).and_then(|d| d.is_admissible()) {
            Ok(rep) => {
                set(&mut r, "verdict", rep.verdict.to_string());
                set(&mut r, "t_h", rep.t_h.to_string());
                set(&mut r, "t_n", rep.t_n.to_string());
            }
            Err(e) => set(&mut r, "error", error_code(&e).into()),
        },
    }
    r
}

/// Evaluate every grid point (`k` outer, `val` inner).
pub fn run_sweep(job: &SweepJob, cache: &Cache) -> Result<Vec<Map<String, Value>>, CliError> {
    let points: Vec<(i64, Q)> = job.ks.iter().flat_map(|&k| job.vals.iter().map(move |&v| (k, v))).collect();
    points
        .par_iter()
        .map(|&(k, v)| {
            let key = format!("sweep-row|{}|{}|{}|{}|{}", job.table.name(), job.p, k, v, job.prec);
            let val = cache.get_or_compute(&key, || Ok(Value::Object(row(job, k, v))))?;
            match val {
                Value::Object(m) => Ok(m),
                _ => Err(CliError::Usage("corrupt cache entry".into())),
            }
        })
        .collect()
}

pub fn to_csv(job: &SweepJob, rows: &[Map<String, Value>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(job.table.columns()).map_err(|e| CliError::Usage(e.to_string()))?;
    for r in rows {
        let rec: Vec<&str> = job.table.columns().iter().map(|c| r.get(*c).and_then(Value::as_str).unwrap_or("")).collect();
        w.write_record(&rec).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn to_json(job: &SweepJob, rows: &[Map<String, Value>]) -> Result<String, CliError> {
    let doc = json!({
        "schema": SWEEP_SCHEMA,
        "table": job.table.name(),
        "p": job.p,
        "columns": job.table.columns(),
        "rows": rows,
    });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}
