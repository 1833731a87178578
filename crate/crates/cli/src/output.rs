//! CSV and metadata files. Bodies hold only computed numbers so identical
//! runs produce identical bytes; the wall-clock timestamp lives in
//! `run_metadata.txt` alone.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use dca_core::analysis::ConvergenceTable;
use dca_core::{DiscreteState, MomentSeries};

use crate::error::{CliError, Result};

/// Ordered `key = value` pairs written as `#` header lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata(pub Vec<(String, String)>);

impl Metadata {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn header(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.0 {
            let _ = writeln!(s, "# {k} = {v}");
        }
        s
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write(path: PathBuf, text: String) -> Result<PathBuf> {
    fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

/// `snapshot_t{t}.csv` with columns `x_center, c_i, f_eps`.
pub fn write_snapshot(dir: &Path, state: &DiscreteState, meta: &Metadata) -> Result<PathBuf> {
    let mut s = meta.header();
    let _ = writeln!(s, "# t = {}", state.t);
    s.push_str("x_center,c_i,f_eps\n");
    let sf = state.reconstruct();
    for (k, &c) in state.c.iter().enumerate() {
        let x = state.grid.center(k + 1);
        // the step function at a cell center is that cell's value
        let f = sf.eval(x).unwrap_or(c);
        let _ = writeln!(s, "{x},{c},{f}");
    }
    write(dir.join(format!("snapshot_t{}.csv", state.t)), s)
}

/// `moments.csv` with columns `t, M0, M1, M2, Y1, N_count, mass_defect_integral`.
pub fn write_moments(dir: &Path, series: &MomentSeries, meta: &Metadata) -> Result<PathBuf> {
    let mut s = meta.header();
    s.push_str("t,M0,M1,M2,Y1,N_count,mass_defect_integral\n");
    for k in 0..series.len() {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            series.times[k],
            series.m0[k],
            series.m1[k],
            series.m2[k],
            series.y1[k],
            series.n_count[k],
            series.mass_defect_integral[k]
        );
    }
    write(dir.join("moments.csv"), s)
}

fn table_rows(s: &mut String, table: &ConvergenceTable) {
    for ((eps, e1), order) in table.rows.iter().zip(table.cumulative_orders()) {
        let order = order.map_or_else(|| "NaN".to_string(), |o| o.to_string());
        let _ = writeln!(s, "{eps},{},{e1},{order}", table.t);
    }
}

/// `convergence_t{t}.csv` with columns `epsilon, t, E1, order_estimate_cumulative`.
pub fn write_convergence(dir: &Path, table: &ConvergenceTable, meta: &Metadata) -> Result<PathBuf> {
    let mut s = meta.header();
    if let Ok(p) = table.order_estimate() {
        let _ = writeln!(s, "# order_estimate = {p}");
    }
    s.push_str("epsilon,t,E1,order_estimate_cumulative\n");
    table_rows(&mut s, table);
    write(dir.join(format!("convergence_t{}.csv", table.t)), s)
}

/// All convergence tables in one file, same columns.
pub fn write_error_history(dir: &Path, tables: &[ConvergenceTable], meta: &Metadata) -> Result<PathBuf> {
    let mut s = meta.header();
    s.push_str("epsilon,t,E1,order_estimate_cumulative\n");
    for t in tables {
        table_rows(&mut s, t);
    }
    write(dir.join("error_history.csv"), s)
}

/// `run_metadata.txt`: the metadata block plus the wall-clock time of the run.
pub fn write_run_metadata(dir: &Path, meta: &Metadata) -> Result<PathBuf> {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut s = String::new();
    for (k, v) in &meta.0 {
        let _ = writeln!(s, "{k} = {v}");
    }
    let _ = writeln!(s, "timestamp_unix = {now}");
    write(dir.join("run_metadata.txt"), s)
}

/// Lines of a CSV file that are not `#` metadata.
pub fn csv_body(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect()
}
