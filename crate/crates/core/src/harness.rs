//! Benchmark runs: right-hand side construction, timing, the summary row
//! and the convergence-history CSV.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::mtx::read_matrix_market;
use crate::solver::{ConvergenceHistory, Method, SolverConfig};
use crate::sparse::CsrMatrix;

pub const HISTORY_CSV_HEADER: &str = "restart,relative_residual,elapsed_seconds";

/// Marker printed in place of a restart count when the cap was hit.
pub const CAP_MARKER: &str = "†";

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum RhsMode {
    Ones,
    /// `b = A·1`, so the exact solution is the all-ones vector.
    #[default]
    ATimesOnes,
    /// One value per line.
    File(PathBuf),
}

impl FromStr for RhsMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ones" => Ok(RhsMode::Ones),
            "a-times-ones" | "a_times_ones" => Ok(RhsMode::ATimesOnes),
            _ => match s.strip_prefix("file=") {
                Some(path) if !path.is_empty() => Ok(RhsMode::File(PathBuf::from(path))),
                _ => Err(Error::Rhs(format!(
                    "unknown mode {s:?}; expected ones, a-times-ones or file=<path>"
                ))),
            },
        }
    }
}

impl fmt::Display for RhsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhsMode::Ones => f.write_str("ones"),
            RhsMode::ATimesOnes => f.write_str("a-times-ones"),
            RhsMode::File(p) => write!(f, "file={}", p.display()),
        }
    }
}

pub fn build_rhs(a: &CsrMatrix, mode: &RhsMode) -> Result<Vec<f64>> {
    let n = a.n_rows();
    match mode {
        RhsMode::Ones => Ok(vec![1.0; n]),
        RhsMode::ATimesOnes => a.spmv(&vec![1.0; a.n_cols()]),
        RhsMode::File(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Rhs(format!("{}: {e}", path.display())))?;
            let v =
                parse_vector(&text).map_err(|e| Error::Rhs(format!("{}: {e}", path.display())))?;
            if v.len() != n {
                return Err(Error::Rhs(format!(
                    "{}: {} values for a system of order {n}",
                    path.display(),
                    v.len()
                )));
            }
            Ok(v)
        }
    }
}

/// Parses one finite value per line; blank lines are ignored.
pub fn parse_vector(text: &str) -> std::result::Result<Vec<f64>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let t = l.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("line {}: {t:?} is not a finite number", i + 1))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Iterations {
    Restarts(usize),
    Cap,
}

impl fmt::Display for Iterations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Iterations::Restarts(n) => write!(f, "{n}"),
            Iterations::Cap => f.write_str(CAP_MARKER),
        }
    }
}

/// One row of a results table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub matrix_name: String,
    pub n: usize,
    pub nnz: usize,
    pub method: Method,
    pub iter: Iterations,
    pub restarts: usize,
    /// Seconds spent in the solve, parsing excluded.
    pub t_total: f64,
    /// `t_total / restarts`.
    pub t_restart: f64,
    pub converged: bool,
    pub final_relative_residual: f64,
    /// `‖x − 1‖∞` when the right-hand side was `A·1`.
    pub max_error: Option<f64>,
}

impl BenchReport {
    pub fn summary_line(&self) -> String {
        let mut line = format!(
            "matrix={} n={} nnz={} method={} iter={} t_total={:.2e} t_restart={:.2e} converged={} rel_res={:.2e}",
            self.matrix_name,
            self.n,
            self.nnz,
            self.method,
            self.iter,
            self.t_total,
            self.t_restart,
            self.converged,
            self.final_relative_residual,
        );
        if let Some(e) = self.max_error {
            line.push_str(&format!(" err_inf={e:.2e}"));
        }
        line
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary_line())
    }
}

pub fn write_history_csv<W: Write>(
    history: &ConvergenceHistory,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "{HISTORY_CSV_HEADER}")?;
    for e in &history.entries {
        writeln!(
            out,
            "{},{:e},{:.2e}",
            e.restart, e.relative_residual, e.elapsed
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct BenchRun {
    pub report: BenchReport,
    pub history: ConvergenceHistory,
    pub x: Vec<f64>,
}

/// Solves an in-memory system and times it.
pub fn run_on_matrix(
    name: &str,
    a: &CsrMatrix,
    rhs: &RhsMode,
    config: &SolverConfig,
) -> Result<BenchRun> {
    let b = build_rhs(a, rhs)?;
    let start = Instant::now();
    let sol = crate::solve(a, &b, config)?;
    let t_total = start.elapsed().as_secs_f64();

    let history = sol.history;
    let restarts = history.total_restarts;
    let converged = history.converged;
    let final_relative_residual = history.final_relative_residual().unwrap_or(0.0);
    let max_error = (*rhs == RhsMode::ATimesOnes)
        .then(|| sol.x.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max));
    let report = BenchReport {
        matrix_name: name.to_owned(),
        n: a.n_rows(),
        nnz: a.nnz(),
        method: config.method,
        iter: if converged {
            Iterations::Restarts(restarts)
        } else {
            Iterations::Cap
        },
        restarts,
        t_total,
        t_restart: if restarts == 0 {
            0.0
        } else {
            t_total / restarts as f64
        },
        converged,
        final_relative_residual,
        max_error,
    };
    Ok(BenchRun {
        report,
        history,
        x: sol.x,
    })
}

/// Loads a Matrix Market file and runs [`run_on_matrix`] on it.
pub fn run_benchmark(matrix: &Path, rhs: &RhsMode, config: &SolverConfig) -> Result<BenchRun> {
    config.validate()?;
    let a = read_matrix_market(matrix)?;
    run_on_matrix(&matrix_name(matrix), &a, rhs, config)
}

pub fn matrix_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}
