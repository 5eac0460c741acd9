//! `krylov-bench`: run one or more restarted GMRES variants on Matrix Market
//! files and report restart counts, timings and convergence histories.
//!
//! Exit status: 0 when every run converged, 2 when any run hit the restart
//! cap, 1 on usage or input errors.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use clap::error::ErrorKind;
use clap::Parser;
use krylov_restart::harness::{matrix_name, run_benchmark, write_history_csv, BenchRun, RhsMode};
use krylov_restart::{Method, SolverConfig};

const EXIT_INPUT: u8 = 1;
const EXIT_CAP: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "krylov-bench",
    version,
    about = "Benchmark restarted GMRES variants"
)]
struct Args {
    /// Matrix Market file; repeat to run a batch.
    #[arg(long, required = true, value_name = "PATH.mtx")]
    matrix: Vec<PathBuf>,

    /// gmres, lbgmres, lgmres, llbgmres, or `all` for every method.
    #[arg(long, default_value = "gmres")]
    method: String,

    /// Arnoldi steps per restart cycle.
    #[arg(long, default_value_t = 30)]
    m: usize,

    /// Correction buffer width.
    #[arg(long, default_value_t = 10)]
    l: usize,

    /// Look-back depth.
    #[arg(long, default_value_t = 3)]
    d: usize,

    #[arg(long, default_value_t = 1e-8)]
    tol: f64,

    #[arg(long, default_value_t = 1000)]
    max_restarts: usize,

    /// ones, a-times-ones or file=<path>.
    #[arg(long, default_value = "a-times-ones")]
    rhs: String,

    /// Write the convergence history here. In a batch, the matrix and
    /// method names are appended to the file stem.
    #[arg(long, value_name = "OUT.csv")]
    history: Option<PathBuf>,
}

struct Job {
    matrix: PathBuf,
    config: SolverConfig,
}

fn parse_methods(s: &str) -> Result<Vec<Method>, String> {
    if s.eq_ignore_ascii_case("all") {
        Ok(Method::ALL.to_vec())
    } else {
        s.parse::<Method>()
            .map(|m| vec![m])
            .map_err(|e| e.to_string())
    }
}

fn history_path(base: &Path, job: &Job, batch: bool) -> PathBuf {
    if !batch {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy())
        .unwrap_or_default();
    let ext = base
        .extension()
        .map(|e| e.to_string_lossy())
        .unwrap_or("csv".into());
    base.with_file_name(format!(
        "{stem}-{}-{}.{ext}",
        matrix_name(&job.matrix),
        job.config.method
    ))
}

fn write_history(path: &Path, run: &BenchRun) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_history_csv(&run.history, &mut out)?;
    out.flush()
}

fn run_jobs(jobs: &[Job], rhs: &RhsMode) -> Vec<krylov_restart::Result<BenchRun>> {
    if jobs.len() == 1 {
        return vec![run_benchmark(&jobs[0].matrix, rhs, &jobs[0].config)];
    }
    thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|job| s.spawn(move || run_benchmark(&job.matrix, rhs, &job.config)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("benchmark thread panicked"))
            .collect()
    })
}

fn run(args: Args) -> u8 {
    let fail = |msg: String| {
        eprintln!("krylov-bench: {msg}");
        EXIT_INPUT
    };
    let methods = match parse_methods(&args.method) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    let rhs: RhsMode = match args.rhs.parse() {
        Ok(r) => r,
        Err(e) => return fail(format!("{e}")),
    };
    let mut jobs = Vec::new();
    for matrix in &args.matrix {
        for &method in &methods {
            let config = SolverConfig {
                m: args.m,
                l: args.l,
                d: args.d,
                tol: args.tol,
                max_restarts: args.max_restarts,
                ..SolverConfig::new(method)
            };
            if let Err(e) = config.validate() {
                return fail(e.to_string());
            }
            jobs.push(Job {
                matrix: matrix.clone(),
                config,
            });
        }
    }

    let batch = jobs.len() > 1;
    let mut status = 0;
    for (job, result) in jobs.iter().zip(run_jobs(&jobs, &rhs)) {
        let run = match result {
            Ok(run) => run,
            Err(e) => {
                eprintln!("krylov-bench: {e}");
                status = EXIT_INPUT;
                continue;
            }
        };
        println!("{}", run.report.summary_line());
        if let Some(base) = &args.history {
            let path = history_path(base, job, batch);
            if let Err(e) = write_history(&path, &run) {
                eprintln!("krylov-bench: {}: {e}", path.display());
                status = EXIT_INPUT;
            }
        }
        if !run.report.converged && status == 0 {
            status = EXIT_CAP;
        }
    }
    status
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INPUT),
            };
        }
    };
    ExitCode::from(run(args))
}
