//! GMRES(m): Arnoldi, the Hessenberg least-squares solve, one restart cycle
//! and the plain restarted driver.

mod arnoldi;
mod lsq;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

pub use arnoldi::{arnoldi, ArnoldiResult, Hessenberg, BREAKDOWN_RTOL};
pub use lsq::solve_hessenberg_lsq;

use crate::error::{check_len, Error, Result};
use crate::observe::{NoopObserver, SolveObserver};
use crate::sparse::{add, axpy_in_place, norm2, CsrMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Gmres,
    Lbgmres,
    Lgmres,
    Llbgmres,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Gmres,
        Method::Lbgmres,
        Method::Lgmres,
        Method::Llbgmres,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Gmres => "gmres",
            Method::Lbgmres => "lbgmres",
            Method::Lgmres => "lgmres",
            Method::Llbgmres => "llbgmres",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method {s:?}")))
    }
}

/// How each new Krylov vector is orthogonalized against the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orthogonalization {
    /// One modified Gram–Schmidt sweep.
    ModifiedGramSchmidt,
    /// Two sweeps; keeps `VᵀV` at rounding level even when a cycle drives
    /// the residual down by many orders of magnitude.
    #[default]
    ModifiedGramSchmidtTwice,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    /// Restart frequency: Arnoldi steps per cycle.
    pub m: usize,
    /// Width of the correction buffer (projection methods).
    pub l: usize,
    /// Look-back depth (look-back methods).
    pub d: usize,
    /// Stop when `‖b − Ax‖₂ / ‖b‖₂ <= tol`.
    pub tol: f64,
    pub max_restarts: usize,
    pub orthogonalization: Orthogonalization,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::Gmres,
            m: 30,
            l: 10,
            d: 3,
            tol: 1e-8,
            max_restarts: 1000,
            orthogonalization: Orthogonalization::default(),
        }
    }
}

impl SolverConfig {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.m < 1 {
            return fail("m must be at least 1".into());
        }
        if self.l < 1 {
            return fail("l must be at least 1".into());
        }
        if self.d < 2 {
            return fail(format!("d must be at least 2, got {}", self.d));
        }
        if self.method == Method::Llbgmres && self.d != 3 {
            return fail(format!(
                "llbgmres is defined for d = 3 only, got {}",
                self.d
            ));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return fail(format!("tol must be positive and finite, got {}", self.tol));
        }
        if self.max_restarts < 1 {
            return fail("max_restarts must be at least 1".into());
        }
        Ok(())
    }

    pub(crate) fn expect_method(&self, method: Method) -> Result<()> {
        self.validate()?;
        if self.method != method {
            return Err(Error::InvalidConfig(format!(
                "configuration selects {}, but the {} driver was called",
                self.method, method
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryEntry {
    pub restart: usize,
    pub relative_residual: f64,
    /// Seconds since the start of the solve.
    pub elapsed: f64,
}

/// Relative residual after every restart.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceHistory {
    pub entries: Vec<HistoryEntry>,
    pub converged: bool,
    pub total_restarts: usize,
}

impl ConvergenceHistory {
    pub fn relative_residuals(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.relative_residual).collect()
    }

    pub fn final_relative_residual(&self) -> Option<f64> {
        self.entries.last().map(|e| e.relative_residual)
    }

    /// Checks `res(t+1) <= res(t)·(1 + rtol)` for every pair with
    /// `t >= from_restart`.
    pub fn is_monotone_from(&self, from_restart: usize, rtol: f64) -> bool {
        self.entries
            .windows(2)
            .filter(|w| w[0].restart >= from_restart)
            .all(|w| w[1].relative_residual <= w[0].relative_residual * (1.0 + rtol))
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<f64>,
    pub history: ConvergenceHistory,
}

/// One GMRES(m) cycle.
#[derive(Debug, Clone)]
pub struct CycleResult {
    /// Increment `z = V_k s`.
    pub z: Vec<f64>,
    /// `x0 + z`.
    pub x: Vec<f64>,
    /// `b − A x`, recomputed from `x`.
    pub residual: Vec<f64>,
    pub residual_norm: f64,
    /// Minimum of the Hessenberg least-squares problem.
    pub predicted_residual: f64,
    pub initial_residual_norm: f64,
    pub steps: usize,
    pub breakdown: bool,
}

/// Everything a restart loop needs that stays fixed across cycles.
pub(crate) struct Problem<'a> {
    pub a: &'a CsrMatrix,
    pub b: &'a [f64],
    pub b_norm: f64,
    pub m: usize,
    breakdown_tol: f64,
    orth: Orthogonalization,
}

impl<'a> Problem<'a> {
    pub fn new(a: &'a CsrMatrix, b: &'a [f64], config: &SolverConfig) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidMatrix(format!(
                "matrix is {}x{}, expected square",
                a.n_rows(),
                a.n_cols()
            )));
        }
        check_len("right-hand side", a.n_rows(), b.len())?;
        Ok(Self {
            a,
            b,
            b_norm: norm2(b),
            m: config.m,
            breakdown_tol: BREAKDOWN_RTOL * a.frobenius_norm(),
            orth: config.orthogonalization,
        })
    }

    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        self.a
            .residual(self.b, x)
            .expect("dimensions checked in Problem::new")
    }

    /// Runs one cycle from `x0`, whose residual `r0` the caller already has.
    pub fn cycle(
        &self,
        x0: &[f64],
        r0: &[f64],
        observer: &mut dyn SolveObserver,
    ) -> Result<CycleResult> {
        let arn = arnoldi::arnoldi_with(self.a, r0, self.m, self.breakdown_tol, self.orth)?;
        observer.on_arnoldi(self.a, &arn);
        let (s, predicted_residual) = solve_hessenberg_lsq(&arn.hessenberg, arn.beta)?;
        let mut z = vec![0.0; x0.len()];
        for (sj, vj) in s.iter().zip(&arn.basis) {
            axpy_in_place(*sj, vj, &mut z);
        }
        let x = add(x0, &z);
        let residual = self.residual(&x);
        let residual_norm = norm2(&residual);
        Ok(CycleResult {
            z,
            x,
            residual,
            residual_norm,
            predicted_residual,
            initial_residual_norm: arn.beta,
            steps: arn.steps(),
            breakdown: arn.breakdown,
        })
    }
}

/// Records history entries against a common start time.
pub(crate) struct Recorder {
    start: Instant,
    pub history: ConvergenceHistory,
}

impl Recorder {
    pub fn start() -> Self {
        Self {
            start: Instant::now(),
            history: ConvergenceHistory::default(),
        }
    }

    pub fn record(&mut self, restart: usize, relative_residual: f64) {
        self.history.entries.push(HistoryEntry {
            restart,
            relative_residual,
            elapsed: self.start.elapsed().as_secs_f64(),
        });
        self.history.total_restarts = restart;
    }
}

/// A single GMRES(m) cycle from `x0`.
pub fn gmres_cycle(a: &CsrMatrix, b: &[f64], x0: &[f64], m: usize) -> Result<CycleResult> {
    let config = SolverConfig {
        m,
        ..SolverConfig::default()
    };
    config.validate()?;
    let problem = Problem::new(a, b, &config)?;
    check_len("initial guess", a.n_cols(), x0.len())?;
    let r0 = problem.residual(x0);
    problem.cycle(x0, &r0, &mut NoopObserver)
}

/// Plain restarted GMRES(m) from `x0 = 0`.
pub fn run_gmres(a: &CsrMatrix, b: &[f64], config: &SolverConfig) -> Result<Solution> {
    run_gmres_observed(a, b, config, &mut NoopObserver)
}

pub fn run_gmres_observed(
    a: &CsrMatrix,
    b: &[f64],
    config: &SolverConfig,
    observer: &mut dyn SolveObserver,
) -> Result<Solution> {
    config.expect_method(Method::Gmres)?;
    let problem = Problem::new(a, b, config)?;
    let mut x = vec![0.0; a.n_cols()];
    let mut rec = Recorder::start();
    if problem.b_norm == 0.0 {
        rec.history.converged = true;
        return Ok(Solution {
            x,
            history: rec.history,
        });
    }
    let mut r = b.to_vec();
    for t in 1..=config.max_restarts {
        let cycle = problem.cycle(&x, &r, observer)?;
        observer.on_cycle(t, &cycle);
        let rel = cycle.residual_norm / problem.b_norm;
        rec.record(t, rel);
        x = cycle.x;
        r = cycle.residual;
        if rel <= config.tol {
            rec.history.converged = true;
            break;
        }
    }
    Ok(Solution {
        x,
        history: rec.history,
    })
}
