//! Restarted GMRES(m) and three accelerated variants for sparse real
//! systems `Ax = b`:
//!
//! * **LBGMRES**: the next cycle starts from `x^(t) + u·Δx^(t)`, a one
//!   dimensional residual minimization along a direction built from past
//!   iterates (look-back restart).
//! * **LGMRES**: the last `l` restart increments are kept, and after each
//!   cycle the residual is minimized over their span.
//! * **LLBGMRES**: both at once, with the `d = 3` look-back direction.
//!
//! ```
//! use krylov_restart::{solve, CsrMatrix, Method, SolverConfig};
//!
//! let a = CsrMatrix::from_diagonal(&[1.0, 2.0, 3.0, 4.0]);
//! let b = a.spmv(&[1.0; 4]).unwrap();
//! let config = SolverConfig { m: 2, l: 2, ..SolverConfig::new(Method::Lgmres) };
//! let sol = solve(&a, &b, &config).unwrap();
//! assert!(sol.history.converged);
//! ```

pub mod accel;
pub mod error;
pub mod gallery;
pub mod harness;
pub mod mtx;
pub mod observe;
pub mod solver;
pub mod sparse;

pub use accel::{
    project_accelerate, run_lbgmres, run_lgmres, run_llbgmres, CorrectionBuffer, LookBackState,
    Projection,
};
pub use error::{Error, Result};
pub use mtx::{parse_matrix_market, read_matrix_market, write_matrix_market, MtxError};
pub use observe::{LookBackEvent, NoopObserver, ProjectionEvent, SolveObserver};
pub use solver::{
    arnoldi, gmres_cycle, run_gmres, solve_hessenberg_lsq, ArnoldiResult, ConvergenceHistory,
    CycleResult, HistoryEntry, Method, Orthogonalization, Solution, SolverConfig,
};
pub use sparse::{axpy, dot, norm2, CsrMatrix};

/// Runs the method selected by `config.method`.
pub fn solve(a: &CsrMatrix, b: &[f64], config: &SolverConfig) -> Result<Solution> {
    solve_observed(a, b, config, &mut NoopObserver)
}

pub fn solve_observed(
    a: &CsrMatrix,
    b: &[f64],
    config: &SolverConfig,
    observer: &mut dyn SolveObserver,
) -> Result<Solution> {
    match config.method {
        Method::Gmres => solver::run_gmres_observed(a, b, config, observer),
        Method::Lbgmres => accel::run_lbgmres_observed(a, b, config, observer),
        Method::Lgmres => accel::run_lgmres_observed(a, b, config, observer),
        Method::Llbgmres => accel::run_llbgmres_observed(a, b, config, observer),
    }
}
