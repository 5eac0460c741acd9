//! Fixed workloads shared by the criterion benchmarks.

use krylov_restart::gallery::convection_diffusion_2d;
use krylov_restart::{CsrMatrix, Method, SolverConfig};

/// Convection strength used for every workload.
pub const BETA: f64 = 20.0;

/// A nonsymmetric convection-diffusion system with `b = A·1`.
pub struct Workload {
    pub a: CsrMatrix,
    pub b: Vec<f64>,
}

impl Workload {
    pub fn new(nx: usize) -> Self {
        let a = convection_diffusion_2d(nx, BETA);
        let b = a.spmv(&vec![1.0; a.n_cols()]).expect("square matrix");
        Self { a, b }
    }

    pub fn n(&self) -> usize {
        self.a.n_rows()
    }
}

pub fn config(method: Method) -> SolverConfig {
    SolverConfig {
        m: 20,
        l: 5,
        d: 3,
        max_restarts: 500,
        ..SolverConfig::new(method)
    }
}
