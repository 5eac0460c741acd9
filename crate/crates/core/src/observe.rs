//! Hooks into the restart loops.
//!
//! Drivers report every Arnoldi run, every finished cycle, every projection
//! and every look-back correction. The default methods do nothing, so an
//! observer only overrides what it needs. The test suites use this to check
//! invariants on intermediate quantities without widening the solver API.

use crate::accel::{CorrectionBuffer, Projection};
use crate::solver::{ArnoldiResult, CycleResult};
use crate::sparse::CsrMatrix;

/// One projection step of LGMRES or LLBGMRES.
#[derive(Debug)]
pub struct ProjectionEvent<'a> {
    pub restart: usize,
    pub buffer: &'a CorrectionBuffer,
    pub projection: &'a Projection,
    /// `‖b − A·base_x‖`, the residual entering the cycle.
    pub base_residual_norm: f64,
    /// Residual of the cycle's own iterate, before projection.
    pub cycle_residual_norm: f64,
    /// Whether the projected iterate replaced the cycle iterate.
    pub accepted: bool,
}

/// One look-back correction `x0^(t+1) = x^(t) + u·Δx`.
#[derive(Debug, Clone, PartialEq)]
pub struct LookBackEvent {
    pub restart: usize,
    /// `None` when no correction direction exists (first restart, or the
    /// look-back index falls before the first restart).
    pub delta_norm: Option<f64>,
    pub coefficient: f64,
    pub uncorrected_residual_norm: f64,
    pub corrected_residual_norm: f64,
    /// False when the correction was skipped or rejected.
    pub applied: bool,
}

pub trait SolveObserver {
    fn on_arnoldi(&mut self, _a: &CsrMatrix, _arnoldi: &ArnoldiResult) {}

    fn on_cycle(&mut self, _restart: usize, _cycle: &CycleResult) {}

    fn on_projection(&mut self, _event: &ProjectionEvent<'_>) {}

    fn on_lookback(&mut self, _event: &LookBackEvent) {}
}

#[derive(Debug, Default, Clone, Copy)]
pub struct NoopObserver;

impl SolveObserver for NoopObserver {}
