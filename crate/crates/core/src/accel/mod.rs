//! Accelerated restarts: the look-back correction, the projection over
//! stored restart increments, and the LBGMRES / LGMRES / LLBGMRES drivers.

mod buffer;
mod lookback;
mod projection;
mod qr;

pub use buffer::{BufferColumn, CorrectionBuffer};
pub use lookback::{lookback_coefficient, lookback_index, LookBackState};
pub use projection::{project_accelerate, Projection, RANK_RTOL, STEP_RTOL};

use crate::error::Result;
use crate::observe::{LookBackEvent, NoopObserver, ProjectionEvent, SolveObserver};
use crate::solver::{Method, Problem, Recorder, Solution, SolverConfig};
use crate::sparse::{axpy_in_place, norm2, CsrMatrix};

#[derive(Debug, Clone, Copy)]
enum LookBack {
    /// Δx from stored iterates, any `d >= 2`.
    General(usize),
    /// Δx = z^(t−1) + y^(t) + z^(t), the `d = 3` form.
    ThreeTerm,
}

#[derive(Debug, Clone, Copy)]
struct Strategy {
    buffer_width: Option<usize>,
    lookback: Option<LookBack>,
}

/// Restarted GMRES accelerated by projecting onto the last `l` increments.
pub fn run_lgmres(a: &CsrMatrix, b: &[f64], config: &SolverConfig) -> Result<Solution> {
    run_lgmres_observed(a, b, config, &mut NoopObserver)
}

pub fn run_lgmres_observed(
    a: &CsrMatrix,
    b: &[f64],
    config: &SolverConfig,
    observer: &mut dyn SolveObserver,
) -> Result<Solution> {
    config.expect_method(Method::Lgmres)?;
    let strategy = Strategy {
        buffer_width: Some(config.l),
        lookback: None,
    };
    run_restarted(a, b, config, strategy, observer)
}

/// Restarted GMRES with look-back corrected restart points.
pub fn run_lbgmres(a: &CsrMatrix, b: &[f64], config: &SolverConfig) -> Result<Solution> {
    run_lbgmres_observed(a, b, config, &mut NoopObserver)
}

pub fn run_lbgmres_observed(
    a: &CsrMatrix,
    b: &[f64],
    config: &SolverConfig,
    observer: &mut dyn SolveObserver,
) -> Result<Solution> {
    config.expect_method(Method::Lbgmres)?;
    let strategy = Strategy {
        buffer_width: None,
        lookback: Some(LookBack::General(config.d)),
    };
    run_restarted(a, b, config, strategy, observer)
}

/// Projection acceleration combined with the `d = 3` look-back correction.
pub fn run_llbgmres(a: &CsrMatrix, b: &[f64], config: &SolverConfig) -> Result<Solution> {
    run_llbgmres_observed(a, b, config, &mut NoopObserver)
}

pub fn run_llbgmres_observed(
    a: &CsrMatrix,
    b: &[f64],
    config: &SolverConfig,
    observer: &mut dyn SolveObserver,
) -> Result<Solution> {
    config.expect_method(Method::Llbgmres)?;
    let strategy = Strategy {
        buffer_width: Some(config.l),
        lookback: Some(LookBack::ThreeTerm),
    };
    run_restarted(a, b, config, strategy, observer)
}

/// Shared restart loop. Per restart `t`:
///
/// 1. one GMRES(m) cycle from `x0^(t)` gives `z^(t)` and `x^(t)`;
/// 2. with a buffer, `z^(t)` is stored and, once `t >= l`, `x^(t)` is
///    replaced by the minimizer over `x0^(t) + span(R)` when that is
///    strictly better;
/// 3. with look-back, `x0^(t+1) = x^(t) + u·Δx^(t)` when that does not
///    increase the residual, otherwise `x0^(t+1) = x^(t)`.
///
/// Convergence is tested on the recomputed residual of `x0^(t+1)`.
fn run_restarted(
    a: &CsrMatrix,
    b: &[f64],
    config: &SolverConfig,
    strategy: Strategy,
    observer: &mut dyn SolveObserver,
) -> Result<Solution> {
    let problem = Problem::new(a, b, config)?;
    let n = a.n_cols();
    let mut x0 = vec![0.0; n];
    let mut rec = Recorder::start();
    if problem.b_norm == 0.0 {
        rec.history.converged = true;
        return Ok(Solution {
            x: x0,
            history: rec.history,
        });
    }
    let mut r0 = b.to_vec();
    let mut buffer = strategy
        .buffer_width
        .map(CorrectionBuffer::new)
        .transpose()?;
    let mut lookback = match strategy.lookback {
        Some(LookBack::General(d)) => Some(LookBackState::new(d)?),
        Some(LookBack::ThreeTerm) => Some(LookBackState::new(3)?),
        None => None,
    };

    for t in 1..=config.max_restarts {
        if let Some(state) = lookback.as_mut() {
            state.begin_restart(t, &x0);
        }
        let cycle = problem.cycle(&x0, &r0, observer)?;
        observer.on_cycle(t, &cycle);
        let mut x = cycle.x;
        let mut r = cycle.residual;
        let mut r_norm = cycle.residual_norm;

        if let Some(buf) = buffer.as_mut() {
            buf.insert(a, cycle.z, t)?;
            if t >= buf.capacity() {
                let proj = projection::project_from(a, b, &x, &r, buf)?;
                let accepted = proj.residual_norm < r_norm;
                observer.on_projection(&ProjectionEvent {
                    restart: t,
                    buffer: buf,
                    projection: &proj,
                    base_residual_norm: cycle.initial_residual_norm,
                    cycle_residual_norm: r_norm,
                    accepted,
                });
                if accepted {
                    x = proj.x;
                    r = proj.residual;
                    r_norm = proj.residual_norm;
                }
            }
        }

        if let Some(state) = lookback.as_mut() {
            state.finish_restart(&x);
            let delta = match strategy.lookback {
                Some(LookBack::ThreeTerm) => state.three_term_delta(),
                _ => state.delta(t),
            };
            let mut event = LookBackEvent {
                restart: t,
                delta_norm: delta.as_deref().map(norm2),
                coefficient: 0.0,
                uncorrected_residual_norm: r_norm,
                corrected_residual_norm: r_norm,
                applied: false,
            };
            let mut correction = None;
            if let Some(delta) = delta {
                let a_delta = a.spmv(&delta)?;
                let u = lookback::lookback_coefficient(&r, &a_delta);
                event.coefficient = u;
                if u != 0.0 {
                    let mut x_new = x.clone();
                    axpy_in_place(u, &delta, &mut x_new);
                    let r_new = problem.residual(&x_new);
                    let r_new_norm = norm2(&r_new);
                    if r_new_norm <= r_norm {
                        let mut y = delta;
                        y.iter_mut().for_each(|v| *v *= u);
                        correction = Some(y);
                        event.applied = true;
                        event.corrected_residual_norm = r_new_norm;
                        x = x_new;
                        r = r_new;
                        r_norm = r_new_norm;
                    }
                }
            }
            observer.on_lookback(&event);
            state.set_next_correction(correction);
        }

        let rel = r_norm / problem.b_norm;
        rec.record(t, rel);
        x0 = x;
        r0 = r;
        if rel <= config.tol {
            rec.history.converged = true;
            break;
        }
    }
    Ok(Solution {
        x: x0,
        history: rec.history,
    })
}
