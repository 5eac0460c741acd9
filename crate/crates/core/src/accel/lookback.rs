//! Look-back restart correction.
//!
//! After cycle `t` the next initial guess is `x0^(t+1) = x^(t) + u·Δx^(t)`,
//! where `Δx^(t)` is taken from the iterates `⌊d/2⌋` restarts back and `u`
//! minimizes `‖r^(t) − u·AΔx^(t)‖₂`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::sparse::{add, dot_unchecked, sub};

/// Index `t_d` of the restart the correction looks back to, or `None`
/// when it falls before the first restart.
///
/// `t_d = t − d/2` for even `d` and `t − (d−1)/2` for odd `d`.
pub fn lookback_index(t: usize, d: usize) -> Option<usize> {
    let back = d / 2;
    t.checked_sub(back).filter(|&td| td >= 1)
}

/// `argmin_u ‖r − u·AΔx‖₂`, or zero when `AΔx = 0`.
pub fn lookback_coefficient(r: &[f64], a_delta: &[f64]) -> f64 {
    let denom = dot_unchecked(a_delta, a_delta);
    if denom > 0.0 {
        dot_unchecked(a_delta, r) / denom
    } else {
        0.0
    }
}

#[derive(Debug, Clone)]
struct Record {
    restart: usize,
    x0: Vec<f64>,
    x: Vec<f64>,
}

/// Iterates and increments the look-back correction draws on.
#[derive(Debug, Clone)]
pub struct LookBackState {
    d: usize,
    depth: usize,
    ring: VecDeque<Record>,
    pending_x0: Option<(usize, Vec<f64>)>,
    /// `x^(t) − x0^(t)` for the two most recent restarts.
    increment: Option<Vec<f64>>,
    previous_increment: Option<Vec<f64>>,
    /// `y^(t)`, the correction that produced the current `x0^(t)`.
    correction: Option<Vec<f64>>,
    next_correction: Option<Vec<f64>>,
}

impl LookBackState {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidConfig(format!(
                "look-back depth d must be at least 2, got {d}"
            )));
        }
        Ok(Self {
            d,
            depth: d.div_ceil(2) + 1,
            ring: VecDeque::new(),
            pending_x0: None,
            increment: None,
            previous_increment: None,
            correction: None,
            next_correction: None,
        })
    }

    /// Look-back depth `d`.
    pub fn lookback_depth(&self) -> usize {
        self.d
    }

    /// Number of past restarts kept.
    pub fn ring_depth(&self) -> usize {
        self.depth
    }

    /// Registers the initial guess `x0^(t)` of restart `t`.
    pub fn begin_restart(&mut self, t: usize, x0: &[f64]) {
        self.pending_x0 = Some((t, x0.to_vec()));
        self.correction = self.next_correction.take();
    }

    /// Registers the final iterate `x^(t)` of the restart begun last.
    pub fn finish_restart(&mut self, x: &[f64]) {
        let (restart, x0) = self
            .pending_x0
            .take()
            .expect("finish_restart without begin_restart");
        self.previous_increment = self.increment.take();
        self.increment = Some(sub(x, &x0));
        self.ring.push_back(Record {
            restart,
            x0,
            x: x.to_vec(),
        });
        while self.ring.len() > self.depth {
            self.ring.pop_front();
        }
    }

    /// Stores `y^(t+1)`, to be reported as the current correction once the
    /// next restart begins. `None` means no correction was applied.
    pub fn set_next_correction(&mut self, y: Option<Vec<f64>>) {
        self.next_correction = y;
    }

    fn record(&self, t: usize) -> Option<&Record> {
        self.ring.iter().find(|r| r.restart == t)
    }

    /// `Δx^(t)` from the stored iterates, following the even/odd case split
    /// including the early-iteration guard. `None` means the correction is
    /// zero for this restart.
    pub fn delta(&self, t: usize) -> Option<Vec<f64>> {
        if t < 2 {
            return None;
        }
        let d = self.d;
        let early = (t == 2 && d == 2)
            || (d.is_multiple_of(2) && t <= d / 2)
            || (d % 2 == 1 && t <= (d - 1) / 2);
        let td = lookback_index(t, d)?;
        let current = self.record(t)?;
        let past = self.record(td)?;
        let reference = if early || d % 2 == 1 {
            &past.x0
        } else {
            &past.x
        };
        Some(sub(&current.x, reference))
    }

    /// `Δx^(t) = z^(t−1) + y^(t) + z^(t)`, the `d = 3` form built from
    /// increments rather than stored iterates.
    pub fn three_term_delta(&self) -> Option<Vec<f64>> {
        let z = self.increment.as_ref()?;
        let z_prev = self.previous_increment.as_ref()?;
        let mut delta = add(z_prev, z);
        if let Some(y) = &self.correction {
            delta = add(&delta, y);
        }
        Some(delta)
    }
}
