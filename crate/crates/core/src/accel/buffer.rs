use crate::error::{check_len, Error, Result};
use crate::sparse::CsrMatrix;

/// One stored restart increment and its image under `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct BufferColumn {
    pub z: Vec<f64>,
    pub az: Vec<f64>,
    /// Restart that produced `z`.
    pub restart: usize,
}

/// The matrix `R = [z^(1) … z^(l)]` of recent restart increments, with
/// `A·z` cached per column.
///
/// Increment `t` goes to slot `k = t mod l`, with `k = 0` meaning slot `l`.
/// Slots are 1-based in the public API.
#[derive(Debug, Clone)]
pub struct CorrectionBuffer {
    slots: Vec<Option<BufferColumn>>,
    filled: usize,
    next_slot: usize,
}

impl CorrectionBuffer {
    pub fn new(l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidConfig(
                "buffer width l must be at least 1".into(),
            ));
        }
        Ok(Self {
            slots: vec![None; l],
            filled: 0,
            next_slot: 1,
        })
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    pub fn filled(&self) -> usize {
        self.filled
    }

    /// Slot the next insertion at restart `last + 1` would use.
    pub fn next_slot(&self) -> usize {
        self.next_slot
    }

    /// Slot used for restart `t`.
    pub fn slot_for(&self, t: usize) -> usize {
        let l = self.capacity();
        match t % l {
            0 => l,
            k => k,
        }
    }

    /// Stores `z^(t)` and `A·z^(t)` in slot `t mod l`. Returns the slot.
    pub fn insert(&mut self, a: &CsrMatrix, z: Vec<f64>, t: usize) -> Result<usize> {
        check_len("buffer insert", a.n_cols(), z.len())?;
        let az = a.spmv(&z)?;
        let slot = self.slot_for(t);
        if self.slots[slot - 1]
            .replace(BufferColumn { z, az, restart: t })
            .is_none()
        {
            self.filled += 1;
        }
        self.next_slot = self.slot_for(t + 1);
        Ok(slot)
    }

    /// Column in 1-based slot `k`, if filled.
    pub fn slot(&self, k: usize) -> Option<&BufferColumn> {
        self.slots.get(k.checked_sub(1)?)?.as_ref()
    }

    /// Filled columns in slot order.
    pub fn columns(&self) -> impl Iterator<Item = &BufferColumn> {
        self.slots.iter().flatten()
    }
}
