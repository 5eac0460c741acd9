use crate::accel::qr::PivotedQr;
use crate::accel::CorrectionBuffer;
use crate::error::{check_len, Error, Result};
use crate::sparse::{add, axpy_in_place, norm2, CsrMatrix};

/// Pivots below this fraction of the largest are treated as rank deficiency.
pub const RANK_RTOL: f64 = 1e-12;

/// A least-squares step `δ` is taken only if `‖A·R δ‖` exceeds this
/// fraction of the current residual norm, and also exceeds `ε·‖|A|·|x|‖`,
/// the size of the residual change caused by rounding `x`. Below either
/// bound the current iterate is optimal over the span to working accuracy
/// and is kept unchanged.
pub const STEP_RTOL: f64 = 1e-10;

const MAX_STEPS: usize = 3;

/// Result of minimizing the residual over `base_x + span(R)`.
#[derive(Debug, Clone)]
pub struct Projection {
    pub x: Vec<f64>,
    /// `b − A x`, recomputed.
    pub residual: Vec<f64>,
    pub residual_norm: f64,
    /// Coefficients `y`, one per filled buffer column in slot order.
    pub coefficients: Vec<f64>,
    /// Columns of `A·R` that survived rank truncation.
    pub rank: usize,
}

/// Minimizes `‖(b − A·base_x) − (A·R) y‖₂` over `y` and returns
/// `base_x + R y` with its recomputed residual.
///
/// The search starts from `y = e_k`, `k` the most recently inserted column,
/// and solves for corrections against the recomputed residual, so the
/// result is never worse than `base_x + z_k`.
pub fn project_accelerate(
    a: &CsrMatrix,
    b: &[f64],
    base_x: &[f64],
    buf: &CorrectionBuffer,
) -> Result<Projection> {
    check_len("projection (b)", a.n_rows(), b.len())?;
    check_len("projection (base_x)", a.n_cols(), base_x.len())?;
    let newest = buf
        .columns()
        .max_by_key(|c| c.restart)
        .ok_or_else(|| Error::InvalidConfig("projection needs a non-empty buffer".into()))?;
    let x_start = add(base_x, &newest.z);
    let r_start = a.residual(b, &x_start)?;
    project_from(a, b, &x_start, &r_start, buf)
}

/// [`project_accelerate`] with the starting iterate `base_x + z_k` and its
/// residual already at hand.
pub(crate) fn project_from(
    a: &CsrMatrix,
    b: &[f64],
    x_start: &[f64],
    r_start: &[f64],
    buf: &CorrectionBuffer,
) -> Result<Projection> {
    if buf.filled() == 0 {
        return Err(Error::InvalidConfig(
            "projection needs a non-empty buffer".into(),
        ));
    }
    let columns: Vec<_> = buf.columns().collect();
    let az: Vec<&[f64]> = columns.iter().map(|c| c.az.as_slice()).collect();
    let qr = PivotedQr::new(&az, RANK_RTOL);
    let newest = (0..columns.len())
        .max_by_key(|&i| columns[i].restart)
        .expect("non-empty buffer");

    let mut y = vec![0.0; columns.len()];
    y[newest] = 1.0;
    let mut x = x_start.to_vec();
    let mut residual = r_start.to_vec();
    let mut residual_norm = norm2(&residual);
    let noise = f64::EPSILON * abs_product_norm(a, x_start);
    for _ in 0..MAX_STEPS {
        let delta = qr.solve(&residual);
        let mut moved = vec![0.0; residual.len()];
        for (di, azi) in delta.iter().zip(&az) {
            axpy_in_place(*di, azi, &mut moved);
        }
        if norm2(&moved) <= (STEP_RTOL * residual_norm).max(noise) {
            break;
        }
        let mut x_new = x.clone();
        for (di, col) in delta.iter().zip(&columns) {
            axpy_in_place(*di, &col.z, &mut x_new);
        }
        let r_new = a.residual(b, &x_new)?;
        let norm_new = norm2(&r_new);
        if norm_new > residual_norm {
            break;
        }
        x = x_new;
        residual = r_new;
        residual_norm = norm_new;
        for (yi, di) in y.iter_mut().zip(&delta) {
            *yi += di;
        }
    }
    Ok(Projection {
        x,
        residual,
        residual_norm,
        coefficients: y,
        rank: qr.rank(),
    })
}

/// `‖|A|·|x|‖₂`.
fn abs_product_norm(a: &CsrMatrix, x: &[f64]) -> f64 {
    let sq: f64 = (0..a.n_rows())
        .map(|i| {
            let (cols, vals) = a.row(i);
            let s: f64 = cols.iter().zip(vals).map(|(&j, v)| (v * x[j]).abs()).sum();
            s * s
        })
        .sum();
    sq.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::dot;

    #[test]
    fn exact_single_direction() {
        let a = CsrMatrix::from_diagonal(&[2.0, 4.0]);
        let b = [2.0, 4.0];
        let mut buf = CorrectionBuffer::new(3).unwrap();
        // A z = b − A·0
        buf.insert(&a, vec![1.0, 1.0], 1).unwrap();
        let p = project_accelerate(&a, &b, &[0.0, 0.0], &buf).unwrap();
        assert!((p.coefficients[0] - 1.0).abs() <= 1e-15);
        assert_eq!(p.residual_norm, 0.0);
    }

    #[test]
    fn a_orthogonal_directions_recover_expansion() {
        // A = diag(1, 2, 4); z_i = e_i / a_ii gives A z_i = e_i.
        let a = CsrMatrix::from_diagonal(&[1.0, 2.0, 4.0]);
        let b = [3.0, -1.0, 0.5];
        let mut buf = CorrectionBuffer::new(3).unwrap();
        buf.insert(&a, vec![1.0, 0.0, 0.0], 1).unwrap();
        buf.insert(&a, vec![0.0, 0.5, 0.0], 2).unwrap();
        buf.insert(&a, vec![0.0, 0.0, 0.25], 3).unwrap();
        let p = project_accelerate(&a, &b, &[0.0; 3], &buf).unwrap();
        for (c, want) in p.coefficients.iter().zip(&b) {
            assert!((c - want).abs() <= 1e-14);
        }
        assert!(p.residual_norm <= 1e-14);
        // direct solve: x = A⁻¹ b
        for (x, want) in p.x.iter().zip(&[3.0, -0.5, 0.125]) {
            assert!((x - want).abs() <= 1e-14);
        }
    }

    #[test]
    fn residual_is_orthogonal_to_cached_products() {
        let a = CsrMatrix::from_dense(&[
            vec![3.0, 1.0, 0.0, 0.0],
            vec![-1.0, 4.0, 1.0, 0.0],
            vec![0.0, 0.5, 2.0, 1.0],
            vec![0.0, 0.0, -1.0, 5.0],
        ])
        .unwrap();
        let b = [1.0, 2.0, 3.0, 4.0];
        let base = [0.1, -0.2, 0.0, 0.3];
        let mut buf = CorrectionBuffer::new(2).unwrap();
        buf.insert(&a, vec![1.0, 0.0, 1.0, 0.0], 1).unwrap();
        buf.insert(&a, vec![0.0, 1.0, -1.0, 2.0], 2).unwrap();
        let p = project_accelerate(&a, &b, &base, &buf).unwrap();
        for col in buf.columns() {
            let d = dot(&p.residual, &col.az).unwrap();
            assert!(d.abs() <= 1e-12 * p.residual_norm * norm2(&col.az));
        }
    }

    #[test]
    fn duplicated_direction_is_truncated() {
        let a = CsrMatrix::from_diagonal(&[1.0, 3.0, 2.0]);
        let b = [1.0, 1.0, 1.0];
        let mut buf = CorrectionBuffer::new(2).unwrap();
        buf.insert(&a, vec![1.0, 1.0, 0.0], 1).unwrap();
        buf.insert(&a, vec![2.0, 2.0, 0.0], 2).unwrap();
        let p = project_accelerate(&a, &b, &[0.0; 3], &buf).unwrap();
        assert_eq!(p.rank, 1);
        assert!(p.coefficients.iter().all(|c| c.is_finite()));
    }

    #[test]
    fn empty_buffer_is_an_error() {
        let a = CsrMatrix::identity(2);
        let buf = CorrectionBuffer::new(2).unwrap();
        assert!(project_accelerate(&a, &[1.0, 1.0], &[0.0, 0.0], &buf).is_err());
    }
}
