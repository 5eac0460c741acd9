use crate::error::{Error, Result};
use crate::solver::arnoldi::Hessenberg;

/// Minimizes `‖β e₁ − H s‖₂` with Givens rotations.
///
/// Returns the minimizer and the minimum. A zero on the diagonal of the
/// rotated triangle is reported as [`Error::Breakdown`].
pub fn solve_hessenberg_lsq(h: &Hessenberg, beta: f64) -> Result<(Vec<f64>, f64)> {
    let k = h.ncols();
    if k == 0 {
        return Err(Error::InvalidConfig("empty Hessenberg matrix".into()));
    }

    let mut rotations: Vec<(f64, f64)> = Vec::with_capacity(k);
    let mut triangle: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut g = vec![0.0; k + 1];
    g[0] = beta;

    for j in 0..k {
        let mut col = h.column(j).to_vec();
        for (i, &(c, s)) in rotations.iter().enumerate() {
            let (a, b) = (col[i], col[i + 1]);
            col[i] = c * a + s * b;
            col[i + 1] = -s * a + c * b;
        }
        let (a, b) = (col[j], col[j + 1]);
        let r = a.hypot(b);
        let (c, s) = if r == 0.0 { (1.0, 0.0) } else { (a / r, b / r) };
        col[j] = r;
        col[j + 1] = 0.0;
        rotations.push((c, s));

        let (gj, gj1) = (g[j], g[j + 1]);
        g[j] = c * gj + s * gj1;
        g[j + 1] = -s * gj + c * gj1;

        col.truncate(j + 1);
        triangle.push(col);
    }

    let mut s = vec![0.0; k];
    for j in (0..k).rev() {
        let diag = triangle[j][j];
        if diag == 0.0 || !diag.is_finite() {
            return Err(Error::Breakdown(format!(
                "singular triangle in the Hessenberg least-squares solve (column {j})"
            )));
        }
        let mut acc = g[j];
        for (i, si) in s.iter().enumerate().skip(j + 1) {
            acc -= triangle[i][j] * si;
        }
        s[j] = acc / diag;
    }
    Ok((s, g[k].abs()))
}
