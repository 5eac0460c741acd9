//! Deterministic test matrices.

use crate::sparse::CsrMatrix;

/// Tridiagonal Toeplitz matrix with the given sub-, main and
/// super-diagonal values.
pub fn tridiagonal(n: usize, lower: f64, diag: f64, upper: f64) -> CsrMatrix {
    let mut t = Vec::with_capacity(3 * n);
    for i in 0..n {
        if i > 0 {
            t.push((i, i - 1, lower));
        }
        t.push((i, i, diag));
        if i + 1 < n {
            t.push((i, i + 1, upper));
        }
    }
    CsrMatrix::from_triplets(n, n, t).expect("indices in range")
}

/// Five-point central-difference discretization of
/// `−Δu + β·(u_x + u_y)` on an `nx × nx` interior grid of the unit square,
/// Dirichlet boundary. `beta` sets the convection strength; the matrix is
/// nonsymmetric for `beta != 0`.
pub fn convection_diffusion_2d(nx: usize, beta: f64) -> CsrMatrix {
    let h = 1.0 / (nx as f64 + 1.0);
    let c = beta * h / 2.0;
    let idx = |i: usize, j: usize| i * nx + j;
    let mut t = Vec::with_capacity(5 * nx * nx);
    for i in 0..nx {
        for j in 0..nx {
            let row = idx(i, j);
            t.push((row, row, 4.0));
            if i > 0 {
                t.push((row, idx(i - 1, j), -1.0 - c));
            }
            if i + 1 < nx {
                t.push((row, idx(i + 1, j), -1.0 + c));
            }
            if j > 0 {
                t.push((row, idx(i, j - 1), -1.0 - c));
            }
            if j + 1 < nx {
                t.push((row, idx(i, j + 1), -1.0 + c));
            }
        }
    }
    CsrMatrix::from_triplets(nx * nx, nx * nx, t).expect("indices in range")
}
