//! Shared helpers for the integration and acceptance tests.
#![allow(dead_code)]

use std::path::PathBuf;

use krylov_restart::CsrMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture_paths() -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixtures_dir())
        .expect("fixtures directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "mtx"))
        .collect();
    paths.sort();
    paths
}

/// Directory holding user-supplied collection matrices, if any.
pub fn collection_dir() -> PathBuf {
    std::env::var_os("KRYLOV_MATRIX_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| fixtures_dir().join("collection"))
}

/// Dense `n × n` matrix with entries in `[-1, 1]` and `shift` added to the
/// diagonal.
pub fn random_dense(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| rng.random_range(-1.0..1.0) + if i == j { shift } else { 0.0 })
                .collect()
        })
        .collect()
}

/// Sparse nonsymmetric matrix: `per_row` random off-diagonal entries in
/// `[-1, 1]` per row, diagonal `shift + U(0, 1)`.
pub fn random_sparse(rng: &mut ChaCha8Rng, n: usize, per_row: usize, shift: f64) -> CsrMatrix {
    let mut t = Vec::with_capacity(n * (per_row + 1));
    for i in 0..n {
        t.push((i, i, shift + rng.random_range(0.0..1.0)));
        for _ in 0..per_row {
            let j = rng.random_range(0..n);
            if j != i {
                t.push((i, j, rng.random_range(-1.0..1.0)));
            }
        }
    }
    CsrMatrix::from_triplets(n, n, t).unwrap()
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(*bi);
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))
            .unwrap();
        m.swap(k, p);
        assert!(m[k][k] != 0.0, "singular oracle matrix");
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            if f != 0.0 {
                for j in k..=n {
                    m[i][j] -= f * m[k][j];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    x
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// `‖|A|·|x|‖₂`.
pub fn abs_product_norm(a: &CsrMatrix, x: &[f64]) -> f64 {
    (0..a.n_rows())
        .map(|i| {
            let (cols, vals) = a.row(i);
            let s: f64 = cols.iter().zip(vals).map(|(&j, v)| (v * x[j]).abs()).sum();
            s * s
        })
        .sum::<f64>()
        .sqrt()
}
