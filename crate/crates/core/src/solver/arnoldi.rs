use crate::error::{Error, Result};
use crate::solver::Orthogonalization;
use crate::sparse::{axpy_in_place, dot_unchecked, norm2, scale_in_place, CsrMatrix};

/// `h_{j+1,j}` at or below this multiple of `‖A‖_F` ends the cycle early.
pub const BREAKDOWN_RTOL: f64 = 1e-14;

/// Upper Hessenberg matrix with `k + 1` rows and `k` columns, stored by
/// column. Column `j` holds rows `0..=j+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hessenberg {
    columns: Vec<Vec<f64>>,
}

impl Hessenberg {
    pub(crate) fn with_capacity(m: usize) -> Self {
        Self {
            columns: Vec::with_capacity(m),
        }
    }

    /// Builds from a dense `(k+1) x k` row-major array. Entries below the
    /// subdiagonal must be zero.
    #[allow(clippy::needless_range_loop)]
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len().saturating_sub(1);
        if k == 0 || rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidMatrix(
                "Hessenberg matrix must be (k+1) x k with k >= 1".into(),
            ));
        }
        let mut columns = Vec::with_capacity(k);
        for j in 0..k {
            if (j + 2..=k).any(|i| rows[i][j] != 0.0) {
                return Err(Error::InvalidMatrix(format!(
                    "column {j} has entries below the subdiagonal"
                )));
            }
            columns.push((0..=j + 1).map(|i| rows[i][j]).collect());
        }
        Ok(Self { columns })
    }

    pub(crate) fn push_column(&mut self, col: Vec<f64>) {
        debug_assert_eq!(col.len(), self.columns.len() + 2);
        self.columns.push(col);
    }

    /// Number of columns `k`.
    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn nrows(&self) -> usize {
        self.columns.len() + 1
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.columns[j].get(i).copied().unwrap_or(0.0)
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// Output of one Arnoldi run.
///
/// Without breakdown the basis holds `k + 1` vectors. After a happy
/// breakdown at step `k` it holds `k`, since `v_{k+1}` is never formed.
#[derive(Debug, Clone)]
pub struct ArnoldiResult {
    pub basis: Vec<Vec<f64>>,
    pub hessenberg: Hessenberg,
    pub beta: f64,
    pub breakdown: bool,
}

impl ArnoldiResult {
    /// Completed steps `k`.
    pub fn steps(&self) -> usize {
        self.hessenberg.ncols()
    }

    /// `max |VᵀV − I|` over the stored basis.
    pub fn orthogonality_error(&self) -> f64 {
        let v = &self.basis;
        let mut worst = 0.0f64;
        for i in 0..v.len() {
            for j in 0..=i {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot_unchecked(&v[i], &v[j]) - target).abs());
            }
        }
        worst
    }

    /// `‖A V_k − V_{k+1} H‖_F`. After breakdown the last Hessenberg row
    /// is dropped, since it multiplies a vector that was never formed.
    pub fn relation_residual(&self, a: &CsrMatrix) -> f64 {
        let k = self.steps();
        let rows = self.basis.len();
        let mut total = 0.0;
        for j in 0..k {
            let mut w = a.spmv(&self.basis[j]).expect("basis length matches A");
            for i in 0..rows.min(j + 2) {
                axpy_in_place(-self.hessenberg.get(i, j), &self.basis[i], &mut w);
            }
            total += dot_unchecked(&w, &w);
        }
        total.sqrt()
    }
}

/// Runs up to `m` Arnoldi steps from `r0`, with the breakdown threshold
/// `BREAKDOWN_RTOL · ‖A‖_F` and the default orthogonalization.
pub fn arnoldi(a: &CsrMatrix, r0: &[f64], m: usize) -> Result<ArnoldiResult> {
    arnoldi_with(
        a,
        r0,
        m,
        BREAKDOWN_RTOL * a.frobenius_norm(),
        Orthogonalization::default(),
    )
}

pub(crate) fn arnoldi_with(
    a: &CsrMatrix,
    r0: &[f64],
    m: usize,
    breakdown_tol: f64,
    orth: Orthogonalization,
) -> Result<ArnoldiResult> {
    crate::error::check_len("arnoldi", a.n_cols(), r0.len())?;
    if m == 0 {
        return Err(Error::InvalidConfig("Arnoldi needs m >= 1".into()));
    }
    let beta = norm2(r0);
    if beta == 0.0 {
        return Err(Error::ZeroResidual);
    }
    let passes = match orth {
        Orthogonalization::ModifiedGramSchmidt => 1,
        Orthogonalization::ModifiedGramSchmidtTwice => 2,
    };

    let mut basis = Vec::with_capacity(m + 1);
    let mut v1 = r0.to_vec();
    scale_in_place(1.0 / beta, &mut v1);
    basis.push(v1);
    let mut hessenberg = Hessenberg::with_capacity(m);
    let mut breakdown = false;

    for j in 0..m {
        let mut w = a.spmv(&basis[j])?;
        let mut col = vec![0.0; j + 2];
        for _ in 0..passes {
            for (i, v) in basis.iter().enumerate() {
                let h = dot_unchecked(&w, v);
                axpy_in_place(-h, v, &mut w);
                col[i] += h;
            }
        }
        let h_next = norm2(&w);
        col[j + 1] = h_next;
        hessenberg.push_column(col);
        if h_next <= breakdown_tol {
            breakdown = true;
            break;
        }
        scale_in_place(1.0 / h_next, &mut w);
        basis.push(w);
    }

    Ok(ArnoldiResult {
        basis,
        hessenberg,
        beta,
        breakdown,
    })
}
