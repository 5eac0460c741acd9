//! Small dense least squares for tall, thin column sets.
//!
//! Householder QR with column pivoting. Once a pivot falls below `rtol`
//! times the first pivot the remaining columns are dropped and get a zero
//! coefficient.

use crate::sparse::{dot_unchecked, norm2};

pub(crate) struct PivotedQr {
    /// Reduced columns in pivoted order; entries `0..=k` of column `k`
    /// (for `k < rank`) hold the triangle.
    work: Vec<Vec<f64>>,
    /// Householder vectors over rows `k..` and their `2 / vᵀv`.
    reflectors: Vec<(Vec<f64>, f64)>,
    perm: Vec<usize>,
    rank: usize,
}

impl PivotedQr {
    pub fn new(columns: &[&[f64]], rtol: f64) -> Self {
        let p = columns.len();
        let n = columns.first().map_or(0, |c| c.len());
        let mut work: Vec<Vec<f64>> = columns.iter().map(|c| c.to_vec()).collect();
        let mut perm: Vec<usize> = (0..p).collect();
        let mut reflectors = Vec::with_capacity(p);
        let mut first_pivot = 0.0;

        for k in 0..p.min(n) {
            // p is small, so trailing norms are recomputed rather than downdated.
            let (best, norm) = (k..p)
                .map(|j| (j, norm2(&work[j][k..])))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("k < p");
            if k == 0 {
                first_pivot = norm;
            }
            if norm == 0.0 || norm < rtol * first_pivot {
                break;
            }
            work.swap(k, best);
            perm.swap(k, best);

            let mut v = work[k][k..].to_vec();
            let alpha = if v[0] >= 0.0 { -norm } else { norm };
            v[0] -= alpha;
            let beta = 2.0 / dot_unchecked(&v, &v);
            work[k][k] = alpha;
            work[k][k + 1..].iter_mut().for_each(|x| *x = 0.0);
            for col in work.iter_mut().skip(k + 1) {
                reflect(&v, beta, &mut col[k..]);
            }
            reflectors.push((v, beta));
        }
        let rank = reflectors.len();
        Self {
            work,
            reflectors,
            perm,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Least-squares coefficients for `rhs`, in the original column order.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut qtb = rhs.to_vec();
        for (k, (v, beta)) in self.reflectors.iter().enumerate() {
            reflect(v, *beta, &mut qtb[k..]);
        }
        let mut y = vec![0.0; self.rank];
        for i in (0..self.rank).rev() {
            let acc: f64 = (i + 1..self.rank).map(|j| self.work[j][i] * y[j]).sum();
            y[i] = (qtb[i] - acc) / self.work[i][i];
        }
        let mut coefficients = vec![0.0; self.work.len()];
        for (i, yi) in y.into_iter().enumerate() {
            coefficients[self.perm[i]] = yi;
        }
        coefficients
    }
}

fn reflect(v: &[f64], beta: f64, x: &mut [f64]) {
    let s = beta * dot_unchecked(v, x);
    x.iter_mut().zip(v).for_each(|(xi, vi)| *xi -= s * vi);
}
