//! Pfaffians of skew-symmetric matrices: a pivoted Parlett–Reid
//! elimination and a perfect-matching reference.

use crate::error::{Error, Result};

/// Largest dimension accepted by [`pfaffian_reference`].
pub const REFERENCE_MAX_DIM: usize = 12;

/// Skew-symmetric matrix; only the strict upper triangle is stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewSymmetricMatrix {
    dim: usize,
    upper: Vec<f64>,
}

impl SkewSymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            upper: vec![0.0; dim * dim.saturating_sub(1) / 2],
        }
    }

    /// Builds `A` from `a(i, j)` evaluated for `i < j` (0-based).
    pub fn from_fn<F: FnMut(usize, usize) -> f64>(dim: usize, mut a: F) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i + 1..dim {
                m.set(i, j, a(i, j));
            }
        }
        m
    }

    /// Reads the strict upper triangle of a square matrix.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        Ok(Self::from_fn(dim, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn index(&self, i: usize, j: usize) -> usize {
        // row i of the strict upper triangle starts after Σ_{r<i} (dim − 1 − r) entries
        i * (2 * self.dim - i - 1) / 2 + (j - i - 1)
    }

    /// `a_{ij}` (0-based); `a_{ji} = −a_{ij}`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[self.index(i, j)],
            std::cmp::Ordering::Greater => -self.upper[self.index(j, i)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    /// Sets `a_{ij}` and, implicitly, `a_{ji} = −value`. Ignores `i = j`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => {
                let k = self.index(i, j);
                self.upper[k] = value;
            }
            std::cmp::Ordering::Greater => {
                let k = self.index(j, i);
                self.upper[k] = -value;
            }
            std::cmp::Ordering::Equal => {}
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// `P A Pᵀ` for the permutation sending index `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                out.set(perm[i], perm[j], self.get(i, j));
            }
        }
        out
    }

    /// The matrix with rows and columns `drop` removed.
    pub fn minor(&self, drop: &[usize]) -> Self {
        let keep: Vec<usize> = (0..self.dim).filter(|i| !drop.contains(i)).collect();
        Self::from_fn(keep.len(), |i, j| self.get(keep[i], keep[j]))
    }
}

/// Pfaffian by skew-symmetric Gaussian elimination with partial pivoting.
pub fn pfaffian(a: &SkewSymmetricMatrix) -> Result<f64> {
    let n = a.dim();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let mut m = a.to_dense();
    let mut pf = 1.0;
    for k in (0..n.saturating_sub(1)).step_by(2) {
        // pivot: largest entry below the diagonal in column k
        let (p, big) = (k + 1..n)
            .map(|i| (i, m[i][k].abs()))
            .fold((k + 1, -1.0), |best, c| if c.1 > best.1 { c } else { best });
        if p != k + 1 {
            m.swap(k + 1, p);
            for row in m.iter_mut() {
                row.swap(k + 1, p);
            }
            pf = -pf;
        }
        if big == 0.0 {
            return Ok(0.0);
        }
        let pivot = m[k][k + 1];
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|j| m[k][j] / pivot).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| m[i][k + 1]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    m[i][j] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
    }
    Ok(pf)
}

/// Pfaffian as a signed sum over perfect matchings, for `dim ≤ 12`.
pub fn pfaffian_reference(a: &SkewSymmetricMatrix) -> Result<f64> {
    let n = a.dim();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if n > REFERENCE_MAX_DIM {
        return Err(Error::TooLarge {
            dim: n,
            max: REFERENCE_MAX_DIM,
        });
    }
    let remaining: Vec<usize> = (0..n).collect();
    Ok(matchings(a, &remaining))
}

/// Expansion along the first remaining index: pairing it with the `j`-th
/// remaining index carries sign `(−1)^{j−1}`.
fn matchings(a: &SkewSymmetricMatrix, remaining: &[usize]) -> f64 {
    if remaining.is_empty() {
        return 1.0;
    }
    let first = remaining[0];
    let mut total = 0.0;
    for j in 1..remaining.len() {
        let rest: Vec<usize> = remaining[1..]
            .iter()
            .enumerate()
            .filter(|&(k, _)| k + 1 != j)
            .map(|(_, &v)| v)
            .collect();
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * a.get(first, remaining[j]) * matchings(a, &rest);
    }
    total
}

/// Determinant by LU elimination with partial pivoting.
pub fn determinant(rows: &[Vec<f64>]) -> Result<f64> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    let mut m = rows.to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))
            .unwrap_or(k);
        if m[p][k] == 0.0 {
            return Ok(0.0);
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        let (upper, lower) = m.split_at_mut(k + 1);
        let pivot = &upper[k];
        for row in lower.iter_mut() {
            let f = row[k] / pivot[k];
            for (v, p) in row[k + 1..].iter_mut().zip(&pivot[k + 1..]) {
                *v -= f * p;
            }
        }
    }
    Ok(det)
}
