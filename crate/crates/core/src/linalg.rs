//! Dense symmetric linear algebra for kernel matrices.
//!
//! Matrices are small enough (a few thousand rows at most) that plain
//! row-major storage and unblocked algorithms are adequate. The Cholesky
//! factor is the workhorse: it solves the interpolation system, yields the
//! log-determinant used by the likelihood cost, and doubles as the
//! positive-definiteness test.

use crate::error::{Error, Result};

/// Symmetric matrix in full row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds an `n x n` matrix from `f(i, j)` evaluated on the lower triangle
    /// and mirrored, so the result is bitwise symmetric.
    ///
    /// Panics if `n == 0`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from explicit rows, rejecting anything that is not
    /// square and exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        for i in 0..n {
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { 0.0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, x.len())?;
        Ok((0..self.n).map(|i| dot(self.row(i), x)).collect())
    }

    /// Largest absolute diagonal entry.
    pub fn max_abs_diag(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).abs()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Lower-triangular factor `L` with `A = L Lᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    n: usize,
    // Row-major; entries above the diagonal are zero.
    l: Vec<f64>,
}

/// Factorizes a symmetric positive definite matrix.
///
/// A pivot at or below `n · ε_machine · max|A_ii|` is reported as
/// [`Error::NotPositiveDefinite`].
pub fn cholesky(a: &SymMatrix) -> Result<CholeskyFactor> {
    let n = a.n;
    let threshold = n as f64 * f64::EPSILON * a.max_abs_diag();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        let (done, rest) = l.split_at_mut(i * n);
        let row_i = &mut rest[..n];
        for j in 0..i {
            let row_j = &done[j * n..j * n + j];
            let s = a.get(i, j) - dot(&row_i[..j], row_j);
            row_i[j] = s / done[j * n + j];
        }
        let pivot = a.get(i, i) - dot(&row_i[..i], &row_i[..i]);
        if !(pivot > threshold) {
            return Err(Error::NotPositiveDefinite { row: i, pivot });
        }
        row_i[i] = pivot.sqrt();
    }
    Ok(CholeskyFactor { n, l })
}

impl CholeskyFactor {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `L(i, j)`; zero above the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.l[i * self.n + j]
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.l[i * self.n..i * self.n + i + 1]
    }

    /// Solves `L z = b`.
    pub fn forward_substitute(&self, b: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, b.len())?;
        let mut z = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let row = self.row(i);
            let s = b[i] - dot(&row[..i], &z);
            z.push(s / row[i]);
        }
        Ok(z)
    }

    /// Solves `Lᵀ x = z`, consuming `z`.
    fn backward_substitute(&self, mut z: Vec<f64>) -> Vec<f64> {
        // Column-oriented sweep so that every access walks a row of L.
        for i in (0..self.n).rev() {
            let row = self.row(i);
            let xi = z[i] / row[i];
            z[i] = xi;
            for (zk, lik) in z[..i].iter_mut().zip(&row[..i]) {
                *zk -= lik * xi;
            }
        }
        z
    }

    /// Solves `A x = b` by forward then backward substitution.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let z = self.forward_substitute(b)?;
        Ok(self.backward_substitute(z))
    }

    /// `log det A = 2 Σ log L(i,i)`.
    pub fn log_det(&self) -> f64 {
        2.0 * (0..self.n).map(|i| self.get(i, i).ln()).sum::<f64>()
    }

    /// `yᵀ A⁻¹ y`, computed as `‖L⁻¹ y‖²` so it is nonnegative by construction.
    pub fn inverse_quadratic_form(&self, y: &[f64]) -> Result<f64> {
        let z = self.forward_substitute(y)?;
        Ok(dot(&z, &z))
    }

    /// Rebuilds `L Lᵀ`.
    pub fn reconstruct(&self) -> SymMatrix {
        SymMatrix::from_fn(self.n, |i, j| {
            let k = i.min(j) + 1;
            dot(&self.row(i)[..k], &self.row(j)[..k])
        })
    }
}

/// Eigenvalues of a symmetric matrix in ascending order.
///
/// Householder reduction to tridiagonal form followed by the implicit QL
/// iteration with Wilkinson-style shifts.
pub fn symmetric_eigenvalues(a: &SymMatrix) -> Result<Vec<f64>> {
    let (mut d, mut e) = tridiagonalize(a);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Spectral condition number `λ_max / λ_min` of a symmetric positive definite matrix.
pub fn condition_number(a: &SymMatrix) -> Result<f64> {
    let eig = symmetric_eigenvalues(a)?;
    let (min, max) = (eig[0], eig[eig.len() - 1]);
    if !(min > 0.0) {
        return Err(Error::NotPositiveDefinite { row: 0, pivot: min });
    }
    Ok(max / min)
}

/// Returns the diagonal and subdiagonal (`e[i]` couples rows `i` and `i+1`,
/// `e[n-1] = 0`) of an orthogonally similar tridiagonal matrix.
fn tridiagonalize(a: &SymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.n;
    let mut m = a.data.clone();
    let mut e = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let off = k + 1;
        let v = &mut v[..len];
        let p = &mut p[..len];
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = m[(off + i) * n + k];
        }
        let norm = dot(v, v).sqrt();
        if norm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let alpha = if v[0] > 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vnorm2 = dot(v, v);
        if vnorm2 == 0.0 {
            e[k] = m[off * n + k];
            continue;
        }
        let beta = 2.0 / vnorm2;
        for i in 0..len {
            let row = &m[(off + i) * n + off..(off + i) * n + n];
            p[i] = beta * dot(row, v);
        }
        let kappa = 0.5 * beta * dot(p, v);
        for (pi, vi) in p.iter_mut().zip(v.iter()) {
            *pi -= kappa * vi;
        }
        // Rank-two update of the trailing block: M -= v wᵀ + w vᵀ.
        for i in 0..len {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut m[(off + i) * n + off..(off + i) * n + n];
            for ((mij, vj), wj) in row.iter_mut().zip(v.iter()).zip(p.iter()) {
                *mij -= vi * wj + wi * vj;
            }
        }
        e[k] = alpha;
    }
    if n >= 2 {
        e[n - 2] = m[(n - 1) * n + n - 2];
    }
    let d = (0..n).map(|i| m[i * n + i]).collect();
    (d, e)
}

fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::EigenNoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Dot product with independent partial sums so the loop vectorizes.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [0.0f64; 8];
    let mut ca = a.chunks_exact(8);
    let mut cb = b.chunks_exact(8);
    for (x, y) in (&mut ca).zip(&mut cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    let mut tail = 0.0;
    for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
        tail += x * y;
    }
    (acc[0] + acc[4]) + (acc[1] + acc[5]) + (acc[2] + acc[6]) + (acc[3] + acc[7]) + tail
}
