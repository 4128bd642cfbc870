//! Dense real linear algebra for the small symmetric problems in this crate.
//!
//! Everything here is O(n^3) and meant for n up to a few hundred: a cyclic
//! Jacobi eigensolver, a Cholesky factorization, and a one-sided Jacobi SVD
//! used for numerical rank and null vectors.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance for [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-14;

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from equally sized rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch { expected: cols, got: bad.len() });
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn column_vector(v: &[f64]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[f64]) {
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = *x;
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn scale(&self, c: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| c * x).collect() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Column sums, i.e. `Aᵗ·1`.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (acc, x) in s.iter_mut().zip(self.row(i)) {
                *acc += x;
            }
        }
        s
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Dense symmetric matrix stored as its packed lower triangle.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix {
    order: usize,
    lower: Vec<f64>,
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Self {
        SymMatrix { order, lower: vec![0.0; order * (order + 1) / 2] }
    }

    pub fn identity(order: usize) -> Self {
        let mut s = SymMatrix::zeros(order);
        for i in 0..order {
            s.set(i, i, 1.0);
        }
        s
    }

    /// The centering projector `I − 11ᵗ/n`.
    pub fn centering(order: usize) -> Self {
        let mut s = SymMatrix::zeros(order);
        let off = -1.0 / order as f64;
        for i in 0..order {
            for j in 0..=i {
                s.set(i, j, if i == j { 1.0 + off } else { off });
            }
        }
        s
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut s = SymMatrix::zeros(order);
        for i in 0..order {
            for j in 0..=i {
                s.set(i, j, f(i, j));
            }
        }
        s
    }

    /// Symmetrizes a square matrix as `(A + Aᵗ)/2`.
    pub fn from_matrix(a: &Matrix) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(Error::DimensionMismatch(format!(
                "expected square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        Ok(SymMatrix::from_fn(a.rows(), |i, j| 0.5 * (a[(i, j)] + a[(j, i)])))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[packed(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.lower[packed(i, j)] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.lower[packed(i, j)] += v;
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.order, self.order, |i, j| self.get(i, j))
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.order);
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// `vᵗ A v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        dot(v, &self.matvec(v))
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix { order: self.order, lower: self.lower.iter().map(|x| c * x).collect() }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.order, other.order);
        let lower = self.lower.iter().zip(&other.lower).map(|(a, b)| a + b).collect();
        SymMatrix { order: self.order, lower }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        self.add(&other.scale(-1.0))
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius inner product `⟨A, B⟩_F`.
    pub fn frobenius_dot(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.order, other.order);
        let mut s = 0.0;
        for i in 0..self.order {
            for j in 0..=i {
                let p = self.get(i, j) * other.get(i, j);
                s += if i == j { p } else { 2.0 * p };
            }
        }
        s
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.lower.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn inf_norm(&self) -> f64 {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.lower.iter().all(|x| x.is_finite())
    }

    /// `J A J` with `J = I − 11ᵗ/n`: removes the constant direction on both sides.
    pub fn double_center(&self) -> SymMatrix {
        let n = self.order;
        let row_means: Vec<f64> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j)).sum::<f64>() / n as f64).collect();
        let grand = row_means.iter().sum::<f64>() / n as f64;
        SymMatrix::from_fn(n, |i, j| self.get(i, j) - row_means[i] - row_means[j] + grand)
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.to_matrix(), f)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Full symmetric eigendecomposition, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct EigDecomposition {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: Matrix,
}

impl EigDecomposition {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i)
    }

    /// Rebuilds `V diag(f(λ)) Vᵗ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.values.len();
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        SymMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| self.vectors[(i, k)] * fl[k] * self.vectors[(j, k)]).sum()
        })
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps over all off-diagonal pairs until the off-diagonal Frobenius norm
/// falls below `1e-14·‖A‖_F`, for at most 100 sweeps.
pub fn eigh(a: &SymMatrix) -> Result<EigDecomposition> {
    if !a.is_finite() {
        return Err(Error::NoConvergence("jacobi eigensolver (non-finite input)"));
    }
    let n = a.order();
    let mut m = a.to_matrix();
    let mut v = Matrix::identity(n);
    let scale = m.frobenius_norm();
    let target = JACOBI_OFF_TOL * scale;

    let off_norm = |m: &Matrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..i {
                s += 2.0 * m[(i, j)] * m[(i, j)];
            }
        }
        s.sqrt()
    };

    let mut converged = scale == 0.0 || off_norm(&m) <= target;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                if t == 0.0 {
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    continue;
                }
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate_columns(&mut m, p, q, c, s);
                rotate_rows(&mut m, p, q, c, s);
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                rotate_columns(&mut v, p, q, c, s);
            }
        }
        sweeps += 1;
        converged = off_norm(&m) <= target;
    }
    if !converged {
        return Err(Error::NoConvergence("jacobi eigensolver"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigDecomposition { values, vectors })
}

#[inline]
fn rotate_columns(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..m.rows() {
        let kp = m[(k, p)];
        let kq = m[(k, q)];
        m[(k, p)] = c * kp - s * kq;
        m[(k, q)] = s * kp + c * kq;
    }
}

#[inline]
fn rotate_rows(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..m.cols() {
        let pk = m[(p, k)];
        let qk = m[(q, k)];
        m[(p, k)] = c * pk - s * qk;
        m[(q, k)] = s * pk + c * qk;
    }
}

/// Lower Cholesky factor `A = L Lᵗ`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    l: Matrix,
}

impl Cholesky {
    pub fn factor(a: &SymMatrix) -> Result<Self> {
        let n = a.order();
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut d = a.get(j, j);
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite { pivot: j, value: d });
            }
            let djj = d.sqrt();
            l[(j, j)] = djj;
            for i in j + 1..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(Cholesky { l })
    }

    pub fn order(&self) -> usize {
        self.l.rows()
    }

    pub fn log_det(&self) -> f64 {
        (0..self.order()).map(|i| 2.0 * self.l[(i, i)].ln()).sum()
    }

    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.order();
        assert_eq!(b.len(), n);
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[(i, k)] * y[k];
            }
            y[i] = s / self.l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.l[(k, i)] * y[k];
            }
            y[i] = s / self.l[(i, i)];
        }
        y
    }

    pub fn solve(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(rhs.rows(), self.order());
        let mut out = Matrix::zeros(rhs.rows(), rhs.cols());
        for j in 0..rhs.cols() {
            out.set_column(j, &self.solve_vec(&rhs.column(j)));
        }
        out
    }

    pub fn inverse(&self) -> SymMatrix {
        let inv = self.solve(&Matrix::identity(self.order()));
        SymMatrix::from_fn(self.order(), |i, j| 0.5 * (inv[(i, j)] + inv[(j, i)]))
    }
}

/// Solves `A X = rhs` for symmetric positive definite `A`.
pub fn solve_spd(a: &SymMatrix, rhs: &Matrix) -> Result<Matrix> {
    if rhs.rows() != a.order() {
        return Err(Error::DimensionMismatch(format!(
            "rhs has {} rows, matrix has order {}",
            rhs.rows(),
            a.order()
        )));
    }
    Ok(Cholesky::factor(a)?.solve(rhs))
}

/// Thin singular value decomposition `A = U Σ Vᵗ` computed by one-sided Jacobi.
///
/// `singular_values` are sorted descending; `v` is the full n×n right basis so
/// columns past the rank span the null space.
#[derive(Clone, Debug)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: Matrix,
    pub v: Matrix,
}

pub fn svd(a: &Matrix) -> Result<Svd> {
    if !a.is_finite() {
        return Err(Error::NoConvergence("one-sided jacobi svd (non-finite input)"));
    }
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = Matrix::identity(n);
    let eps = 1e-15;
    // columns whose squared norm falls below this are numerically zero
    let tiny = f64::EPSILON * f64::EPSILON * a.frobenius_norm_sq();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for k in 0..m {
                    let x = w[(k, p)];
                    let y = w[(k, q)];
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0
                    || alpha <= tiny
                    || beta <= tiny
                    || gamma.abs() <= eps * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut w, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("one-sided jacobi svd"));
    }

    let norms: Vec<f64> = (0..n).map(|j| norm(&w.column(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let v_sorted = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    let u = Matrix::from_fn(m, n, |r, c| {
        let s = norms[order[c]];
        if s > 0.0 {
            w[(r, order[c])] / s
        } else {
            0.0
        }
    });
    Ok(Svd { singular_values, u, v: v_sorted })
}

/// Number of singular values above `tol·σ_max`; zero for the zero matrix.
pub fn numerical_rank(a: &Matrix, tol: f64) -> Result<usize> {
    let s = svd(a)?;
    Ok(rank_from_singular_values(&s.singular_values, tol))
}

pub(crate) fn rank_from_singular_values(sv: &[f64], tol: f64) -> usize {
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Householder QR of a tall matrix (rows ≥ cols).
#[derive(Clone, Debug)]
pub struct Qr {
    /// Householder vectors below the diagonal, R on and above it.
    packed: Matrix,
    betas: Vec<f64>,
    diag: Vec<f64>,
}

impl Qr {
    pub fn factor(a: &Matrix) -> Result<Self> {
        let (m, n) = a.shape();
        if m < n {
            return Err(Error::DimensionMismatch(format!("qr needs rows >= cols, got {m}x{n}")));
        }
        let mut h = a.clone();
        let mut betas = vec![0.0; n];
        let mut diag = vec![0.0; n];
        for j in 0..n {
            let alpha_norm = (j..m).map(|i| h[(i, j)] * h[(i, j)]).sum::<f64>().sqrt();
            if alpha_norm == 0.0 {
                continue;
            }
            let x0 = h[(j, j)];
            let alpha = if x0 >= 0.0 { -alpha_norm } else { alpha_norm };
            // v = x − αe₁, stored in place with v₀ = x0 − α
            h[(j, j)] = x0 - alpha;
            let vnorm_sq: f64 = (j..m).map(|i| h[(i, j)] * h[(i, j)]).sum();
            let beta = 2.0 / vnorm_sq;
            for c in j + 1..n {
                let s: f64 = (j..m).map(|i| h[(i, j)] * h[(i, c)]).sum();
                let f = beta * s;
                for i in j..m {
                    let vi = h[(i, j)];
                    h[(i, c)] -= f * vi;
                }
            }
            betas[j] = beta;
            diag[j] = alpha;
        }
        Ok(Qr { packed: h, betas, diag })
    }

    pub fn cols(&self) -> usize {
        self.diag.len()
    }

    pub fn r_diagonal(&self) -> &[f64] {
        &self.diag
    }

    #[inline]
    fn r(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else {
            self.packed[(i, j)]
        }
    }

    /// `Qᵗ b`.
    pub fn qt_mul(&self, b: &[f64]) -> Vec<f64> {
        let m = self.packed.rows();
        let mut y = b.to_vec();
        for j in 0..self.cols() {
            if self.betas[j] == 0.0 {
                continue;
            }
            let s: f64 = (j..m).map(|i| self.packed[(i, j)] * y[i]).sum();
            let f = self.betas[j] * s;
            for (i, yi) in y.iter_mut().enumerate().skip(j) {
                *yi -= f * self.packed[(i, j)];
            }
        }
        y
    }

    /// Solves `R x = y` using the leading `cols` entries of `y`.
    pub fn solve_r(&self, y: &[f64]) -> Vec<f64> {
        let n = self.cols();
        let mut x = y[..n].to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.r(i, k) * x[k];
            }
            x[i] = s / self.r(i, i);
        }
        x
    }

    /// Solves `Rᵗ x = y`.
    pub fn solve_rt(&self, y: &[f64]) -> Vec<f64> {
        let n = self.cols();
        let mut x = y[..n].to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.r(k, i) * x[k];
            }
            x[i] = s / self.r(i, i);
        }
        x
    }

    /// Least-squares solution of `min ‖A x − b‖`.
    pub fn least_squares(&self, b: &[f64]) -> Vec<f64> {
        self.solve_r(&self.qt_mul(b))
    }
}

/// Symmetric PSD square root; eigenvalues in `[-1e-12·(1+‖S‖), 0)` are clamped to zero.
pub fn psd_sqrt(s: &SymMatrix) -> Result<SymMatrix> {
    let e = eigh(s)?;
    let scale = 1.0 + e.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(&lo) = e.values.first() {
        if lo < -1e-12 * scale {
            return Err(Error::NotPositiveDefinite { pivot: 0, value: lo });
        }
    }
    Ok(e.reconstruct_with(|l| l.max(0.0).sqrt()))
}
