//! Small dense complex matrices and a cyclic Jacobi eigensolver.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DIM: usize = 64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ONE; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(rows, cols, |i, j| Complex64::new(f(i, j), 0.0))
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch("matrix must be nonempty".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let m = Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        };
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect())
                .collect(),
        )
    }

    /// Parses `[[1, 0], [0, [0, 1]]]`: rows of real numbers or `[re, im]` pairs.
    pub fn parse_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Entry {
            Real(f64),
            Complex([f64; 2]),
        }
        let rows: Vec<Vec<Entry>> = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
        Self::from_rows(
            rows.into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|e| match e {
                            Entry::Real(x) => Complex64::new(x, 0.0),
                            Entry::Complex([re, im]) => Complex64::new(re, im),
                        })
                        .collect()
                })
                .collect(),
        )
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

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn check_max_dim(&self, max: usize) -> Result<()> {
        if self.rows > max || self.cols > max {
            Err(Error::MatrixTooLarge {
                rows: self.rows,
                cols: self.cols,
                max,
            })
        } else {
            Ok(())
        }
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub(crate) fn same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|M - M^*|` entry.
    pub fn hermitian_deviation(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues in ascending order with orthonormal eigenvectors as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl Eigen {
    /// `V diag(f(lambda)) V^*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let n = self.values.len();
        let weights: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = DenseMatrix::zeros(n, n);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                if vik == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Relative hermiticity tolerance accepted by [`symmetric_eigenvalues`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Complex input goes through the real embedding `[[X, -Y], [Y, X]]` of `X + iY`.
pub fn symmetric_eigenvalues(m: &DenseMatrix) -> Result<Eigen> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch("eigensolver needs a square matrix".into()));
    }
    m.check_finite()?;
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    Ok(hermitian_eigen_unchecked(m))
}

pub(crate) fn hermitian_eigen_unchecked(m: &DenseMatrix) -> Eigen {
    let n = m.rows();
    if m.is_real() {
        let mut a: Vec<f64> = m.data.iter().map(|z| z.re).collect();
        symmetrize(&mut a, n);
        let (values, vecs) = jacobi(&mut a, n);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let vectors = DenseMatrix::from_real_fn(n, n, |i, k| vecs[i * n + order[k]]);
        return Eigen {
            values: order.iter().map(|&k| values[k]).collect(),
            vectors,
        };
    }

    let big = 2 * n;
    let mut a = vec![0.0; big * big];
    for i in 0..n {
        for j in 0..n {
            let z = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            a[i * big + j] = z.re;
            a[(i + n) * big + j + n] = z.re;
            a[i * big + j + n] = -z.im;
            a[(i + n) * big + j] = z.im;
        }
    }
    let (values, vecs) = jacobi(&mut a, big);
    let mut order: Vec<usize> = (0..big).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    // Each eigenvalue appears twice; keep a complex-orthonormal subset.
    let mut chosen: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut chosen_values = Vec::with_capacity(n);
    for &k in &order {
        if chosen.len() == n {
            break;
        }
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(vecs[i * big + k], vecs[(i + n) * big + k]))
            .collect();
        for u in &chosen {
            let dot: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= dot * ui;
            }
        }
        let norm = vec_norm(&v);
        if norm > 0.5 {
            for vi in &mut v {
                *vi /= norm;
            }
            chosen.push(v);
            chosen_values.push(values[k]);
        }
    }
    let vectors = DenseMatrix::from_fn(n, n, |i, k| chosen[k][i]);
    Eigen {
        values: chosen_values,
        vectors,
    }
}

fn symmetrize(a: &mut [f64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    }
}

/// Cyclic Jacobi on a real symmetric row-major matrix; returns unsorted
/// eigenvalues and the row-major eigenvector matrix (eigenvectors in columns).
fn jacobi(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    const MAX_SWEEPS: usize = 100;
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= 1e-32 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

/// Largest singular value, from the eigenvalues of `X^* X`.
pub fn operator_norm(x: &DenseMatrix) -> f64 {
    let gram = x.adjoint().matmul(x).expect("conformable");
    let eig = hermitian_eigen_unchecked(&gram);
    eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Singular triples `(sigma, u, v)` with `sigma > cutoff`, largest first.
pub(crate) struct Svd {
    pub sigma: Vec<f64>,
    pub left: Vec<Vec<Complex64>>,
    pub right: Vec<Vec<Complex64>>,
}

/// Thin SVD from the Hermitian dilation `[[0, B], [B^*, 0]]`, whose positive
/// eigenpairs are `(sigma, (u, v) / sqrt 2)`.
pub(crate) fn svd(b: &DenseMatrix, cutoff: f64) -> Svd {
    let (m, n) = b.shape();
    let dil = DenseMatrix::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
        (true, false) => b[(i, j - m)],
        (false, true) => b[(j, i - m)].conj(),
        _ => ZERO,
    });
    let eig = hermitian_eigen_unchecked(&dil);
    let mut out = Svd {
        sigma: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
    };
    for k in (0..m + n).rev() {
        let s = eig.values[k];
        if s <= cutoff {
            break;
        }
        let mut u: Vec<Complex64> = (0..m).map(|i| eig.vectors[(i, k)]).collect();
        let mut v: Vec<Complex64> = (0..n).map(|j| eig.vectors[(m + j, k)]).collect();
        let (nu, nv) = (vec_norm(&u), vec_norm(&v));
        if nu < 1e-8 || nv < 1e-8 {
            continue;
        }
        u.iter_mut().for_each(|z| *z /= nu);
        v.iter_mut().for_each(|z| *z /= nv);
        out.sigma.push(s);
        out.left.push(u);
        out.right.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruction_error(m: &DenseMatrix, e: &Eigen) -> f64 {
        e.reconstruct_with(|l| l).sub(m).unwrap().max_abs()
    }

    #[test]
    fn json_matrices() {
        let m = DenseMatrix::parse_json("[[1, 0], [0, [0, 1]]]").unwrap();
        assert_eq!(m[(1, 1)], Complex64::new(0.0, 1.0));
        assert_eq!(m[(0, 0)], Complex64::new(1.0, 0.0));
        assert!(DenseMatrix::parse_json("[[1, 0], [0]]").is_err());
        assert!(DenseMatrix::parse_json("[]").is_err());
        assert!(matches!(DenseMatrix::parse_json("[[\"x\"]]"), Err(Error::Parse(_))));
    }

    #[test]
    fn eigen_examples() {
        let e = symmetric_eigenvalues(&DenseMatrix::identity(3)).unwrap();
        assert!(e.values.iter().all(|&l| (l - 1.0).abs() < 1e-15));
        let d = DenseMatrix::from_real_rows(&[vec![3.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 2.0]]).unwrap();
        let e = symmetric_eigenvalues(&d).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        let swap = DenseMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = symmetric_eigenvalues(&swap).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        assert!(reconstruction_error(&swap, &e) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DenseMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(symmetric_eigenvalues(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn complex_hermitian() {
        let i = Complex64::new(0.0, 1.0);
        let m = DenseMatrix::from_rows(vec![
            vec![ONE * 2.0, i, ZERO],
            vec![-i, ONE * 2.0, ONE + i],
            vec![ZERO, ONE - i, -ONE],
        ])
        .unwrap();
        let e = symmetric_eigenvalues(&m).unwrap();
        assert!(reconstruction_error(&m, &e) < 1e-12);
        let vtv = e.vectors.adjoint().matmul(&e.vectors).unwrap();
        assert!(vtv.sub(&DenseMatrix::identity(3)).unwrap().max_abs() < 1e-12);
        let trace: f64 = e.values.iter().sum();
        assert!((trace - 3.0).abs() < 1e-12);
    }

    #[test]
    fn operator_norms() {
        assert!((operator_norm(&DenseMatrix::identity(3)) - 1.0).abs() < 1e-12);
        assert!((operator_norm(&DenseMatrix::ones(3, 3)) - 3.0).abs() < 1e-12);
        let r = DenseMatrix::from_real_rows(&[vec![1.0, 2.0, 3.0]]).unwrap();
        assert!((operator_norm(&r) - 14f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn svd_of_rank_one() {
        let b = DenseMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![0.0, 0.0]]).unwrap();
        let s = svd(&b, 1e-10);
        assert_eq!(s.sigma.len(), 1);
        assert!((s.sigma[0] - 5.0).abs() < 1e-12);
    }
}
