//! Schur multipliers and the two-sided computation of the Schur multiplier
//! (gamma_2) norm.
//!
//! For an `m x n` matrix `A`, `||A||_Schur = sup ||A • X|| / ||X||`. The norm is
//! reported as a bracket:
//!
//! * the lower end is realized by a [`WitnessPair`] `(X, xi)` and equals
//!   `||(A • X) xi|| / (||X|| ||xi||)`, which never exceeds the norm;
//! * the upper end is backed by a [`Certificate`] `(P, Q, c)` with
//!   `[[P, A], [A^*, Q]] ⪰ 0` and `diag(P), diag(Q) <= c`, which forces
//!   `||A||_Schur <= c`.
//!
//! Upper bounds come from bisection on `c`, testing feasibility of the block
//! completion by alternating projections. Lower bounds come from an
//! alternating ascent on `||D_u A D_v||_trace` over unit `u, v`, seeded from
//! fixed starts and from the separating direction left behind whenever the
//! projections stall.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen_unchecked, operator_norm, svd, vec_norm, DenseMatrix, DEFAULT_MAX_DIM};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Entrywise product `A • X`.
pub fn schur_product(a: &DenseMatrix, x: &DenseMatrix) -> Result<DenseMatrix> {
    a.same_shape(x)?;
    Ok(DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] * x[(i, j)]))
}

/// The forbidden pattern `[[1,1,1],[1,1,0],[1,0,1]]`.
pub fn f0() -> DenseMatrix {
    DenseMatrix::from_real_rows(&[vec![1.0, 1.0, 1.0], vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 1.0]])
        .expect("static matrix")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessPair {
    pub x: DenseMatrix,
    pub xi: Vec<Complex64>,
}

/// `U = ½[[0,√2,√2],[√2,1,−1],[√2,−1,1]]` and `ξ = ½(√2,1,1)`.
pub fn paper_witness() -> WitnessPair {
    let r = std::f64::consts::SQRT_2;
    let u = DenseMatrix::from_real_rows(&[vec![0.0, r, r], vec![r, 1.0, -1.0], vec![r, -1.0, 1.0]])
        .expect("static matrix")
        .scale(0.5);
    let xi = [r, 1.0, 1.0].iter().map(|&v| Complex64::new(v / 2.0, 0.0)).collect();
    WitnessPair { x: u, xi }
}

/// `||(A • X) xi|| / (||X|| ||xi||)`, a lower bound for `||A||_Schur`.
pub fn witness_lower_bound(a: &DenseMatrix, w: &WitnessPair) -> Result<f64> {
    let ax = schur_product(a, &w.x)?;
    let image = ax.mul_vec(&w.xi)?;
    let xnorm = operator_norm(&w.x);
    let xinorm = vec_norm(&w.xi);
    if xnorm == 0.0 || xinorm == 0.0 {
        return Err(Error::ZeroWitness);
    }
    Ok(vec_norm(&image) / (xnorm * xinorm))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub p: DenseMatrix,
    pub q: DenseMatrix,
    pub c: f64,
}

fn block(a: &DenseMatrix, p: &DenseMatrix, q: &DenseMatrix) -> DenseMatrix {
    let (m, n) = a.shape();
    DenseMatrix::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
        (true, true) => p[(i, j)],
        (true, false) => a[(i, j - m)],
        (false, true) => a[(j, i - m)].conj(),
        (false, false) => q[(i - m, j - m)],
    })
}

/// True iff `[[P, A], [A^*, Q]]` has smallest eigenvalue `>= -tol` and every
/// diagonal entry of `P` and `Q` is at most `c + tol`.
pub fn check_certificate(a: &DenseMatrix, p: &DenseMatrix, q: &DenseMatrix, c: f64, tol: f64) -> Result<bool> {
    let (m, n) = a.shape();
    if p.shape() != (m, m) || q.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "certificate blocks {}x{} and {}x{} for a {m}x{n} matrix",
            p.rows(),
            p.cols(),
            q.rows(),
            q.cols()
        )));
    }
    let scale = a.max_abs().max(p.max_abs()).max(q.max_abs()).max(1.0);
    if p.hermitian_deviation() > tol.max(1e-12 * scale) || q.hermitian_deviation() > tol.max(1e-12 * scale) {
        return Ok(false);
    }
    if p.diagonal().iter().chain(q.diagonal().iter()).any(|d| d.re > c + tol) {
        return Ok(false);
    }
    let eig = hermitian_eigen_unchecked(&block(a, p, q));
    Ok(eig.values.first().is_none_or(|&l| l >= -tol))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gamma2Bounds {
    pub lower: f64,
    pub upper: f64,
    pub certificate: Certificate,
    pub witness: WitnessPair,
    /// Total alternating-projection iterations spent.
    pub projections: usize,
}

impl Gamma2Bounds {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64, slack: f64) -> bool {
        self.lower - slack <= value && value <= self.upper + slack
    }
}

pub const DEFAULT_GAMMA2_TOL: f64 = 1e-3;
/// Largest gap ever accepted without reporting non-convergence.
pub const GAMMA2_MAX_GAP: f64 = 1e-3;
/// Tolerance for re-checking the returned certificate.
pub const CERTIFICATE_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Gamma2Options {
    /// Target width of the bracket.
    pub tol: f64,
    pub max_dim: usize,
    /// Projection budget for each bisection step.
    pub projection_cap: usize,
    pub max_bisection_steps: usize,
    /// Deterministic pseudo-random ascent starts, in addition to the fixed ones.
    pub random_starts: usize,
}

impl Gamma2Options {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

impl Default for Gamma2Options {
    fn default() -> Self {
        Self {
            tol: DEFAULT_GAMMA2_TOL,
            max_dim: DEFAULT_MAX_DIM,
            projection_cap: 50_000,
            max_bisection_steps: 64,
            random_starts: 6,
        }
    }
}

pub fn gamma2(a: &DenseMatrix, tol: f64) -> Result<Gamma2Bounds> {
    gamma2_with(a, &Gamma2Options::with_tol(tol), &[])
}

/// [`gamma2`] with extra witness pairs to start the lower-bound ascent from.
pub fn gamma2_with(a: &DenseMatrix, opts: &Gamma2Options, hints: &[WitnessPair]) -> Result<Gamma2Bounds> {
    a.check_finite()?;
    a.check_max_dim(opts.max_dim)?;
    let target = opts.tol.max(1e-12);
    let accept = opts.tol.max(GAMMA2_MAX_GAP);
    let mut lower = Lower::new(a);

    if a.max_abs() == 0.0 {
        let (m, n) = a.shape();
        let witness = WitnessPair {
            x: DenseMatrix::ones(m, n),
            xi: vec![Complex64::new(1.0, 0.0); n],
        };
        return Ok(Gamma2Bounds {
            lower: 0.0,
            upper: 0.0,
            certificate: Certificate {
                p: DenseMatrix::zeros(m, m),
                q: DenseMatrix::zeros(n, n),
                c: 0.0,
            },
            witness,
            projections: 0,
        });
    }

    let mut upper = initial_certificate(a);
    let closed = |lower: &Lower, upper: &Certificate| upper.c - lower.value <= target;
    for hint in hints {
        lower.offer_matrix(&hint.x);
    }
    lower.offer_uniform();
    if !closed(&lower, &upper) {
        lower.offer_top_singular();
    }
    let mut rng = StdRng::seed_from_u64(0x6a6d_7332);
    for _ in 0..opts.random_starts {
        if closed(&lower, &upper) {
            break;
        }
        lower.offer_random(&mut rng);
    }

    let mut y = block(a, &upper.p, &upper.q);
    let mut infeasible_below = lower.value;
    let mut projections = 0;
    let mut steps = 0;

    while upper.c - lower.value > target && steps < opts.max_bisection_steps {
        steps += 1;
        let floor = infeasible_below.max(lower.value);
        if upper.c - floor <= 0.05 * target {
            // Bisection collapsed above the witnessed lower bound: the last
            // infeasibility verdicts were premature. Restart from the lower bound.
            infeasible_below = lower.value;
            continue;
        }
        let level = 0.5 * (floor + upper.c);
        let outcome = alternating_projections(a, level, &mut y, opts.projection_cap, target, &mut upper);
        projections += outcome.iterations;
        if !outcome.feasible {
            infeasible_below = level;
            if let Some((u, v, x)) = outcome.direction {
                lower.offer_weights(u, v);
                lower.offer_matrix(&x);
            }
        }
    }

    let bounds = Gamma2Bounds {
        lower: lower.value,
        upper: upper.c,
        certificate: upper,
        witness: lower.witness,
        projections,
    };
    if bounds.gap() > accept {
        return Err(Error::NonConvergence {
            lower: bounds.lower,
            upper: bounds.upper,
            iterations: projections,
        });
    }
    Ok(bounds)
}

/// Best witnessed lower bound so far.
struct Lower<'a> {
    a: &'a DenseMatrix,
    value: f64,
    witness: WitnessPair,
}

const ASCENT_STEPS: usize = 400;

impl<'a> Lower<'a> {
    fn new(a: &'a DenseMatrix) -> Self {
        let (m, n) = a.shape();
        // A single entry of largest magnitude is always a valid witness.
        let (mut bi, mut bj) = (0, 0);
        for i in 0..m {
            for j in 0..n {
                if a[(i, j)].norm() > a[(bi, bj)].norm() {
                    (bi, bj) = (i, j);
                }
            }
        }
        let mut x = DenseMatrix::zeros(m, n);
        x[(bi, bj)] = Complex64::new(1.0, 0.0);
        let mut xi = vec![ZERO; n];
        xi[bj] = Complex64::new(1.0, 0.0);
        let witness = WitnessPair { x, xi };
        let value = witness_lower_bound(a, &witness).unwrap_or(0.0);
        Self { a, value, witness }
    }

    fn consider(&mut self, w: WitnessPair) {
        if let Ok(v) = witness_lower_bound(self.a, &w) {
            if v > self.value {
                self.value = v;
                self.witness = w;
            }
        }
    }

    fn offer_uniform(&mut self) {
        let (m, n) = self.a.shape();
        let u = vec![Complex64::new(1.0 / (m as f64).sqrt(), 0.0); m];
        let v = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
        self.offer_weights(u, v);
    }

    fn offer_top_singular(&mut self) {
        let s = svd(self.a, 1e-12 * self.a.max_abs());
        if let (Some(u), Some(v)) = (s.left.first(), s.right.first()) {
            let u = u.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect();
            let v = v.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect();
            self.offer_weights(u, v);
        }
    }

    fn offer_random(&mut self, rng: &mut StdRng) {
        let (m, n) = self.a.shape();
        let complex = !self.a.is_real();
        let mut draw = |len: usize| -> Vec<Complex64> {
            let v: Vec<Complex64> = (0..len)
                .map(|_| {
                    let re = rng.gen_range(-1.0..1.0);
                    let im = if complex { rng.gen_range(-1.0..1.0) } else { 0.0 };
                    Complex64::new(re, im)
                })
                .collect();
            let norm = vec_norm(&v).max(1e-300);
            v.into_iter().map(|z| z / norm).collect()
        };
        let u = draw(m);
        let v = draw(n);
        self.offer_weights(u, v);
    }

    fn offer_weights(&mut self, u: Vec<Complex64>, v: Vec<Complex64>) {
        let x = polar_step(self.a, &u, &v);
        self.offer_matrix(&x);
    }

    /// Alternating ascent started from a test matrix `X`.
    fn offer_matrix(&mut self, x0: &DenseMatrix) {
        if x0.shape() != self.a.shape() {
            return;
        }
        let mut x = x0.clone();
        let mut last = f64::NEG_INFINITY;
        for _ in 0..ASCENT_STEPS {
            let Ok(ax) = schur_product(self.a, &x) else { return };
            let s = svd(&ax, 0.0);
            let (Some(&sigma), Some(u), Some(v)) = (s.sigma.first(), s.left.first(), s.right.first()) else {
                return;
            };
            let xnorm = operator_norm(&x);
            if xnorm == 0.0 {
                return;
            }
            self.consider(WitnessPair {
                x: x.clone(),
                xi: v.clone(),
            });
            let value = sigma / xnorm;
            if value <= last + 1e-14 * value.max(1.0) {
                break;
            }
            last = value;
            x = polar_step(self.a, u, v);
        }
    }
}

/// Maximizer of `Re sum_ij conj(u_i) A_ij X_ij v_j` over `||X|| <= 1`: the
/// entrywise conjugate of the polar factor of `D_{conj u} A D_v`.
fn polar_step(a: &DenseMatrix, u: &[Complex64], v: &[Complex64]) -> DenseMatrix {
    let b = DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| u[i].conj() * a[(i, j)] * v[j]);
    let scale = b.max_abs();
    let s = svd(&b, 1e-12 * scale.max(1e-300));
    let mut w = DenseMatrix::zeros(a.rows(), a.cols());
    for (left, right) in s.left.iter().zip(&s.right) {
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                w[(i, j)] += left[i] * right[j].conj();
            }
        }
    }
    w.conj()
}

/// Best of the trivial row/column factorizations and the polar certificate
/// `[[ (AA^*)^{1/2}, A ], [ A^*, (A^*A)^{1/2} ]]`.
fn initial_certificate(a: &DenseMatrix) -> Certificate {
    let (m, n) = a.shape();
    let aa = a.matmul(&a.adjoint()).expect("conformable");
    let ata = a.adjoint().matmul(a).expect("conformable");
    let row_max = aa.diagonal().iter().map(|d| d.re).fold(0.0, f64::max).sqrt();
    let col_max = ata.diagonal().iter().map(|d| d.re).fold(0.0, f64::max).sqrt();
    let mut candidates = vec![
        certify(
            a,
            &block(a, &aa.scale(1.0 / row_max), &DenseMatrix::identity(n).scale(row_max)),
        ),
        certify(
            a,
            &block(a, &DenseMatrix::identity(m).scale(col_max), &ata.scale(1.0 / col_max)),
        ),
    ];
    let sqrt_psd = |h: &DenseMatrix| hermitian_eigen_unchecked(h).reconstruct_with(|l| l.max(0.0).sqrt());
    candidates.push(certify(a, &block(a, &sqrt_psd(&aa), &sqrt_psd(&ata))));
    candidates
        .into_iter()
        .min_by(|x, y| x.c.total_cmp(&y.c))
        .expect("nonempty")
}

/// Certificate from any Hermitian block matrix whose off-diagonal block is `A`:
/// shift both diagonal blocks by the negative part of the smallest eigenvalue.
fn certify(a: &DenseMatrix, y: &DenseMatrix) -> Certificate {
    let lmin = hermitian_eigen_unchecked(y).values[0];
    certificate_from(a, y, lmin)
}

fn certificate_from(a: &DenseMatrix, y: &DenseMatrix, lmin: f64) -> Certificate {
    let (m, n) = a.shape();
    let scale = y.max_abs().max(1.0);
    let shift = if lmin < 0.0 { -lmin } else { 0.0 } + 1e-13 * scale;
    let mut p = DenseMatrix::from_fn(m, m, |i, j| 0.5 * (y[(i, j)] + y[(j, i)].conj()));
    let mut q = DenseMatrix::from_fn(n, n, |i, j| 0.5 * (y[(m + i, m + j)] + y[(m + j, m + i)].conj()));
    for i in 0..m {
        p[(i, i)] = Complex64::new(p[(i, i)].re + shift, 0.0);
    }
    for j in 0..n {
        q[(j, j)] = Complex64::new(q[(j, j)].re + shift, 0.0);
    }
    let c = p
        .diagonal()
        .iter()
        .chain(q.diagonal().iter())
        .map(|d| d.re)
        .fold(f64::NEG_INFINITY, f64::max);
    Certificate { p, q, c }
}

struct ApOutcome {
    feasible: bool,
    iterations: usize,
    /// `(u, v, X)` read off the separating direction when infeasible.
    direction: Option<(Vec<Complex64>, Vec<Complex64>, DenseMatrix)>,
}

fn project_affine(a: &DenseMatrix, level: f64, y: &mut DenseMatrix) {
    let (m, n) = a.shape();
    for i in 0..m {
        for j in 0..n {
            y[(i, m + j)] = a[(i, j)];
            y[(m + j, i)] = a[(i, j)].conj();
        }
    }
    for k in 0..m + n {
        y[(k, k)] = Complex64::new(y[(k, k)].re.min(level), 0.0);
    }
}

const STALL_WINDOW: usize = 100;
const STALL_RATIO: f64 = 0.995;

/// Alternating projections between the PSD cone and
/// `{ Y : Y_12 = A, diag(Y) <= level }`, starting from (and updating) `y`.
/// Every iterate yields a certificate; the best is kept in `best`.
fn alternating_projections(
    a: &DenseMatrix,
    level: f64,
    y: &mut DenseMatrix,
    cap: usize,
    target: f64,
    best: &mut Certificate,
) -> ApOutcome {
    let (m, n) = a.shape();
    project_affine(a, level, y);
    let mut history: Vec<f64> = Vec::new();
    for it in 0..cap {
        let eig = hermitian_eigen_unchecked(y);
        let lmin = eig.values[0];
        let cert = certificate_from(a, y, lmin);
        if cert.c < best.c {
            *best = cert;
        }
        if lmin >= -0.25 * target {
            return ApOutcome {
                feasible: true,
                iterations: it + 1,
                direction: None,
            };
        }
        let residual = eig
            .values
            .iter()
            .filter(|&&l| l < 0.0)
            .map(|l| l * l)
            .sum::<f64>()
            .sqrt();
        history.push(residual);
        let stalled =
            it >= 2 * STALL_WINDOW && it % STALL_WINDOW == 0 && residual > STALL_RATIO * history[it - STALL_WINDOW];
        if stalled || it + 1 == cap {
            let neg = eig.reconstruct_with(|l| if l < 0.0 { -l } else { 0.0 });
            return ApOutcome {
                feasible: false,
                iterations: it + 1,
                direction: Some(direction_from(&neg, m, n)),
            };
        }
        *y = eig.reconstruct_with(|l| l.max(0.0));
        project_affine(a, level, y);
    }
    ApOutcome {
        feasible: false,
        iterations: cap,
        direction: None,
    }
}

/// Splits the PSD separating matrix `N` into weights `sqrt(diag N11)`,
/// `sqrt(diag N22)` and the contraction `-conj(N12_ij / (u_i v_j))`.
fn direction_from(neg: &DenseMatrix, m: usize, n: usize) -> (Vec<Complex64>, Vec<Complex64>, DenseMatrix) {
    let normalize = |w: Vec<f64>| -> Vec<Complex64> {
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
        w.into_iter().map(|x| Complex64::new(x / norm, 0.0)).collect()
    };
    let du: Vec<f64> = (0..m).map(|i| neg[(i, i)].re.max(0.0).sqrt()).collect();
    let dv: Vec<f64> = (0..n).map(|j| neg[(m + j, m + j)].re.max(0.0).sqrt()).collect();
    let x = DenseMatrix::from_fn(m, n, |i, j| {
        let d = du[i] * dv[j];
        if d > 1e-300 {
            -(neg[(i, m + j)] / d).conj()
        } else {
            ZERO
        }
    });
    (normalize(du), normalize(dv), x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[Vec<f64>]) -> DenseMatrix {
        DenseMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn schur_product_examples() {
        let a = real(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(schur_product(&a, &DenseMatrix::ones(2, 2)).unwrap(), a);
        assert_eq!(
            schur_product(&DenseMatrix::zeros(2, 2), &a).unwrap(),
            DenseMatrix::zeros(2, 2)
        );
        assert!(schur_product(&a, &DenseMatrix::ones(2, 3)).is_err());
        let r = std::f64::consts::SQRT_2;
        let expected = real(&[vec![0.0, r, r], vec![r, 1.0, 0.0], vec![r, 0.0, 1.0]]).scale(0.5);
        let got = schur_product(&f0(), &paper_witness().x).unwrap();
        assert!(got.sub(&expected).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn f0_entries() {
        let f = f0();
        assert_eq!(f[(1, 2)].re, 0.0);
        assert_eq!(f[(0, 0)].re, 1.0);
        assert_eq!(f, f.transpose());
    }

    #[test]
    fn paper_witness_shape() {
        let w = paper_witness();
        assert!((vec_norm(&w.xi) - 1.0).abs() < 1e-15);
        let utu = w.x.transpose().matmul(&w.x).unwrap();
        assert!(utu.sub(&DenseMatrix::identity(3)).unwrap().max_abs() < 1e-15);
        assert!((operator_norm(&w.x) - 1.0).abs() < 1e-12);
        let r = std::f64::consts::SQRT_2;
        let expected = [r / 2.0, 0.5, 0.5];
        for (z, e) in w.xi.iter().zip(expected) {
            assert_eq!(z.re, e);
        }
    }

    #[test]
    fn witness_bounds() {
        let v = witness_lower_bound(&f0(), &paper_witness()).unwrap();
        assert!((v - 26f64.sqrt() / 4.0).abs() < 1e-12);
        let mut e1 = vec![ZERO; 3];
        e1[0] = Complex64::new(1.0, 0.0);
        let crude = WitnessPair {
            x: DenseMatrix::ones(3, 3),
            xi: e1.clone(),
        };
        assert!((witness_lower_bound(&f0(), &crude).unwrap() - 3f64.sqrt() / 3.0).abs() < 1e-12);
        let aligned = WitnessPair {
            x: DenseMatrix::identity(3),
            xi: vec![Complex64::new(1.0, 0.0); 3],
        };
        assert!(witness_lower_bound(&DenseMatrix::ones(3, 3), &aligned).unwrap() <= 1.0 + 1e-15);
        let zero = WitnessPair {
            x: DenseMatrix::zeros(3, 3),
            xi: e1,
        };
        assert!(matches!(witness_lower_bound(&f0(), &zero), Err(Error::ZeroWitness)));
    }

    #[test]
    fn certificate_examples() {
        let ones = DenseMatrix::ones(3, 3);
        assert!(check_certificate(&ones, &ones, &ones, 1.0, 1e-12).unwrap());
        let z = DenseMatrix::zeros(2, 2);
        assert!(check_certificate(&z, &z, &z, 0.0, 1e-12).unwrap());
        // any P, Q with unit diagonal fail for F0 since its norm is 9/7
        let id = DenseMatrix::identity(3);
        assert!(!check_certificate(&f0(), &id, &id, 1.0, 1e-9).unwrap());
        assert!(!check_certificate(&f0(), &ones, &ones, 1.0, 1e-9).unwrap());
        assert!(check_certificate(&f0(), &id, &DenseMatrix::zeros(2, 2), 1.0, 1e-9).is_err());
    }

    #[test]
    fn gamma2_of_f0_brackets_nine_sevenths() {
        let b = gamma2(&f0(), 1e-3).unwrap();
        let exact = 9.0 / 7.0;
        assert!(
            b.lower <= exact + 1e-12 && exact <= b.upper + 1e-12,
            "{} {}",
            b.lower,
            b.upper
        );
        assert!(b.gap() <= 1e-3);
        assert!(check_certificate(
            &f0(),
            &b.certificate.p,
            &b.certificate.q,
            b.upper,
            CERTIFICATE_CHECK_TOL
        )
        .unwrap());
        assert!((witness_lower_bound(&f0(), &b.witness).unwrap() - b.lower).abs() < 1e-12);
    }

    #[test]
    fn gamma2_trivial_cases() {
        let b = gamma2(&DenseMatrix::ones(3, 3), 1e-6).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-6 && (b.upper - 1.0).abs() < 1e-6);
        let b = gamma2(&real(&[vec![1.0]]), 1e-6).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-9 && (b.upper - 1.0).abs() < 1e-9);
        let b = gamma2(&DenseMatrix::identity(4), 1e-6).unwrap();
        assert!((b.upper - 1.0).abs() < 1e-9);
        let b = gamma2(&DenseMatrix::zeros(2, 3), 1e-6).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn gamma2_rejects_oversized() {
        let big = DenseMatrix::zeros(65, 1);
        assert!(matches!(gamma2(&big, 1e-3), Err(Error::MatrixTooLarge { .. })));
    }

    #[test]
    fn gamma2_complex_unimodular_rescaling() {
        let i = Complex64::new(0.0, 1.0);
        let base = gamma2(&f0(), 1e-3).unwrap();
        let d = [Complex64::new(1.0, 0.0), i, -i];
        let e = [Complex64::from_polar(1.0, 0.3), Complex64::new(-1.0, 0.0), i];
        let scaled = DenseMatrix::from_fn(3, 3, |r, c| d[r] * f0()[(r, c)] * e[c]);
        let b = gamma2(&scaled, 1e-3).unwrap();
        assert!((b.lower - base.lower).abs() <= 2e-3 && (b.upper - base.upper).abs() <= 2e-3);
    }
}
