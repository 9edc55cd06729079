//! Fourier-Stieltjes norms of indicator functions on finite abelian groups.
//!
//! A finite abelian group is identified with its dual through the pairing
//! [`Group::character_value`]. The idempotent `chi_S` is the Fourier transform
//! of the measure `mu(x) = |G|^{-1} sum_{s in S} conj((x, s))`, and its norm is
//! the total variation `sum_x |mu(x)|`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coset::{analyze_cosets, CosetAnalysis, CosetKind};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::subset::Subset;

/// Reference constants for the classification thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// `(1 + sqrt 2) / 2`, the sharp coset threshold.
    pub c1: f64,
    /// `4/3`, the sharp two-coset threshold.
    pub c2: f64,
    /// `(sqrt 17 + 1) / 4`, the older two-coset threshold.
    pub saeki_old: f64,
    /// `2 / sqrt 3`, the older cb coset threshold.
    pub stan_old: f64,
    /// Schur multiplier norm of the 3x3 forbidden pattern.
    pub f0_norm: f64,
    /// Lower bound for the same norm from the explicit witness.
    pub f0_witness: f64,
    pub limit_q_inf: f64,
}

impl Thresholds {
    pub fn new() -> Self {
        Self {
            c1: (1.0 + 2f64.sqrt()) / 2.0,
            c2: 4.0 / 3.0,
            saeki_old: (17f64.sqrt() + 1.0) / 4.0,
            stan_old: 2.0 / 3f64.sqrt(),
            f0_norm: 9.0 / 7.0,
            f0_witness: 26f64.sqrt() / 4.0,
            limit_q_inf: 4.0 / PI,
        }
    }

    /// `1 < stan_old < c1 < f0_witness < saeki_old < c2` and `f0_witness <= f0_norm`.
    pub fn ordering_holds(&self) -> bool {
        let chain = [1.0, self.stan_old, self.c1, self.f0_witness, self.saeki_old, self.c2];
        chain.windows(2).all(|w| w[0] < w[1]) && self.f0_witness <= self.f0_norm
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureVector {
    pub order: usize,
    pub values: Vec<Complex64>,
}

impl MeasureVector {
    /// Total variation `sum_x |mu(x)|`.
    pub fn total_variation(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }

    /// `gamma -> sum_x mu(x) (x, gamma)`, which reproduces `chi_S`.
    pub fn transform(&self, g: &Group) -> Result<Vec<Complex64>> {
        require_abelian(g, "measure transform")?;
        Ok((0..g.order())
            .map(|gamma| {
                self.values
                    .iter()
                    .enumerate()
                    .map(|(x, &m)| m * g.root(g.pairing_phase(x, gamma)))
                    .sum()
            })
            .collect())
    }
}

fn require_abelian(g: &Group, what: &'static str) -> Result<()> {
    if g.is_abelian() {
        Ok(())
    } else {
        Err(Error::NotAbelian(what))
    }
}

pub fn mu_values(g: &Group, s: &Subset) -> Result<MeasureVector> {
    require_abelian(g, "mu_values")?;
    s.check_group(g)?;
    let n = g.order();
    let scale = 1.0 / n as f64;
    let values = (0..n)
        .map(|x| {
            let sum: Complex64 = s.iter().map(|gamma| g.root(g.pairing_phase(x, gamma)).conj()).sum();
            sum * scale
        })
        .collect();
    Ok(MeasureVector { order: n, values })
}

/// Fourier-Stieltjes norm of `chi_S`.
pub fn bs_norm(g: &Group, s: &Subset) -> Result<f64> {
    Ok(mu_values(g, s)?.total_variation())
}

/// Relative order of a two-coset union; `Infinite` only arises as a limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelativeOrder {
    Finite(usize),
    Infinite,
}

/// `2/(q sin(pi/2q))` for odd `q`, `2/(q tan(pi/2q))` for even `q`, `4/pi` at infinity.
pub fn two_coset_norm(q: RelativeOrder) -> Result<f64> {
    match q {
        RelativeOrder::Infinite => Ok(4.0 / PI),
        RelativeOrder::Finite(q) if q < 2 => Err(Error::BadRelativeOrder(q)),
        RelativeOrder::Finite(q) => {
            let qf = q as f64;
            let angle = FRAC_PI_2 / qf;
            Ok(if q % 2 == 1 {
                2.0 / (qf * angle.sin())
            } else {
                2.0 / (qf * angle.tan())
            })
        }
    }
}

/// Closed-form norm implied by the coset structure, when one is known.
pub fn predicted_norm(analysis: &CosetAnalysis) -> Option<f64> {
    match analysis.kind {
        CosetKind::Empty => Some(0.0),
        CosetKind::Coset => Some(1.0),
        CosetKind::TwoCosets => analysis
            .relative_order
            .and_then(|q| two_coset_norm(RelativeOrder::Finite(q)).ok()),
        CosetKind::Other => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureForm {
    pub holds: bool,
    /// Support subgroup, the annihilator of the stabilizer of `S`.
    pub support: Subset,
    pub gamma1: usize,
    pub gamma2: usize,
    pub max_error: f64,
}

pub const MEASURE_FORM_TOL: f64 = 1e-12;

/// Checks `mu(x) = [(-x, g1) + (-x, g2)] |H|^{-1} 1_H(x)` for `S = (g1 + L) ∪ (g2 + L)`,
/// `H = L^⊥`.
pub fn verify_measure_form(g: &Group, s: &Subset) -> Result<MeasureForm> {
    require_abelian(g, "verify_measure_form")?;
    let analysis = analyze_cosets(g, s);
    let (CosetKind::TwoCosets, Some(g1), Some(g2)) = (analysis.kind, analysis.a, analysis.b) else {
        return Err(Error::NotTwoCosets);
    };
    let lambda = &analysis.subgroup;
    let n = g.order();
    let mut support = Subset::empty(n);
    for x in 0..n {
        if lambda.iter().all(|l| g.pairing_phase(x, l) == 0) {
            support.insert(x);
        }
    }
    let mu = mu_values(g, s)?;
    let weight = 1.0 / support.len() as f64;
    let max_error = (0..n)
        .map(|x| {
            let expected = if support.contains(x) {
                (g.root(g.pairing_phase(x, g1)).conj() + g.root(g.pairing_phase(x, g2)).conj()) * weight
            } else {
                Complex64::new(0.0, 0.0)
            };
            (mu.values[x] - expected).norm()
        })
        .fold(0.0, f64::max);
    Ok(MeasureForm {
        holds: max_error <= MEASURE_FORM_TOL,
        support,
        gamma1: g1,
        gamma2: g2,
        max_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Group {
        Group::abelian(&[n]).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> Subset {
        Subset::from_elements(n, xs.iter().copied()).unwrap()
    }

    #[test]
    fn thresholds_are_ordered() {
        assert!(Thresholds::new().ordering_holds());
    }

    #[test]
    fn mu_examples() {
        let g = z(4);
        for v in mu_values(&g, &set(4, &[0])).unwrap().values {
            assert!((v - 0.25).norm() < 1e-15);
        }
        let whole = mu_values(&g, &Subset::full(4)).unwrap();
        assert!((whole.values[0] - 1.0).norm() < 1e-15);
        for v in &whole.values[1..] {
            assert!(v.norm() < 1e-15);
        }
        // mu(x) = (1 + i^{-x}) / 4
        let pair = mu_values(&g, &set(4, &[0, 1])).unwrap();
        let i = Complex64::new(0.0, 1.0);
        for x in 0..4 {
            let expected = (1.0 + i.powi(-(x as i32))) / 4.0;
            assert!((pair.values[x] - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn golden_norms() {
        assert!((bs_norm(&z(3), &set(3, &[0, 1])).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        let c1 = (1.0 + 2f64.sqrt()) / 2.0;
        assert!((bs_norm(&z(4), &set(4, &[0, 1])).unwrap() - c1).abs() < 1e-12);
        let z6 = bs_norm(&z(6), &set(6, &[0, 1])).unwrap();
        assert!((z6 - (2.0 + 3f64.sqrt()) / 3.0).abs() < 1e-12);
        assert!((two_coset_norm(RelativeOrder::Finite(6)).unwrap() - z6).abs() < 1e-12);
        assert!((bs_norm(&z(6), &set(6, &[1, 3, 5])).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(bs_norm(&z(6), &Subset::empty(6)).unwrap(), 0.0);
    }

    #[test]
    fn closed_forms() {
        let f = |q| two_coset_norm(RelativeOrder::Finite(q)).unwrap();
        assert!((f(3) - 4.0 / 3.0).abs() < 1e-15);
        assert!((f(4) - (1.0 + 2f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((f(2) - 1.0).abs() < 1e-15);
        assert!((two_coset_norm(RelativeOrder::Infinite).unwrap() - 1.273239545).abs() < 1e-9);
        assert!(matches!(
            two_coset_norm(RelativeOrder::Finite(1)),
            Err(Error::BadRelativeOrder(1))
        ));
    }

    #[test]
    fn predicted_examples() {
        let g = z(5);
        let coset = analyze_cosets(&g, &set(5, &[2]));
        assert_eq!(predicted_norm(&coset), Some(1.0));
        let pair = analyze_cosets(&g, &set(5, &[0, 1]));
        let p = predicted_norm(&pair).unwrap();
        assert!((p - 1.294427191).abs() < 1e-9);
        assert!((bs_norm(&g, &set(5, &[0, 1])).unwrap() - p).abs() < 1e-12);
        let other = analyze_cosets(&z(6), &set(6, &[0, 1, 3]));
        assert_eq!(predicted_norm(&other), None);
    }

    #[test]
    fn measure_form_examples() {
        let m = verify_measure_form(&z(4), &set(4, &[0, 1])).unwrap();
        assert!(m.holds);
        assert_eq!(m.support, Subset::full(4));
        assert_eq!((m.gamma1, m.gamma2), (0, 1));
        let m = verify_measure_form(&z(6), &set(6, &[0, 1, 3, 4])).unwrap();
        assert!(m.holds);
        assert_eq!(m.support.to_vec(), vec![0, 2, 4]);
        assert!(matches!(
            verify_measure_form(&z(6), &set(6, &[0, 1, 3])),
            Err(Error::NotTwoCosets)
        ));
    }

    #[test]
    fn cayley_groups_rejected() {
        let s3 = Group::builtin("S3").unwrap();
        assert!(matches!(bs_norm(&s3, &set(6, &[0])), Err(Error::NotAbelian(_))));
    }

    #[test]
    fn transform_reconstructs_indicator() {
        for factors in [vec![12], vec![2, 6], vec![3, 3], vec![2, 2, 2]] {
            let g = Group::abelian(&factors).unwrap();
            let n = g.order();
            for m in [1u64, 0b1011, 0b110101, (1 << n) - 1] {
                let s = Subset::from_mask(n, m);
                let chi = mu_values(&g, &s).unwrap().transform(&g).unwrap();
                for (gamma, v) in chi.iter().enumerate() {
                    let expected = if s.contains(gamma) { 1.0 } else { 0.0 };
                    assert!((v - expected).norm() <= 1e-12 * n as f64);
                }
            }
        }
    }

    #[test]
    fn closed_form_parities_are_monotone_towards_limit() {
        let f = |q| two_coset_norm(RelativeOrder::Finite(q)).unwrap();
        let limit = 4.0 / PI;
        let even: Vec<f64> = (4..=500).step_by(2).map(f).collect();
        let odd: Vec<f64> = (3..=501).step_by(2).map(f).collect();
        assert!(even.windows(2).all(|w| w[0] < w[1]));
        assert!(even.iter().all(|&v| v < limit));
        // odd values start at 4/3 and come down to the limit
        assert!(odd.windows(2).all(|w| w[0] > w[1]));
        assert!(odd.iter().all(|&v| v > limit));
        assert!((f(501) - limit).abs() <= 1e-4);
        assert!((f(500) - limit).abs() <= 1e-4);
    }
}
