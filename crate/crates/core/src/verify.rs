//! One-shot reproduction of the classification results on a list of groups.

use serde::{Deserialize, Serialize};

use crate::coset::CosetKind;
use crate::error::Result;
use crate::fourier::{bs_norm, two_coset_norm, verify_measure_form, RelativeOrder, Thresholds};
use crate::group::Group;
use crate::saeki::{integral_f_mu, sup_norm_check};
use crate::schur::{
    check_certificate, f0, gamma2, paper_witness, witness_lower_bound, CERTIFICATE_CHECK_TOL, DEFAULT_GAMMA2_TOL,
};
use crate::subset::Subset;
use crate::sweep::{sweep_with, NormMode, CB_TOL};

pub const DEFAULT_GROUPS: [&str; 14] = [
    "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z2xZ2xZ2", "Z2xZ4", "Z3xZ3", "S3", "D4", "Q8",
];

pub fn default_groups() -> Vec<Group> {
    DEFAULT_GROUPS
        .iter()
        .map(|s| Group::parse(s).expect("builtin group list"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub tol: f64,
    pub items: Vec<CheckItem>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.passed)
    }

    fn push(&mut self, name: impl Into<String>, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.items.push(CheckItem {
            name: name.into(),
            passed,
            detail,
        });
    }
}

/// Runs the matrix and lemma checks, then a sweep of every group.
///
/// Abelian groups are swept with Fourier norms and band `tol`; the others
/// with cb-norms and band `max(tol, CB_TOL)`. Sub-check failures and
/// errors are reported as failed items.
pub fn verify_paper(groups: &[Group], tol: f64) -> VerifySummary {
    let mut out = VerifySummary { tol, items: Vec::new() };
    let t = Thresholds::new();

    out.push("thresholds", Ok((t.ordering_holds(), format!("{t:?}"))));
    out.push(
        "sup_norm",
        sup_norm_check(1_000_000).map(|r| {
            let ok = r.max_constancy_error <= 1e-12 && r.max_identity_error <= 1e-12;
            (
                ok,
                format!("max_f {:.15} identity error {:.2e}", r.max_f, r.max_identity_error),
            )
        }),
    );
    out.push(
        "f0_witness",
        witness_lower_bound(&f0(), &paper_witness()).map(|v| {
            let ok = (v - 26f64.sqrt() / 4.0).abs() <= 1e-12 && v > t.c1;
            (ok, format!("{v:.15}"))
        }),
    );
    out.push(
        "f0_gamma2",
        gamma2(&f0(), DEFAULT_GAMMA2_TOL).and_then(|b| {
            let cert = &b.certificate;
            let certified = check_certificate(&f0(), &cert.p, &cert.q, cert.c, CERTIFICATE_CHECK_TOL)?;
            let ok = certified && b.contains(9.0 / 7.0, 1e-3);
            Ok((ok, format!("[{:.9}, {:.9}]", b.lower, b.upper)))
        }),
    );
    out.push("closed_form", closed_form_check());
    out.push("limit", limit_check());

    for g in groups {
        let abelian = g.is_abelian();
        let mode = NormMode::default_for(g);
        let band = if abelian { tol } else { tol.max(CB_TOL) };
        let report = match sweep_with(g, mode, band) {
            Ok(r) => r,
            Err(e) => {
                out.push(format!("sweep {}", g.name()), Err(e));
                continue;
            }
        };
        out.push(
            format!("sweep {}", g.name()),
            Ok((
                report.is_clean(),
                format!(
                    "{} classes, {} violations, {} extremal",
                    report.records.len(),
                    report.violations.len(),
                    report.extremal.len()
                ),
            )),
        );
        if !abelian {
            continue;
        }
        let mut measure_ok = Ok((true, String::from("no two-coset classes")));
        let mut worst = 0.0f64;
        let mut integral_ok = true;
        let mut integral_gap = 0.0f64;
        for r in &report.records {
            if r.kind() == CosetKind::TwoCosets {
                match verify_measure_form(g, &r.canonical) {
                    Ok(m) => worst = worst.max(m.max_error),
                    Err(e) => measure_ok = Err(e),
                }
            }
            if let Some(w) = &r.witness {
                match integral_f_mu(g, &r.canonical, w) {
                    Ok(i) => {
                        let v = i.coefficient.re;
                        integral_gap = integral_gap.max(i.discrepancy());
                        integral_ok &= (v == 6.0 || v == 6.5) && i.discrepancy() <= 1e-10;
                    }
                    Err(_) => integral_ok = false,
                }
            }
        }
        if measure_ok.is_ok() {
            measure_ok = Ok((worst <= 1e-12, format!("max error {worst:.2e}")));
        }
        out.push(format!("measure_form {}", g.name()), measure_ok);
        out.push(
            format!("witness_integrals {}", g.name()),
            Ok((integral_ok, format!("max path discrepancy {integral_gap:.2e}"))),
        );
    }
    out
}

fn closed_form_check() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for q in 3..=12 {
        let g = Group::abelian(&[q])?;
        let s = Subset::from_elements(q, [0, 1])?;
        worst = worst.max((bs_norm(&g, &s)? - two_coset_norm(RelativeOrder::Finite(q))?).abs());
    }
    Ok((worst <= 1e-9, format!("q = 3..12, max error {worst:.2e}")))
}

/// The closed form tends to `4/π`: even `q` from below, odd `q` from above.
fn limit_check() -> Result<(bool, String)> {
    let f = |q: usize| two_coset_norm(RelativeOrder::Finite(q));
    let limit = two_coset_norm(RelativeOrder::Infinite)?;
    let err = (f(501)? - limit).abs();
    let mut monotone = true;
    for q in 2..200 {
        let (a, b) = (f(q)?, f(q + 2)?);
        monotone &= if q % 2 == 0 {
            a < b && b < limit
        } else {
            q < 3 || (a > b && b > limit)
        };
    }
    Ok((err <= 1e-4 && monotone, format!("|f(501) - 4/pi| = {err:.2e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_and_lemma_checks_pass_without_groups() {
        let s = verify_paper(&[], 1e-9);
        assert!(s.all_passed(), "{:?}", s.failures().collect::<Vec<_>>());
        assert_eq!(s.items.len(), 6);
    }

    #[test]
    fn small_groups_pass() {
        let groups: Vec<Group> = ["Z4", "Z6", "Z2xZ4", "S3"]
            .iter()
            .map(|s| Group::parse(s).unwrap())
            .collect();
        let s = verify_paper(&groups, 1e-9);
        assert!(s.all_passed(), "{:?}", s.failures().collect::<Vec<_>>());
    }

    #[test]
    fn zero_tolerance_flags_boundaries() {
        let s = verify_paper(&[Group::parse("Z6").unwrap()], 0.0);
        assert!(!s.all_passed());
    }
}
