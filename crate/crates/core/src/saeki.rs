//! Witness triples `(u, v, w)` forcing `||chi_S|| >= 4/3` on abelian groups.
//!
//! For `u, v ∈ S` and `w` with `u + w ∈ S` and `v ± w ∉ S`, the test function
//!
//! ```text
//! f(x) = (x,u)[2 + 2(x,w) + ½(x,-w)] + (x,v)[2 - (x,w) - (x,-w)]
//! ```
//!
//! has `sup |f| = 9/2` while `|∫ f dmu|` is 6 or 13/2, so `||mu|| >= 4/3`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::mu_values;
use crate::group::Group;
use crate::subset::Subset;

/// `sup_x |f(x)|`.
pub const F_SUP_NORM: f64 = 4.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTriple {
    u: usize,
    v: usize,
    w: usize,
}

impl WitnessTriple {
    /// Checks `u, v, u + w ∈ S` and `v + w, v - w ∉ S`.
    pub fn new(g: &Group, s: &Subset, u: usize, v: usize, w: usize) -> Result<Self> {
        if !g.is_abelian() {
            return Err(Error::NotAbelian("witness triples"));
        }
        s.check_group(g)?;
        for x in [u, v, w] {
            g.check_element(x)?;
        }
        let minus_w = g.inverse(w);
        let fail = |msg: &str| Err(Error::InvalidWitness(format!("({u}, {v}, {w}): {msg}")));
        if !s.contains(u) {
            return fail("u not in S");
        }
        if !s.contains(v) {
            return fail("v not in S");
        }
        if !s.contains(g.op(u, w)) {
            return fail("u + w not in S");
        }
        if s.contains(g.op(v, w)) {
            return fail("v + w in S");
        }
        if s.contains(g.op(v, minus_w)) {
            return fail("v - w in S");
        }
        Ok(Self { u, v, w })
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn w(&self) -> usize {
        self.w
    }
}

/// First witness by increasing `w`; for that `w`, triples with `u - w ∈ S`
/// (integral 13/2) come before the others, then increasing `(u, v)`.
pub fn find_witness(g: &Group, s: &Subset) -> Result<Option<WitnessTriple>> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian("find_witness"));
    }
    s.check_group(g)?;
    let n = g.order();
    let found = (0..n).into_par_iter().find_map_first(|w| {
        let minus_w = g.inverse(w);
        let v = s
            .iter()
            .find(|&v| !s.contains(g.op(v, w)) && !s.contains(g.op(v, minus_w)))?;
        let us: Vec<usize> = s.iter().filter(|&u| s.contains(g.op(u, w))).collect();
        let u = us
            .iter()
            .copied()
            .find(|&u| s.contains(g.op(u, minus_w)))
            .or_else(|| us.first().copied())?;
        Some((u, v, w))
    });
    Ok(found.map(|(u, v, w)| WitnessTriple { u, v, w }))
}

/// `∫ f dmu` evaluated two ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FIntegral {
    /// From the character coefficients of `f` against `chi_S`.
    pub coefficient: Complex64,
    /// As `sum_x f(x) mu(x)` with the measure from [`mu_values`].
    pub numeric: Complex64,
}

impl FIntegral {
    pub fn discrepancy(&self) -> f64 {
        (self.coefficient - self.numeric).norm()
    }
}

pub fn integral_f_mu(g: &Group, s: &Subset, t: &WitnessTriple) -> Result<FIntegral> {
    let t = WitnessTriple::new(g, s, t.u, t.v, t.w)?;
    let chi = |x: usize| if s.contains(x) { 1.0 } else { 0.0 };
    let minus_w = g.inverse(t.w);
    let coefficient = 2.0 * chi(t.u) + 2.0 * chi(g.op(t.u, t.w)) + 0.5 * chi(g.op(t.u, minus_w)) + 2.0 * chi(t.v)
        - chi(g.op(t.v, t.w))
        - chi(g.op(t.v, minus_w));

    let mu = mu_values(g, s)?;
    let pair = |x: usize, y: usize| g.character_value(x, y).expect("abelian");
    let numeric = (0..g.order())
        .map(|x| {
            let xw = pair(x, t.w);
            let xmw = pair(x, minus_w);
            let f = pair(x, t.u) * (2.0 + 2.0 * xw + 0.5 * xmw) + pair(x, t.v) * (2.0 - xw - xmw);
            f * mu.values[x]
        })
        .sum();
    Ok(FIntegral {
        coefficient: Complex64::new(coefficient, 0.0),
        numeric,
    })
}

/// `|∫ f dmu| / (9/2)`, a lower bound for `||chi_S||`.
pub fn lemma32_bound(g: &Group, s: &Subset, t: &WitnessTriple) -> Result<f64> {
    Ok(integral_f_mu(g, s, t)?.coefficient.norm() / F_SUP_NORM)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupNormCheck {
    pub grid_points: usize,
    /// Largest value of `|2 + 2e^{iθ} + ½e^{-iθ}| + |2 - e^{iθ} - e^{-iθ}|`.
    pub max_f: f64,
    pub min_f: f64,
    /// Largest `|sqrt(25/4 + 10cosθ + 4cos²θ) - (5/2 + 2cosθ)|`.
    pub max_identity_error: f64,
    /// Largest deviation of the pointwise bound from 9/2.
    pub max_constancy_error: f64,
}

/// Evaluates the pointwise bound on `grid_points` uniform angles in `[0, 2π)`.
pub fn sup_norm_check(grid_points: usize) -> Result<SupNormCheck> {
    if grid_points < 3 {
        return Err(Error::Parse(format!("grid needs at least 3 points, got {grid_points}")));
    }
    let init = (f64::NEG_INFINITY, f64::INFINITY, 0.0f64, 0.0f64);
    let (max_f, min_f, max_identity_error, max_constancy_error) = (0..grid_points)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / grid_points as f64;
            let (f, identity_error) = pointwise_bound(theta);
            (f, f, identity_error, (f - F_SUP_NORM).abs())
        })
        .reduce(|| init, |a, b| (a.0.max(b.0), a.1.min(b.1), a.2.max(b.2), a.3.max(b.3)));
    Ok(SupNormCheck {
        grid_points,
        max_f,
        min_f,
        max_identity_error,
        max_constancy_error,
    })
}

/// The bound `|2 + 2e^{iθ} + ½e^{-iθ}| + |2 - e^{iθ} - e^{-iθ}|` at `theta`,
/// with the error of the closed-form square root.
pub fn pointwise_bound(theta: f64) -> (f64, f64) {
    let e = Complex64::from_polar(1.0, theta);
    let einv = e.conj();
    let f = (2.0 + 2.0 * e + 0.5 * einv).norm() + (2.0 - e - einv).norm();
    let c = theta.cos();
    let root = (25.0 / 4.0 + 10.0 * c + 4.0 * c * c).sqrt();
    (f, (root - (2.5 + 2.0 * c)).abs())
}
