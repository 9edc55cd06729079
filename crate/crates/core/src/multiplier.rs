//! Multiplier matrices `M(s, t) = chi_S(s^{-1} t)` and the combinatorial
//! detectors that certify a large cb-norm.
//!
//! The cb-norm of `chi_S` equals the Schur multiplier norm of its multiplier
//! matrix, so [`cb_norm`] is a [`gamma2`](crate::schur::gamma2) bracket.

use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::linalg::DenseMatrix;
use crate::schur::{f0, gamma2_with, Gamma2Bounds, Gamma2Options, WitnessPair};
use crate::subset::Subset;

/// Largest group order accepted by [`cb_norm`].
pub const CB_MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierMatrix {
    pub order: usize,
    pub matrix: DenseMatrix,
}

/// Row `s` of the multiplier matrix is the indicator of `sS`.
pub fn multiplier_matrix(g: &Group, s: &Subset) -> Result<MultiplierMatrix> {
    s.check_group(g)?;
    let n = g.order();
    let matrix = DenseMatrix::from_real_fn(n, n, |r, c| if s.contains(g.op(g.inverse(r), c)) { 1.0 } else { 0.0 });
    Ok(MultiplierMatrix { order: n, matrix })
}

/// Rows and columns (as element triples) at which the multiplier matrix
/// contains the forbidden pattern exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternHit {
    pub rows: [usize; 3],
    pub cols: [usize; 3],
}

/// Lexicographically smallest `(rows, cols)` with `M[rows_i][cols_j] = F0[i][j]`.
pub fn forbidden_pattern_search(g: &Group, s: &Subset) -> Result<Option<PatternHit>> {
    s.check_group(g)?;
    let n = g.order();
    let neighborhoods: Vec<Subset> = (0..n).map(|r| s.left_translate(g, r)).collect();
    Ok((0..n).into_par_iter().find_map_first(|r1| {
        let n1 = &neighborhoods[r1];
        if n1.len() < 3 {
            return None;
        }
        for r2 in 0..n {
            let n12 = n1.intersection(&neighborhoods[r2]);
            // need c1, c2 in N1 ∩ N2 and c3 in N1 \ N2
            if n12.len() < 2 || n12.len() == n1.len() {
                continue;
            }
            let only1 = n1.difference(&neighborhoods[r2]);
            for (r3, n3) in neighborhoods.iter().enumerate() {
                let c1 = n12.intersection(n3).min_element();
                let c2 = n12.difference(n3).min_element();
                let c3 = only1.intersection(n3).min_element();
                if let (Some(c1), Some(c2), Some(c3)) = (c1, c2, c3) {
                    return Some(PatternHit {
                        rows: [r1, r2, r3],
                        cols: [c1, c2, c3],
                    });
                }
            }
        }
        None
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `st ∈ S` but `st^n ∉ S`.
    Right,
    /// `ts ∈ S` but `t^n s ∉ S`.
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProgressionViolation {
    pub s: usize,
    pub t: usize,
    pub side: Side,
    /// Smallest exponent in `0..order(t)` leaving `S`.
    pub n: usize,
}

/// Every `(s, t)` with `s, st ∈ S` (resp. `s, ts ∈ S`) whose progression
/// `st^n` (resp. `t^n s`) leaves `S`, sorted lexicographically.
pub fn progression_check(g: &Group, s: &Subset) -> Result<Vec<ProgressionViolation>> {
    s.check_group(g)?;
    let mut out = Vec::new();
    for x in s.iter() {
        for t in 0..g.order() {
            let sides: &[Side] = if g.is_abelian() {
                &[Side::Right]
            } else {
                &[Side::Right, Side::Left]
            };
            for &side in sides {
                let step = |y: usize| match side {
                    Side::Right => g.op(y, t),
                    Side::Left => g.op(t, y),
                };
                if !s.contains(step(x)) {
                    continue;
                }
                let mut y = x;
                for k in 1..g.element_order(t) {
                    y = step(y);
                    if !s.contains(y) {
                        out.push(ProgressionViolation { s: x, t, side, n: k });
                        break;
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Pairs `u <= v` in `S` with neither `uv` nor `vu` in `S`. Requires `e ∈ S`.
pub fn closure_claim_check(g: &Group, s: &Subset) -> Result<Vec<(usize, usize)>> {
    s.check_group(g)?;
    if !s.contains(g.identity()) {
        return Err(Error::IdentityNotInSubset);
    }
    let mut out = Vec::new();
    for u in s.iter() {
        for v in s.iter().filter(|&v| v >= u) {
            if !s.contains(g.op(u, v)) && !s.contains(g.op(v, u)) {
                out.push((u, v));
            }
        }
    }
    Ok(out)
}

/// Witness realizing the best known lower bound for the forbidden pattern.
fn f0_witness() -> &'static WitnessPair {
    static CELL: OnceLock<WitnessPair> = OnceLock::new();
    CELL.get_or_init(|| {
        gamma2_with(&f0(), &Gamma2Options::with_tol(1e-6), &[])
            .or_else(|_| gamma2_with(&f0(), &Gamma2Options::default(), &[]))
            .map(|b| b.witness)
            .unwrap_or_else(|_| crate::schur::paper_witness())
    })
}

/// Lifts a witness on a 3x3 compression to the full `n x n` matrix.
pub fn lift_witness(hit: &PatternHit, n: usize, w: &WitnessPair) -> WitnessPair {
    let mut x = DenseMatrix::zeros(n, n);
    let mut xi = vec![Complex64::new(0.0, 0.0); n];
    for (i, &r) in hit.rows.iter().enumerate() {
        for (j, &c) in hit.cols.iter().enumerate() {
            x[(r, c)] = w.x[(i, j)];
        }
    }
    for (j, &c) in hit.cols.iter().enumerate() {
        xi[c] = w.xi[j];
    }
    WitnessPair { x, xi }
}

/// cb-norm bracket of `chi_S` as the gamma_2 bounds of its multiplier matrix.
///
/// When the forbidden pattern is present its optimal witness is lifted into
/// the full matrix as a starting point for the lower bound.
pub fn cb_norm(g: &Group, s: &Subset, tol: f64) -> Result<Gamma2Bounds> {
    if g.order() > CB_MAX_ORDER {
        return Err(Error::MatrixTooLarge {
            rows: g.order(),
            cols: g.order(),
            max: CB_MAX_ORDER,
        });
    }
    let m = multiplier_matrix(g, s)?;
    let mut hints = Vec::new();
    if let Some(hit) = forbidden_pattern_search(g, s)? {
        hints.push(lift_witness(&hit, g.order(), f0_witness()));
    }
    let opts = Gamma2Options {
        tol,
        max_dim: CB_MAX_ORDER,
        ..Gamma2Options::default()
    };
    gamma2_with(&m.matrix, &opts, &hints)
}
