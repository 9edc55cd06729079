//! Serializable summaries for single subsets and matrices.

use serde::{Deserialize, Serialize};

use crate::coset::{analyze_cosets, CosetAnalysis};
use crate::error::Result;
use crate::fourier::{bs_norm, predicted_norm};
use crate::group::Group;
use crate::multiplier::{cb_norm, forbidden_pattern_search, PatternHit};
use crate::saeki::{find_witness, lemma32_bound, WitnessTriple};
use crate::subset::Subset;
use crate::sweep::GroupDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub group: GroupDescriptor,
    pub subset: Subset,
    pub analysis: CosetAnalysis,
    pub predicted: Option<f64>,
    /// Fourier-Stieltjes norm; abelian groups only.
    pub bs_norm: Option<f64>,
    /// gamma_2 bracket of the multiplier matrix.
    pub cb_norm: Option<Bracket>,
    pub witness: Option<WitnessTriple>,
    pub witness_bound: Option<f64>,
    pub pattern: Option<PatternHit>,
}

impl NormReport {
    /// Fourier norm on abelian groups, the cb bracket when `cb` is set or the
    /// group is not abelian.
    pub fn compute(g: &Group, s: &Subset, cb: bool, gamma2_tol: f64) -> Result<Self> {
        s.check_group(g)?;
        let analysis = analyze_cosets(g, s);
        let abelian = g.is_abelian();
        let cb_norm = if cb || !abelian {
            let b = cb_norm(g, s, gamma2_tol)?;
            Some(Bracket {
                lower: b.lower,
                upper: b.upper,
            })
        } else {
            None
        };
        let witness = if abelian { find_witness(g, s)? } else { None };
        let witness_bound = witness.as_ref().map(|w| lemma32_bound(g, s, w)).transpose()?;
        Ok(NormReport {
            group: GroupDescriptor::of(g),
            subset: s.clone(),
            predicted: predicted_norm(&analysis),
            analysis,
            bs_norm: if abelian { Some(bs_norm(g, s)?) } else { None },
            cb_norm,
            witness,
            witness_bound,
            pattern: forbidden_pattern_search(g, s)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::CosetKind;

    #[test]
    fn reports() {
        let g = Group::parse("Z4").unwrap();
        let r = NormReport::compute(&g, &Subset::parse(&g, "0,1").unwrap(), false, 1e-3).unwrap();
        assert_eq!(r.analysis.kind, CosetKind::TwoCosets);
        assert!((r.bs_norm.unwrap() - (1.0 + 2f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(r.cb_norm.is_none());
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<NormReport>(&text).unwrap(), r);

        let g = Group::parse("S3").unwrap();
        let r = NormReport::compute(&g, &Subset::parse(&g, "0").unwrap(), false, 1e-3).unwrap();
        let b = r.cb_norm.unwrap();
        assert!((b.lower - 1.0).abs() < 1e-6 && (b.upper - 1.0).abs() < 1e-6);
        assert!(r.bs_norm.is_none());
    }
}
