//! Exhaustive classification of the subsets of a small group, up to translation.

use std::cmp::Ordering;
use std::io;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coset::{analyze_cosets, CosetAnalysis, CosetKind};
use crate::error::{Error, Result};
use crate::fourier::{bs_norm, predicted_norm, Thresholds};
use crate::group::Group;
use crate::multiplier::{cb_norm, forbidden_pattern_search, PatternHit};
use crate::saeki::{find_witness, WitnessTriple};
use crate::schur::DEFAULT_GAMMA2_TOL;
use crate::subset::{mask_cmp, Subset};

/// Largest order for which all `2^n` subsets are enumerated.
pub const SWEEP_MAX_ORDER: usize = 24;
/// Default band around thresholds for exact (Fourier) norms.
pub const FOURIER_TOL: f64 = 1e-9;
/// Default band for norms bracketed by the gamma_2 solver.
pub const CB_TOL: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMode {
    /// `||chi_S||` in `B(G)` via the dual measure; abelian groups only.
    Fourier,
    /// `||chi_S||_cb` as the gamma_2 norm of the multiplier matrix.
    Cb,
}

impl NormMode {
    pub fn default_for(g: &Group) -> Self {
        if g.is_abelian() {
            NormMode::Fourier
        } else {
            NormMode::Cb
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            NormMode::Fourier => FOURIER_TOL,
            NormMode::Cb => CB_TOL,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NormMode::Fourier => "fourier",
            NormMode::Cb => "cb",
        }
    }
}

/// Least translate `tS` (abelian) or `aSb` (otherwise) in [`Subset`] order.
pub fn canonical_form(g: &Group, s: &Subset) -> Subset {
    translates(g, s).into_iter().min().unwrap_or_else(|| s.clone())
}

/// Number of distinct translates of `S`.
pub fn orbit_size(g: &Group, s: &Subset) -> u64 {
    let mut all = translates(g, s);
    all.sort();
    all.dedup();
    all.len() as u64
}

fn translates(g: &Group, s: &Subset) -> Vec<Subset> {
    let n = g.order();
    if g.is_commutative() {
        (0..n).map(|t| s.left_translate(g, t)).collect()
    } else {
        (0..n)
            .flat_map(|a| {
                let left = s.left_translate(g, a);
                (0..n).map(move |b| left.right_translate(g, b))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Flags {
    pub below_c1: bool,
    pub in_open_interval_1_to_c2: bool,
    pub equals_c2_not_two_coset: bool,
}

impl Flags {
    pub fn evaluate(norm: f64, kind: CosetKind, tol: f64) -> Self {
        let t = Thresholds::new();
        Flags {
            below_c1: norm < t.c1 - tol,
            in_open_interval_1_to_c2: norm > 1.0 + tol && norm < t.c2 - tol,
            equals_c2_not_two_coset: (norm - t.c2).abs() <= tol && kind == CosetKind::Other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// A non-coset with norm below `(1+√2)/2`.
    BelowC1NotCoset,
    /// A non-two-coset union with norm in `(1, 4/3)` (abelian groups).
    IntervalNotTwoCosets,
    /// A coset or two-coset union whose norm misses the closed form.
    ClosedFormMismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub subset: Subset,
    pub canonical: Subset,
    pub orbit_size: u64,
    pub analysis: CosetAnalysis,
    pub mode: NormMode,
    /// The Fourier norm, or the gamma_2 lower bound in cb mode.
    pub norm: f64,
    /// Equal to `norm` in Fourier mode.
    pub norm_upper: f64,
    pub predicted: Option<f64>,
    pub tol: f64,
    pub flags: Flags,
    pub witness: Option<WitnessTriple>,
    pub pattern: Option<PatternHit>,
}

impl ClassificationRecord {
    pub fn kind(&self) -> CosetKind {
        self.analysis.kind
    }

    /// Rules broken by this record. The interval rule is only applied on
    /// abelian groups, where the norm is the Fourier-Stieltjes norm.
    pub fn violations(&self, abelian: bool) -> Vec<Rule> {
        let kind = self.kind();
        let mut out = Vec::new();
        if self.flags.below_c1 && !matches!(kind, CosetKind::Coset | CosetKind::Empty) {
            out.push(Rule::BelowC1NotCoset);
        }
        if abelian && self.flags.in_open_interval_1_to_c2 && kind != CosetKind::TwoCosets {
            out.push(Rule::IntervalNotTwoCosets);
        }
        if matches!(kind, CosetKind::Coset | CosetKind::TwoCosets) {
            let ok = self
                .predicted
                .is_some_and(|p| p >= self.norm - self.tol && p <= self.norm_upper + self.tol);
            if !ok {
                out.push(Rule::ClosedFormMismatch);
            }
        }
        out
    }
}

pub fn classify(g: &Group, s: &Subset, tol: f64) -> Result<ClassificationRecord> {
    classify_with(g, s, NormMode::default_for(g), tol)
}

pub fn classify_with(g: &Group, s: &Subset, mode: NormMode, tol: f64) -> Result<ClassificationRecord> {
    s.check_group(g)?;
    check_mode(g, mode)?;
    classify_inner(g, s, canonical_form(g, s), orbit_size(g, s), mode, tol)
}

fn check_mode(g: &Group, mode: NormMode) -> Result<()> {
    if mode == NormMode::Fourier && !g.is_abelian() {
        return Err(Error::NotAbelian("Fourier norms"));
    }
    Ok(())
}

fn classify_inner(
    g: &Group,
    s: &Subset,
    canonical: Subset,
    orbit_size: u64,
    mode: NormMode,
    tol: f64,
) -> Result<ClassificationRecord> {
    let analysis = analyze_cosets(g, s);
    let (norm, norm_upper) = match mode {
        NormMode::Fourier => {
            let v = bs_norm(g, s)?;
            (v, v)
        }
        NormMode::Cb => {
            let b = cb_norm(g, s, DEFAULT_GAMMA2_TOL)?;
            (b.lower, b.upper)
        }
    };
    let witness = if g.is_abelian() { find_witness(g, s)? } else { None };
    Ok(ClassificationRecord {
        subset: s.clone(),
        canonical,
        orbit_size,
        predicted: predicted_norm(&analysis),
        flags: Flags::evaluate(norm, analysis.kind, tol),
        analysis,
        mode,
        norm,
        norm_upper,
        tol,
        witness,
        pattern: forbidden_pattern_search(g, s)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub name: String,
    pub order: usize,
    pub abelian: bool,
    pub factors: Option<Vec<usize>>,
}

impl GroupDescriptor {
    pub fn of(g: &Group) -> Self {
        GroupDescriptor {
            name: g.name().to_string(),
            order: g.order(),
            abelian: g.is_abelian(),
            factors: g.factors().map(<[usize]>::to_vec),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindTotal {
    pub kind: CosetKind,
    pub classes: u64,
    pub subsets: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub subset: Subset,
    pub kind: CosetKind,
    pub norm: f64,
    pub norm_upper: f64,
    pub predicted: Option<f64>,
}

/// Witness presence per structure class (`kind`, relative order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCensus {
    pub kind: CosetKind,
    pub relative_order: Option<usize>,
    pub classes: u64,
    pub classes_with_witness: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub group: GroupDescriptor,
    pub mode: NormMode,
    pub tol: f64,
    pub totals: Vec<KindTotal>,
    pub violations: Vec<Violation>,
    /// Non-two-coset classes with norm `4/3` within `tol`.
    pub extremal: Vec<Subset>,
    pub witness_census: Vec<WitnessCensus>,
    pub records: Vec<ClassificationRecord>,
    /// Omitted from the serialized form when cleared, so that reports can
    /// be compared byte for byte across runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_secs: Option<f64>,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn total_subsets(&self) -> u64 {
        self.totals.iter().map(|t| t.subsets).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One row per canonical class.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(CsvRow {
                subset: r.canonical.to_string(),
                orbit_size: r.orbit_size,
                kind: r.kind().as_str(),
                q: r.analysis.relative_order,
                norm: r.norm,
                norm_upper: r.norm_upper,
                predicted: r.predicted,
                below_c1: r.flags.below_c1,
                in_open_interval_1_to_c2: r.flags.in_open_interval_1_to_c2,
                equals_c2_not_two_coset: r.flags.equals_c2_not_two_coset,
                witness: r.witness.is_some(),
                pattern: r.pattern.is_some(),
            })?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Serialize)]
struct CsvRow {
    subset: String,
    orbit_size: u64,
    kind: &'static str,
    q: Option<usize>,
    norm: f64,
    norm_upper: f64,
    predicted: Option<f64>,
    below_c1: bool,
    in_open_interval_1_to_c2: bool,
    equals_c2_not_two_coset: bool,
    witness: bool,
    pattern: bool,
}

pub fn sweep(g: &Group, tol: f64) -> Result<SweepReport> {
    sweep_with(g, NormMode::default_for(g), tol)
}

/// Classifies one representative per translation class, in increasing
/// bitmask order. Runs on the current rayon pool.
pub fn sweep_with(g: &Group, mode: NormMode, tol: f64) -> Result<SweepReport> {
    let n = g.order();
    if n > SWEEP_MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: SWEEP_MAX_ORDER,
        });
    }
    check_mode(g, mode)?;
    let start = Instant::now();
    let tr = MaskTranslations::new(g);
    let reps: Vec<(u64, u64)> = (0..1u64 << n)
        .into_par_iter()
        .filter(|&m| tr.is_representative(m))
        .map(|m| (m, tr.orbit_size(m)))
        .collect();
    let mut records = reps
        .par_iter()
        .map(|&(m, orbit)| {
            let s = Subset::from_mask(n, m);
            classify_inner(g, &s, s.clone(), orbit, mode, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.canonical.cmp(&b.canonical));

    let abelian = g.is_abelian();
    let kinds = [
        CosetKind::Empty,
        CosetKind::Coset,
        CosetKind::TwoCosets,
        CosetKind::Other,
    ];
    let totals = kinds
        .iter()
        .map(|&kind| {
            let of_kind = records.iter().filter(|r| r.kind() == kind);
            KindTotal {
                kind,
                classes: of_kind.clone().count() as u64,
                subsets: of_kind.map(|r| r.orbit_size).sum(),
            }
        })
        .collect();
    let violations = records
        .iter()
        .flat_map(|r| {
            r.violations(abelian).into_iter().map(|rule| Violation {
                rule,
                subset: r.canonical.clone(),
                kind: r.kind(),
                norm: r.norm,
                norm_upper: r.norm_upper,
                predicted: r.predicted,
            })
        })
        .collect();
    let extremal = records
        .iter()
        .filter(|r| r.flags.equals_c2_not_two_coset)
        .map(|r| r.canonical.clone())
        .collect();
    let mut witness_census: Vec<WitnessCensus> = Vec::new();
    if abelian {
        for r in &records {
            let q = r.analysis.relative_order;
            let pos = witness_census
                .iter()
                .position(|c| c.kind == r.kind() && c.relative_order == q);
            let entry = match pos {
                Some(i) => &mut witness_census[i],
                None => {
                    witness_census.push(WitnessCensus {
                        kind: r.kind(),
                        relative_order: q,
                        classes: 0,
                        classes_with_witness: 0,
                    });
                    witness_census.last_mut().expect("just pushed")
                }
            };
            entry.classes += 1;
            entry.classes_with_witness += u64::from(r.witness.is_some());
        }
        witness_census.sort_by_key(|c| (kinds.iter().position(|&k| k == c.kind), c.relative_order));
    }

    Ok(SweepReport {
        group: GroupDescriptor::of(g),
        mode,
        tol,
        totals,
        violations,
        extremal,
        witness_census,
        records,
        wall_time_secs: Some(start.elapsed().as_secs_f64()),
    })
}

/// Translation permutations acting on bitmasks.
struct MaskTranslations {
    n: usize,
    commutative: bool,
    op: Vec<Vec<usize>>,
}

impl MaskTranslations {
    fn new(g: &Group) -> Self {
        MaskTranslations {
            n: g.order(),
            commutative: g.is_commutative(),
            op: g.cayley_table(),
        }
    }

    fn left(&self, t: usize, mask: u64) -> u64 {
        bits(mask).fold(0, |acc, x| acc | 1 << self.op[t][x])
    }

    fn right(&self, t: usize, mask: u64) -> u64 {
        bits(mask).fold(0, |acc, x| acc | 1 << self.op[x][t])
    }

    fn is_representative(&self, mask: u64) -> bool {
        let not_below = |m: u64| mask_cmp(m, mask) != Ordering::Less;
        if self.commutative {
            return (0..self.n).all(|t| not_below(self.left(t, mask)));
        }
        (0..self.n).all(|a| {
            let l = self.left(a, mask);
            (0..self.n).all(|b| not_below(self.right(b, l)))
        })
    }

    fn orbit_size(&self, mask: u64) -> u64 {
        let n = self.n as u64;
        if self.commutative {
            let fixed = (0..self.n).filter(|&t| self.left(t, mask) == mask).count() as u64;
            return n / fixed;
        }
        let fixed = (0..self.n)
            .map(|a| {
                let l = self.left(a, mask);
                (0..self.n).filter(|&b| self.right(b, l) == mask).count() as u64
            })
            .sum::<u64>();
        n * n / fixed
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let x = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(x)
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
    fn canonical_examples() {
        let g = z(6);
        assert_eq!(canonical_form(&g, &set(6, &[2, 3])), set(6, &[0, 1]));
        assert_eq!(canonical_form(&g, &set(6, &[1, 4])), set(6, &[0, 3]));
        assert_eq!(canonical_form(&g, &set(6, &[0, 2, 4])), set(6, &[0, 2, 4]));
        let g = Group::abelian(&[2, 4]).unwrap();
        for mask in 0..256 {
            let s = Subset::from_mask(8, mask);
            if s.is_subgroup(&g) {
                assert_eq!(canonical_form(&g, &s), s);
            }
        }
        let s3 = Group::builtin("S3").unwrap();
        for mask in 0..64 {
            let s = Subset::from_mask(6, mask);
            let c = canonical_form(&s3, &s);
            assert_eq!(canonical_form(&s3, &c), c);
            if s.is_subgroup(&s3) {
                assert!(c.contains(0) && c.len() == s.len());
            }
        }
    }

    #[test]
    fn mask_path_matches_generic() {
        for g in [z(6), Group::abelian(&[2, 4]).unwrap(), Group::builtin("S3").unwrap()] {
            let tr = MaskTranslations::new(&g);
            for mask in 0..1u64 << g.order() {
                let s = Subset::from_mask(g.order(), mask);
                let generic = canonical_form(&g, &s).to_mask().unwrap() == mask;
                assert_eq!(tr.is_representative(mask), generic, "{} {s}", g.name());
                if generic {
                    assert_eq!(tr.orbit_size(mask), orbit_size(&g, &s));
                }
            }
        }
    }

    #[test]
    fn orbits_partition_the_power_set() {
        for g in [z(7), Group::abelian(&[2, 2, 2]).unwrap(), Group::builtin("D4").unwrap()] {
            let r = sweep_with(&g, NormMode::Fourier, FOURIER_TOL)
                .or_else(|_| sweep(&g, CB_TOL))
                .unwrap();
            assert_eq!(r.total_subsets(), 1 << g.order());
        }
    }

    #[test]
    fn classify_examples() {
        let c1 = (1.0 + 2f64.sqrt()) / 2.0;
        let r = classify(&z(4), &set(4, &[0, 1]), FOURIER_TOL).unwrap();
        assert_eq!(r.kind(), CosetKind::TwoCosets);
        assert_eq!(r.analysis.relative_order, Some(4));
        assert!((r.norm - c1).abs() < 1e-12);
        assert!(r.violations(true).is_empty());
        assert!(!r.flags.below_c1);

        let r = classify(&z(6), &set(6, &[0, 1, 3]), FOURIER_TOL).unwrap();
        assert_eq!(r.kind(), CosetKind::Other);
        assert!(r.norm >= 4.0 / 3.0);
        assert!(r.witness.is_some());

        let r = classify(&z(5), &set(5, &[0]), FOURIER_TOL).unwrap();
        assert_eq!(r.kind(), CosetKind::Coset);
        assert!((r.norm - 1.0).abs() < 1e-12);

        let s3 = Group::builtin("S3").unwrap();
        assert!(classify_with(&s3, &set(6, &[0]), NormMode::Fourier, CB_TOL).is_err());
    }

    #[test]
    fn z6_census() {
        let r = sweep(&z(6), FOURIER_TOL).unwrap();
        assert!(r.is_clean(), "{:?}", r.violations);
        let inside: Vec<_> = r.records.iter().filter(|r| r.flags.in_open_interval_1_to_c2).collect();
        assert_eq!(inside.len(), 1);
        assert_eq!(inside[0].canonical, set(6, &[0, 1]));
        assert_eq!(inside[0].orbit_size, 6);
        assert!((inside[0].norm - (2.0 + 3f64.sqrt()) / 3.0).abs() < 1e-9);
    }

    #[test]
    fn z4_boundary() {
        let r = sweep(&z(4), FOURIER_TOL).unwrap();
        assert!(r.is_clean());
        let rec = r.records.iter().find(|r| r.canonical == set(4, &[0, 1])).unwrap();
        assert!(!rec.flags.below_c1);
    }

    #[test]
    fn s3_cb_sweep_is_clean() {
        let r = sweep(&Group::builtin("S3").unwrap(), CB_TOL).unwrap();
        assert_eq!(r.mode, NormMode::Cb);
        assert!(r.is_clean(), "{:?}", r.violations);
        assert_eq!(r.total_subsets(), 64);
    }

    #[test]
    fn report_round_trip_and_csv() {
        let r = sweep(&z(5), FOURIER_TOL).unwrap();
        assert_eq!(SweepReport::from_json(&r.to_json().unwrap()).unwrap(), r);
        let mut out = Vec::new();
        r.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), r.records.len() + 1);
        assert!(text.starts_with("subset,orbit_size,kind,q,norm"));
    }

    #[test]
    fn order_cap() {
        assert!(matches!(sweep(&z(25), 1e-9), Err(Error::OrderTooLarge { .. })));
    }
}
