//! Coset structure of subsets: stabilizers and the empty / coset / two-coset / other split.

use serde::{Deserialize, Serialize};

use crate::group::Group;
use crate::subset::Subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CosetKind {
    Empty,
    Coset,
    TwoCosets,
    Other,
}

impl CosetKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CosetKind::Empty => "empty",
            CosetKind::Coset => "coset",
            CosetKind::TwoCosets => "two_cosets",
            CosetKind::Other => "other",
        }
    }
}

/// Structure of `S`: for a coset `S = aH`, for two cosets `S = aH ∪ bH` with
/// `H` the stabilizer of `S` and `q` the order of `a^{-1}b` modulo `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetAnalysis {
    pub kind: CosetKind,
    pub subgroup: Subset,
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub relative_order: Option<usize>,
}

/// Two-sided stabilizer `{ t : St = S and tS = S }`.
pub fn stabilizer(g: &Group, s: &Subset) -> Subset {
    let n = g.order();
    let mut out = Subset::empty(n);
    for t in 0..n {
        if translate_fixes(g, s, t, true) && (g.is_abelian() || translate_fixes(g, s, t, false)) {
            out.insert(t);
        }
    }
    out
}

/// Right stabilizer `{ t : St = S }`; `S` is always a union of left cosets of it.
pub fn right_stabilizer(g: &Group, s: &Subset) -> Subset {
    let mut out = Subset::empty(g.order());
    for t in 0..g.order() {
        if translate_fixes(g, s, t, true) {
            out.insert(t);
        }
    }
    out
}

fn translate_fixes(g: &Group, s: &Subset, t: usize, right: bool) -> bool {
    s.iter().all(|x| {
        let y = if right { g.op(x, t) } else { g.op(t, x) };
        s.contains(y)
    })
}

/// `aH` as a subset.
pub fn coset_of(g: &Group, a: usize, h: &Subset) -> Subset {
    h.left_translate(g, a)
}

pub fn analyze_cosets(g: &Group, s: &Subset) -> CosetAnalysis {
    let n = g.order();
    let Some(a) = s.min_element() else {
        return CosetAnalysis {
            kind: CosetKind::Empty,
            subgroup: Subset::empty(n),
            a: None,
            b: None,
            relative_order: None,
        };
    };

    // A left coset aK has right stabilizer exactly K; the two-sided one can be
    // smaller when K is not normal.
    let right = right_stabilizer(g, s);
    if right.len() == s.len() {
        return CosetAnalysis {
            kind: CosetKind::Coset,
            subgroup: right,
            a: Some(a),
            b: None,
            relative_order: None,
        };
    }

    let h = stabilizer(g, s);
    let first = coset_of(g, a, &h);
    let rest = s.difference(&first);
    let other = CosetAnalysis {
        kind: CosetKind::Other,
        subgroup: h.clone(),
        a: None,
        b: None,
        relative_order: None,
    };
    let Some(b) = rest.min_element() else {
        return other;
    };
    if coset_of(g, b, &h) != rest {
        return other;
    }
    let step = g.op(g.inverse(a), b);
    let mut power = step;
    let mut q = 1;
    while !h.contains(power) {
        power = g.op(power, step);
        q += 1;
    }
    CosetAnalysis {
        kind: CosetKind::TwoCosets,
        subgroup: h,
        a: Some(a),
        b: Some(b),
        relative_order: Some(q),
    }
}
