use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;

/// A subset of a group of order `order`, stored as a bitmask over element indices.
///
/// Ordering looks at the least element in which two subsets differ: the
/// subset containing it comes first. For subsets of equal size this is the
/// lexicographic order of their sorted elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    order: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(order: usize) -> Self {
        Self {
            order,
            words: vec![0; order.div_ceil(64)],
        }
    }

    pub fn full(order: usize) -> Self {
        let mut s = Self::empty(order);
        for x in 0..order {
            s.insert(x);
        }
        s
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(order: usize, elements: I) -> Result<Self> {
        let mut s = Self::empty(order);
        for x in elements {
            if x >= order {
                return Err(Error::ElementOutOfRange { element: x, order });
            }
            s.insert(x);
        }
        Ok(s)
    }

    /// Low `order` bits of `mask`; `order` must be at most 64.
    pub fn from_mask(order: usize, mask: u64) -> Self {
        assert!(order <= 64, "mask subsets need order <= 64");
        let mut s = Self::empty(order);
        if order > 0 {
            let keep = if order == 64 { u64::MAX } else { (1u64 << order) - 1 };
            s.words[0] = mask & keep;
        }
        s
    }

    pub fn to_mask(&self) -> Option<u64> {
        (self.order <= 64).then(|| self.words.first().copied().unwrap_or(0))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.order && self.words[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        self.words[x / 64] |= 1 << (x % 64);
    }

    pub fn remove(&mut self, x: usize) {
        self.words[x / 64] &= !(1 << (x % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    pub fn min_element(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        out
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn check_group(&self, g: &Group) -> Result<()> {
        if self.order == g.order() {
            Ok(())
        } else {
            Err(Error::SubsetOrderMismatch {
                expected: g.order(),
                got: self.order,
            })
        }
    }

    /// Left translate `tS = { t*s : s in S }`.
    pub fn left_translate(&self, g: &Group, t: usize) -> Self {
        let mut out = Self::empty(self.order);
        for s in self.iter() {
            out.insert(g.op(t, s));
        }
        out
    }

    /// Right translate `St = { s*t : s in S }`.
    pub fn right_translate(&self, g: &Group, t: usize) -> Self {
        let mut out = Self::empty(self.order);
        for s in self.iter() {
            out.insert(g.op(s, t));
        }
        out
    }

    /// `S^{-1}` (the negation `-S` for abelian groups).
    pub fn inverse(&self, g: &Group) -> Self {
        let mut out = Self::empty(self.order);
        for s in self.iter() {
            out.insert(g.inverse(s));
        }
        out
    }

    /// Whether `S` is a subgroup of `g`.
    pub fn is_subgroup(&self, g: &Group) -> bool {
        self.contains(g.identity())
            && self
                .iter()
                .all(|a| self.iter().all(|b| self.contains(g.op(a, g.inverse(b)))))
    }

    /// Parses `"0,1,3"` or, for abelian groups, coordinate tuples `"(0,1),(1,3)"`.
    /// An empty string is the empty subset.
    pub fn parse(g: &Group, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let mut out = Self::empty(g.order());
        if spec.is_empty() {
            return Ok(out);
        }
        if spec.contains('(') {
            let mut rest = spec;
            loop {
                rest = rest.trim_start_matches([',', ' ']);
                if rest.is_empty() {
                    break;
                }
                let body = rest
                    .strip_prefix('(')
                    .ok_or_else(|| Error::Parse(format!("expected '(' in `{spec}`")))?;
                let close = body
                    .find(')')
                    .ok_or_else(|| Error::Parse(format!("unclosed tuple in `{spec}`")))?;
                let coords = body[..close]
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad coordinate `{}`", c.trim())))
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.insert(g.from_coords(&coords)?);
                rest = &body[close + 1..];
            }
        } else {
            for part in spec.split(',') {
                let x: usize = part
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element `{}`", part.trim())))?;
                g.check_element(x)?;
                out.insert(x);
            }
        }
        Ok(out)
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&other.order).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                let diff = a ^ b;
                if diff != 0 {
                    return lex_cmp_word(*a, diff);
                }
            }
            Ordering::Equal
        })
    }
}

/// Compares two words differing in `diff`, one of which is `a`.
fn lex_cmp_word(a: u64, diff: u64) -> Ordering {
    if a & diff & diff.wrapping_neg() != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// [`Subset`] ordering on single-word masks.
pub(crate) fn mask_cmp(a: u64, b: u64) -> Ordering {
    if a == b {
        Ordering::Equal
    } else {
        lex_cmp_word(a, a ^ b)
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct SubsetRepr {
    order: usize,
    elements: Vec<usize>,
}

impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SubsetRepr {
            order: self.order,
            elements: self.to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SubsetRepr::deserialize(deserializer)?;
        Subset::from_elements(repr.order, repr.elements).map_err(serde::de::Error::custom)
    }
}
