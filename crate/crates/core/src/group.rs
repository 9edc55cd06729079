//! Finite groups with dense element indices `0..n`.
//!
//! Abelian groups are products of cyclic factors `Z_{n_1} x ... x Z_{n_k}`;
//! element `x` has coordinates `(x_1, ..., x_k)` in mixed radix with the last
//! factor varying fastest. Other groups are given by a validated Cayley table.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Triple};

pub const DEFAULT_MAX_ORDER: usize = 4096;

/// Environment variable that overrides [`DEFAULT_MAX_ORDER`].
pub const MAX_ORDER_ENV: &str = "IDEMNORM_MAX_ORDER";

/// Order cap from `IDEMNORM_MAX_ORDER`, falling back to the default.
pub fn max_order() -> usize {
    std::env::var(MAX_ORDER_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&v: &usize| v > 0)
        .unwrap_or(DEFAULT_MAX_ORDER)
}

/// On-disk Cayley table: `{ "n": int, "identity": int, "table": [[int, ...], ...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyFile {
    pub n: usize,
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Abelian,
    Cayley,
}

#[derive(Debug, Clone)]
enum Repr {
    Abelian {
        factors: Vec<usize>,
        /// `exponent / n_j` for each factor; pairing phases live in `Z_exponent`.
        phase_scale: Vec<usize>,
        exponent: usize,
        /// `e^{2 pi i k / exponent}` for `k` in `0..exponent`.
        roots: Vec<Complex64>,
    },
    Cayley {
        table: Vec<usize>,
        inverse: Vec<usize>,
        identity: usize,
    },
}

#[derive(Debug, Clone)]
pub struct Group {
    name: String,
    order: usize,
    repr: Repr,
}

impl Group {
    /// `Z_{f_1} x ... x Z_{f_k}` with the default order cap.
    pub fn abelian(factors: &[usize]) -> Result<Self> {
        Self::abelian_with_max(factors, max_order())
    }

    pub fn abelian_with_max(factors: &[usize], max: usize) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Parse("at least one cyclic factor is required".into()));
        }
        let mut order: usize = 1;
        for &f in factors {
            if f < 2 {
                return Err(Error::BadFactor(f));
            }
            order = order.checked_mul(f).filter(|&o| o <= max).ok_or(Error::OrderTooLarge {
                order: order.saturating_mul(f),
                max,
            })?;
        }
        let exponent = factors.iter().fold(1, |acc, &f| lcm(acc, f));
        let roots = (0..exponent).map(|k| root_of_unity(k, exponent)).collect();
        let name = factors.iter().map(|f| format!("Z{f}")).collect::<Vec<_>>().join("x");
        Ok(Self {
            name,
            order,
            repr: Repr::Abelian {
                factors: factors.to_vec(),
                phase_scale: factors.iter().map(|&f| exponent / f).collect(),
                exponent,
                roots,
            },
        })
    }

    /// Validates the group axioms on a multiplication table.
    pub fn from_cayley(table: &[Vec<usize>], identity: usize) -> Result<Self> {
        Self::from_cayley_with_max(table, identity, max_order())
    }

    pub fn from_cayley_with_max(table: &[Vec<usize>], identity: usize, max: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if n > max {
            return Err(Error::OrderTooLarge { order: n, max });
        }
        if identity >= n {
            return Err(Error::InvalidTable(format!("identity {identity} out of range")));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidTable(format!("entry {v} in row {i} out of range")));
                }
            }
            flat.extend_from_slice(row);
        }
        let mul = |a: usize, b: usize| flat[a * n + b];

        for a in 0..n {
            if mul(identity, a) != a || mul(a, identity) != a {
                return Err(Error::InvalidTable(format!(
                    "{identity} is not an identity: fails at element {a}"
                )));
            }
        }
        // Latin square: every row and column is a permutation.
        let mut seen = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                let v = mul(a, b);
                if seen[v] == 2 * a {
                    return Err(Error::InvalidTable(format!("row {a} repeats entry {v}")));
                }
                seen[v] = 2 * a;
            }
            for b in 0..n {
                let v = mul(b, a);
                if seen[v] == 2 * a + 1 {
                    return Err(Error::InvalidTable(format!("column {a} repeats entry {v}")));
                }
                seen[v] = 2 * a + 1;
            }
        }
        let mut inverse = vec![0; n];
        for (a, inv) in inverse.iter_mut().enumerate() {
            let b = (0..n).find(|&b| mul(a, b) == identity).expect("latin square row");
            if mul(b, a) != identity {
                return Err(Error::InvalidTable(format!("element {a} has no two-sided inverse")));
            }
            *inv = b;
        }
        if let Some(t) = light_associativity(n, &flat) {
            return Err(Error::NotAssociative(t));
        }
        Ok(Self {
            name: format!("cayley{n}"),
            order: n,
            repr: Repr::Cayley {
                table: flat,
                inverse,
                identity,
            },
        })
    }

    pub fn from_cayley_file(file: &CayleyFile) -> Result<Self> {
        if file.table.len() != file.n {
            return Err(Error::InvalidTable(format!(
                "declared n = {} but table has {} rows",
                file.n,
                file.table.len()
            )));
        }
        Self::from_cayley(&file.table, file.identity)
    }

    pub fn load_cayley_json(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path)?;
        let file: CayleyFile = serde_json::from_str(&raw)?;
        let mut g = Self::from_cayley_file(&file)?;
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            g.name = stem.to_string();
        }
        Ok(g)
    }

    /// One of the built-in nonabelian groups `S3`, `D4`, `Q8`.
    pub fn builtin(name: &str) -> Result<Self> {
        let (table, label) = match name.to_ascii_uppercase().as_str() {
            "S3" => (s3_table(), "S3"),
            "D4" => (d4_table(), "D4"),
            "Q8" => (q8_table(), "Q8"),
            _ => return Err(Error::UnknownGroup(name.to_string())),
        };
        let mut g = Self::from_cayley(&table, 0)?;
        g.name = label.to_string();
        Ok(g)
    }

    /// Parses `Z6`, `z2xZ4`, a built-in name, or a path to a Cayley JSON file.
    pub fn parse(spec: &str) -> Result<Self> {
        let s = spec.trim();
        if let Ok(g) = Self::builtin(s) {
            return Ok(g);
        }
        if s.to_ascii_lowercase().ends_with(".json") || Path::new(s).is_file() {
            return Self::load_cayley_json(Path::new(s));
        }
        let factors = s
            .split(['x', 'X'])
            .map(|part| {
                let part = part.trim();
                let digits = part
                    .strip_prefix('Z')
                    .or_else(|| part.strip_prefix('z'))
                    .ok_or_else(|| Error::UnknownGroup(spec.to_string()))?;
                digits
                    .parse::<usize>()
                    .map_err(|_| Error::UnknownGroup(spec.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::abelian(&factors)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> GroupKind {
        match self.repr {
            Repr::Abelian { .. } => GroupKind::Abelian,
            Repr::Cayley { .. } => GroupKind::Cayley,
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.kind() == GroupKind::Abelian
    }

    /// Commutativity of the operation, regardless of how the group was given.
    pub fn is_commutative(&self) -> bool {
        match &self.repr {
            Repr::Abelian { .. } => true,
            Repr::Cayley { .. } => (0..self.order).all(|a| (a + 1..self.order).all(|b| self.op(a, b) == self.op(b, a))),
        }
    }

    pub fn factors(&self) -> Option<&[usize]> {
        match &self.repr {
            Repr::Abelian { factors, .. } => Some(factors),
            Repr::Cayley { .. } => None,
        }
    }

    pub fn identity(&self) -> usize {
        match &self.repr {
            Repr::Abelian { .. } => 0,
            Repr::Cayley { identity, .. } => *identity,
        }
    }

    /// Group operation `a * b` (written `a + b` for abelian groups).
    pub fn op(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Abelian { factors, .. } => {
                let mut out = 0;
                let mut stride = 1;
                let (mut a, mut b) = (a, b);
                for &f in factors.iter().rev() {
                    out += ((a % f + b % f) % f) * stride;
                    a /= f;
                    b /= f;
                    stride *= f;
                }
                out
            }
            Repr::Cayley { table, .. } => table[a * self.order + b],
        }
    }

    pub fn inverse(&self, a: usize) -> usize {
        match &self.repr {
            Repr::Abelian { factors, .. } => {
                let mut out = 0;
                let mut stride = 1;
                let mut a = a;
                for &f in factors.iter().rev() {
                    out += ((f - a % f) % f) * stride;
                    a /= f;
                    stride *= f;
                }
                out
            }
            Repr::Cayley { inverse, .. } => inverse[a],
        }
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inverse(a) } else { a };
        let mut acc = self.identity();
        for _ in 0..k.unsigned_abs() {
            acc = self.op(acc, base);
        }
        acc
    }

    /// Smallest `k >= 1` with `t^k = e`.
    pub fn element_order(&self, t: usize) -> usize {
        let e = self.identity();
        let mut acc = t;
        let mut k = 1;
        while acc != e {
            acc = self.op(acc, t);
            k += 1;
        }
        k
    }

    /// Mixed-radix coordinates of an element of an abelian group.
    pub fn coords(&self, x: usize) -> Result<Vec<usize>> {
        let factors = self.factors().ok_or(Error::NotAbelian("coordinates"))?;
        self.check_element(x)?;
        let mut out = vec![0; factors.len()];
        let mut x = x;
        for (slot, &f) in out.iter_mut().zip(factors).rev() {
            *slot = x % f;
            x /= f;
        }
        Ok(out)
    }

    pub fn from_coords(&self, coords: &[usize]) -> Result<usize> {
        let factors = self.factors().ok_or(Error::NotAbelian("coordinates"))?;
        if coords.len() != factors.len() {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                factors.len(),
                coords.len()
            )));
        }
        let mut x = 0;
        for (&c, &f) in coords.iter().zip(factors) {
            if c >= f {
                return Err(Error::Parse(format!("coordinate {c} out of range for Z{f}")));
            }
            x = x * f + c;
        }
        Ok(x)
    }

    /// Phase index `k` with `(x, s) = e^{2 pi i k / exponent}`.
    pub(crate) fn pairing_phase(&self, x: usize, s: usize) -> usize {
        match &self.repr {
            Repr::Abelian {
                factors,
                phase_scale,
                exponent,
                ..
            } => {
                let (mut x, mut s) = (x, s);
                let mut k = 0;
                for (&f, &scale) in factors.iter().zip(phase_scale).rev() {
                    k += ((x % f) * (s % f) % f) * scale;
                    x /= f;
                    s /= f;
                }
                k % exponent
            }
            Repr::Cayley { .. } => unreachable!("pairing on a cayley group"),
        }
    }

    pub(crate) fn root(&self, phase: usize) -> Complex64 {
        match &self.repr {
            Repr::Abelian { roots, .. } => roots[phase],
            Repr::Cayley { .. } => unreachable!("roots on a cayley group"),
        }
    }

    /// The pairing `(x, s) = exp(2 pi i sum_j x_j s_j / n_j)` identifying the group with its dual.
    pub fn character_value(&self, x: usize, s: usize) -> Result<Complex64> {
        if !self.is_abelian() {
            return Err(Error::NotAbelian("character_value"));
        }
        self.check_element(x)?;
        self.check_element(s)?;
        Ok(self.root(self.pairing_phase(x, s)))
    }

    pub fn check_element(&self, x: usize) -> Result<()> {
        if x < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                element: x,
                order: self.order,
            })
        }
    }

    /// Full multiplication table, row-major.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.op(a, b)).collect())
            .collect()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// `e^{2 pi i k / m}`, exact on the real and imaginary axes.
fn root_of_unity(k: usize, m: usize) -> Complex64 {
    let k = k % m;
    if (4 * k).is_multiple_of(m) {
        return match 4 * k / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
}

/// Light's test: associativity only needs checking with the middle element
/// ranging over a generating set.
fn light_associativity(n: usize, table: &[usize]) -> Option<Triple> {
    let mul = |a: usize, b: usize| table[a * n + b];
    let mut reached = vec![false; n];
    let mut members = Vec::new();
    let mut gens = Vec::new();
    for candidate in 0..n {
        if reached[candidate] {
            continue;
        }
        gens.push(candidate);
        reached.fill(false);
        members.clear();
        for &g in &gens {
            if !reached[g] {
                reached[g] = true;
                members.push(g);
            }
        }
        let mut i = 0;
        while i < members.len() {
            let m = members[i];
            for &g in &gens {
                for p in [mul(m, g), mul(g, m)] {
                    if !reached[p] {
                        reached[p] = true;
                        members.push(p);
                    }
                }
            }
            i += 1;
        }
    }
    for &g in &gens {
        for a in 0..n {
            let ag = mul(a, g);
            for b in 0..n {
                if mul(ag, b) != mul(a, mul(g, b)) {
                    return Some(Triple(a, g, b));
                }
            }
        }
    }
    None
}

/// Permutations of `{0,1,2}` in lexicographic order, composed as functions.
fn s3_table() -> Vec<Vec<usize>> {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    perms
        .iter()
        .map(|a| perms.iter().map(|b| index([a[b[0]], a[b[1]], a[b[2]]])).collect())
        .collect()
}

/// `r^k s^j` at index `k + 4j`.
fn d4_table() -> Vec<Vec<usize>> {
    let decode = |x: usize| (x % 4, x / 4);
    (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let ((a, i), (b, j)) = (decode(x), decode(y));
                    let rot = if i == 0 { a + b } else { a + 4 - b };
                    rot % 4 + 4 * ((i + j) % 2)
                })
                .collect()
        })
        .collect()
}

/// `1, -1, i, -i, j, -j, k, -k` at indices `0..8`.
fn q8_table() -> Vec<Vec<usize>> {
    // unit product: (sign, unit) for units 1, i, j, k
    let unit_mul = |a: usize, b: usize| -> (bool, usize) {
        match (a, b) {
            (0, u) | (u, 0) => (false, u),
            (x, y) if x == y => (true, 0),
            (1, 2) => (false, 3),
            (2, 3) => (false, 1),
            (3, 1) => (false, 2),
            (2, 1) => (true, 3),
            (3, 2) => (true, 1),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        }
    };
    (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (neg, u) = unit_mul(x / 2, y / 2);
                    let sign = (x % 2) ^ (y % 2) ^ usize::from(neg);
                    2 * u + sign
                })
                .collect()
        })
        .collect()
}
