//! Counting preorder trees and forests up to isomorphism.
//!
//! On an antichain a preorder forest is a preorder `P` with
//! `xPy & xPz ⟹ yPz or zPy`; a preorder tree is a connected one. The
//! counts follow from `T_n = F_{n-1} + T_{n-1}`, `T^s_n = F_{n-1}` and the
//! Euler transform, and are checked against two enumeration oracles.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::bits::ones128;
use crate::canon::{CanonicalForm, Structure};
use crate::error::{Error, Result};

/// The six rows of the preorder table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SequenceName {
    T,
    C,
    F,
    Ts,
    Cs,
    Fs,
}

impl SequenceName {
    pub const ALL: [SequenceName; 6] =
        [SequenceName::T, SequenceName::C, SequenceName::F, SequenceName::Ts, SequenceName::Cs, SequenceName::Fs];

    pub fn name(self) -> &'static str {
        match self {
            SequenceName::T => "T",
            SequenceName::C => "c",
            SequenceName::F => "F",
            SequenceName::Ts => "Ts",
            SequenceName::Cs => "cs",
            SequenceName::Fs => "Fs",
        }
    }

    /// Reference values from index 1.
    pub fn reference(self) -> &'static [u128] {
        match self {
            SequenceName::T => &[1, 2, 5, 13, 37, 108, 337],
            SequenceName::C => &[1, 5, 16, 57, 186, 668],
            SequenceName::F => &[1, 3, 8, 24, 71, 224],
            SequenceName::Ts => &[1, 1, 3, 8, 24, 71, 224],
            SequenceName::Cs => &[1, 3, 10, 35, 121, 438],
            SequenceName::Fs => &[1, 2, 5, 14, 41, 127],
        }
    }
}

impl fmt::Display for SequenceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SequenceName::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown sequence `{s}`")))
    }
}

/// A named sequence indexed from 1; forest counts also define index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceTable {
    pub name: SequenceName,
    /// `values[i]` is the term at index `i + 1`.
    pub values: Vec<u128>,
}

impl SequenceTable {
    pub fn get(&self, n: usize) -> Option<u128> {
        match n {
            0 if matches!(self.name, SequenceName::F | SequenceName::Fs) => Some(1),
            0 => None,
            _ => self.values.get(n - 1).copied(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Both halves of an Euler transform, indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Euler {
    /// `c_n = Σ_{d|n} d·t_d`.
    pub c: Vec<u128>,
    /// `F_n = (1/n) Σ_{k=1}^n c_k·F_{n-k}` with `F_0 = 1`.
    pub f: Vec<u128>,
}

/// Euler transform of `t` (indexed from 1). Every division by `n` must
/// be exact.
pub fn euler_transform(t: &[u128]) -> Result<Euler> {
    let m = t.len();
    let mut c = Vec::with_capacity(m);
    for n in 1..=m {
        let mut s: u128 = 0;
        for d in (1..=n).filter(|d| n % d == 0) {
            s = (d as u128)
                .checked_mul(t[d - 1])
                .and_then(|v| s.checked_add(v))
                .ok_or(Error::Overflow(n))?;
        }
        c.push(s);
    }
    let f = forests_from_c(&c)?;
    Ok(Euler { c, f })
}

/// `F_n = (1/n) Σ_{k=1}^n c_k·F_{n-k}`, from index 1.
fn forests_from_c(c: &[u128]) -> Result<Vec<u128>> {
    let mut f: Vec<u128> = vec![1];
    for n in 1..=c.len() {
        let mut s: u128 = 0;
        for k in 1..=n {
            s = c[k - 1]
                .checked_mul(f[n - k])
                .and_then(|v| s.checked_add(v))
                .ok_or(Error::Overflow(n))?;
        }
        let d = n as u128;
        if s % d != 0 {
            return Err(Error::NotIntegral { index: n, numerator: s, denominator: d });
        }
        f.push(s / d);
    }
    f.remove(0);
    Ok(f)
}

/// All six sequences up to `n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreorderCounts {
    pub t: SequenceTable,
    pub c: SequenceTable,
    pub f: SequenceTable,
    pub ts: SequenceTable,
    pub cs: SequenceTable,
    pub fs: SequenceTable,
}

impl PreorderCounts {
    pub fn get(&self, name: SequenceName) -> &SequenceTable {
        match name {
            SequenceName::T => &self.t,
            SequenceName::C => &self.c,
            SequenceName::F => &self.f,
            SequenceName::Ts => &self.ts,
            SequenceName::Cs => &self.cs,
            SequenceName::Fs => &self.fs,
        }
    }

    /// Rows laid out like the reference table.
    pub fn render(&self) -> String {
        let n = self.t.len();
        let mut out = format!("{:>4} |", "n");
        for i in 1..=n {
            out += &format!(" {i:>6}");
        }
        out.push('\n');
        for name in SequenceName::ALL {
            out += &format!("{:>4} |", name.name());
            for v in &self.get(name).values {
                out += &format!(" {v:>6}");
            }
            out.push('\n');
        }
        out
    }
}

/// Computes `T`, `F`, `T^s`, `F^s` and the intermediate `c`, `c^s` up to
/// `n_max`.
pub fn preorder_counts(n_max: usize) -> Result<PreorderCounts> {
    if n_max == 0 {
        return Err(Error::InvalidParameters("n_max must be at least 1".into()));
    }
    let mut t: Vec<u128> = vec![1];
    while t.len() < n_max {
        let n = t.len() + 1;
        let f = euler_transform(&t)?.f;
        t.push(f[n - 2].checked_add(t[n - 2]).ok_or(Error::Overflow(n))?);
    }
    let et = euler_transform(&t)?;
    let mut ts = vec![1u128];
    ts.extend_from_slice(&et.f[..n_max - 1]);
    let es = euler_transform(&ts)?;
    let table = |name, values| SequenceTable { name, values };
    Ok(PreorderCounts {
        t: table(SequenceName::T, t),
        c: table(SequenceName::C, et.c),
        f: table(SequenceName::F, et.f),
        ts: table(SequenceName::Ts, ts),
        cs: table(SequenceName::Cs, es.c),
        fs: table(SequenceName::Fs, es.f),
    })
}

/// Which preorder forests an oracle counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Tree,
    Forest,
    TreeS,
    ForestS,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Tree, Variant::Forest, Variant::TreeS, Variant::ForestS];

    pub fn sequence(self) -> SequenceName {
        match self {
            Variant::Tree => SequenceName::T,
            Variant::Forest => SequenceName::F,
            Variant::TreeS => SequenceName::Ts,
            Variant::ForestS => SequenceName::Fs,
        }
    }

    fn accepts(self, rows: &[u128]) -> bool {
        let tree = matches!(self, Variant::Tree | Variant::TreeS);
        let single = matches!(self, Variant::TreeS | Variant::ForestS);
        (!tree || connected(rows)) && (!single || singleton_roots(rows))
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" => Ok(Variant::Tree),
            "forest" => Ok(Variant::Forest),
            "tree_s" => Ok(Variant::TreeS),
            "forest_s" => Ok(Variant::ForestS),
            _ => Err(Error::InvalidParameters(format!("unknown variant `{s}`"))),
        }
    }
}

fn is_preorder_forest(rows: &[u128]) -> bool {
    (0..rows.len()).all(|x| {
        rows[x] >> x & 1 == 1
            && ones128(rows[x]).all(|y| {
                rows[y] & !rows[x] == 0
                    && ones128(rows[x]).all(|z| rows[y] >> z & 1 == 1 || rows[z] >> y & 1 == 1)
            })
    })
}

fn connected(rows: &[u128]) -> bool {
    let n = rows.len();
    let mut seen = 1u128;
    let mut frontier = 1u128;
    while frontier != 0 {
        let mut next = 0u128;
        for x in ones128(frontier) {
            next |= rows[x];
            next |= (0..n).filter(|&y| rows[y] >> x & 1 == 1).fold(0, |a, y| a | 1 << y);
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen.count_ones() as usize == n
}

/// Every `P`-maximal class is a single point.
fn singleton_roots(rows: &[u128]) -> bool {
    (0..rows.len()).all(|x| {
        let maximal = ones128(rows[x]).all(|y| rows[y] >> x & 1 == 1);
        !maximal || rows[x] == 1 << x
    })
}

fn form(rows: &[u128]) -> CanonicalForm {
    Structure::new(rows.len(), b"preorder").relation2(rows.to_vec()).canonical_form()
}

pub const BRUTE_FORCE_LIMIT: usize = 5;

/// Counts preorder forests of `variant` on `n` points by running through
/// every labelled reflexive relation and collecting canonical forms.
pub fn brute_force_preorder_count(n: usize, variant: Variant) -> Result<u64> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { what: "labelled preorder oracle", size: n, limit: BRUTE_FORCE_LIMIT });
    }
    let off: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let mut forms = BTreeSet::new();
    let mut rows = vec![0u128; n];
    for code in 0u64..1 << off.len() {
        for (x, r) in rows.iter_mut().enumerate() {
            *r = 1 << x;
        }
        for (i, &(x, y)) in off.iter().enumerate() {
            if code >> i & 1 == 1 {
                rows[x] |= 1 << y;
            }
        }
        if is_preorder_forest(&rows) && variant.accepts(&rows) {
            forms.insert(form(&rows));
        }
    }
    Ok(forms.len() as u64)
}

pub const AUGMENTATION_LIMIT: usize = 8;

/// One preorder forest per isomorphism class on `n` points, grown point by
/// point: deleting a point from a preorder forest leaves one, so every
/// class on `k` points extends a class on `k - 1` points.
pub fn preorder_forest_classes(n: usize) -> Result<Vec<Vec<u128>>> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if n > AUGMENTATION_LIMIT {
        return Err(Error::TooLarge { what: "preorder forest augmentation", size: n, limit: AUGMENTATION_LIMIT });
    }
    let mut level: Vec<Vec<u128>> = vec![vec![1]];
    for k in 1..n {
        let mut next = std::collections::BTreeMap::new();
        for r in &level {
            for up in 0u128..1 << k {
                for down in 0u128..1 << k {
                    let mut rows: Vec<u128> = r.iter().enumerate().map(|(y, &row)| row | (down >> y & 1) << k).collect();
                    rows.push(up | 1 << k);
                    if is_preorder_forest(&rows) {
                        next.entry(form(&rows)).or_insert(rows);
                    }
                }
            }
        }
        level = next.into_values().collect();
    }
    Ok(level)
}

/// Count of `variant` by augmentation.
pub fn augmentation_preorder_count(n: usize, variant: Variant) -> Result<u64> {
    Ok(preorder_forest_classes(n)?.iter().filter(|r| variant.accepts(r)).count() as u64)
}
