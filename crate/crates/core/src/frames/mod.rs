//! Relational frames: Birkhoff frames `(W, ≤, R)`, PQ-frames and P-frames
//! `(W, ≤, P, Q)`, and PQ-structures.
//!
//! Relations are stored as bit rows over the points of `W`: a binary
//! relation keeps `{y : xPy}` in row `x`, a ternary one keeps
//! `{z : xRyz}` in row `x·n + y`.

pub(crate) mod convert;
mod props;
pub mod sweep;

use std::fmt;

use crate::bits::ones128;
use crate::canon::{Canonical, Structure};
use crate::error::{Error, Result, Verdict};
use crate::poset::Poset;

pub use convert::{
    downset_algebra, downset_algebra_indexed, frame_from_algebra, pq_from_r,
    pq_structure_from_wc_r, r_from_pq, wc_r_from_pq_structure, DownsetAlgebra,
};
pub use props::{algebraic_counterpart, algebraic_counterparts, frame_property, identity_downset, FrameProperty};

/// A binary relation on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinRel {
    n: usize,
    rows: Vec<u128>,
}

impl BinRel {
    pub fn empty(n: usize) -> Self {
        BinRel { n, rows: vec![0; n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let rows = (0..n)
            .map(|x| (0..n).filter(|&y| f(x, y)).fold(0, |m, y| m | 1u128 << y))
            .collect();
        BinRel { n, rows }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut r = BinRel::empty(n);
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::Shape(format!("pair ({x}, {y}) out of range for {n} points")));
            }
            r.rows[x] |= 1 << y;
        }
        Ok(r)
    }

    /// Row `x` holds `{y : x ~ y}`.
    pub fn from_rows(rows: Vec<u128>) -> Self {
        BinRel { n: rows.len(), rows }
    }

    /// The order of `w` as a relation.
    pub fn order(w: &Poset) -> Self {
        BinRel::from_fn(w.size(), |x, y| w.leq(x, y))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x] >> y & 1 == 1
    }

    #[inline]
    pub fn row(&self, x: usize) -> u128 {
        self.rows[x]
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x] |= 1 << y;
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|x| ones128(self.rows[x]).map(move |y| (x, y))).collect()
    }

    /// The relation restricted to `elems`, renumbered in the given order.
    pub fn induced(&self, elems: &[usize]) -> BinRel {
        BinRel::from_fn(elems.len(), |i, j| self.contains(elems[i], elems[j]))
    }

    /// Relabels so that old point `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> BinRel {
        let mut out = BinRel::empty(self.n);
        for (x, y) in self.pairs() {
            out.insert(perm[x], perm[y]);
        }
        out
    }
}

/// A ternary relation on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernRel {
    n: usize,
    rows: Vec<u128>,
}

impl TernRel {
    pub fn empty(n: usize) -> Self {
        TernRel { n, rows: vec![0; n * n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> bool) -> Self {
        let mut r = TernRel::empty(n);
        for x in 0..n {
            for y in 0..n {
                r.rows[x * n + y] = (0..n).filter(|&z| f(x, y, z)).fold(0, |m, z| m | 1u128 << z);
            }
        }
        r
    }

    pub fn from_triples(n: usize, triples: &[(usize, usize, usize)]) -> Result<Self> {
        let mut r = TernRel::empty(n);
        for &(x, y, z) in triples {
            if x >= n || y >= n || z >= n {
                return Err(Error::Shape(format!(
                    "triple ({x}, {y}, {z}) out of range for {n} points"
                )));
            }
            r.insert(x, y, z);
        }
        Ok(r)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize, z: usize) -> bool {
        self.rows[x * self.n + y] >> z & 1 == 1
    }

    /// `{z : xRyz}`.
    #[inline]
    pub fn row(&self, x: usize, y: usize) -> u128 {
        self.rows[x * self.n + y]
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    pub fn insert(&mut self, x: usize, y: usize, z: usize) {
        self.rows[x * self.n + y] |= 1 << z;
    }

    pub fn remove(&mut self, x: usize, y: usize, z: usize) {
        self.rows[x * self.n + y] &= !(1 << z);
    }

    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.n;
        (0..n * n)
            .flat_map(|i| ones128(self.rows[i]).map(move |z| (i / n, i % n, z)))
            .collect()
    }

    pub fn relabel(&self, perm: &[usize]) -> TernRel {
        let mut out = TernRel::empty(self.n);
        for (x, y, z) in self.triples() {
            out.insert(perm[x], perm[y], perm[z]);
        }
        out
    }
}

/// Which axiom set a [`Frame`] is read against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameKind {
    Birkhoff,
    PqFrame,
    PFrame,
    PqStructure,
}

impl FrameKind {
    pub fn name(self) -> &'static str {
        match self {
            FrameKind::Birkhoff => "birkhoff",
            FrameKind::PqFrame => "pq_frame",
            FrameKind::PFrame => "p_frame",
            FrameKind::PqStructure => "pq_structure",
        }
    }

    fn tag(self) -> u8 {
        match self {
            FrameKind::Birkhoff => 0,
            FrameKind::PqFrame => 1,
            FrameKind::PFrame => 2,
            FrameKind::PqStructure => 3,
        }
    }
}

impl fmt::Display for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FrameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [FrameKind::Birkhoff, FrameKind::PqFrame, FrameKind::PFrame, FrameKind::PqStructure]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown frame kind `{s}`")))
    }
}

/// A poset with relations. Which relations must be present depends on
/// `kind`; a P-frame has `P` only and reads `Q` as `P`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    pub poset: Poset,
    pub kind: FrameKind,
    pub r: Option<TernRel>,
    pub p_rel: Option<BinRel>,
    pub q_rel: Option<BinRel>,
    /// Identity candidate, a downset of `poset`.
    pub e_set: Option<u128>,
}

impl Frame {
    pub fn birkhoff(poset: Poset, r: TernRel) -> Self {
        Frame { poset, kind: FrameKind::Birkhoff, r: Some(r), p_rel: None, q_rel: None, e_set: None }
    }

    pub fn pq_frame(poset: Poset, p: BinRel, q: BinRel) -> Self {
        Frame {
            poset,
            kind: FrameKind::PqFrame,
            r: None,
            p_rel: Some(p),
            q_rel: Some(q),
            e_set: None,
        }
    }

    pub fn p_frame(poset: Poset, p: BinRel) -> Self {
        Frame { poset, kind: FrameKind::PFrame, r: None, p_rel: Some(p), q_rel: None, e_set: None }
    }

    pub fn pq_structure(poset: Poset, p: BinRel, q: BinRel) -> Self {
        Frame {
            poset,
            kind: FrameKind::PqStructure,
            r: None,
            p_rel: Some(p),
            q_rel: Some(q),
            e_set: None,
        }
    }

    pub fn with_e_set(mut self, e: u128) -> Self {
        self.e_set = Some(e);
        self
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    pub fn require_r(&self) -> Result<&TernRel> {
        self.r.as_ref().ok_or(Error::Missing("R"))
    }

    pub fn require_p(&self) -> Result<&BinRel> {
        self.p_rel.as_ref().ok_or(Error::Missing("P"))
    }

    /// `Q`, or `P` on a P-frame.
    pub fn require_q(&self) -> Result<&BinRel> {
        match (&self.q_rel, self.kind) {
            (Some(q), _) => Ok(q),
            (None, FrameKind::PFrame) => self.require_p(),
            _ => Err(Error::Missing("Q")),
        }
    }

    pub fn require_e(&self) -> Result<u128> {
        self.e_set.ok_or(Error::Missing("E"))
    }

    fn check_shapes(&self) -> Result<()> {
        let n = self.size();
        let bad = |what: &str, m: usize| Error::Shape(format!("{what} is on {m} points, poset has {n}"));
        if let Some(r) = &self.r {
            if r.size() != n {
                return Err(bad("R", r.size()));
            }
        }
        for (name, rel) in [("P", &self.p_rel), ("Q", &self.q_rel)] {
            if let Some(rel) = rel {
                if rel.size() != n {
                    return Err(bad(name, rel.size()));
                }
            }
        }
        if let Some(e) = self.e_set {
            if e & !self.poset.full_mask() != 0 {
                return Err(Error::Shape("E names points outside the poset".into()));
            }
        }
        if self.kind == FrameKind::PFrame && self.q_rel.is_some() {
            return Err(Error::Shape("a p_frame carries no Q".into()));
        }
        Ok(())
    }

    /// Checks the axioms of `kind`, and (R1)-(R3) for any ternary relation
    /// that is present. The first failing axiom is reported with its
    /// witness tuple.
    pub fn validate(&self) -> Result<Verdict> {
        self.check_shapes()?;
        if self.kind == FrameKind::Birkhoff {
            self.require_r()?;
        }
        if let Some(r) = &self.r {
            if let v @ Verdict::Fails(_) = birkhoff_axioms(&self.poset, r) {
                return Ok(v);
            }
        }
        match self.kind {
            FrameKind::Birkhoff => {}
            FrameKind::PqFrame | FrameKind::PFrame => {
                let p = self.require_p()?;
                if let v @ Verdict::Fails(_) = weakening(&self.poset, p, "P") {
                    return Ok(v);
                }
                if self.kind == FrameKind::PqFrame {
                    let q = self.require_q()?;
                    if let v @ Verdict::Fails(_) = weakening(&self.poset, q, "Q") {
                        return Ok(v);
                    }
                }
            }
            FrameKind::PqStructure => {
                let (p, q) = (self.require_p()?, self.require_q()?);
                if let v @ Verdict::Fails(_) = structure_axioms(&self.poset, p, q) {
                    return Ok(v);
                }
            }
        }
        if let Some(e) = self.e_set {
            if !self.poset.is_downset(e) {
                let x = (0..self.size())
                    .find(|&x| e >> x & 1 == 1 && self.poset.down_mask(x) & !e != 0)
                    .expect("not a downset");
                return Ok(Verdict::fail("E is a downset", [x]));
            }
        }
        Ok(Verdict::Holds)
    }

    /// The subframe on `elems`, renumbered in the given order.
    pub fn induced(&self, elems: &[usize]) -> Result<Frame> {
        let poset = self.poset.induced(elems)?;
        let r = self.r.as_ref().map(|r| {
            TernRel::from_fn(elems.len(), |x, y, z| r.contains(elems[x], elems[y], elems[z]))
        });
        let e_set = self.e_set.map(|e| {
            elems.iter().enumerate().filter(|&(_, &x)| e >> x & 1 == 1).fold(0, |m, (i, _)| m | 1u128 << i)
        });
        Ok(Frame {
            poset,
            kind: self.kind,
            r,
            p_rel: self.p_rel.as_ref().map(|p| p.induced(elems)),
            q_rel: self.q_rel.as_ref().map(|q| q.induced(elems)),
            e_set,
        })
    }

    /// Relabels so that old point `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Frame {
        Frame {
            poset: self.poset.relabel(perm),
            kind: self.kind,
            r: self.r.as_ref().map(|r| r.relabel(perm)),
            p_rel: self.p_rel.as_ref().map(|p| p.relabel(perm)),
            q_rel: self.q_rel.as_ref().map(|q| q.relabel(perm)),
            e_set: self
                .e_set
                .map(|e| ones128(e).fold(0, |m, x| m | 1u128 << perm[x])),
        }
    }
}

/// (R1) `u ≤ x & xRyz ⟹ uRyz`, (R2) `xRyz & y ≤ v ⟹ xRvz`,
/// (R3) `xRyz & z ≤ w ⟹ xRyw`.
pub(crate) fn birkhoff_axioms(w: &Poset, r: &TernRel) -> Verdict {
    let n = w.size();
    for x in 0..n {
        for y in 0..n {
            let row = r.row(x, y);
            for u in ones128(w.down_mask(x)) {
                if let Some(z) = ones128(row & !r.row(u, y)).next() {
                    return Verdict::fail("R1", [u, x, y, z]);
                }
            }
            for v in ones128(w.up_mask(y)) {
                if let Some(z) = ones128(row & !r.row(x, v)).next() {
                    return Verdict::fail("R2", [x, y, z, v]);
                }
            }
            for z in ones128(row) {
                if let Some(t) = ones128(w.up_mask(z) & !row).next() {
                    return Verdict::fail("R3", [x, y, z, t]);
                }
            }
        }
    }
    Verdict::Holds
}

/// `u ≤ x & xPy & y ≤ v ⟹ uPv`.
pub(crate) fn weakening(w: &Poset, p: &BinRel, name: &'static str) -> Verdict {
    let law = if name == "P" { "P is a weakening relation" } else { "Q is a weakening relation" };
    let n = w.size();
    for x in 0..n {
        for y in ones128(p.row(x)) {
            for u in ones128(w.down_mask(x)) {
                if let Some(v) = ones128(w.up_mask(y) & !p.row(u)).next() {
                    return Verdict::fail(law, [u, x, y, v]);
                }
            }
        }
    }
    Verdict::Holds
}

/// (P0)-(P2) and (Q0)-(Q2).
pub(crate) fn structure_axioms(w: &Poset, p: &BinRel, q: &BinRel) -> Verdict {
    let n = w.size();
    for (rel, ax) in [(p, ["P0", "P1", "P2"]), (q, ["Q0", "Q1", "Q2"])] {
        for x in 0..n {
            if let Some(y) = ones128(w.up_mask(x) & !rel.row(x)).next() {
                return Verdict::fail(ax[0], [x, y]);
            }
            for y in ones128(w.up_mask(x)) {
                // x ≤ y & xPz ⟹ x ≤ z or yPz
                if let Some(z) = ones128(rel.row(x) & !w.up_mask(x) & !rel.row(y)).next() {
                    return Verdict::fail(ax[1], [x, y, z]);
                }
            }
            for y in ones128(rel.row(x)) {
                if let Some(z) = ones128(w.up_mask(y) & !rel.row(x)).next() {
                    return Verdict::fail(ax[2], [x, y, z]);
                }
            }
        }
    }
    Verdict::Holds
}

impl Canonical for Frame {
    fn structure(&self) -> Structure {
        let n = self.size();
        let present = [self.r.is_some(), self.p_rel.is_some(), self.q_rel.is_some(), self.e_set.is_some()]
            .iter()
            .enumerate()
            .fold(0u8, |m, (i, &b)| m | (b as u8) << i);
        let mut s = Structure::new(n, &[b'f', self.kind.tag(), present])
            .relation2((0..n).map(|x| self.poset.up_mask(x)).collect());
        if let Some(p) = &self.p_rel {
            s = s.relation2(p.rows().to_vec());
        }
        if let Some(q) = &self.q_rel {
            s = s.relation2(q.rows().to_vec());
        }
        if let Some(r) = &self.r {
            s = s.relation3(r.rows().to_vec());
        }
        if let Some(e) = self.e_set {
            s = s.predicate(e);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonicalize;

    fn meet_r(w: &Poset) -> TernRel {
        TernRel::from_fn(w.size(), |x, y, z| w.leq(x, y) && w.leq(x, z))
    }

    #[test]
    fn lower_bound_relation_is_birkhoff() {
        for w in [Poset::chain(4), Poset::antichain(3), Poset::from_relations(3, &[(0, 1), (0, 2)]).unwrap()] {
            assert!(Frame::birkhoff(w.clone(), meet_r(&w)).validate().unwrap().holds());
        }
    }

    #[test]
    fn order_is_a_p_frame_and_a_pq_structure() {
        let w = Poset::from_relations(4, &[(0, 1), (1, 2), (0, 3)]).unwrap();
        let le = BinRel::order(&w);
        assert!(Frame::p_frame(w.clone(), le.clone()).validate().unwrap().holds());
        assert!(Frame::pq_structure(w, le.clone(), le).validate().unwrap().holds());
    }

    #[test]
    fn violations_carry_axiom_witnesses() {
        let w = Poset::chain(2);
        // 1P1 without 0P1 breaks downward closure.
        let p = BinRel::from_pairs(2, &[(1, 1)]).unwrap();
        let v = Frame::p_frame(w.clone(), p).validate().unwrap();
        assert_eq!(v.witness().unwrap().law, "P is a weakening relation");
        assert_eq!(v.witness().unwrap().tuple, vec![0, 1, 1, 1]);

        let mut r = meet_r(&w);
        r.remove(0, 0, 1);
        let v = Frame::birkhoff(w.clone(), r).validate().unwrap();
        assert_eq!(v.witness().unwrap().law, "R3");

        let p = BinRel::from_pairs(2, &[(0, 0), (1, 1)]).unwrap();
        let v = Frame::pq_structure(w, p.clone(), p).validate().unwrap();
        assert_eq!(v.witness().unwrap().law, "P0");
    }

    #[test]
    fn missing_relations_are_errors() {
        let w = Poset::chain(2);
        let f = Frame { poset: w.clone(), kind: FrameKind::Birkhoff, r: None, p_rel: None, q_rel: None, e_set: None };
        assert!(matches!(f.validate(), Err(Error::Missing("R"))));
        let f = Frame { kind: FrameKind::PqFrame, p_rel: Some(BinRel::order(&w)), ..f };
        assert!(matches!(f.validate(), Err(Error::Missing("Q"))));
    }

    #[test]
    fn e_set_must_be_a_downset() {
        let w = Poset::chain(2);
        let f = Frame::p_frame(w.clone(), BinRel::order(&w)).with_e_set(0b10);
        assert_eq!(f.validate().unwrap().witness().unwrap().law, "E is a downset");
    }

    #[test]
    fn relabeling_preserves_the_canonical_form() {
        let w = Poset::from_relations(3, &[(0, 1)]).unwrap();
        let p = BinRel::from_fn(3, |x, y| w.leq(x, y) || (x == 2 && y == 0) || (x == 2 && y == 1));
        let f = Frame::p_frame(w, p);
        assert!(f.validate().unwrap().holds());
        let g = f.relabel(&[2, 0, 1]);
        assert!(g.validate().unwrap().holds());
        assert_eq!(canonicalize(&f), canonicalize(&g));
        let h = Frame::p_frame(f.poset.clone(), BinRel::order(&f.poset));
        assert_ne!(canonicalize(&f), canonicalize(&h));
    }
}
