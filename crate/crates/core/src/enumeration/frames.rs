//! Preorder forest P-frames and the linear P-frames on chains.

use std::collections::BTreeMap;

use crate::algebra::{FinAlgebra, Signature};
use crate::bits::{for_each_downset, ones128};
use crate::canon::{Canonical, CanonicalForm, Structure};
use crate::error::{Error, Result};
use crate::frames::sweep::weakening_order;
use crate::frames::{downset_algebra, frame_property, BinRel, Frame, FrameKind, FrameProperty};
use crate::par::Exec;
use crate::poset::{posets, Poset};

use super::Census;

/// Rows `{y : xPy}` of the relation with pair bits `y·n + x`.
fn rows_of(n: usize, m: u128) -> Vec<u128> {
    let mut rows = vec![0u128; n];
    for b in ones128(m) {
        rows[b % n] |= 1 << (b / n);
    }
    rows
}

fn transitive(rows: &[u128]) -> bool {
    (0..rows.len()).all(|x| ones128(rows[x]).all(|y| rows[y] & !rows[x] == 0))
}

/// `xPy & xPz ⟹ x≤y or x≤z or yPz or zPy`.
fn forest(w: &Poset, rows: &[u128]) -> bool {
    (0..rows.len()).all(|x| {
        let up = w.up_mask(x);
        let r = rows[x] & !up;
        ones128(r).all(|y| ones128(r).all(|z| rows[y] >> z & 1 == 1 || rows[z] >> y & 1 == 1))
    })
}

fn permute_rows(rows: &[u128], s: &[usize]) -> Vec<u128> {
    let mut out = vec![0u128; rows.len()];
    for (x, &r) in rows.iter().enumerate() {
        out[s[x]] = ones128(r).fold(0, |acc, y| acc | 1 << s[y]);
    }
    out
}

/// Preorder forest relations on `w` (reflexive, transitive weakening
/// relations satisfying the forest condition), one per orbit of the
/// automorphism group of `w`.
fn forest_relations(w: &Poset, keep: impl Fn(&[u128]) -> bool) -> Vec<BinRel> {
    let n = w.size();
    let autos: Vec<Vec<usize>> = w
        .structure()
        .automorphisms()
        .into_iter()
        .filter(|s| s.iter().enumerate().any(|(x, &y)| x != y))
        .collect();
    // A reflexive weakening relation contains the order.
    let mut order = 0u128;
    for x in 0..n {
        for y in ones128(w.up_mask(x)) {
            order |= 1 << (y * n + x);
        }
    }
    let mut out = Vec::new();
    for_each_downset(&weakening_order(w), order, &mut |m| {
        let rows = rows_of(n, m);
        if transitive(&rows) && forest(w, &rows) && keep(&rows)
            && autos.iter().all(|s| permute_rows(&rows, s) >= rows) {
                out.push(BinRel::from_rows(rows));
            }
    });
    out
}

/// Whether `f` is a P-frame whose `P` is a preorder satisfying the forest
/// condition.
pub fn is_preorder_forest(f: &Frame) -> Result<bool> {
    if f.kind != FrameKind::PFrame || !f.validate()?.holds() {
        return Ok(false);
    }
    for prop in [FrameProperty::PReflexive, FrameProperty::PTransitive, FrameProperty::Pforest] {
        if !frame_property(f, prop)?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All preorder forest P-frames on `n` points up to isomorphism.
pub fn enumerate_pforest_frames(n: usize, exec: Exec) -> Result<Census<Frame>> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if n > 5 {
        return Err(Error::TooLarge { what: "preorder forest frame search", size: n, limit: 5 });
    }
    let ws = posets(n);
    let groups = exec.map(&ws, |w| {
        forest_relations(w, |_| true)
            .into_iter()
            .map(|p| Frame::p_frame(w.clone(), p))
            .collect::<Vec<_>>()
    });
    let items = groups.into_iter().flatten().collect();
    Ok(Census::from_items(format!("preorder forest P-frames, n={n}"), n, items, exec))
}

/// Frame counts per underlying poset, ordered by the poset's canonical
/// form.
pub fn group_by_poset(census: &Census<Frame>) -> Vec<(Poset, usize)> {
    let mut groups: BTreeMap<CanonicalForm, (Poset, usize)> = BTreeMap::new();
    for f in census.items() {
        groups.entry(f.poset.canonical_form()).or_insert_with(|| (f.poset.clone(), 0)).1 += 1;
    }
    groups.into_values().collect()
}

/// A P-frame on the chain `1 < … < n` with `P` reflexive and transitive,
/// tagged by the covering pairs `(i+1, i)` that `P` reverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFrame {
    pub frame: Frame,
    /// One-based pairs `(i+1, i)` with `(i+1) P i`.
    pub steps: Vec<(usize, usize)>,
}

impl Canonical for LinearFrame {
    fn structure(&self) -> Structure {
        self.frame.structure()
    }
}

/// The `2^(n-1)` linear P-frames on the `n`-chain.
pub fn enumerate_linear_frames(n: usize, exec: Exec) -> Result<Census<LinearFrame>> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let w = Poset::chain(n);
    let items = forest_relations(&w, |_| true)
        .into_iter()
        .map(|p| {
            let steps = (0..n - 1).filter(|&i| p.contains(i + 1, i)).map(|i| (i + 2, i + 1)).collect();
            LinearFrame { frame: Frame::p_frame(w.clone(), p), steps }
        })
        .collect();
    Ok(Census::from_items(format!("linear P-frames, n={n}"), n, items, exec))
}

/// Downset algebras of the linear P-frames on `n - 1` points: the
/// `n`-element chains with a unary-determined product, as `mul` and `p`.
pub fn linear_frame_algebras(n: usize, exec: Exec) -> Result<Census<FinAlgebra>> {
    if n < 2 {
        return Err(Error::InvalidParameters("linear frame algebras need n ≥ 2".into()));
    }
    let frames = enumerate_linear_frames(n - 1, exec)?;
    let frames: Vec<&Frame> = frames.items().map(|l| &l.frame).collect();
    let algebras = exec.map(&frames, |f| {
        downset_algebra(f).map(|a| a.reduct(Signature::MUL | Signature::P))
    });
    let items = algebras.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Census::from_items(format!("linear frame algebras, n={n}"), n, items, exec))
}
