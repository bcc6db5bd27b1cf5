//! Exhaustive correspondence sweeps: every frame of a given kind on every
//! small poset, comparing each frame condition with the matching property
//! of its downset algebra.
//!
//! The Birkhoff sweep works on bit-packed relations and evaluates both
//! sides with table lookups, one relation per isomorphism class. It is
//! cross-checked against the general library path by
//! [`birkhoff_cross_check`]. The PQ sweep runs the library path directly.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};

use crate::algebra::{check_law, FinAlgebra, OperatorLaw};
use crate::bits::{downset_seeds, for_each_downset, for_each_downset_in};
use crate::canon::Canonical;
use crate::error::{Error, Result, Verdict};
use crate::par::Exec;
use crate::poset::{downset_lattice, posets, Poset};

use super::convert::unary_table;
use super::props::{algebraic_counterparts, frame_property, FrameProperty};
use super::convert::{pq_from_r, pq_structure_from_wc_r, r_from_pq, wc_r_from_pq_structure};
use super::{structure_axioms, weakening, BinRel, Frame, TernRel};

/// Outcome counts for one check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub both_hold: u64,
    pub both_fail: u64,
    pub disagree: u64,
}

impl Tally {
    fn record(&mut self, frame: bool, algebra: bool) {
        match (frame, algebra) {
            (true, true) => self.both_hold += 1,
            (false, false) => self.both_fail += 1,
            _ => self.disagree += 1,
        }
    }

    fn merge(&mut self, o: &Tally) {
        self.both_hold += o.both_hold;
        self.both_fail += o.both_fail;
        self.disagree += o.disagree;
    }

    pub fn total(&self) -> u64 {
        self.both_hold + self.both_fail + self.disagree
    }
}

/// A frame on which a condition and its counterpart disagree.
#[derive(Clone, Debug)]
pub struct Discrepancy {
    pub check: &'static str,
    pub frame: Frame,
    pub frame_holds: bool,
    pub algebra_holds: bool,
}

/// Kept discrepancies are capped; the tallies count all of them.
const KEEP: usize = 16;

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    /// Frames examined (isomorphism classes where the sweep reduces).
    pub frames: u64,
    /// Labeled frames represented by the examined ones.
    pub labeled: u64,
    pub tallies: BTreeMap<&'static str, Tally>,
    pub discrepancies: Vec<Discrepancy>,
}

impl SweepReport {
    fn record(&mut self, check: &'static str, frame_holds: bool, algebra_holds: bool, frame: impl FnOnce() -> Frame) {
        self.tallies.entry(check).or_default().record(frame_holds, algebra_holds);
        if frame_holds != algebra_holds && self.discrepancies.len() < KEEP {
            self.discrepancies.push(Discrepancy { check, frame: frame(), frame_holds, algebra_holds });
        }
    }

    fn merge(&mut self, o: SweepReport) {
        self.frames += o.frames;
        self.labeled += o.labeled;
        for (k, t) in &o.tallies {
            self.tallies.entry(k).or_default().merge(t);
        }
        for d in o.discrepancies {
            if self.discrepancies.len() < KEEP {
                self.discrepancies.push(d);
            }
        }
    }

    /// Total disagreements over all checks.
    pub fn disagreements(&self) -> u64 {
        self.tallies.values().map(|t| t.disagree).sum()
    }
}

// ---------------------------------------------------------------------
// Birkhoff frames, bit-packed. Bit `(y·n + z)·n + x` of a relation word
// is `xRyz`, so the set `{x : xRyz}` is a contiguous n-bit field.

const BIRKHOFF_MAX: usize = 3;

struct Packed {
    w: Poset,
    n: usize,
    down: Vec<u8>,
    downsets: Vec<u8>,
    below: Vec<u128>,
    /// Per non-identity automorphism, per byte of the word, the image of
    /// each byte value.
    auts: Vec<Vec<[u32; 256]>>,
    group: u64,
}

impl Packed {
    fn new(w: Poset) -> Packed {
        let n = w.size();
        let bits = n * n * n;
        let idx = |x: usize, y: usize, z: usize| (y * n + z) * n + x;
        let mut below = vec![0u128; bits];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for u in 0..n {
                        for v in 0..n {
                            for t in 0..n {
                                let lower = w.leq(u, x) && w.leq(y, v) && w.leq(z, t);
                                if lower && (u, v, t) != (x, y, z) {
                                    below[idx(x, y, z)] |= 1 << idx(u, v, t);
                                }
                            }
                        }
                    }
                }
            }
        }
        let all = w.structure().automorphisms();
        let group = all.len() as u64;
        let bytes = bits.div_ceil(8);
        let auts = all
            .into_iter()
            .filter(|s| s.iter().enumerate().any(|(i, &j)| i != j))
            .map(|s| {
                let mut img = vec![0u32; bits];
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            img[idx(x, y, z)] = idx(s[x], s[y], s[z]) as u32;
                        }
                    }
                }
                (0..bytes)
                    .map(|b| {
                        let mut t = [0u32; 256];
                        for (v, slot) in t.iter_mut().enumerate() {
                            for k in 0..8 {
                                let bit = b * 8 + k;
                                if v >> k & 1 == 1 && bit < bits {
                                    *slot |= 1 << img[bit];
                                }
                            }
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        let down = (0..n).map(|x| w.down_mask(x) as u8).collect();
        let downsets = w.downsets().into_iter().map(|m| m as u8).collect();
        Packed { w, n, down, downsets, below, auts, group }
    }

    /// `None` if some automorphism maps `r` to a smaller word, else the
    /// size of the stabilizer of `r`.
    #[inline]
    fn orbit_min(&self, r: u32) -> Option<u64> {
        let mut stab = 1;
        for t in &self.auts {
            let mut img = 0;
            for (b, tb) in t.iter().enumerate() {
                img |= tb[(r >> (8 * b) & 0xff) as usize];
            }
            if img < r {
                return None;
            }
            stab += (img == r) as u64;
        }
        Some(stab)
    }

    #[inline]
    fn cell(&self, r: u32, y: usize, z: usize) -> u8 {
        let n = self.n;
        (r >> ((y * n + z) * n) & ((1 << n) - 1)) as u8
    }

    fn frame(&self, r: u32) -> Frame {
        let n = self.n;
        Frame::birkhoff(self.w.clone(), TernRel::from_fn(n, |x, y, z| self.cell(r, y, z) >> x & 1 == 1))
    }

    /// `[commutative, idempotent, weakly conservative]`, each as
    /// `(frame condition, algebra property)`.
    fn verdicts(&self, r: u32) -> [(bool, bool); 3] {
        let n = self.n;
        let full = 1usize << n;
        let mut m = [[0u8; 3]; 3];
        for (y, row) in m.iter_mut().enumerate().take(n) {
            for (z, c) in row.iter_mut().enumerate().take(n) {
                *c = self.cell(r, y, z);
            }
        }
        let d = &self.down;

        let mut comm_f = true;
        let mut idem_f = true;
        let mut wc_f = true;
        for x in 0..n {
            idem_f &= m[x][x] >> x & 1 == 1;
        }
        for y in 0..n {
            for z in 0..n {
                let c = m[y][z];
                comm_f &= c == m[z][y];
                idem_f &= c & !(d[y] | d[z]) == 0;
                let mut want = d[y] & d[z];
                if c >> y & 1 == 1 {
                    want |= d[y];
                }
                if c >> z & 1 == 1 {
                    want |= d[z];
                }
                wc_f &= c == want;
            }
        }

        // Y·Z over all subsets by dynamic programming.
        let mut left = [[0u8; 3]; 8];
        for s in 1..full {
            let y = s.trailing_zeros() as usize;
            for z in 0..n {
                left[s][z] = left[s & (s - 1)][z] | m[y][z];
            }
        }
        let mut prod = [[0u8; 8]; 8];
        for s in 0..full {
            for t in 1..full {
                let z = t.trailing_zeros() as usize;
                prod[s][t] = prod[s][t & (t - 1)] | left[s][z];
            }
        }
        let ds = &self.downsets;
        let mut comm_a = true;
        let mut idem_a = true;
        for &a in ds {
            idem_a &= prod[a as usize][a as usize] == a;
            for &b in ds {
                comm_a &= prod[a as usize][b as usize] == prod[b as usize][a as usize];
            }
        }
        let mut wc_a = true;
        for x in 0..n {
            for y in 0..n {
                let (a, b) = (d[x], d[y]);
                let v = prod[a as usize][b as usize];
                wc_a &= v == a & b || v == a || v == b || v == a | b;
            }
        }
        [(comm_f, comm_a), (idem_f, idem_a), (wc_f, wc_a)]
    }
}

const BIRKHOFF_CHECKS: [(&str, FrameProperty); 3] = [
    ("commutative", FrameProperty::CommutativeR),
    ("idempotent", FrameProperty::IdemR),
    ("weakly_conservative", FrameProperty::WeaklyConservativeR),
];

/// All Birkhoff frames on posets of size `1..=max_n` (at most 3), one per
/// isomorphism class: commutativity, idempotence and weak conservativity
/// of `R` against the same properties of the downset algebra.
pub fn birkhoff_sweep(max_n: usize, exec: Exec) -> Result<SweepReport> {
    if max_n > BIRKHOFF_MAX {
        return Err(Error::TooLarge { what: "birkhoff sweep poset", size: max_n, limit: BIRKHOFF_MAX });
    }
    let mut units = Vec::new();
    for n in 1..=max_n {
        for w in posets(n) {
            let pk = std::sync::Arc::new(Packed::new(w));
            for seed in downset_seeds(&pk.below, 10) {
                units.push((pk.clone(), seed));
            }
        }
    }
    let parts = exec.map(&units, |(pk, (forced, allowed))| {
        let mut rep = SweepReport::default();
        for_each_downset_in(&pk.below, *forced, *allowed, &mut |m| {
            let r = m as u32;
            let Some(stab) = pk.orbit_min(r) else { return };
            rep.frames += 1;
            rep.labeled += pk.group / stab;
            for ((name, _), (f, a)) in BIRKHOFF_CHECKS.iter().zip(pk.verdicts(r)) {
                rep.record(name, f, a, || pk.frame(r));
            }
        });
        rep
    });
    let mut out = SweepReport::default();
    for p in parts {
        out.merge(p);
    }
    Ok(out)
}

/// Agreement between the packed evaluators and the general library path
/// (`frame_property` on the frame, brute force on `downset_algebra`).
#[derive(Clone, Debug, Default)]
pub struct CrossCheck {
    pub frames: u64,
    pub mismatches: Vec<(Frame, &'static str)>,
}

/// Compares [`birkhoff_sweep`]'s packed evaluators with the library path
/// on every labeled Birkhoff frame of size at most 2, every one on the
/// 3-element posets other than the antichain, and `samples` random ones on
/// the 3-element antichain.
pub fn birkhoff_cross_check(samples: usize, seed: u64, exec: Exec) -> Result<CrossCheck> {
    let mut jobs: Vec<(std::sync::Arc<Packed>, Vec<u32>)> = Vec::new();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for n in 1..=3 {
        for w in posets(n) {
            let pk = std::sync::Arc::new(Packed::new(w));
            let mut rs = Vec::new();
            if n < 3 || !pk.w.is_antichain() {
                for_each_downset(&pk.below, 0, &mut |m| rs.push(m as u32));
            } else {
                rs.extend((0..samples).map(|_| rng.gen::<u32>() & ((1 << 27) - 1)));
            }
            for chunk in rs.chunks(512) {
                jobs.push((pk.clone(), chunk.to_vec()));
            }
        }
    }
    let parts = exec.map(&jobs, |(pk, rs)| -> Result<CrossCheck> {
        let mut cc = CrossCheck::default();
        for &r in rs {
            let f = pk.frame(r);
            let props = BIRKHOFF_CHECKS.map(|(_, p)| p);
            let alg = algebraic_counterparts(&f, &props)?;
            for (((name, prop), (fast_f, fast_a)), lib_a) in BIRKHOFF_CHECKS.iter().zip(pk.verdicts(r)).zip(alg) {
                let lib_f = frame_property(&f, *prop)?.holds();
                let lib_a = lib_a.holds();
                if lib_f != fast_f || lib_a != fast_a {
                    cc.mismatches.push((f.clone(), name));
                }
            }
            cc.frames += 1;
        }
        Ok(cc)
    });
    let mut out = CrossCheck::default();
    for p in parts {
        let p = p?;
        out.frames += p.frames;
        out.mismatches.extend(p.mismatches);
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// P-frames. Bit `y·n + x` of a relation word is `xPy`.

pub(crate) fn weakening_order(w: &Poset) -> Vec<u128> {
    let n = w.size();
    let mut below = vec![0u128; n * n];
    for x in 0..n {
        for y in 0..n {
            for u in ones(w.down_mask(x)) {
                for v in ones(w.up_mask(y)) {
                    if (u, v) != (x, y) {
                        below[y * n + x] |= 1 << (v * n + u);
                    }
                }
            }
        }
    }
    below
}

fn ones(m: u128) -> impl Iterator<Item = usize> {
    crate::bits::ones128(m)
}

/// Every weakening relation on `w`, as `P` rows.
pub fn weakening_relations(w: &Poset) -> Vec<BinRel> {
    let n = w.size();
    let mut out = Vec::new();
    for_each_downset(&weakening_order(w), 0, &mut |m| {
        out.push(BinRel::from_fn(n, |x, y| m >> (y * n + x) & 1 == 1));
    });
    out
}

fn record_verdicts(
    rep: &mut SweepReport,
    check: &'static str,
    fr: Verdict,
    al: Verdict,
    frame: impl FnOnce() -> Frame,
) {
    rep.record(check, fr.holds(), al.holds(), frame);
}

/// Every P-frame on posets of size `1..=max_n`: reflexivity,
/// transitivity and the associativity condition of `P` for each frame; the
/// identity conditions for each frame paired with each downset `E`; and
/// `P = Q ⟺ p = q`, which is checked as injectivity of `P ↦ p` on each
/// poset (the converse direction is immediate).
pub fn pq_sweep(max_n: usize, exec: Exec) -> Result<SweepReport> {
    let mut units = Vec::new();
    for n in 1..=max_n {
        for w in posets(n) {
            let d = std::sync::Arc::new(downset_lattice(&w)?);
            let rels = weakening_relations(&w);
            for chunk in rels.chunks(1024) {
                units.push((d.clone(), chunk.to_vec()));
            }
        }
    }
    let parts = exec.map(&units, |(d, rels)| -> Result<(SweepReport, Vec<Vec<usize>>)> {
        let mut rep = SweepReport::default();
        let mut tables = Vec::with_capacity(rels.len());
        for p in rels {
            let mut f = Frame::p_frame(d.base.clone(), p.clone());
            let t = unary_table(d, p, "p(Y) is a downset")?;
            let a = FinAlgebra::new(d.lattice.clone()).with_p(t.clone())?;
            tables.push(t);
            rep.frames += 1;
            rep.labeled += 1;
            for (check, prop, law) in [
                ("p_reflexive", FrameProperty::PReflexive, OperatorLaw::Inflationary),
                ("p_transitive", FrameProperty::PTransitive, OperatorLaw::SquareBelow),
                ("assoc_star", FrameProperty::AssocStar, OperatorLaw::AssocInequality),
            ] {
                record_verdicts(&mut rep, check, frame_property(&f, prop)?, check_law(&a, law)?, || f.clone());
            }
            for (i, &e) in d.elements.iter().enumerate() {
                f.e_set = Some(e);
                for (check, prop, law) in [
                    ("identity_cover", FrameProperty::IdentityCover, OperatorLaw::CoversTop(i)),
                    ("identity_bound", FrameProperty::IdentityBound, OperatorLaw::BoundedBy(i)),
                ] {
                    record_verdicts(&mut rep, check, frame_property(&f, prop)?, check_law(&a, law)?, || f.clone());
                }
            }
        }
        Ok((rep, tables))
    });
    let mut out = SweepReport::default();
    // Tables from the same poset share its downset lattice; group them by
    // the poset so distinct posets never collide.
    let mut seen: HashSet<(Vec<u128>, Vec<usize>)> = HashSet::new();
    for ((d, rels), part) in units.iter().zip(parts) {
        let (rep, tables) = part?;
        out.merge(rep);
        let key: Vec<u128> = (0..d.base.size()).map(|x| d.base.down_mask(x)).collect();
        for (p, t) in rels.iter().zip(tables) {
            let fresh = seen.insert((key.clone(), t));
            // A repeated table means two different relations give the same
            // operator: then p = q although P ≠ Q.
            out.record("p_equals_q", true, fresh, || Frame::p_frame(d.base.clone(), p.clone()));
        }
    }
    Ok(out)
}

/// Exhaustive `P = Q ⟺ p = q` over all pairs of weakening relations on
/// posets of size `1..=max_n`, through the library's PQ-frame path.
pub fn pq_pairs_sweep(max_n: usize) -> Result<SweepReport> {
    let mut rep = SweepReport::default();
    for n in 1..=max_n {
        for w in posets(n) {
            let d = downset_lattice(&w)?;
            let rels = weakening_relations(&w);
            let tables: Vec<Vec<usize>> = rels
                .iter()
                .map(|p| unary_table(&d, p, "p(Y) is a downset"))
                .collect::<Result<_>>()?;
            for (p, tp) in rels.iter().zip(&tables) {
                for (q, tq) in rels.iter().zip(&tables) {
                    let f = Frame::pq_frame(w.clone(), p.clone(), q.clone());
                    let a = FinAlgebra::new(d.lattice.clone()).with_p(tp.clone())?.with_q(tq.clone())?;
                    rep.frames += 1;
                    rep.labeled += 1;
                    record_verdicts(
                        &mut rep,
                        "p_equals_q",
                        frame_property(&f, FrameProperty::PEqualsQ)?,
                        check_law(&a, OperatorLaw::PEqualsQ)?,
                        || f.clone(),
                    );
                }
            }
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------
// Round trips between binary and ternary presentations.

/// Counts and failures of the round-trip sweep.
#[derive(Clone, Debug, Default)]
pub struct RoundTripReport {
    /// PQ-frame pairs pushed through `R` and back.
    pub pq_frames: u64,
    /// PQ-structure pairs pushed through the weakly conservative `R` and
    /// back.
    pub pq_structures: u64,
    /// PQ-structures that are also PQ-frames, where both ternary relations
    /// were compared.
    pub both_kinds: u64,
    /// Weakly conservative Birkhoff frames pushed through `P, Q` and back.
    pub wc_frames: u64,
    pub failures: Vec<(&'static str, Frame)>,
}

impl RoundTripReport {
    fn fail(&mut self, what: &'static str, f: &Frame) {
        if self.failures.len() < KEEP {
            self.failures.push((what, f.clone()));
        }
    }
}

/// Relations with (P0)-(P2) on `w`: rows are upsets containing `↑x`, and
/// `x ≤ y & xPz ⟹ x ≤ z or yPz`.
pub fn structure_relations(w: &Poset) -> Vec<BinRel> {
    let n = w.size();
    let dual = w.dual();
    // Each row is an upset of w containing ↑x, i.e. a downset of the dual.
    let rows: Vec<Vec<u128>> = (0..n)
        .map(|x| {
            let mut v = Vec::new();
            dual.for_each_downset(|m| {
                if w.up_mask(x) & !m == 0 {
                    v.push(m);
                }
            });
            v
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0u128; n];
    fn rec(k: usize, rows: &[Vec<u128>], cur: &mut Vec<u128>, w: &Poset, out: &mut Vec<BinRel>) {
        if k == rows.len() {
            let p = BinRel::from_rows(cur.clone());
            if structure_axioms(w, &p, &p).holds() {
                out.push(p);
            }
            return;
        }
        for &m in &rows[k] {
            cur[k] = m;
            rec(k + 1, rows, cur, w, out);
        }
    }
    rec(0, &rows, &mut cur, w, &mut out);
    out
}

fn hypotheses_4_4(w: &Poset, p: &BinRel, q: &BinRel) -> bool {
    (0..w.size()).all(|x| {
        let up = w.up_mask(x);
        (p.row(x) == 0 || up & !q.row(x) == 0) && (q.row(x) == 0 || up & !p.row(x) == 0)
    })
}

/// Pairs to test: all of them when `exhaustive`, else the diagonal, the
/// pairs with `≤` on one side, and `samples` random ones.
fn pairs(
    rels: &[BinRel],
    exhaustive: bool,
    samples: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Vec<(usize, usize)> {
    let k = rels.len();
    if exhaustive {
        return (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    }
    let mut v: Vec<(usize, usize)> = (0..k).map(|i| (i, i)).collect();
    v.extend((0..k).flat_map(|i| [(i, 0), (0, i)]));
    v.extend((0..samples).map(|_| (rng.gen_range(0..k), rng.gen_range(0..k))));
    v
}

/// Conversion round trips on posets of size `1..=max_n`. Pairs of
/// relations are exhaustive up to `exhaustive_n` points and sampled
/// beyond. Weakly conservative Birkhoff frames are enumerated outright up
/// to 2 points.
pub fn round_trip_sweep(max_n: usize, exhaustive_n: usize, samples: usize, seed: u64, exec: Exec) -> Result<RoundTripReport> {
    let mut jobs = Vec::new();
    for n in 1..=max_n {
        for (i, w) in posets(n).into_iter().enumerate() {
            jobs.push((w, n <= exhaustive_n, seed ^ (n as u64) << 32 ^ i as u64));
        }
    }
    let parts = exec.map(&jobs, |(w, exhaustive, seed)| -> Result<RoundTripReport> {
        let mut rep = RoundTripReport::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
        let le = BinRel::order(w);

        let mut weak = weakening_relations(w);
        // Put ≤ first so pairs() can pair everything with it.
        if let Some(k) = weak.iter().position(|r| *r == le) {
            weak.swap(0, k);
        }
        for (i, j) in pairs(&weak, *exhaustive, samples, &mut rng) {
            let (p, q) = (&weak[i], &weak[j]);
            if !hypotheses_4_4(w, p, q) {
                continue;
            }
            rep.pq_frames += 1;
            let f = if i == j {
                Frame::p_frame(w.clone(), p.clone())
            } else {
                Frame::pq_frame(w.clone(), p.clone(), q.clone())
            };
            let b = r_from_pq(&f)?;
            if !b.validate()?.holds() {
                rep.fail("R from P, Q is a Birkhoff frame", &f);
                continue;
            }
            let back = pq_from_r(&b)?;
            if back.require_p()? != p || back.require_q()? != q {
                rep.fail("P, Q recovered from R", &f);
            }
            let comm = frame_property(&b, FrameProperty::CommutativeR)?.holds();
            if comm != (p == q) {
                rep.fail("R commutative iff P = Q", &f);
            }
        }

        let mut st = structure_relations(w);
        if let Some(k) = st.iter().position(|r| *r == le) {
            st.swap(0, k);
        }
        for (i, j) in pairs(&st, *exhaustive, samples, &mut rng) {
            let (p, q) = (&st[i], &st[j]);
            rep.pq_structures += 1;
            let f = Frame::pq_structure(w.clone(), p.clone(), q.clone());
            let b = wc_r_from_pq_structure(&f)?;
            if !b.validate()?.holds() || !frame_property(&b, FrameProperty::WeaklyConservativeR)?.holds() {
                rep.fail("R from a PQ-structure is weakly conservative", &f);
                continue;
            }
            let back = pq_structure_from_wc_r(&b)?;
            if back.require_p()? != p || back.require_q()? != q {
                rep.fail("P, Q recovered from the weakly conservative R", &f);
            }
            if weakening(w, p, "P").holds() && weakening(w, q, "Q").holds() {
                rep.both_kinds += 1;
                let g = Frame::pq_frame(w.clone(), p.clone(), q.clone());
                if r_from_pq(&g)?.r != b.r {
                    rep.fail("both ternary relations agree", &f);
                }
            }
        }

        if w.size() <= 2 {
            let pk = Packed::new(w.clone());
            let mut rs = Vec::new();
            for_each_downset(&pk.below, 0, &mut |m| rs.push(m as u32));
            for r in rs {
                let b = pk.frame(r);
                if !frame_property(&b, FrameProperty::WeaklyConservativeR)?.holds() {
                    continue;
                }
                rep.wc_frames += 1;
                let s = pq_structure_from_wc_r(&b)?;
                if !s.validate()?.holds() || wc_r_from_pq_structure(&s)?.r != b.r {
                    rep.fail("weakly conservative R recovered from P, Q", &b);
                }
            }
        }
        Ok(rep)
    });
    let mut out = RoundTripReport::default();
    for p in parts {
        let p = p?;
        out.pq_frames += p.pq_frames;
        out.pq_structures += p.pq_structures;
        out.both_kinds += p.both_kinds;
        out.wc_frames += p.wc_frames;
        out.failures.extend(p.failures);
    }
    Ok(out)
}
