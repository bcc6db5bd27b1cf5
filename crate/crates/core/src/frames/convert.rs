//! Frames to algebras and back, and the conversions between ternary and
//! binary relational presentations.

use crate::algebra::{mul_from_pq, residuals, FinAlgebra};
use crate::bits::ones128;
use crate::error::{Error, Result, Verdict, Witness};
use crate::poset::{downset_lattice, DownsetLattice, Poset};

use super::{BinRel, Frame, FrameKind, TernRel};

/// A downset algebra together with the downsets behind its elements.
#[derive(Clone, Debug)]
pub struct DownsetAlgebra {
    pub algebra: FinAlgebra,
    pub downsets: DownsetLattice,
}

/// `p(Y) = {x : xPy for some y ∈ Y}` as a table over `d`.
pub(crate) fn unary_table(d: &DownsetLattice, rel: &BinRel, name: &'static str) -> Result<Vec<usize>> {
    d.elements
        .iter()
        .map(|&ys| {
            let img = (0..rel.size()).filter(|&x| rel.row(x) & ys != 0).fold(0u128, |m, x| m | 1 << x);
            d.index_of(img)
                .ok_or_else(|| Error::InvalidFrame(Witness::new(name, ones128(ys).collect::<Vec<_>>())))
        })
        .collect()
}

/// `Y·Z = {x : xRyz for some y ∈ Y, z ∈ Z}` as a table over `d`.
pub(crate) fn product_table(d: &DownsetLattice, r: &TernRel) -> Result<Vec<usize>> {
    let n = r.size();
    let k = d.size();
    let mut out = vec![0; k * k];
    for (i, &ys) in d.elements.iter().enumerate() {
        // cols[x] = {z : xRyz for some y ∈ Y}
        let cols: Vec<u128> = (0..n)
            .map(|x| ones128(ys).fold(0, |m, y| m | r.row(x, y)))
            .collect();
        for (j, &zs) in d.elements.iter().enumerate() {
            let img = (0..n).filter(|&x| cols[x] & zs != 0).fold(0u128, |m, x| m | 1 << x);
            out[i * k + j] = d
                .index_of(img)
                .ok_or_else(|| Error::InvalidFrame(Witness::new("Y·Z is a downset", [i, j])))?;
        }
    }
    Ok(out)
}

fn require_valid(f: &Frame) -> Result<()> {
    f.validate()?.into_result(Error::InvalidFrame)
}

/// The complex algebra of `f` on the lattice of downsets.
///
/// A ternary relation yields `mul`. `P` and `Q` yield `p` and `q` (only
/// `p` on a P-frame); if there is no ternary relation and the pair
/// satisfies the dℓpq axioms, `mul` is added as `(px∧y)∨(x∧qy)`. A
/// PQ-structure is read through its weakly conservative ternary relation.
/// Residuals are always attached, and `E`, when present, becomes `one`
/// provided it is an identity.
pub fn downset_algebra(f: &Frame) -> Result<FinAlgebra> {
    Ok(downset_algebra_indexed(f)?.algebra)
}

/// As [`downset_algebra`], keeping the downset behind each element.
pub fn downset_algebra_indexed(f: &Frame) -> Result<DownsetAlgebra> {
    let DownsetAlgebra { algebra, downsets } = complex_algebra(f)?;
    let mut a = residuals(&algebra)?;
    if let Some(e) = f.e_set {
        let idx = downsets.index_of(e).expect("validated downset");
        a = a.with_one(idx).map_err(|err| match err {
            Error::Law(w) => Error::InvalidFrame(Witness::new("E is the identity", w.tuple)),
            other => other,
        })?;
    }
    Ok(DownsetAlgebra { algebra: a, downsets })
}

/// The operations induced by the relations, without residuals or `one`.
pub(crate) fn complex_algebra(f: &Frame) -> Result<DownsetAlgebra> {
    require_valid(f)?;
    let d = downset_lattice(&f.poset)?;
    let mut a = FinAlgebra::new(d.lattice.clone());
    let r = match (f.kind, &f.r) {
        (_, Some(r)) => Some(r.clone()),
        (FrameKind::PqStructure, None) => wc_r_from_pq_structure(f)?.r,
        _ => None,
    };
    if let Some(r) = &r {
        a = a.with_mul(product_table(&d, r)?)?;
    }
    if matches!(f.kind, FrameKind::PqFrame | FrameKind::PFrame) {
        a = a.with_p(unary_table(&d, f.require_p()?, "p(Y) is a downset")?)?;
        if let Some(q) = &f.q_rel {
            a = a.with_q(unary_table(&d, q, "q(Y) is a downset")?)?;
        }
        if r.is_none() && a.dlpq_axioms()?.holds() {
            a = mul_from_pq(&a)?;
        }
    }
    Ok(DownsetAlgebra { algebra: a.declare_normal()?, downsets: d })
}

/// The frame of join-irreducibles: `xRyz ⟺ x ≤ y·z` and
/// `xPy ⟺ x ≤ p(y)`, likewise for `Q`. An algebra with `p` gives a P-frame
/// or, when it also has `q`, a PQ-frame; `R` is kept whenever `mul` is
/// present. A constant `one` becomes `E = {x : x ≤ 1}`.
pub fn frame_from_algebra(a: &FinAlgebra) -> Result<Frame> {
    let l = a.lattice();
    if let Verdict::Fails(w) = l.distributivity() {
        return Err(Error::NotDistributive(w));
    }
    let ji = l.join_irreducibles()?;
    let e = &ji.elements;
    let n = e.len();
    let r = a
        .mul_table()
        .map(|_| TernRel::from_fn(n, |x, y, z| a.leq(e[x], a.mul(e[y], e[z]))));
    let rel = |t: &[usize]| BinRel::from_fn(n, |x, y| a.leq(e[x], t[e[y]]));
    let p_rel = a.p_table().map(rel);
    let q_rel = a.q_table().map(rel);
    let kind = match (&p_rel, &q_rel, &r) {
        (Some(_), Some(_), _) => FrameKind::PqFrame,
        (Some(_), None, _) => FrameKind::PFrame,
        (None, _, Some(_)) => FrameKind::Birkhoff,
        (None, _, None) => return Err(Error::Missing("mul or p")),
    };
    let e_set = a
        .one()
        .map(|one| (0..n).filter(|&x| a.leq(e[x], one)).fold(0u128, |m, x| m | 1 << x));
    Ok(Frame { poset: ji.poset, kind, r, p_rel, q_rel, e_set })
}

/// `xRyz ⟺ (xPy & x ≤ z) or (x ≤ y & xQz)`, for a PQ-frame (or P-frame)
/// with `x ≤ y & xPz ⟹ xQy` and `x ≤ y & xQz ⟹ xPy`.
pub fn r_from_pq(f: &Frame) -> Result<Frame> {
    if !matches!(f.kind, FrameKind::PqFrame | FrameKind::PFrame) {
        return Err(Error::InvalidParameters(format!("expected a pq_frame or p_frame, got {}", f.kind)));
    }
    require_valid(f)?;
    let (p, q) = (f.require_p()?, f.require_q()?);
    let w = &f.poset;
    let n = f.size();
    for x in 0..n {
        for y in ones128(w.up_mask(x)) {
            if p.row(x) != 0 && !q.contains(x, y) {
                let z = p.row(x).trailing_zeros() as usize;
                return Err(Error::InvalidFrame(Witness::new("x ≤ y & xPz ⟹ xQy", [x, y, z])));
            }
            if q.row(x) != 0 && !p.contains(x, y) {
                let z = q.row(x).trailing_zeros() as usize;
                return Err(Error::InvalidFrame(Witness::new("x ≤ y & xQz ⟹ xPy", [x, y, z])));
            }
        }
    }
    let r = TernRel::from_fn(n, |x, y, z| (p.contains(x, y) && w.leq(x, z)) || (w.leq(x, y) && q.contains(x, z)));
    Ok(Frame::birkhoff(w.clone(), r))
}

/// Recovers `xPy ⟺ ∃w xRyw` and `xQy ⟺ ∃w xRwy` from a Birkhoff frame
/// whose `R` is determined by them as in [`r_from_pq`]. The result is a
/// P-frame when `P = Q`.
pub fn pq_from_r(f: &Frame) -> Result<Frame> {
    require_valid(f)?;
    let r = f.require_r()?;
    let w = &f.poset;
    let n = f.size();
    let p = BinRel::from_fn(n, |x, y| r.row(x, y) != 0);
    let q = BinRel::from_fn(n, |x, y| (0..n).any(|v| r.contains(x, v, y)));
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let want = (p.contains(x, y) && w.leq(x, z)) || (w.leq(x, y) && q.contains(x, z));
                if r.contains(x, y, z) != want {
                    return Err(Error::InvalidFrame(Witness::new(
                        "xRyz ⟺ (xPy & x ≤ z) or (x ≤ y & xQz)",
                        [x, y, z],
                    )));
                }
            }
        }
    }
    Ok(if p == q {
        Frame::p_frame(w.clone(), p)
    } else {
        Frame::pq_frame(w.clone(), p, q)
    })
}

/// `xRyz ⟺ x ≤ y,z or (x ≤ y & yQz) or (x ≤ z & zPy)` for a PQ-structure.
/// Any frame kind is accepted as long as its `P`, `Q` satisfy the
/// PQ-structure axioms.
pub fn wc_r_from_pq_structure(f: &Frame) -> Result<Frame> {
    let (p, q) = (f.require_p()?, f.require_q()?);
    let w = &f.poset;
    super::structure_axioms(w, p, q).into_result(Error::InvalidFrame)?;
    let n = f.size();
    let r = TernRel::from_fn(n, |x, y, z| {
        (w.leq(x, y) && w.leq(x, z)) || (w.leq(x, y) && q.contains(y, z)) || (w.leq(x, z) && p.contains(z, y))
    });
    Ok(Frame::birkhoff(w.clone(), r))
}

/// `xRyz ⟺ x ≤ y,z or (x ≤ y & yRyz) or (x ≤ z & zRyz)`.
pub(crate) fn weakly_conservative(w: &Poset, r: &TernRel) -> Verdict {
    let n = w.size();
    for y in 0..n {
        for z in 0..n {
            let mut want = w.down_mask(y) & w.down_mask(z);
            if r.contains(y, y, z) {
                want |= w.down_mask(y);
            }
            if r.contains(z, y, z) {
                want |= w.down_mask(z);
            }
            let have = (0..n).filter(|&x| r.contains(x, y, z)).fold(0u128, |m, x| m | 1 << x);
            if let Some(x) = ones128(have ^ want).next() {
                return Verdict::fail("R is weakly conservative", [x, y, z]);
            }
        }
    }
    Verdict::Holds
}

/// `xPy ⟺ xRyx` and `xQy ⟺ xRxy` for a weakly conservative Birkhoff
/// frame.
pub fn pq_structure_from_wc_r(f: &Frame) -> Result<Frame> {
    require_valid(f)?;
    let r = f.require_r()?;
    weakly_conservative(&f.poset, r).into_result(Error::InvalidFrame)?;
    let n = f.size();
    let p = BinRel::from_fn(n, |x, y| r.contains(x, y, x));
    let q = BinRel::from_fn(n, |x, y| r.contains(x, x, y));
    Ok(Frame::pq_structure(f.poset.clone(), p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_property, Method, PropertyName};
    use crate::canon::{canonicalize, is_isomorphic};
    use crate::poset::FinLattice;

    fn meet_r(w: &Poset) -> TernRel {
        TernRel::from_fn(w.size(), |x, y, z| w.leq(x, y) && w.leq(x, z))
    }

    #[test]
    fn one_point_frame_gives_the_two_chain() {
        let w = Poset::chain(1);
        let a = downset_algebra(&Frame::p_frame(w.clone(), BinRel::order(&w))).unwrap();
        assert_eq!(a.size(), 2);
        assert_eq!(a.p_table().unwrap(), &[0, 1]);
        assert!(a.lattice().is_chain());
    }

    #[test]
    fn meet_on_a_chain_dualizes_to_lower_bounds() {
        let l = FinLattice::chain(4);
        let meet: Vec<usize> = (0..16).map(|i| l.meet(i / 4, i % 4)).collect();
        let a = FinAlgebra::new(l).with_mul(meet).unwrap().declare_normal().unwrap();
        let f = frame_from_algebra(&a).unwrap();
        assert_eq!(f.kind, FrameKind::Birkhoff);
        assert_eq!(f.r.as_ref().unwrap(), &meet_r(&f.poset));
        let back = downset_algebra(&f).unwrap().reduct(a.signature());
        assert!(is_isomorphic(&back, &a));
    }

    #[test]
    fn identity_operator_dualizes_to_the_order() {
        let w = Poset::from_relations(3, &[(0, 1), (0, 2)]).unwrap();
        let d = downset_lattice(&w).unwrap();
        let n = d.size();
        let a = FinAlgebra::new(d.lattice.clone()).with_p((0..n).collect()).unwrap();
        let f = frame_from_algebra(&a).unwrap();
        assert_eq!(f.kind, FrameKind::PFrame);
        assert_eq!(f.p_rel.as_ref().unwrap(), &BinRel::order(&f.poset));
    }

    #[test]
    fn frame_round_trip_is_an_isomorphism() {
        let w = Poset::from_relations(3, &[(0, 1)]).unwrap();
        let p = BinRel::from_fn(3, |x, y| w.leq(x, y) || x == 2);
        let f = Frame::p_frame(w, p);
        let a = downset_algebra(&f).unwrap();
        let g = frame_from_algebra(&a.reduct(crate::Signature::P)).unwrap();
        assert_eq!(canonicalize(&g), canonicalize(&f));
    }

    #[test]
    fn r_from_order_pair_is_lower_bounds() {
        let w = Poset::from_relations(3, &[(0, 1), (0, 2)]).unwrap();
        let le = BinRel::order(&w);
        let f = Frame::pq_frame(w.clone(), le.clone(), le.clone());
        let b = r_from_pq(&f).unwrap();
        assert_eq!(b.r.as_ref().unwrap(), &meet_r(&w));
        assert_eq!(wc_r_from_pq_structure(&Frame::pq_structure(w.clone(), le.clone(), le)).unwrap().r, b.r);
        let back = pq_structure_from_wc_r(&b).unwrap();
        assert_eq!(back.p_rel.unwrap(), BinRel::order(&w));
    }

    #[test]
    fn pq_recovery_and_commutativity_bridge() {
        let w = Poset::chain(2);
        let le = BinRel::order(&w);
        let all = BinRel::from_fn(2, |_, _| true);
        // Q = ∅ violates x ≤ y & xPz ⟹ xQy.
        let f = Frame::pq_frame(w.clone(), le.clone(), BinRel::empty(2));
        assert!(matches!(r_from_pq(&f), Err(Error::InvalidFrame(_))));
        let f = Frame::pq_frame(w.clone(), all.clone(), all.clone());
        let b = r_from_pq(&f).unwrap();
        let back = pq_from_r(&b).unwrap();
        assert_eq!(back.kind, FrameKind::PFrame);
        assert_eq!(back.p_rel.unwrap(), all);
        let comm = check_property(&downset_algebra(&b).unwrap(), PropertyName::Commutative, Method::Brute).unwrap();
        assert!(comm.holds());
    }

    #[test]
    fn dropping_a_triple_breaks_weak_conservativity() {
        let w = Poset::chain(2);
        let mut r = meet_r(&w);
        assert!(pq_structure_from_wc_r(&Frame::birkhoff(w.clone(), r.clone())).is_ok());
        r.remove(1, 1, 1);
        let f = Frame::birkhoff(w, r);
        assert!(f.validate().unwrap().holds());
        match pq_structure_from_wc_r(&f) {
            Err(Error::InvalidFrame(wit)) => {
                assert_eq!(wit.law, "R is weakly conservative");
                assert_eq!(wit.tuple, vec![1, 1, 1]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn e_set_must_be_an_identity() {
        let w = Poset::chain(2);
        let f = Frame::p_frame(w.clone(), BinRel::order(&w)).with_e_set(0b11);
        assert_eq!(downset_algebra(&f).unwrap().one(), Some(2));
        let f = Frame::p_frame(w.clone(), BinRel::order(&w)).with_e_set(0b01);
        assert!(matches!(downset_algebra(&f), Err(Error::InvalidFrame(_))));
    }
}

#[cfg(test)]
pub(crate) mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::canon::canonicalize;
    use crate::poset::strategies::poset;

    /// A poset with the weakening closure `≤ ∘ S ∘ ≤` of a random `S`.
    pub(crate) fn p_frame() -> impl Strategy<Value = Frame> {
        poset(4).prop_flat_map(|w| {
            let n = w.size();
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                let p = BinRel::from_fn(n, |x, y| {
                    (0..n).any(|u| (0..n).any(|v| bits[u * n + v] && w.leq(x, u) && w.leq(v, y)))
                });
                Frame::p_frame(w.clone(), p)
            })
        })
    }

    /// Closes P under `x ≤ y & xPz ⟹ xPy`. This keeps it a weakening
    /// relation and makes the frame a PQ-frame with Q = P.
    pub(crate) fn side_closed(f: Frame) -> Frame {
        let w = &f.poset;
        let p0 = f.require_p().unwrap();
        let p = BinRel::from_fn(w.size(), |x, y| p0.contains(x, y) || (p0.row(x) != 0 && w.leq(x, y)));
        Frame::p_frame(w.clone(), p)
    }

    proptest! {
        #[test]
        fn p_frames_survive_the_duality(f in p_frame()) {
            let a = downset_algebra(&f).unwrap();
            let g = frame_from_algebra(&a.reduct(crate::algebra::Signature::P)).unwrap();
            prop_assert_eq!(canonicalize(&g), canonicalize(&f));
        }

        #[test]
        fn pq_to_r_and_back(f in p_frame().prop_map(side_closed)) {
            let back = pq_from_r(&r_from_pq(&f).unwrap()).unwrap();
            prop_assert_eq!(back.p_rel, f.p_rel);
        }
    }
}
