//! First-order frame conditions and the algebraic properties they match.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{check_law, check_property, Method, OperatorLaw, PropertyName};
use crate::bits::ones128;
use crate::error::{Error, Result, Verdict};

use super::convert::{complex_algebra, weakly_conservative};
use super::{Frame, FrameKind};

/// The closed registry of frame conditions. Each has an evaluator here and
/// an algebraic counterpart on the downset algebra, see
/// [`algebraic_counterpart`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameProperty {
    /// `xPx`.
    PReflexive,
    /// `xPy & yPz ⟹ xPz`.
    PTransitive,
    /// `P = Q`.
    PEqualsQ,
    /// `xPy & xPz ⟹ x ≤ y or x ≤ z or yPz or zPy`.
    Pforest,
    /// `wPx & wPy ⟹ ∃v(wPv & ((vPx & v ≤ y) or (v ≤ x & vPy)))`.
    AssocStar,
    /// `xRxx`, and `xRyz ⟹ x ≤ y or x ≤ z`.
    IdemR,
    /// `xRyz ⟹ xRzy`.
    CommutativeR,
    /// `∀x ∃y (y ∈ E & xPy)`.
    IdentityCover,
    /// `x ∈ E & xPy ⟹ x ≤ y`.
    IdentityBound,
    /// `∃u(uRxy & wRuz) ⟺ ∃v(vRyz & wRxv)`.
    AssocBirkhoff,
    /// `uRxy & wRuz ⟹ ∃v(vRyz & wRxv)`; matches associativity only for
    /// commutative `R`.
    AssocBirkhoffComm,
    /// `xRyz ⟺ x ≤ y,z or (x ≤ y & yRyz) or (x ≤ z & zRyz)`.
    WeaklyConservativeR,
}

impl FrameProperty {
    pub const ALL: [FrameProperty; 12] = [
        FrameProperty::PReflexive,
        FrameProperty::PTransitive,
        FrameProperty::PEqualsQ,
        FrameProperty::Pforest,
        FrameProperty::AssocStar,
        FrameProperty::IdemR,
        FrameProperty::CommutativeR,
        FrameProperty::IdentityCover,
        FrameProperty::IdentityBound,
        FrameProperty::AssocBirkhoff,
        FrameProperty::AssocBirkhoffComm,
        FrameProperty::WeaklyConservativeR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrameProperty::PReflexive => "p_reflexive",
            FrameProperty::PTransitive => "p_transitive",
            FrameProperty::PEqualsQ => "p_equals_q",
            FrameProperty::Pforest => "pforest",
            FrameProperty::AssocStar => "assoc_star",
            FrameProperty::IdemR => "idem_r",
            FrameProperty::CommutativeR => "commutative_r",
            FrameProperty::IdentityCover => "identity_cover",
            FrameProperty::IdentityBound => "identity_bound",
            FrameProperty::AssocBirkhoff => "assoc_birkhoff",
            FrameProperty::AssocBirkhoffComm => "assoc_birkhoff_comm",
            FrameProperty::WeaklyConservativeR => "weakly_conservative_r",
        }
    }

    /// Whether the condition is equivalent to its algebraic counterpart on
    /// every frame. `pforest` only implies associativity (for preorders)
    /// and `assoc_birkhoff_comm` matches it only when `R` is commutative.
    pub fn is_exact(self) -> bool {
        !matches!(self, FrameProperty::Pforest | FrameProperty::AssocBirkhoffComm)
    }

    /// Human-readable counterpart on the downset algebra.
    pub fn counterpart(self) -> &'static str {
        match self {
            FrameProperty::PReflexive => "a ≤ pa",
            FrameProperty::PTransitive => "ppa ≤ pa",
            FrameProperty::PEqualsQ => "pa = qa",
            FrameProperty::Pforest | FrameProperty::AssocBirkhoff | FrameProperty::AssocBirkhoffComm => {
                "associative"
            }
            FrameProperty::AssocStar => "pa∧pb ≤ p((pa∧b)∨(a∧pb))",
            FrameProperty::IdemR => "idempotent",
            FrameProperty::CommutativeR => "commutative",
            FrameProperty::IdentityCover => "p1 = ⊤",
            FrameProperty::IdentityBound => "pa∧1 ≤ a",
            FrameProperty::WeaklyConservativeR => "weakly_conservative",
        }
    }
}

impl fmt::Display for FrameProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrameProperty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FrameProperty::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown frame property `{s}`")))
    }
}

/// Evaluates `prop` on `f` exactly, by quantifying over all points.
pub fn frame_property(f: &Frame, prop: FrameProperty) -> Result<Verdict> {
    let n = f.size();
    let w = &f.poset;
    Ok(match prop {
        FrameProperty::PReflexive => {
            let p = f.require_p()?;
            match (0..n).find(|&x| !p.contains(x, x)) {
                Some(x) => Verdict::fail("xPx", [x]),
                None => Verdict::Holds,
            }
        }
        FrameProperty::PTransitive => {
            let p = f.require_p()?;
            for x in 0..n {
                for y in ones128(p.row(x)) {
                    if let Some(z) = ones128(p.row(y) & !p.row(x)).next() {
                        return Ok(Verdict::fail("xPy & yPz ⟹ xPz", [x, y, z]));
                    }
                }
            }
            Verdict::Holds
        }
        FrameProperty::PEqualsQ => {
            let (p, q) = (f.require_p()?, f.require_q()?);
            match (0..n).find(|&x| p.row(x) != q.row(x)) {
                Some(x) => {
                    let y = (p.row(x) ^ q.row(x)).trailing_zeros() as usize;
                    Verdict::fail("xPy ⟺ xQy", [x, y])
                }
                None => Verdict::Holds,
            }
        }
        FrameProperty::Pforest => {
            let p = f.require_p()?;
            for x in 0..n {
                for y in ones128(p.row(x)) {
                    for z in ones128(p.row(x)) {
                        if !(w.leq(x, y) || w.leq(x, z) || p.contains(y, z) || p.contains(z, y)) {
                            return Ok(Verdict::fail("pforest", [x, y, z]));
                        }
                    }
                }
            }
            Verdict::Holds
        }
        FrameProperty::AssocStar => {
            let p = f.require_p()?;
            for wp in 0..n {
                for x in ones128(p.row(wp)) {
                    for y in ones128(p.row(wp)) {
                        let ok = ones128(p.row(wp)).any(|v| {
                            (p.contains(v, x) && w.leq(v, y)) || (w.leq(v, x) && p.contains(v, y))
                        });
                        if !ok {
                            return Ok(Verdict::fail("assoc_star", [wp, x, y]));
                        }
                    }
                }
            }
            Verdict::Holds
        }
        FrameProperty::IdemR => {
            let r = f.require_r()?;
            if let Some(x) = (0..n).find(|&x| !r.contains(x, x, x)) {
                return Ok(Verdict::fail("xRxx", [x]));
            }
            for x in 0..n {
                for y in 0..n {
                    if w.leq(x, y) {
                        continue;
                    }
                    if let Some(z) = ones128(r.row(x, y) & !w.up_mask(x)).next() {
                        return Ok(Verdict::fail("xRyz ⟹ x ≤ y or x ≤ z", [x, y, z]));
                    }
                }
            }
            Verdict::Holds
        }
        FrameProperty::CommutativeR => {
            let r = f.require_r()?;
            for x in 0..n {
                for y in 0..n {
                    if let Some(z) = ones128(r.row(x, y)).find(|&z| !r.contains(x, z, y)) {
                        return Ok(Verdict::fail("xRyz ⟹ xRzy", [x, y, z]));
                    }
                }
            }
            Verdict::Holds
        }
        FrameProperty::IdentityCover => {
            let (p, e) = (f.require_p()?, f.require_e()?);
            match (0..n).find(|&x| p.row(x) & e == 0) {
                Some(x) => Verdict::fail("∃y(y ∈ E & xPy)", [x]),
                None => Verdict::Holds,
            }
        }
        FrameProperty::IdentityBound => {
            let (p, e) = (f.require_p()?, f.require_e()?);
            for x in ones128(e) {
                if let Some(y) = ones128(p.row(x) & !w.up_mask(x)).next() {
                    return Ok(Verdict::fail("x ∈ E & xPy ⟹ x ≤ y", [x, y]));
                }
            }
            Verdict::Holds
        }
        FrameProperty::AssocBirkhoff | FrameProperty::AssocBirkhoffComm => {
            let r = f.require_r()?;
            // left[x*n+y] = {u : uRxy}
            let left: Vec<u128> = (0..n * n)
                .map(|i| (0..n).filter(|&u| r.contains(u, i / n, i % n)).fold(0, |m, u| m | 1u128 << u))
                .collect();
            let one_sided = prop == FrameProperty::AssocBirkhoffComm;
            for wp in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            let us = left[x * n + y] & (0..n).filter(|&u| r.contains(wp, u, z)).fold(0u128, |m, u| m | 1 << u);
                            let vs = left[y * n + z] & r.row(wp, x);
                            if us != 0 && vs == 0 {
                                let u = us.trailing_zeros() as usize;
                                let law = if one_sided { "uRxy & wRuz ⟹ ∃v(vRyz & wRxv)" } else { "∃u(uRxy & wRuz) ⟹ ∃v(vRyz & wRxv)" };
                                let t = if one_sided { vec![u, wp, x, y, z] } else { vec![wp, x, y, z] };
                                return Ok(Verdict::fail(law, t));
                            }
                            if !one_sided && vs != 0 && us == 0 {
                                return Ok(Verdict::fail("∃v(vRyz & wRxv) ⟹ ∃u(uRxy & wRuz)", [wp, x, y, z]));
                            }
                        }
                    }
                }
            }
            Verdict::Holds
        }
        FrameProperty::WeaklyConservativeR => weakly_conservative(w, f.require_r()?),
    })
}

/// Decides the algebraic counterpart of `prop` on the downset algebra of
/// `f`, by brute force. `E` enters as an element of the algebra, not as
/// its identity, so it need not be one.
pub fn algebraic_counterpart(f: &Frame, prop: FrameProperty) -> Result<Verdict> {
    Ok(algebraic_counterparts(f, &[prop])?.pop().expect("one verdict"))
}

/// As [`algebraic_counterpart`] for several properties, building the
/// downset algebra once.
pub fn algebraic_counterparts(f: &Frame, props: &[FrameProperty]) -> Result<Vec<Verdict>> {
    let e = f.e_set;
    for &prop in props {
        if matches!(prop, FrameProperty::IdentityCover | FrameProperty::IdentityBound) && e.is_none() {
            return Err(Error::Missing("E"));
        }
        let needs_r = matches!(
            prop,
            FrameProperty::IdemR
                | FrameProperty::CommutativeR
                | FrameProperty::AssocBirkhoff
                | FrameProperty::AssocBirkhoffComm
                | FrameProperty::WeaklyConservativeR
        );
        if needs_r && f.r.is_none() && f.kind != FrameKind::PqStructure {
            return Err(Error::Missing("R"));
        }
    }
    let d = complex_algebra(f)?;
    let a = &d.algebra;
    let e_idx = || d.downsets.index_of(e.expect("checked")).expect("validated downset");
    props
        .iter()
        .map(|&prop| match prop {
            FrameProperty::PReflexive => check_law(a, OperatorLaw::Inflationary),
            FrameProperty::PTransitive => check_law(a, OperatorLaw::SquareBelow),
            FrameProperty::PEqualsQ => check_law(a, OperatorLaw::PEqualsQ),
            FrameProperty::AssocStar => check_law(a, OperatorLaw::AssocInequality),
            FrameProperty::IdentityCover => check_law(a, OperatorLaw::CoversTop(e_idx())),
            FrameProperty::IdentityBound => check_law(a, OperatorLaw::BoundedBy(e_idx())),
            FrameProperty::IdemR => check_property(a, PropertyName::Idempotent, Method::Brute),
            FrameProperty::CommutativeR => check_property(a, PropertyName::Commutative, Method::Brute),
            FrameProperty::WeaklyConservativeR => {
                check_property(a, PropertyName::WeaklyConservative, Method::Brute)
            }
            FrameProperty::Pforest | FrameProperty::AssocBirkhoff | FrameProperty::AssocBirkhoffComm => {
                check_property(a, PropertyName::Associative, Method::Brute)
            }
        })
        .collect()
}

/// `E = {x : ∀y(xPy ⟹ x ≤ y)}`, returned when it is a downset with
/// `p(E) = W`, in which case it is the identity of the downset algebra.
pub fn identity_downset(f: &Frame) -> Result<Option<u128>> {
    if f.validate()?.witness().is_some() {
        return Err(Error::InvalidFrame(f.validate()?.witness().cloned().expect("fails")));
    }
    let p = f.require_p()?;
    if f.require_q()? != p {
        return Err(Error::InvalidParameters("identity_downset needs P = Q".into()));
    }
    let w = &f.poset;
    let n = f.size();
    let e = (0..n).filter(|&x| p.row(x) & !w.up_mask(x) == 0).fold(0u128, |m, x| m | 1 << x);
    if !w.is_downset(e) {
        return Ok(None);
    }
    let covered = (0..n).all(|x| p.row(x) & e != 0);
    Ok(covered.then_some(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::find_identity_element;
    use crate::frames::{downset_algebra, BinRel};
    use crate::poset::Poset;

    /// `W = {0,1,2,3}`, `0` below the rest, `1` sees every other point.
    fn strict_frame() -> Frame {
        let w = Poset::from_relations(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = BinRel::from_fn(4, |x, y| w.leq(x, y) || (x == 1 && y != 1));
        Frame::p_frame(w, p)
    }

    #[test]
    fn order_relation_properties() {
        let w = Poset::from_relations(3, &[(0, 1), (0, 2)]).unwrap();
        let f = Frame::p_frame(w.clone(), BinRel::order(&w));
        for prop in [FrameProperty::PReflexive, FrameProperty::PTransitive, FrameProperty::Pforest, FrameProperty::AssocStar] {
            assert!(frame_property(&f, prop).unwrap().holds(), "{prop}");
        }
        assert!(matches!(frame_property(&f, FrameProperty::IdemR), Err(Error::Missing("R"))));
    }

    #[test]
    fn associativity_is_not_inherited_by_subframes() {
        let f = strict_frame();
        assert!(f.validate().unwrap().holds());
        assert!(frame_property(&f, FrameProperty::PTransitive).unwrap().holds());
        assert!(frame_property(&f, FrameProperty::AssocStar).unwrap().holds());
        assert!(!frame_property(&f, FrameProperty::Pforest).unwrap().holds());
        let a = downset_algebra(&f).unwrap();
        assert!(check_property(&a, PropertyName::Associative, Method::Brute).unwrap().holds());

        let g = f.induced(&[1, 2, 3]).unwrap();
        assert!(g.validate().unwrap().holds());
        assert!(!frame_property(&g, FrameProperty::AssocStar).unwrap().holds());
        assert!(!frame_property(&g, FrameProperty::Pforest).unwrap().holds());
        let b = downset_algebra(&g).unwrap();
        assert!(!check_property(&b, PropertyName::Associative, Method::Brute).unwrap().holds());
    }

    #[test]
    fn names_round_trip() {
        for p in FrameProperty::ALL {
            assert_eq!(p.name().parse::<FrameProperty>().unwrap(), p);
        }
    }

    #[test]
    fn identity_of_the_order_frame_is_everything() {
        let w = Poset::from_relations(3, &[(0, 1)]).unwrap();
        let f = Frame::p_frame(w.clone(), BinRel::order(&w));
        assert_eq!(identity_downset(&f).unwrap(), Some(0b111));
    }

    #[test]
    fn identity_downset_agrees_with_search() {
        // 3-chain with 1P0 added: E = {0, 2} is not a downset.
        let w = Poset::chain(3);
        let p = BinRel::from_fn(3, |x, y| w.leq(x, y) || (x == 1 && y == 0));
        let f = Frame::p_frame(w, p);
        assert_eq!(identity_downset(&f).unwrap(), None);
        let a = downset_algebra(&f).unwrap();
        assert_eq!(find_identity_element(&a).unwrap(), None);
    }

    #[test]
    fn counterparts_match_on_small_examples() {
        let f = strict_frame().with_e_set(0b1);
        for prop in FrameProperty::ALL.into_iter().filter(|p| p.is_exact()) {
            let fr = frame_property(&f, prop);
            let al = algebraic_counterpart(&f, prop);
            match (fr, al) {
                (Ok(x), Ok(y)) => assert_eq!(x.holds(), y.holds(), "{prop}"),
                (Err(_), Err(_)) => {}
                (x, y) => panic!("{prop}: {x:?} vs {y:?}"),
            }
        }
    }
}
