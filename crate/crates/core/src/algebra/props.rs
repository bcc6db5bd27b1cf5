//! Named properties with brute-force and characterized decision procedures.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result, Verdict};

use super::term::unary_determined;
use super::FinAlgebra;

/// The closed registry of algebra properties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyName {
    Associative,
    Commutative,
    Idempotent,
    UnaryDetermined,
    HasIdentity,
    Normal,
    DlpqAxioms,
    ClosureP,
    ConservativeMul,
    WeaklyConservative,
}

impl PropertyName {
    pub const ALL: [PropertyName; 10] = [
        PropertyName::Associative,
        PropertyName::Commutative,
        PropertyName::Idempotent,
        PropertyName::UnaryDetermined,
        PropertyName::HasIdentity,
        PropertyName::Normal,
        PropertyName::DlpqAxioms,
        PropertyName::ClosureP,
        PropertyName::ConservativeMul,
        PropertyName::WeaklyConservative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyName::Associative => "associative",
            PropertyName::Commutative => "commutative",
            PropertyName::Idempotent => "idempotent",
            PropertyName::UnaryDetermined => "unary_determined",
            PropertyName::HasIdentity => "has_identity",
            PropertyName::Normal => "normal",
            PropertyName::DlpqAxioms => "dlpq_axioms",
            PropertyName::ClosureP => "closure_p",
            PropertyName::ConservativeMul => "conservative_mul",
            PropertyName::WeaklyConservative => "weakly_conservative",
        }
    }

    /// Whether a characterized procedure exists for this property.
    pub fn has_characterization(self) -> bool {
        matches!(
            self,
            PropertyName::Associative
                | PropertyName::Commutative
                | PropertyName::Idempotent
                | PropertyName::HasIdentity
        )
    }
}

impl fmt::Display for PropertyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PropertyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PropertyName::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown property `{s}`")))
    }
}

/// How a property is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Evaluate the defining condition over all tuples.
    Brute,
    /// Evaluate an equivalent condition on `p` and `q`, assuming `mul` is
    /// the unary-determined product `(px ∧ y) ∨ (x ∧ qy)`.
    Characterized,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Method::Brute),
            "characterized" => Ok(Method::Characterized),
            _ => Err(Error::InvalidParameters(format!("unknown method `{s}`"))),
        }
    }
}

/// Decides `prop` on `a`. Failures carry the first witness in index order.
pub fn check_property(a: &FinAlgebra, prop: PropertyName, method: Method) -> Result<Verdict> {
    match method {
        Method::Brute => brute(a, prop),
        Method::Characterized => characterized(a, prop),
    }
}

fn brute(a: &FinAlgebra, prop: PropertyName) -> Result<Verdict> {
    let n = a.size();
    match prop {
        PropertyName::Associative => {
            let m = a.require_mul()?;
            for x in 0..n {
                for y in 0..n {
                    let xy = m[x * n + y];
                    for z in 0..n {
                        if m[xy * n + z] != m[x * n + m[y * n + z]] {
                            return Ok(Verdict::fail("(xy)z = x(yz)", [x, y, z]));
                        }
                    }
                }
            }
            Ok(Verdict::Holds)
        }
        PropertyName::Commutative => {
            let m = a.require_mul()?;
            for x in 0..n {
                for y in x + 1..n {
                    if m[x * n + y] != m[y * n + x] {
                        return Ok(Verdict::fail("xy = yx", [x, y]));
                    }
                }
            }
            Ok(Verdict::Holds)
        }
        PropertyName::Idempotent => {
            let m = a.require_mul()?;
            Ok(match (0..n).find(|&x| m[x * n + x] != x) {
                Some(x) => Verdict::fail("xx = x", [x]),
                None => Verdict::Holds,
            })
        }
        PropertyName::UnaryDetermined => unary_determined(a),
        PropertyName::HasIdentity => {
            a.require_mul()?;
            Ok(match find_identity_element(a)? {
                Some(_) => Verdict::Holds,
                None => Verdict::fail("identity exists", Vec::new()),
            })
        }
        PropertyName::Normal => {
            if a.mul_table().is_none() && a.p_table().is_none() {
                return Err(Error::Missing("mul or p"));
            }
            Ok(a.normality())
        }
        PropertyName::DlpqAxioms => a.dlpq_axioms(),
        PropertyName::ClosureP => closure(a),
        PropertyName::ConservativeMul => {
            let m = a.require_mul()?;
            for x in 0..n {
                for y in 0..n {
                    let v = m[x * n + y];
                    if v != x && v != y {
                        return Ok(Verdict::fail("xy ∈ {x, y}", [x, y]));
                    }
                }
            }
            Ok(Verdict::Holds)
        }
        PropertyName::WeaklyConservative => {
            let m = a.require_mul()?;
            if a.size() == 1 {
                return Ok(Verdict::Holds);
            }
            if !a.lattice().is_distributive() {
                return Err(Error::NotDistributive(
                    a.lattice().distributivity().witness().cloned().expect("fails"),
                ));
            }
            let js = a.lattice().join_irreducibles()?.elements;
            for &x in &js {
                for &y in &js {
                    let v = m[x * n + y];
                    if v != a.meet(x, y) && v != x && v != y && v != a.join(x, y) {
                        return Ok(Verdict::fail("xy ∈ {x∧y, x, y, x∨y}", [x, y]));
                    }
                }
            }
            Ok(Verdict::Holds)
        }
    }
}

fn characterized(a: &FinAlgebra, prop: PropertyName) -> Result<Verdict> {
    let n = a.size();
    let t = a.top();
    match prop {
        PropertyName::Commutative => {
            let p = a.require_p()?;
            let q = a.require_q()?;
            Ok(match (0..n).find(|&x| p[x] != q[x]) {
                Some(x) => Verdict::fail("p = q", [x]),
                None => Verdict::Holds,
            })
        }
        PropertyName::Idempotent => {
            let p = a.require_p()?;
            let q = a.require_q()?;
            Ok(if p[t] != t {
                Verdict::fail("p⊤ = ⊤", [t])
            } else if q[t] != t {
                Verdict::fail("q⊤ = ⊤", [t])
            } else {
                Verdict::Holds
            })
        }
        PropertyName::Associative => {
            let p = a.require_p()?;
            let q = a.require_q()?;
            if p == q {
                if closure(a)?.holds() {
                    assoc_closure_inequality(a, ClosureReading::Meet)
                } else {
                    assoc_commutative_identity(a)
                }
            } else if p[t] == t && q[t] == t {
                assoc_idempotent_identities(a)
            } else {
                Err(Error::NoCharacterization("associative"))
            }
        }
        PropertyName::HasIdentity => {
            let p = a.require_p()?;
            let q = a.require_q()?;
            let found = (0..n).any(|e| {
                p[e] == t
                    && q[e] == t
                    && (0..n).all(|x| a.leq(a.meet(a.join(p[x], q[x]), e), x))
            });
            Ok(if found {
                Verdict::Holds
            } else {
                Verdict::fail("p1 = ⊤ = q1 and (px∨qx)∧1 ≤ x for some 1", Vec::new())
            })
        }
        other => Err(Error::NoCharacterization(other.name())),
    }
}

/// With `p = q`: associativity holds iff
/// `p((px∧y)∨(x∧py)) = (px∧py)∨(x∧ppy)` for all `x, y`.
pub fn assoc_commutative_identity(a: &FinAlgebra) -> Result<Verdict> {
    let p = a.require_p()?;
    if a.require_q()? != p {
        return Err(Error::NoCharacterization("associative (needs p = q)"));
    }
    let n = a.size();
    for x in 0..n {
        for y in 0..n {
            let l = p[a.join(a.meet(p[x], y), a.meet(x, p[y]))];
            let r = a.join(a.meet(p[x], p[y]), a.meet(x, p[p[y]]));
            if l != r {
                return Ok(Verdict::fail("p((px∧y)∨(x∧py)) = (px∧py)∨(x∧ppy)", [x, y]));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// With `p⊤ = ⊤ = q⊤`: associativity holds iff, writing `s = (px∧y)∨(x∧qy)`,
/// `ps = (px∧py)∨(x∧qy)` and `qs = (px∧y)∨(qx∧qy)`.
pub fn assoc_idempotent_identities(a: &FinAlgebra) -> Result<Verdict> {
    let p = a.require_p()?;
    let q = a.require_q()?;
    let t = a.top();
    if p[t] != t || q[t] != t {
        return Err(Error::NoCharacterization("associative (needs p⊤ = ⊤ = q⊤)"));
    }
    let n = a.size();
    for x in 0..n {
        for y in 0..n {
            let s = a.join(a.meet(p[x], y), a.meet(x, q[y]));
            if p[s] != a.join(a.meet(p[x], p[y]), a.meet(x, q[y])) {
                return Ok(Verdict::fail("p((px∧y)∨(x∧qy)) = (px∧py)∨(x∧qy)", [x, y]));
            }
            if q[s] != a.join(a.meet(p[x], y), a.meet(q[x], q[y])) {
                return Ok(Verdict::fail("q((px∧y)∨(x∧qy)) = (px∧y)∨(qx∧qy)", [x, y]));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Which inner connective the closure-operator inequality uses.
///
/// The inequality `px∧py ≤ p((px∧y) ∘ (x ∘' py))` characterizes
/// associativity for closure operators when the inner term is
/// `(px∧y)∨(x∧py)`. With a join in place of the inner meet the right side
/// is at least `p(py) = py ≥ px∧py`, so that reading holds for every
/// closure operator and decides nothing; it is kept to make that visible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureReading {
    /// `px∧py ≤ p((px∧y)∨(x∧py))`.
    Meet,
    /// `px∧py ≤ p((px∧y)∨(x∨py))`.
    Join,
}

/// For a closure operator `p = q`: the two-variable associativity test.
pub fn assoc_closure_inequality(a: &FinAlgebra, reading: ClosureReading) -> Result<Verdict> {
    let p = a.require_p()?;
    if a.require_q()? != p {
        return Err(Error::NoCharacterization("associative (needs p = q)"));
    }
    if !closure(a)?.holds() {
        return Err(Error::NoCharacterization("associative (needs a closure operator)"));
    }
    let n = a.size();
    for x in 0..n {
        for y in 0..n {
            let inner = match reading {
                ClosureReading::Meet => a.meet(x, p[y]),
                ClosureReading::Join => a.join(x, p[y]),
            };
            let r = p[a.join(a.meet(p[x], y), inner)];
            if !a.leq(a.meet(p[x], p[y]), r) {
                return Ok(Verdict::fail("px∧py ≤ p((px∧y)∨(x∧py))", [x, y]));
            }
        }
    }
    Ok(Verdict::Holds)
}

fn closure(a: &FinAlgebra) -> Result<Verdict> {
    let p = a.require_p()?;
    let n = a.size();
    for x in 0..n {
        if !a.leq(x, p[x]) {
            return Ok(Verdict::fail("x ≤ px", [x]));
        }
        if p[p[x]] != p[x] {
            return Ok(Verdict::fail("ppx = px", [x]));
        }
        for y in 0..n {
            if a.leq(x, y) && !a.leq(p[x], p[y]) {
                return Ok(Verdict::fail("x ≤ y implies px ≤ py", [x, y]));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Order-preserving, inflationary and idempotent.
pub fn is_closure_operator(a: &FinAlgebra) -> Result<bool> {
    Ok(closure(a)?.holds())
}

/// The two-sided identity of `mul`, if any.
pub fn find_identity_element(a: &FinAlgebra) -> Result<Option<usize>> {
    let m = a.require_mul()?;
    let n = a.size();
    Ok((0..n).find(|&e| (0..n).all(|x| m[e * n + x] == x && m[x * n + e] == x)))
}

/// Pointwise laws of `p`, `q` and a distinguished element, matched by
/// conditions on frames.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorLaw {
    /// `x ≤ px`.
    Inflationary,
    /// `ppx ≤ px`.
    SquareBelow,
    /// `px = qx`.
    PEqualsQ,
    /// `pe = ⊤` for the given element `e`.
    CoversTop(usize),
    /// `px ∧ e ≤ x` for the given element `e`.
    BoundedBy(usize),
    /// `px∧py ≤ p((px∧y)∨(x∧py))`.
    AssocInequality,
}

pub fn check_law(a: &FinAlgebra, law: OperatorLaw) -> Result<Verdict> {
    let p = a.require_p()?;
    let n = a.size();
    let fail = |name, t: &[usize]| Ok(Verdict::fail(name, t.to_vec()));
    match law {
        OperatorLaw::Inflationary => {
            if let Some(x) = (0..n).find(|&x| !a.leq(x, p[x])) {
                return fail("x ≤ px", &[x]);
            }
        }
        OperatorLaw::SquareBelow => {
            if let Some(x) = (0..n).find(|&x| !a.leq(p[p[x]], p[x])) {
                return fail("ppx ≤ px", &[x]);
            }
        }
        OperatorLaw::PEqualsQ => {
            let q = a.require_q()?;
            if let Some(x) = (0..n).find(|&x| p[x] != q[x]) {
                return fail("px = qx", &[x]);
            }
        }
        OperatorLaw::CoversTop(e) => {
            if p[e] != a.top() {
                return fail("p1 = ⊤", &[e]);
            }
        }
        OperatorLaw::BoundedBy(e) => {
            if let Some(x) = (0..n).find(|&x| !a.leq(a.meet(p[x], e), x)) {
                return fail("px ∧ 1 ≤ x", &[x]);
            }
        }
        OperatorLaw::AssocInequality => {
            for x in 0..n {
                for y in 0..n {
                    let r = p[a.join(a.meet(p[x], y), a.meet(x, p[y]))];
                    if !a.leq(a.meet(p[x], p[y]), r) {
                        return fail("px∧py ≤ p((px∧y)∨(x∧py))", &[x, y]);
                    }
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{mul_from_pq, Signature};
    use crate::poset::FinLattice;

    fn dlp(l: FinLattice, p: Vec<usize>) -> FinAlgebra {
        mul_from_pq(&FinAlgebra::new(l).with_p(p).unwrap()).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for p in PropertyName::ALL {
            assert_eq!(p.name().parse::<PropertyName>().unwrap(), p);
        }
        assert!("assoc".parse::<PropertyName>().is_err());
    }

    #[test]
    fn meet_is_associative_both_ways() {
        let a = dlp(FinLattice::chain(4), vec![0, 1, 2, 3]);
        for m in [Method::Brute, Method::Characterized] {
            assert!(check_property(&a, PropertyName::Associative, m).unwrap().holds());
            assert!(check_property(&a, PropertyName::Commutative, m).unwrap().holds());
            assert!(check_property(&a, PropertyName::Idempotent, m).unwrap().holds());
            assert!(check_property(&a, PropertyName::HasIdentity, m).unwrap().holds());
        }
        assert_eq!(find_identity_element(&a).unwrap(), Some(3));
    }

    #[test]
    fn p_differs_from_q() {
        let a = FinAlgebra::new(FinLattice::chain(3))
            .with_p(vec![0, 2, 2])
            .unwrap()
            .with_q(vec![0, 1, 2])
            .unwrap();
        let a = mul_from_pq(&a).unwrap();
        let c = check_property(&a, PropertyName::Commutative, Method::Characterized).unwrap();
        assert!(!c.holds());
        let b = check_property(&a, PropertyName::Commutative, Method::Brute).unwrap();
        assert!(!b.holds());
    }

    #[test]
    fn missing_parts_are_errors() {
        let a = FinAlgebra::new(FinLattice::chain(3));
        assert_eq!(
            check_property(&a, PropertyName::Associative, Method::Brute),
            Err(Error::Missing("mul"))
        );
        let l = FinLattice::chain(3);
        let meet: Vec<usize> = (0..9).map(|i| l.meet(i / 3, i % 3)).collect();
        let m = FinAlgebra::new(l).with_mul(meet).unwrap();
        assert_eq!(
            check_property(&m, PropertyName::Associative, Method::Characterized),
            Err(Error::Missing("p"))
        );
        assert!(matches!(
            check_property(&m.reduct(Signature::MUL), PropertyName::Normal, Method::Characterized),
            Err(Error::NoCharacterization(_))
        ));
    }

    #[test]
    fn closure_examples() {
        let id = FinAlgebra::new(FinLattice::chain(3)).with_p(vec![0, 1, 2]).unwrap();
        assert!(is_closure_operator(&id).unwrap());
        let top = FinAlgebra::new(FinLattice::chain(3)).with_p(vec![0, 2, 2]).unwrap();
        assert!(is_closure_operator(&top).unwrap());
        let down = FinAlgebra::new(FinLattice::chain(3)).with_p(vec![0, 0, 1]).unwrap();
        assert!(!is_closure_operator(&down).unwrap());
    }

    #[test]
    fn join_reading_is_vacuous_for_closures() {
        let a = dlp(FinLattice::chain(4), vec![0, 3, 3, 3]);
        assert!(assoc_closure_inequality(&a, ClosureReading::Join).unwrap().holds());
    }

    #[test]
    fn identity_characterization() {
        // p⊤ is not ⊤, so no element can satisfy p1 = ⊤.
        let a = dlp(FinLattice::chain(3), vec![0, 1, 1]);
        assert_eq!(find_identity_element(&a).unwrap(), None);
        assert!(!check_property(&a, PropertyName::HasIdentity, Method::Characterized)
            .unwrap()
            .holds());
        let b = dlp(FinLattice::chain(4), vec![0, 1, 3, 3]);
        assert_eq!(find_identity_element(&b).unwrap(), Some(2));
        assert!(check_property(&b, PropertyName::HasIdentity, Method::Characterized)
            .unwrap()
            .holds());
    }

    #[test]
    fn laws() {
        let a = dlp(FinLattice::chain(3), vec![0, 2, 2]);
        assert!(check_law(&a, OperatorLaw::Inflationary).unwrap().holds());
        assert!(check_law(&a, OperatorLaw::SquareBelow).unwrap().holds());
        assert!(check_law(&a, OperatorLaw::CoversTop(1)).unwrap().holds());
        assert!(check_law(&a, OperatorLaw::BoundedBy(1)).unwrap().holds());
        assert!(!check_law(&a, OperatorLaw::BoundedBy(2)).unwrap().holds());
        assert_eq!(find_identity_element(&a).unwrap(), Some(1));
    }
}
