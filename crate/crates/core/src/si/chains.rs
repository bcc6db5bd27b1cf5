//! The finite subdirectly irreducible dℓp-chains and the unary-determined
//! BI-chains.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{mul_from_pq, residuals, FinAlgebra, Signature};
use crate::error::{Error, Result};
use crate::poset::FinLattice;

/// One member of a chain family. Elements are numbered from ⊥ = 0 up to
/// ⊤ = size − 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainFamilySpec {
    /// `⊤ = a₀ > a₁ > … > a_{k−1} > ⊥` with `p aᵢ = aᵢ₋₁`, `p⊤ = ⊤`.
    A(usize),
    /// `⊥ = b₀ < b₁ < … < b_{k−1} < ⊤` with `p bᵢ = bᵢ₋₁`, `p⊤ = ⊤`.
    B(usize),
    /// As `B`, but `p⊤ = b_{k−1}`.
    BPrime(usize),
    /// The `n`-chain `c₀ < … < c_{n−1}` whose closed elements are those
    /// below `1 = c_k` and ⊤, with the product `(px∧y)∨(x∧py)`, its
    /// identity and the Heyting and product residuals.
    C { n: usize, k: usize },
}

impl ChainFamilySpec {
    pub fn validate(self) -> Result<()> {
        let ok = match self {
            ChainFamilySpec::A(k) | ChainFamilySpec::B(k) | ChainFamilySpec::BPrime(k) => k >= 1,
            ChainFamilySpec::C { n, k } => 1 <= k && k < n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameters(format!("no chain {self}")))
        }
    }

    pub fn size(self) -> usize {
        match self {
            ChainFamilySpec::A(k) | ChainFamilySpec::B(k) | ChainFamilySpec::BPrime(k) => k + 1,
            ChainFamilySpec::C { n, .. } => n,
        }
    }

    /// The `p` table; for `C` the closure whose fixed points are the
    /// closed elements.
    pub fn p_table(self) -> Vec<usize> {
        let n = self.size();
        match self {
            ChainFamilySpec::A(k) => (0..=k).map(|x| if x == 0 { 0 } else { (x + 1).min(k) }).collect(),
            ChainFamilySpec::B(k) => (0..=k).map(|x| if x == k { k } else { x.saturating_sub(1) }).collect(),
            ChainFamilySpec::BPrime(k) => (0..=k).map(|x| x.saturating_sub(1)).collect(),
            ChainFamilySpec::C { k, .. } => (0..n).map(|x| if x < k { x } else { n - 1 }).collect(),
        }
    }
}

impl fmt::Display for ChainFamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainFamilySpec::A(k) => write!(f, "A:{k}"),
            ChainFamilySpec::B(k) => write!(f, "B:{k}"),
            ChainFamilySpec::BPrime(k) => write!(f, "Bp:{k}"),
            ChainFamilySpec::C { n, k } => write!(f, "C:{n},{k}"),
        }
    }
}

impl FromStr for ChainFamilySpec {
    type Err = Error;

    /// `A:k`, `B:k`, `Bp:k` or `C:n,k`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("bad chain `{s}`; expected A:k, B:k, Bp:k or C:n,k"));
        let (fam, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let spec = match (fam.trim(), nums.as_slice()) {
            ("A", &[k]) => ChainFamilySpec::A(k),
            ("B", &[k]) => ChainFamilySpec::B(k),
            ("Bp" | "B'", &[k]) => ChainFamilySpec::BPrime(k),
            ("C", &[n, k]) => ChainFamilySpec::C { n, k },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// The dℓp-chains carry a normal `p`; the BI-chains carry `mul`, its
/// identity and the residuals `→`, `\`, `/`.
pub fn build_chain(spec: ChainFamilySpec) -> Result<FinAlgebra> {
    spec.validate()?;
    let a = FinAlgebra::new(FinLattice::chain(spec.size())).with_p(spec.p_table())?;
    match spec {
        ChainFamilySpec::C { k, .. } => {
            let m = mul_from_pq(&a)?.with_one(k)?;
            Ok(residuals(&m)?.reduct(
                Signature::MUL | Signature::ONE | Signature::HEYTING | Signature::LDIV | Signature::RDIV,
            ))
        }
        _ => a.declare_normal(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_property, is_closure_operator, Method, PropertyName};
    use crate::canon::Canonical;

    #[test]
    fn tables() {
        assert_eq!(ChainFamilySpec::A(1).p_table(), vec![0, 1]);
        assert_eq!(ChainFamilySpec::A(3).p_table(), vec![0, 2, 3, 3]);
        assert_eq!(ChainFamilySpec::B(3).p_table(), vec![0, 0, 1, 3]);
        assert_eq!(ChainFamilySpec::BPrime(3).p_table(), vec![0, 0, 1, 2]);
        assert_eq!(ChainFamilySpec::BPrime(1).p_table(), vec![0, 0]);
        assert_eq!(ChainFamilySpec::C { n: 4, k: 2 }.p_table(), vec![0, 1, 3, 3]);
    }

    #[test]
    fn parse_and_display() {
        for s in ["A:3", "B:1", "Bp:2", "C:5,2"] {
            assert_eq!(s.parse::<ChainFamilySpec>().unwrap().to_string(), s);
        }
        assert!("C:3,3".parse::<ChainFamilySpec>().is_err());
        assert!("A:0".parse::<ChainFamilySpec>().is_err());
        assert!("D:1".parse::<ChainFamilySpec>().is_err());
        assert!(build_chain(ChainFamilySpec::C { n: 2, k: 0 }).is_err());
    }

    #[test]
    fn bi_chains() {
        // C(2,1) is the two-element Boolean algebra: product = meet, 1 = ⊤.
        let c = build_chain(ChainFamilySpec::C { n: 2, k: 1 }).unwrap();
        assert_eq!(c.one(), Some(1));
        assert_eq!(c.mul_table().unwrap(), &[0, 0, 0, 1]);
        assert_eq!(c.heyting_table().unwrap(), &[1, 1, 0, 1]);
        for n in 2..=7 {
            let forms: std::collections::BTreeSet<_> = (1..n)
                .map(|k| {
                    let c = build_chain(ChainFamilySpec::C { n, k }).unwrap();
                    assert_eq!(c.one(), Some(k));
                    for prop in [PropertyName::Associative, PropertyName::Commutative, PropertyName::Idempotent] {
                        assert!(check_property(&c, prop, Method::Brute).unwrap().holds());
                    }
                    c.canonical_form()
                })
                .collect();
            assert_eq!(forms.len(), n - 1);
        }
    }

    #[test]
    fn closure_members() {
        for k in 1..=6 {
            let a = build_chain(ChainFamilySpec::A(k)).unwrap();
            assert_eq!(is_closure_operator(&a).unwrap(), k <= 2);
            let b = build_chain(ChainFamilySpec::B(k)).unwrap();
            assert_eq!(is_closure_operator(&b).unwrap(), k == 1);
        }
        assert!(!is_closure_operator(&build_chain(ChainFamilySpec::BPrime(1)).unwrap()).unwrap());
    }
}
