//! Subdirectly irreducible dℓp-closure algebras and the reference
//! diagrams they are compared against.

use crate::algebra::{FinAlgebra, PropertyName, Signature};
use crate::enumeration::{enumerate_algebras, Census, ClassSpec, Search};
use crate::error::{Error, Result};
use crate::poset::{FinLattice, Poset};

use super::{is_subdirectly_irreducible, CONGRUENCE_LIMIT};

/// The dℓp-algebra on `lattice` whose `p` is the closure with fixed
/// points `closed`: `px` is the least closed element above `x`.
pub fn closure_algebra(lattice: FinLattice, closed: &[usize]) -> Result<FinAlgebra> {
    let n = lattice.size();
    if closed.iter().any(|&c| c >= n) {
        return Err(Error::Shape("closed element out of range".into()));
    }
    let p = (0..n)
        .map(|x| lattice.meet_all(closed.iter().copied().filter(|&c| lattice.leq(x, c)).chain([lattice.top()])))
        .collect::<Vec<_>>();
    let mut want = closed.to_vec();
    want.sort_unstable();
    want.dedup();
    if (0..n).filter(|&x| p[x] == x).ne(want) {
        return Err(Error::InvalidParameters("closed elements must contain ⊤ and be closed under meets".into()));
    }
    FinAlgebra::new(lattice).with_p(p)?.declare_normal()?.declare_dlpq()
}

/// A Hasse diagram with its closed elements marked.
#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub size: usize,
    /// Covering pairs `(lower, upper)`.
    pub covers: &'static [(usize, usize)],
    pub closed: &'static [usize],
}

impl Fixture {
    pub fn by_name(name: &str) -> Option<&'static Fixture> {
        SI_CLOSURE_FIXTURES.iter().find(|f| f.name == name)
    }

    pub fn lattice(&self) -> Result<FinLattice> {
        FinLattice::from_poset(Poset::from_relations(self.size, self.covers)?)
    }

    pub fn algebra(&self) -> Result<FinAlgebra> {
        closure_algebra(self.lattice()?, self.closed)
    }
}

const fn fx(
    name: &'static str,
    size: usize,
    covers: &'static [(usize, usize)],
    closed: &'static [usize],
) -> Fixture {
    Fixture { name, size, covers, closed }
}

const SQUARE: &[(usize, usize)] = &[(0, 1), (0, 2), (1, 3), (2, 3)];
const SQUARE_TOP: &[(usize, usize)] = &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)];
const TWO_BY_THREE: &[(usize, usize)] = &[(0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 5), (4, 5)];
const CUBE: &[(usize, usize)] =
    &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 4), (2, 6), (3, 5), (3, 6), (4, 7), (5, 7), (6, 7)];
const TWO_BY_FOUR: &[(usize, usize)] =
    &[(0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 5), (4, 5), (4, 6), (5, 7), (6, 7)];
const GLUED: &[(usize, usize)] =
    &[(0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 5), (3, 6), (4, 6), (5, 7), (6, 7)];

/// The eighteen subdirectly irreducible dℓp-closure algebras with at most
/// eight elements, each a lattice with its closed elements.
pub const SI_CLOSURE_FIXTURES: [Fixture; 18] = [
    fx("A1", 2, &[(0, 1)], &[0, 1]),
    fx("A2", 3, &[(0, 1), (1, 2)], &[0, 2]),
    fx("D1", 4, SQUARE, &[0, 3]),
    fx("D2", 4, SQUARE, &[0, 2, 3]),
    fx("D3", 5, SQUARE_TOP, &[0, 4]),
    fx("D4", 6, TWO_BY_THREE, &[0, 5]),
    fx("D5", 6, TWO_BY_THREE, &[0, 4, 5]),
    fx("D6", 6, TWO_BY_THREE, &[0, 2, 5]),
    fx("D7", 6, TWO_BY_THREE, &[0, 2, 3, 5]),
    fx("D8", 8, CUBE, &[0, 7]),
    fx("D9", 8, CUBE, &[0, 6, 7]),
    fx("D10", 8, CUBE, &[0, 3, 7]),
    fx("D11", 8, CUBE, &[0, 3, 6, 7]),
    fx("D12", 8, CUBE, &[0, 2, 4, 6, 7]),
    fx("D13", 8, TWO_BY_FOUR, &[0, 4, 7]),
    fx("D14", 8, TWO_BY_FOUR, &[0, 4, 5, 7]),
    fx("D15", 8, GLUED, &[0, 2, 3, 7]),
    fx("D16", 8, GLUED, &[0, 2, 3, 6, 7]),
];

/// All subdirectly irreducible dℓp-closure algebras with `2..=n_max`
/// elements up to isomorphism. Candidates come from the closure-algebra
/// enumeration; the SI test runs per candidate under `search.exec`.
pub fn si_census(n_max: usize, search: &Search) -> Result<Census<FinAlgebra>> {
    if n_max > CONGRUENCE_LIMIT {
        return Err(Error::TooLarge { what: "SI census", size: n_max, limit: CONGRUENCE_LIMIT });
    }
    let mut items = Vec::new();
    for n in 2..=n_max {
        let spec = ClassSpec::new(Signature::P, n).with(PropertyName::ClosureP);
        let candidates: Vec<FinAlgebra> = enumerate_algebras(&spec, search)?.members.into_iter().map(|m| m.item).collect();
        search.check()?;
        let keep = search.exec.map(&candidates, is_subdirectly_irreducible);
        for (a, k) in candidates.into_iter().zip(keep) {
            if k? {
                items.push(a);
            }
        }
    }
    Ok(Census::from_items(format!("SI dℓp-closure algebras, n ≤ {n_max}"), n_max, items, search.exec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{assoc_closure_inequality, is_closure_operator, ClosureReading};
    use crate::canon::Canonical;
    use crate::par::Exec;
    use crate::si::{build_chain, ChainFamilySpec};

    #[test]
    fn fixtures_are_si_closure_algebras() {
        for f in &SI_CLOSURE_FIXTURES {
            let a = f.algebra().unwrap_or_else(|e| panic!("{}: {e}", f.name));
            assert!(a.lattice().is_distributive(), "{}", f.name);
            assert!(is_closure_operator(&a).unwrap(), "{}", f.name);
            assert!(is_subdirectly_irreducible(&a).unwrap(), "{}", f.name);
            assert_eq!(a.closed_elements().unwrap(), f.closed, "{}", f.name);
        }
    }

    #[test]
    fn small_census_matches_fixtures() {
        let c = si_census(6, &Search::new(Exec::Sequential)).unwrap();
        let want: std::collections::BTreeSet<_> = SI_CLOSURE_FIXTURES
            .iter()
            .filter(|f| f.size <= 6)
            .map(|f| f.algebra().unwrap().canonical_form())
            .collect();
        assert_eq!(c.encodings(), want);
    }

    #[test]
    fn d12_breaks_the_closure_inequality() {
        let d12 = Fixture::by_name("D12").unwrap().algebra().unwrap();
        assert!(!assoc_closure_inequality(&d12, ClosureReading::Meet).unwrap().holds());
        for f in SI_CLOSURE_FIXTURES.iter().filter(|f| f.name != "D12") {
            assert!(assoc_closure_inequality(&f.algebra().unwrap(), ClosureReading::Meet).unwrap().holds(), "{}", f.name);
        }
    }

    #[test]
    fn chain_fixtures_are_chain_family_members() {
        for (name, k) in [("A1", 1), ("A2", 2)] {
            let f = Fixture::by_name(name).unwrap().algebra().unwrap();
            let c = build_chain(ChainFamilySpec::A(k)).unwrap();
            assert_eq!(f.undeclared().canonical_form(), c.undeclared().canonical_form());
        }
    }

    #[test]
    fn rejects_bad_closed_sets() {
        let l = FinLattice::from_poset(Poset::from_relations(4, SQUARE).unwrap()).unwrap();
        assert!(closure_algebra(l.clone(), &[0, 1, 2, 3]).is_ok());
        // ⊥ = 1 ∧ 2 is then closed as well.
        assert!(closure_algebra(l.clone(), &[1, 2, 3]).is_err());
        assert!(closure_algebra(l, &[0, 1]).is_err());
    }
}
