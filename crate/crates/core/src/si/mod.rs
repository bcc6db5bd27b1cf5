//! Congruence lattices, subdirect irreducibility, the standard SI chains
//! and homomorphisms between small algebras.
//!
//! Congruences are generated by closing a set of identified pairs under
//! every unary polynomial translation of every operation: fix all but one
//! argument of a fundamental operation to constants. Joins of congruences
//! are joins of equivalence relations, so the whole lattice is the join
//! closure of the principal congruences.

mod census;
mod chains;
mod morph;

use crate::algebra::FinAlgebra;
use crate::error::{Error, Result};

pub use census::{closure_algebra, si_census, Fixture, SI_CLOSURE_FIXTURES};
pub use chains::{build_chain, ChainFamilySpec};
pub use morph::{embeds, hom_onto, in_hs, is_homomorphism, quotient, subalgebra, subuniverses};

/// Largest carrier for which full congruence lattices are computed.
pub const CONGRUENCE_LIMIT: usize = 10;

/// An equivalence relation on `0..n` as block ids, numbered by first
/// occurrence so that equal relations are equal values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block: Vec<usize>,
}

impl Partition {
    pub fn identity(n: usize) -> Self {
        Partition { block: (0..n).collect() }
    }

    pub fn total(n: usize) -> Self {
        Partition { block: vec![0; n] }
    }

    /// Any labelling of the blocks; it is renumbered.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let block = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(*l).or_insert(next)
            })
            .collect();
        Partition { block }
    }

    pub fn size(&self) -> usize {
        self.block.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block[x]
    }

    pub fn blocks(&self) -> &[usize] {
        &self.block
    }

    pub fn block_count(&self) -> usize {
        self.block.iter().max().map_or(0, |m| m + 1)
    }

    /// The blocks as sorted element lists, in block-id order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (x, &b) in self.block.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.block[x] == self.block[y]
    }

    pub fn is_identity(&self) -> bool {
        self.block_count() == self.size()
    }

    pub fn is_total(&self) -> bool {
        self.block_count() <= 1
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut image = vec![usize::MAX; self.block_count()];
        self.block.iter().zip(&other.block).all(|(&b, &o)| {
            let slot = &mut image[b];
            if *slot == usize::MAX {
                *slot = o;
            }
            *slot == o
        })
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(usize, usize)> = self.block.iter().copied().zip(other.block.iter().copied()).collect();
        let k = other.size().max(1);
        Partition::from_labels(&pairs.iter().map(|&(a, b)| a * k + b).collect::<Vec<_>>())
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let mut d = Dsu::new(self.size());
        for p in [self, other] {
            for c in p.classes() {
                for w in c.windows(2) {
                    d.union(w[0], w[1]);
                }
            }
        }
        d.partition()
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `x` and `y`; true if they were distinct.
    fn union(&mut self, x: usize, y: usize) -> bool {
        let (a, b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        self.parent[a.max(b)] = a.min(b);
        true
    }

    fn partition(&mut self) -> Partition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&roots)
    }
}

/// The least congruence containing `pairs`.
///
/// Only the pairs that actually merge two classes are queued; they span
/// the relation, so closing them under translations closes everything.
pub fn generated_congruence(a: &FinAlgebra, pairs: &[(usize, usize)]) -> Result<Partition> {
    let n = a.size();
    if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x >= n || y >= n) {
        return Err(Error::InvalidParameters(format!("pair ({x}, {y}) outside 0..{n}")));
    }
    let un = a.unary_tables();
    let bin = a.binary_tables();
    let mut d = Dsu::new(n);
    let mut queue: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(x, y)| d.union(x, y)).collect();
    while let Some((x, y)) = queue.pop() {
        let mut push = |u: usize, v: usize, d: &mut Dsu| {
            if d.union(u, v) {
                queue.push((u, v));
            }
        };
        for t in &un {
            push(t[x], t[y], &mut d);
        }
        for t in &bin {
            for c in 0..n {
                push(t[x * n + c], t[y * n + c], &mut d);
                push(t[c * n + x], t[c * n + y], &mut d);
            }
        }
    }
    Ok(d.partition())
}

/// The least congruence identifying `x` and `y`.
pub fn principal_congruence(a: &FinAlgebra, x: usize, y: usize) -> Result<Partition> {
    generated_congruence(a, &[(x, y)])
}

/// Exhaustive compatibility check against every operation table.
pub fn is_congruence(a: &FinAlgebra, theta: &Partition) -> bool {
    let n = a.size();
    if theta.size() != n {
        return false;
    }
    let classes = theta.classes();
    let unary_ok = a.unary_tables().iter().all(|t| {
        classes.iter().all(|c| c.iter().all(|&x| theta.related(t[x], t[c[0]])))
    });
    unary_ok
        && a.binary_tables().iter().all(|t| {
            classes.iter().all(|c| {
                c.iter().all(|&x| {
                    (0..n).all(|z| {
                        theta.related(t[x * n + z], t[c[0] * n + z])
                            && theta.related(t[z * n + x], t[z * n + c[0]])
                    })
                })
            })
        })
}

/// All congruences of an algebra, identity first and the total relation
/// last, with the monolith when there is one.
#[derive(Clone, Debug)]
pub struct CongruenceLattice {
    pub algebra: FinAlgebra,
    /// Ordered by decreasing number of blocks, then by block vector.
    pub congruences: Vec<Partition>,
    pub monolith: Option<Partition>,
}

impl CongruenceLattice {
    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    /// Minimal congruences above the identity.
    pub fn atoms(&self) -> Vec<&Partition> {
        let nontrivial: Vec<&Partition> = self.congruences.iter().filter(|c| !c.is_identity()).collect();
        nontrivial
            .iter()
            .copied()
            .filter(|c| !nontrivial.iter().any(|d| d != c && d.refines(c)))
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        self.len() == 2
    }

    pub fn is_subdirectly_irreducible(&self) -> bool {
        self.monolith.is_some()
    }
}

pub fn congruence_lattice(a: &FinAlgebra) -> Result<CongruenceLattice> {
    let n = a.size();
    if n > CONGRUENCE_LIMIT {
        return Err(Error::TooLarge { what: "congruence lattice", size: n, limit: CONGRUENCE_LIMIT });
    }
    let mut principal = std::collections::BTreeSet::new();
    for x in 0..n {
        for y in x + 1..n {
            principal.insert(principal_congruence(a, x, y)?);
        }
    }
    let principal: Vec<Partition> = principal.into_iter().collect();
    let mut all = std::collections::BTreeSet::from([Partition::identity(n)]);
    let mut frontier = vec![Partition::identity(n)];
    while let Some(c) = frontier.pop() {
        for p in &principal {
            let j = c.join(p);
            if all.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    let mut congruences: Vec<Partition> = all.into_iter().collect();
    congruences.sort_by(|x, y| y.block_count().cmp(&x.block_count()).then_with(|| x.cmp(y)));
    for c in &congruences {
        assert!(is_congruence(a, c), "generated relation {c:?} is not compatible");
    }
    let mut lat = CongruenceLattice { algebra: a.clone(), congruences, monolith: None };
    let atoms = lat.atoms();
    if atoms.len() == 1 {
        lat.monolith = Some(atoms[0].clone());
    }
    Ok(lat)
}

/// True iff the congruence lattice has a unique atom. The one-element
/// algebra has none.
pub fn is_subdirectly_irreducible(a: &FinAlgebra) -> Result<bool> {
    Ok(congruence_lattice(a)?.is_subdirectly_irreducible())
}

pub fn is_simple(a: &FinAlgebra) -> Result<bool> {
    Ok(congruence_lattice(a)?.is_simple())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::residuals;
    use crate::poset::FinLattice;

    fn chain_p(p: Vec<usize>) -> FinAlgebra {
        FinAlgebra::new(FinLattice::chain(p.len())).with_p(p).unwrap()
    }

    #[test]
    fn partition_operations() {
        let a = Partition::from_labels(&[7, 7, 3, 3, 5]);
        assert_eq!(a.blocks(), &[0, 0, 1, 1, 2]);
        let b = Partition::from_labels(&[0, 1, 1, 2, 2]);
        assert_eq!(a.join(&b), Partition::from_labels(&[0, 0, 0, 0, 0]));
        assert_eq!(a.meet(&b), Partition::from_labels(&[0, 1, 2, 3, 4]));
        assert!(Partition::identity(5).refines(&a));
        assert!(a.refines(&Partition::total(5)));
        assert!(!a.refines(&b));
        assert_eq!(a.classes(), vec![vec![0, 1], vec![2, 3], vec![4]]);
    }

    #[test]
    fn principal_congruences() {
        let a = chain_p(vec![0, 1]);
        assert!(principal_congruence(&a, 1, 1).unwrap().is_identity());
        assert!(principal_congruence(&a, 0, 1).unwrap().is_total());
        let four = chain_p(vec![0, 1, 2, 3]);
        let c = principal_congruence(&four, 1, 2).unwrap();
        assert!(!c.is_identity() && !c.is_total());
        assert!(is_congruence(&four, &c));
        assert!(principal_congruence(&four, 0, 9).is_err());
    }

    #[test]
    fn lattice_of_small_algebras() {
        let two = chain_p(vec![0, 1]);
        let l = congruence_lattice(&two).unwrap();
        assert!(l.is_simple() && l.is_subdirectly_irreducible());
        // p = id on a 4-chain: every interval partition is a congruence.
        let four = chain_p(vec![0, 1, 2, 3]);
        let l = congruence_lattice(&four).unwrap();
        assert_eq!(l.len(), 8);
        assert!(!l.is_subdirectly_irreducible());
        let sq = two.product(&two).unwrap();
        let l = congruence_lattice(&sq).unwrap();
        assert!(l.len() >= 4);
        assert!(!l.is_subdirectly_irreducible());
        assert!(!is_subdirectly_irreducible(&chain_p(vec![0])).unwrap());
    }

    #[test]
    fn heyting_chains_have_filter_congruences() {
        for n in 2..=7 {
            let a = residuals(&FinAlgebra::new(FinLattice::chain(n))).unwrap();
            let l = congruence_lattice(&a).unwrap();
            assert_eq!(l.len(), n);
            let mono = l.monolith.as_ref().unwrap();
            assert_eq!(mono.classes().iter().filter(|c| c.len() > 1).count(), 1);
            assert!(mono.related(n - 1, n - 2));
        }
    }

    #[test]
    fn size_limit() {
        let big = FinAlgebra::new(FinLattice::chain(CONGRUENCE_LIMIT + 1));
        assert!(matches!(congruence_lattice(&big), Err(Error::TooLarge { .. })));
    }
}
