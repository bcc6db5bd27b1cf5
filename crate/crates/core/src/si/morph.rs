//! Subalgebras, quotients and operation-preserving maps.

use crate::algebra::{FinAlgebra, Signature};
use crate::bits::ones128;
use crate::canon::Canonical;
use crate::error::{Error, Result};
use crate::poset::FinLattice;

use super::{congruence_lattice, is_congruence, Partition};

fn same_signature(a: &FinAlgebra, b: &FinAlgebra) -> Result<()> {
    let (sa, sb) = (a.signature() & Signature::PARTS, b.signature() & Signature::PARTS);
    if sa != sb {
        return Err(Error::SignatureMismatch(format!("{sa:?} vs {sb:?}")));
    }
    Ok(())
}

/// Bounds and the identity, when present.
fn constants(a: &FinAlgebra) -> Vec<usize> {
    let mut c = vec![a.bot(), a.top()];
    c.extend(a.one());
    c
}

/// Whether `f` preserves the bounds, the identity and every operation.
pub fn is_homomorphism(a: &FinAlgebra, b: &FinAlgebra, f: &[usize]) -> bool {
    let n = a.size();
    if same_signature(a, b).is_err() || f.len() != n || f.iter().any(|&y| y >= b.size()) {
        return false;
    }
    let consts_ok = constants(a).iter().zip(constants(b)).all(|(&x, y)| f[x] == y);
    let m = b.size();
    consts_ok
        && a.unary_tables().iter().zip(b.unary_tables()).all(|(s, t)| (0..n).all(|x| f[s[x]] == t[f[x]]))
        && a.binary_tables().iter().zip(b.binary_tables()).all(|(s, t)| {
            (0..n).all(|x| (0..n).all(|y| f[s[x * n + y]] == t[f[x] * m + f[y]]))
        })
}

/// `a / θ`; fails if `θ` is not a congruence.
pub fn quotient(a: &FinAlgebra, theta: &Partition) -> Result<FinAlgebra> {
    if !is_congruence(a, theta) {
        return Err(Error::InvalidParameters("partition is not a congruence".into()));
    }
    let reps: Vec<usize> = theta.classes().iter().map(|c| c[0]).collect();
    let lattice = FinLattice::from_join_table(reps.len(), |x, y| theta.block_of(a.join(reps[x], reps[y])))?;
    Ok(a.transport(lattice, &reps, |x| theta.block_of(x)))
}

fn closure_mask(a: &FinAlgebra, mut s: u128) -> u128 {
    let n = a.size();
    let un = a.unary_tables();
    let bin = a.binary_tables();
    loop {
        let mut next = s;
        for x in ones128(s) {
            for t in &un {
                next |= 1 << t[x];
            }
            for y in ones128(s) {
                for t in &bin {
                    next |= 1 << t[x * n + y];
                }
            }
        }
        if next == s {
            return s;
        }
        s = next;
    }
}

/// Every subuniverse containing the constants, as element masks in
/// increasing order.
pub fn subuniverses(a: &FinAlgebra) -> Vec<u128> {
    let base = closure_mask(a, constants(a).iter().fold(0, |m, &c| m | 1 << c));
    let mut seen = std::collections::BTreeSet::from([base]);
    let mut frontier = vec![base];
    while let Some(s) = frontier.pop() {
        for x in 0..a.size() {
            if s >> x & 1 == 0 {
                let t = closure_mask(a, s | 1 << x);
                if seen.insert(t) {
                    frontier.push(t);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// The subalgebra on `mask`, elements in increasing order of index.
pub fn subalgebra(a: &FinAlgebra, mask: u128) -> Result<FinAlgebra> {
    if mask >> a.size() != 0 || closure_mask(a, mask) != mask || constants(a).iter().any(|&c| mask >> c & 1 == 0) {
        return Err(Error::InvalidParameters("not a subuniverse".into()));
    }
    let elems: Vec<usize> = ones128(mask).collect();
    let lattice = FinLattice::from_poset(a.lattice().order().induced(&elems)?)?;
    let pos = |x: usize| (mask & ((1u128 << x) - 1)).count_ones() as usize;
    Ok(a.transport(lattice, &elems, pos))
}

/// An injective homomorphism from `a` into `b`, found by backtracking over
/// the elements of `a` with every operation checked as soon as its
/// arguments and value are mapped.
pub fn embeds(a: &FinAlgebra, b: &FinAlgebra) -> Result<Option<Vec<usize>>> {
    same_signature(a, b)?;
    if a.size() > b.size() {
        return Ok(None);
    }
    let mut s = Embedding::new(a, b);
    for (x, y) in constants(a).into_iter().zip(constants(b)) {
        match s.f[x] {
            Some(z) if z != y => return Ok(None),
            Some(_) => {}
            None if s.used >> y & 1 == 1 => return Ok(None),
            None => {
                s.f[x] = Some(y);
                s.used |= 1 << y;
            }
        }
    }
    if !(0..a.size()).all(|x| s.f[x].is_none() || s.consistent(x)) {
        return Ok(None);
    }
    let order: Vec<usize> = a.lattice().order().linear_extension().into_iter().filter(|&x| s.f[x].is_none()).collect();
    Ok(s.search(&order).then(|| s.f.iter().map(|y| y.expect("complete")).collect()))
}

struct Embedding<'a> {
    a: &'a FinAlgebra,
    b: &'a FinAlgebra,
    un: Vec<(&'a [usize], &'a [usize])>,
    bin: Vec<(&'a [usize], &'a [usize])>,
    f: Vec<Option<usize>>,
    used: u128,
}

impl<'a> Embedding<'a> {
    fn new(a: &'a FinAlgebra, b: &'a FinAlgebra) -> Self {
        Embedding {
            a,
            b,
            un: a.unary_tables().into_iter().zip(b.unary_tables()).collect(),
            bin: a.binary_tables().into_iter().zip(b.binary_tables()).collect(),
            f: vec![None; a.size()],
            used: 0,
        }
    }

    /// Checks every mapped instance that involves `x`.
    fn consistent(&self, x: usize) -> bool {
        let (n, m) = (self.a.size(), self.b.size());
        let f = &self.f;
        for (s, t) in &self.un {
            for u in 0..n {
                if let (Some(fu), Some(fv)) = (f[u], f[s[u]]) {
                    if (u == x || s[u] == x) && t[fu] != fv {
                        return false;
                    }
                }
            }
        }
        for (s, t) in &self.bin {
            for u in 0..n {
                let Some(fu) = f[u] else { continue };
                for v in 0..n {
                    let Some(fv) = f[v] else { continue };
                    let w = s[u * n + v];
                    if let Some(fw) = f[w] {
                        if (u == x || v == x || w == x) && t[fu * m + fv] != fw {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn search(&mut self, order: &[usize]) -> bool {
        let Some((&x, rest)) = order.split_first() else { return true };
        for y in 0..self.b.size() {
            if self.used >> y & 1 == 1 {
                continue;
            }
            self.f[x] = Some(y);
            self.used |= 1 << y;
            if self.consistent(x) && self.search(rest) {
                return true;
            }
            self.used &= !(1 << y);
        }
        self.f[x] = None;
        false
    }
}

/// A surjective homomorphism from `a` onto `b`: some congruence of `a`
/// whose quotient is isomorphic to `b`, composed with that isomorphism.
pub fn hom_onto(a: &FinAlgebra, b: &FinAlgebra) -> Result<Option<Vec<usize>>> {
    same_signature(a, b)?;
    if a.undeclared() == b.undeclared() {
        return Ok(Some((0..a.size()).collect()));
    }
    if b.size() > a.size() {
        return Ok(None);
    }
    let target = b.undeclared().canonical_form();
    for theta in congruence_lattice(a)?.congruences {
        if theta.block_count() != b.size() {
            continue;
        }
        let q = quotient(a, &theta)?;
        if q.undeclared().canonical_form() != target {
            continue;
        }
        let iso = embeds(&q, b)?.expect("isomorphic algebras embed");
        let f: Vec<usize> = (0..a.size()).map(|x| iso[theta.block_of(x)]).collect();
        debug_assert!(is_homomorphism(a, b, &f));
        return Ok(Some(f));
    }
    Ok(None)
}

/// Whether `a` is a homomorphic image of a subalgebra of `b`; returns the
/// subuniverse and the surjection from it.
pub fn in_hs(a: &FinAlgebra, b: &FinAlgebra) -> Result<Option<(u128, Vec<usize>)>> {
    same_signature(a, b)?;
    for s in subuniverses(b) {
        if (s.count_ones() as usize) < a.size() {
            continue;
        }
        if let Some(f) = hom_onto(&subalgebra(b, s)?, a)? {
            return Ok(Some((s, f)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::si::{build_chain, ChainFamilySpec};

    fn chain_p(p: Vec<usize>) -> FinAlgebra {
        FinAlgebra::new(FinLattice::chain(p.len())).with_p(p).unwrap()
    }

    #[test]
    fn quotients_and_subalgebras() {
        let a = chain_p(vec![0, 1, 2, 3]);
        let theta = Partition::from_labels(&[0, 0, 1, 2]);
        let q = quotient(&a, &theta).unwrap();
        assert_eq!(q.size(), 3);
        assert_eq!(q.p_table().unwrap(), &[0, 1, 2]);
        assert!(quotient(&chain_p(vec![0, 2, 2]), &Partition::from_labels(&[0, 0, 1])).is_err());
        let s = subuniverses(&a);
        assert_eq!(s.len(), 4);
        let sub = subalgebra(&a, 0b1001).unwrap();
        assert_eq!(sub.size(), 2);
        assert!(subalgebra(&a, 0b0110).is_err());
    }

    #[test]
    fn embeddings() {
        let a1 = chain_p(vec![0, 1]);
        let a2 = chain_p(vec![0, 2, 2]);
        assert_eq!(embeds(&a1, &a2).unwrap(), Some(vec![0, 2]));
        assert_eq!(embeds(&a2, &a1).unwrap(), None);
        let f = embeds(&a2, &a2).unwrap().unwrap();
        assert!(is_homomorphism(&a2, &a2, &f));
        assert!(embeds(&a1, &FinAlgebra::new(FinLattice::chain(2))).is_err());
        // p a1 = ⊤ cannot be matched inside a chain with p = id.
        assert_eq!(embeds(&a2, &chain_p(vec![0, 1, 2, 3])).unwrap(), None);
    }

    #[test]
    fn surjections() {
        let a = chain_p(vec![0, 1, 2, 3]);
        assert_eq!(hom_onto(&a, &a).unwrap(), Some(vec![0, 1, 2, 3]));
        let f = hom_onto(&a, &chain_p(vec![0, 1])).unwrap().unwrap();
        assert!(is_homomorphism(&a, &chain_p(vec![0, 1]), &f));
        // A simple algebra has no proper nontrivial image.
        let b1 = build_chain(ChainFamilySpec::BPrime(1)).unwrap();
        let a2 = build_chain(ChainFamilySpec::A(2)).unwrap();
        assert_eq!(hom_onto(&a2, &b1).unwrap(), None);
        let a1 = build_chain(ChainFamilySpec::A(1)).unwrap();
        assert_eq!(hom_onto(&b1, &a1).unwrap(), None);
        // p swaps the atoms of the four-element Boolean lattice.
        let swap = FinAlgebra::new(crate::poset::downset_lattice(&crate::Poset::antichain(2)).unwrap().lattice);
        let atoms: Vec<usize> = (0..4).filter(|&x| x != swap.bot() && x != swap.top()).collect();
        let mut p = vec![swap.bot(); 4];
        p[swap.top()] = swap.top();
        p[atoms[0]] = atoms[1];
        p[atoms[1]] = atoms[0];
        let swap = swap.with_p(p).unwrap();
        assert!(crate::si::is_simple(&swap).unwrap());
        assert_eq!(hom_onto(&swap, &a1).unwrap(), None);
        let (s, _) = in_hs(&a1, &a2).unwrap().unwrap();
        assert_eq!(s, 0b101);
    }
}
