//! Finite lattice-ordered algebras: dℓ-magmas, dℓpq-algebras and their
//! residuated expansions.
//!
//! A [`FinAlgebra`] is a [`FinLattice`] with optional operation tables.
//! Which tables are present is recorded in its [`Signature`]; asking for a
//! missing table is an error rather than a silent default. The one
//! exception is `q`: an algebra with `p` but no `q` is a dℓp-algebra, read
//! as `q = p`.

mod props;
mod residual;
mod term;

use bitflags::bitflags;

use crate::canon::{Canonical, Structure};
use crate::error::{Error, Result, Verdict};
use crate::poset::FinLattice;

pub use props::{
    assoc_closure_inequality, assoc_commutative_identity, assoc_idempotent_identities,
    check_law, check_property, find_identity_element, is_closure_operator, ClosureReading,
    Method, OperatorLaw, PropertyName,
};
pub use residual::{is_idempotent_boolean_magma_ud, residuals};
pub use term::{mul_from_pq, pq_from_mul};

bitflags! {
    /// Present tables and declared tags of a [`FinAlgebra`].
    #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
    pub struct Signature: u16 {
        const MUL = 1;
        const P = 1 << 1;
        const Q = 1 << 2;
        const P_STAR = 1 << 3;
        const Q_STAR = 1 << 4;
        const HEYTING = 1 << 5;
        const LDIV = 1 << 6;
        const RDIV = 1 << 7;
        const ONE = 1 << 8;
        /// Declared: present operators preserve ⊥.
        const NORMAL = 1 << 9;
        /// Declared: `x ∧ p⊤ ≤ qx` and `x ∧ q⊤ ≤ px`.
        const DLPQ = 1 << 10;
    }
}

impl Signature {
    /// Tags naming operation tables and constants, as opposed to declared
    /// axioms.
    pub const PARTS: Signature = Signature::MUL
        .union(Signature::P)
        .union(Signature::Q)
        .union(Signature::P_STAR)
        .union(Signature::Q_STAR)
        .union(Signature::HEYTING)
        .union(Signature::LDIV)
        .union(Signature::RDIV)
        .union(Signature::ONE);
}

/// A finite lattice with optional operations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAlgebra {
    lattice: FinLattice,
    mul: Option<Vec<usize>>,
    p: Option<Vec<usize>>,
    q: Option<Vec<usize>>,
    p_star: Option<Vec<usize>>,
    q_star: Option<Vec<usize>>,
    heyting: Option<Vec<usize>>,
    ldiv: Option<Vec<usize>>,
    rdiv: Option<Vec<usize>>,
    one: Option<usize>,
    declared: Signature,
}

fn check_unary_shape(n: usize, t: &[usize], name: &'static str) -> Result<()> {
    if t.len() != n || t.iter().any(|&v| v >= n) {
        return Err(Error::Shape(format!("`{name}` must have {n} entries below {n}")));
    }
    Ok(())
}

fn check_binary_shape(n: usize, t: &[usize], name: &'static str) -> Result<()> {
    if t.len() != n * n || t.iter().any(|&v| v >= n) {
        return Err(Error::Shape(format!(
            "`{name}` must have {} entries below {n}",
            n * n
        )));
    }
    Ok(())
}

impl FinAlgebra {
    /// The bare lattice, with no extra operations.
    pub fn new(lattice: FinLattice) -> Self {
        FinAlgebra {
            lattice,
            mul: None,
            p: None,
            q: None,
            p_star: None,
            q_star: None,
            heyting: None,
            ldiv: None,
            rdiv: None,
            one: None,
            declared: Signature::empty(),
        }
    }

    /// Attaches a binary operation (row-major) that must distribute over
    /// binary joins in each argument.
    pub fn with_mul(mut self, table: Vec<usize>) -> Result<Self> {
        check_binary_shape(self.size(), &table, "mul")?;
        self.operator2(&table).into_result(Error::Law)?;
        self.mul = Some(table);
        Ok(self)
    }

    /// Attaches a join-preserving unary operation `p`.
    pub fn with_p(mut self, table: Vec<usize>) -> Result<Self> {
        check_unary_shape(self.size(), &table, "p")?;
        self.operator1(&table, "p preserves joins").into_result(Error::Law)?;
        self.p = Some(table);
        Ok(self)
    }

    /// Attaches a join-preserving unary operation `q`.
    pub fn with_q(mut self, table: Vec<usize>) -> Result<Self> {
        check_unary_shape(self.size(), &table, "q")?;
        self.operator1(&table, "q preserves joins").into_result(Error::Law)?;
        self.q = Some(table);
        Ok(self)
    }

    /// Attaches an identity element for `mul`.
    pub fn with_one(mut self, e: usize) -> Result<Self> {
        let n = self.size();
        if e >= n {
            return Err(Error::Shape(format!("`one` must be below {n}")));
        }
        let mul = self.mul.as_ref().ok_or(Error::Missing("mul"))?;
        for x in 0..n {
            if mul[e * n + x] != x || mul[x * n + e] != x {
                return Err(Error::Law(crate::Witness::new("one is an identity", [x])));
            }
        }
        self.one = Some(e);
        Ok(self)
    }

    /// Declares normality; every present operator must send ⊥ to ⊥.
    pub fn declare_normal(mut self) -> Result<Self> {
        self.normality().into_result(Error::Law)?;
        self.declared |= Signature::NORMAL;
        Ok(self)
    }

    /// Declares the dℓpq axioms `x ∧ p⊤ ≤ qx` and `x ∧ q⊤ ≤ px`.
    pub fn declare_dlpq(mut self) -> Result<Self> {
        self.dlpq_axioms()?.into_result(Error::Law)?;
        self.declared |= Signature::DLPQ;
        Ok(self)
    }

    pub(crate) fn set_residual_tables(
        &mut self,
        heyting: Option<Vec<usize>>,
        ldiv: Option<Vec<usize>>,
        rdiv: Option<Vec<usize>>,
        p_star: Option<Vec<usize>>,
        q_star: Option<Vec<usize>>,
    ) {
        self.heyting = heyting;
        self.ldiv = ldiv;
        self.rdiv = rdiv;
        self.p_star = p_star;
        self.q_star = q_star;
    }

    pub fn lattice(&self) -> &FinLattice {
        &self.lattice
    }

    pub fn size(&self) -> usize {
        self.lattice.size()
    }

    pub fn top(&self) -> usize {
        self.lattice.top()
    }

    pub fn bot(&self) -> usize {
        self.lattice.bot()
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.lattice.leq(x, y)
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.lattice.join(x, y)
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.lattice.meet(x, y)
    }

    pub fn mul_table(&self) -> Option<&[usize]> {
        self.mul.as_deref()
    }

    pub fn p_table(&self) -> Option<&[usize]> {
        self.p.as_deref()
    }

    /// The explicit `q` table, if one was attached.
    pub fn q_table(&self) -> Option<&[usize]> {
        self.q.as_deref()
    }

    pub fn p_star_table(&self) -> Option<&[usize]> {
        self.p_star.as_deref()
    }

    pub fn q_star_table(&self) -> Option<&[usize]> {
        self.q_star.as_deref()
    }

    pub fn heyting_table(&self) -> Option<&[usize]> {
        self.heyting.as_deref()
    }

    pub fn ldiv_table(&self) -> Option<&[usize]> {
        self.ldiv.as_deref()
    }

    pub fn rdiv_table(&self) -> Option<&[usize]> {
        self.rdiv.as_deref()
    }

    pub fn one(&self) -> Option<usize> {
        self.one
    }

    /// Present tables plus declared tags.
    pub fn signature(&self) -> Signature {
        let mut s = self.declared;
        s.set(Signature::MUL, self.mul.is_some());
        s.set(Signature::P, self.p.is_some());
        s.set(Signature::Q, self.q.is_some());
        s.set(Signature::P_STAR, self.p_star.is_some());
        s.set(Signature::Q_STAR, self.q_star.is_some());
        s.set(Signature::HEYTING, self.heyting.is_some());
        s.set(Signature::LDIV, self.ldiv.is_some());
        s.set(Signature::RDIV, self.rdiv.is_some());
        s.set(Signature::ONE, self.one.is_some());
        s
    }

    /// `x · y`; panics if there is no `mul`.
    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul.as_ref().expect("mul present")[x * self.size() + y]
    }

    /// `p x`; panics if there is no `p`.
    #[inline]
    pub fn p(&self, x: usize) -> usize {
        self.p.as_ref().expect("p present")[x]
    }

    /// `q x`, falling back to `p` when no `q` was attached.
    #[inline]
    pub fn q(&self, x: usize) -> usize {
        match &self.q {
            Some(q) => q[x],
            None => self.p(x),
        }
    }

    pub(crate) fn require_mul(&self) -> Result<&[usize]> {
        self.mul.as_deref().ok_or(Error::Missing("mul"))
    }

    pub(crate) fn require_p(&self) -> Result<&[usize]> {
        self.p.as_deref().ok_or(Error::Missing("p"))
    }

    /// `q` if attached, else `p`.
    pub(crate) fn require_q(&self) -> Result<&[usize]> {
        match &self.q {
            Some(q) => Ok(q),
            None => self.require_p(),
        }
    }

    fn operator1(&self, t: &[usize], law: &'static str) -> Verdict {
        let n = self.size();
        for x in 0..n {
            for y in x..n {
                if t[self.join(x, y)] != self.join(t[x], t[y]) {
                    return Verdict::fail(law, [x, y]);
                }
            }
        }
        Verdict::Holds
    }

    fn operator2(&self, t: &[usize]) -> Verdict {
        let n = self.size();
        for x in 0..n {
            for y in 0..n {
                let j = self.join(x, y);
                for z in 0..n {
                    if t[j * n + z] != self.join(t[x * n + z], t[y * n + z]) {
                        return Verdict::fail("mul distributes over joins on the left", [x, y, z]);
                    }
                    if t[z * n + j] != self.join(t[z * n + x], t[z * n + y]) {
                        return Verdict::fail("mul distributes over joins on the right", [z, x, y]);
                    }
                }
            }
        }
        Verdict::Holds
    }

    /// Every present operator sends ⊥ to ⊥.
    pub(crate) fn normality(&self) -> Verdict {
        let n = self.size();
        let b = self.bot();
        if let Some(m) = &self.mul {
            for x in 0..n {
                if m[b * n + x] != b || m[x * n + b] != b {
                    return Verdict::fail("mul is normal", [x]);
                }
            }
        }
        if let Some(p) = &self.p {
            if p[b] != b {
                return Verdict::fail("p is normal", [b]);
            }
        }
        if let Some(q) = &self.q {
            if q[b] != b {
                return Verdict::fail("q is normal", [b]);
            }
        }
        Verdict::Holds
    }

    pub(crate) fn dlpq_axioms(&self) -> Result<Verdict> {
        let p = self.require_p()?;
        let q = self.require_q()?;
        let t = self.top();
        for x in 0..self.size() {
            if !self.leq(self.meet(x, p[t]), q[x]) {
                return Ok(Verdict::fail("x∧p⊤ ≤ qx", [x]));
            }
            if !self.leq(self.meet(x, q[t]), p[x]) {
                return Ok(Verdict::fail("x∧q⊤ ≤ px", [x]));
            }
        }
        Ok(Verdict::Holds)
    }

    /// Drops every table not named in `keep`; declared tags survive only if
    /// still meaningful.
    pub fn reduct(&self, keep: Signature) -> FinAlgebra {
        let mut a = self.clone();
        let pick = |t: &mut Option<Vec<usize>>, flag: Signature| {
            if !keep.contains(flag) {
                *t = None;
            }
        };
        pick(&mut a.mul, Signature::MUL);
        pick(&mut a.p, Signature::P);
        pick(&mut a.q, Signature::Q);
        pick(&mut a.p_star, Signature::P_STAR);
        pick(&mut a.q_star, Signature::Q_STAR);
        pick(&mut a.heyting, Signature::HEYTING);
        pick(&mut a.ldiv, Signature::LDIV);
        pick(&mut a.rdiv, Signature::RDIV);
        if !keep.contains(Signature::ONE) || a.mul.is_none() {
            a.one = None;
        }
        if a.p.is_none() {
            a.declared.remove(Signature::DLPQ);
        }
        a.declared &= keep | !Signature::PARTS;
        a
    }

    /// Relabels so that old element `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> FinAlgebra {
        let n = self.size();
        let mut inv = vec![0; n];
        for (x, &y) in perm.iter().enumerate() {
            inv[y] = x;
        }
        let un = |t: &Option<Vec<usize>>| t.as_ref().map(|t| (0..n).map(|a| perm[t[inv[a]]]).collect());
        let bin = |t: &Option<Vec<usize>>| {
            t.as_ref().map(|t| {
                let mut out = vec![0; n * n];
                for a in 0..n {
                    for b in 0..n {
                        out[a * n + b] = perm[t[inv[a] * n + inv[b]]];
                    }
                }
                out
            })
        };
        FinAlgebra {
            lattice: self.lattice.relabel(perm),
            mul: bin(&self.mul),
            p: un(&self.p),
            q: un(&self.q),
            p_star: un(&self.p_star),
            q_star: un(&self.q_star),
            heyting: bin(&self.heyting),
            ldiv: bin(&self.ldiv),
            rdiv: bin(&self.rdiv),
            one: self.one.map(|e| perm[e]),
            declared: self.declared,
        }
    }

    /// Direct product; element `(a, b)` has index `a * |B| + b`.
    pub fn product(&self, other: &FinAlgebra) -> Result<FinAlgebra> {
        let (sa, sb) = (self.signature(), other.signature());
        if sa & Signature::PARTS != sb & Signature::PARTS {
            return Err(Error::SignatureMismatch(format!("{sa:?} vs {sb:?}")));
        }
        let (na, nb) = (self.size(), other.size());
        let n = na * nb;
        let split = |x: usize| (x / nb, x % nb);
        let lattice = FinLattice::from_poset(crate::Poset::from_fn(n, |x, y| {
            let ((a, b), (c, d)) = (split(x), split(y));
            self.leq(a, c) && other.leq(b, d)
        })?)?;
        let un = |s: &Option<Vec<usize>>, o: &Option<Vec<usize>>| match (s, o) {
            (Some(s), Some(o)) => Some((0..n).map(|x| s[x / nb] * nb + o[x % nb]).collect()),
            _ => None,
        };
        let bin = |s: &Option<Vec<usize>>, o: &Option<Vec<usize>>| match (s, o) {
            (Some(s), Some(o)) => {
                let mut t = vec![0; n * n];
                for x in 0..n {
                    for y in 0..n {
                        let ((a, b), (c, d)) = (split(x), split(y));
                        t[x * n + y] = s[a * na + c] * nb + o[b * nb + d];
                    }
                }
                Some(t)
            }
            _ => None,
        };
        Ok(FinAlgebra {
            lattice,
            mul: bin(&self.mul, &other.mul),
            p: un(&self.p, &other.p),
            q: un(&self.q, &other.q),
            p_star: un(&self.p_star, &other.p_star),
            q_star: un(&self.q_star, &other.q_star),
            heyting: bin(&self.heyting, &other.heyting),
            ldiv: bin(&self.ldiv, &other.ldiv),
            rdiv: bin(&self.rdiv, &other.rdiv),
            one: match (self.one, other.one) {
                (Some(a), Some(b)) => Some(a * nb + b),
                _ => None,
            },
            declared: self.declared & other.declared,
        })
    }

    /// All present operation tables, for congruence and homomorphism code.
    pub(crate) fn unary_tables(&self) -> Vec<&[usize]> {
        [&self.p, &self.q, &self.p_star, &self.q_star]
            .into_iter()
            .flatten()
            .map(|t| t.as_slice())
            .collect()
    }

    pub(crate) fn binary_tables(&self) -> Vec<&[usize]> {
        let mut v: Vec<&[usize]> = vec![self.lattice.join_table(), self.lattice.meet_table()];
        v.extend(
            [&self.mul, &self.heyting, &self.ldiv, &self.rdiv]
                .into_iter()
                .flatten()
                .map(|t| t.as_slice()),
        );
        v
    }

    /// The same tables with no declared tags, for comparing algebras built
    /// by different routes.
    pub fn undeclared(&self) -> FinAlgebra {
        FinAlgebra { declared: Signature::empty(), ..self.clone() }
    }

    /// Carries every table over to `lattice`, whose element `i` stands for
    /// `reps[i]`; `class` sends old values to new elements. Used for
    /// subalgebras and quotients, where the caller guarantees the result is
    /// well defined.
    pub(crate) fn transport(&self, lattice: FinLattice, reps: &[usize], class: impl Fn(usize) -> usize) -> FinAlgebra {
        let n = self.size();
        let k = reps.len();
        let un = |t: &Option<Vec<usize>>| t.as_ref().map(|t| reps.iter().map(|&x| class(t[x])).collect());
        let bin = |t: &Option<Vec<usize>>| {
            t.as_ref().map(|t| {
                (0..k * k).map(|i| class(t[reps[i / k] * n + reps[i % k]])).collect()
            })
        };
        FinAlgebra {
            lattice,
            mul: bin(&self.mul),
            p: un(&self.p),
            q: un(&self.q),
            p_star: un(&self.p_star),
            q_star: un(&self.q_star),
            heyting: bin(&self.heyting),
            ldiv: bin(&self.ldiv),
            rdiv: bin(&self.rdiv),
            one: self.one.map(&class),
            declared: self.declared,
        }
    }

    /// Elements fixed by `p`.
    pub fn closed_elements(&self) -> Result<Vec<usize>> {
        let p = self.require_p()?;
        Ok((0..self.size()).filter(|&x| p[x] == x).collect())
    }
}

impl Canonical for FinAlgebra {
    fn structure(&self) -> Structure {
        let sig = self.signature();
        let tag = [b'a', (sig.bits() >> 8) as u8, sig.bits() as u8];
        let n = self.size();
        let rows = (0..n).map(|x| self.lattice.order().up_mask(x)).collect();
        let mut s = Structure::new(n, &tag).relation2(rows);
        for t in [&self.mul, &self.heyting, &self.ldiv, &self.rdiv].into_iter().flatten() {
            s = s.binary(t.clone());
        }
        for t in [&self.p, &self.q, &self.p_star, &self.q_star].into_iter().flatten() {
            s = s.unary(t.clone());
        }
        if let Some(e) = self.one {
            s = s.constant(e);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{canonicalize, is_isomorphic};

    fn chain3_p(p: Vec<usize>) -> FinAlgebra {
        FinAlgebra::new(FinLattice::chain(3)).with_p(p).unwrap()
    }

    #[test]
    fn operators_are_validated() {
        let l = FinLattice::chain(3);
        assert!(FinAlgebra::new(l.clone()).with_p(vec![0, 2, 1]).is_err());
        assert!(FinAlgebra::new(l.clone()).with_p(vec![0, 2]).is_err());
        let meet: Vec<usize> = (0..9).map(|i| l.meet(i / 3, i % 3)).collect();
        let a = FinAlgebra::new(l.clone()).with_mul(meet).unwrap();
        assert_eq!(a.clone().with_one(2).unwrap().one(), Some(2));
        assert!(a.with_one(1).is_err());
        // x∨y distributes over joins but does not fix ⊥.
        let join: Vec<usize> = (0..9).map(|i| l.join(i / 3, i % 3)).collect();
        let a = FinAlgebra::new(l.clone()).with_mul(join).unwrap();
        assert!(a.declare_normal().is_err());
    }

    #[test]
    fn q_defaults_to_p() {
        let a = chain3_p(vec![0, 2, 2]);
        assert_eq!(a.q(1), 2);
        assert!(a.q_table().is_none());
        assert!(a.signature().contains(Signature::P));
        assert!(!a.signature().contains(Signature::Q));
    }

    #[test]
    fn relabel_is_isomorphic() {
        let a = chain3_p(vec![0, 2, 2]);
        let b = a.relabel(&[2, 0, 1]);
        assert_eq!(b.lattice().bot(), 2);
        assert!(is_isomorphic(&a, &b));
        let c = chain3_p(vec![0, 1, 2]);
        assert!(!is_isomorphic(&a, &c));
    }

    #[test]
    fn signature_is_part_of_the_form() {
        let a = chain3_p(vec![0, 1, 2]);
        let b = a.clone().with_q(vec![0, 1, 2]).unwrap();
        assert_ne!(canonicalize(&a), canonicalize(&b));
    }

    #[test]
    fn product_of_chains() {
        let a = chain3_p(vec![0, 2, 2]);
        let b = FinAlgebra::new(FinLattice::chain(2)).with_p(vec![0, 1]).unwrap();
        let c = a.product(&b).unwrap();
        assert_eq!(c.size(), 6);
        assert!(c.lattice().is_distributive());
        assert_eq!(c.p(2 + 1), 2 * 2 + 1);
        assert!(a.product(&FinAlgebra::new(FinLattice::chain(2))).is_err());
    }

    #[test]
    fn reduct_drops_tables() {
        let a = chain3_p(vec![0, 2, 2]).with_q(vec![0, 2, 2]).unwrap();
        let r = a.reduct(Signature::P);
        assert_eq!(r.signature() & Signature::PARTS, Signature::P);
    }
}
