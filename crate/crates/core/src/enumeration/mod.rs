//! Isomorph-free generation of distributive lattices, lattice-ordered
//! algebras and P-frames.
//!
//! Operators are searched through their values on the generators of the
//! lattice (⊥ and the join-irreducibles), where monotonicity is the only
//! constraint. Isomorphic copies are rejected by keeping a candidate only
//! if it is the lexicographically least image under the automorphism group
//! of its lattice. Every accepted member then receives a full canonical
//! encoding, which orders the census.

mod algebras;
mod frames;
mod operators;
mod table;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::algebra::{PropertyName, Signature};
use crate::canon::{Canonical, CanonicalForm};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::poset::{downset_lattice, posets_with_downsets_at_most, FinLattice, Poset};

pub use algebras::{count_algebras, enumerate_algebras, verify_member};
pub use frames::{
    enumerate_linear_frames, enumerate_pforest_frames, group_by_poset, is_preorder_forest,
    linear_frame_algebras, LinearFrame,
};
pub use operators::{idempotent_operator_algebras, idempotent_operators};
pub use table::{table1_cell, CellOutcome, Table1Row, TABLE1};

/// Which lattices carry the operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatticeClass {
    Distributive,
    Boolean,
    Chain,
}

impl LatticeClass {
    pub fn name(self) -> &'static str {
        match self {
            LatticeClass::Distributive => "distributive",
            LatticeClass::Boolean => "boolean",
            LatticeClass::Chain => "chain",
        }
    }

    fn admits(self, p: &Poset) -> bool {
        match self {
            LatticeClass::Distributive => true,
            LatticeClass::Boolean => p.is_antichain(),
            LatticeClass::Chain => p.is_chain(),
        }
    }
}

impl FromStr for LatticeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [LatticeClass::Distributive, LatticeClass::Boolean, LatticeClass::Chain]
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown lattice class `{s}`")))
    }
}

/// A class of finite algebras of one cardinality.
///
/// The signature names the operation tables among `MUL`, `P`, `Q` and the
/// constant `ONE`. With `P` the class consists of dℓpq-algebras (dℓp when
/// `Q` is absent), whose axioms are always imposed; `ONE` then names the
/// identity of the unary-determined product. Properties of the product
/// refer to `mul` itself or, without it, to `(px∧y)∨(x∧qy)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassSpec {
    pub base: LatticeClass,
    pub signature: Signature,
    pub constraints: BTreeSet<PropertyName>,
    /// Operators preserve ⊥.
    pub normal: bool,
    pub size: usize,
}

const ALLOWED: Signature = Signature::MUL.union(Signature::P).union(Signature::Q).union(Signature::ONE);

impl ClassSpec {
    /// Normal operators on distributive lattices, no further constraints.
    pub fn new(signature: Signature, size: usize) -> Self {
        ClassSpec {
            base: LatticeClass::Distributive,
            signature,
            constraints: BTreeSet::new(),
            normal: true,
            size,
        }
    }

    pub fn with(mut self, prop: PropertyName) -> Self {
        self.constraints.insert(prop);
        self
    }

    pub fn on(mut self, base: LatticeClass) -> Self {
        self.base = base;
        self
    }

    pub fn normal(mut self, normal: bool) -> Self {
        self.normal = normal;
        self
    }

    pub fn sized(mut self, size: usize) -> Self {
        self.size = size;
        self
    }

    pub(crate) fn unary(&self) -> bool {
        self.signature.contains(Signature::P)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameters(m));
        if self.size == 0 {
            return bad("size must be at least 1".into());
        }
        if !ALLOWED.contains(self.signature) {
            return bad(format!("signature {:?} outside MUL | P | Q | ONE", self.signature));
        }
        let mul = self.signature.contains(Signature::MUL);
        let p = self.signature.contains(Signature::P);
        if mul == p {
            return bad("exactly one of MUL and P must be present".into());
        }
        if self.signature.contains(Signature::Q) && !p {
            return bad("Q needs P".into());
        }
        for &c in &self.constraints {
            let ok = match c {
                PropertyName::DlpqAxioms | PropertyName::ClosureP => p,
                _ => true,
            };
            if !ok {
                return bad(format!("constraint `{c}` needs p in the signature"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = if self.unary() {
            if self.signature.contains(Signature::Q) {
                "dlpq"
            } else {
                "dlp"
            }
        } else {
            "dl-magma"
        };
        write!(
            f,
            "{}{} {sig}{} on {} lattices, n={}",
            if self.normal { "normal " } else { "" },
            self.constraints.iter().map(|c| format!("{c} ")).collect::<String>(),
            if self.signature.contains(Signature::ONE) { " with 1" } else { "" },
            self.base.name(),
            self.size
        )
    }
}

/// Compute limits shared by every search.
#[derive(Clone, Copy, Debug, Default)]
pub struct Search {
    pub exec: Exec,
    pub deadline: Option<Instant>,
}

impl Search {
    pub fn new(exec: Exec) -> Self {
        Search { exec, deadline: None }
    }

    pub fn with_budget(mut self, budget: Duration) -> Self {
        self.deadline = Some(Instant::now() + budget);
        self
    }

    pub(crate) fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::BudgetExceeded),
            _ => Ok(()),
        }
    }
}

/// A census entry and its canonical encoding.
#[derive(Clone, Debug)]
pub struct Member<T> {
    pub encoding: CanonicalForm,
    pub item: T,
}

/// Pairwise non-isomorphic structures, sorted by canonical encoding.
#[derive(Clone, Debug)]
pub struct Census<T> {
    pub label: String,
    pub size: usize,
    pub members: Vec<Member<T>>,
}

impl<T> Census<T> {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, form: &CanonicalForm) -> bool {
        self.members.binary_search_by(|m| m.encoding.cmp(form)).is_ok()
    }

    pub fn items(&self) -> impl Iterator<Item = &T> {
        self.members.iter().map(|m| &m.item)
    }

    pub fn encodings(&self) -> BTreeSet<CanonicalForm> {
        self.members.iter().map(|m| m.encoding.clone()).collect()
    }
}

impl<T: Canonical + Send + Sync> Census<T> {
    /// Canonicalizes and sorts. Two isomorphic items mean the generator is
    /// broken, so that panics.
    pub(crate) fn from_items(label: String, size: usize, items: Vec<T>, exec: Exec) -> Self {
        let forms = exec.map(&items, |x| x.canonical_form());
        let mut members: Vec<Member<T>> = forms
            .into_iter()
            .zip(items)
            .map(|(encoding, item)| Member { encoding, item })
            .collect();
        members.sort_by(|a, b| a.encoding.cmp(&b.encoding));
        for w in members.windows(2) {
            assert!(w[0].encoding != w[1].encoding, "isomorphic census members in {label}");
        }
        Census { label, size, members }
    }
}

/// Lattices of `class` with `n` elements, each the downset lattice of a
/// canonically labelled poset, paired with that poset.
pub(crate) fn lattices(n: usize, class: LatticeClass) -> Vec<(Option<Poset>, FinLattice)> {
    if n == 1 {
        return vec![(None, FinLattice::chain(1))];
    }
    posets_with_downsets_at_most(n)
        .into_iter()
        .filter(|p| p.downset_count() == n && class.admits(p))
        .map(|p| {
            let l = downset_lattice(&p).expect("at most n downsets").lattice;
            (Some(p), l)
        })
        .collect()
}

/// All lattices of `class` with `n` elements up to isomorphism.
/// Distributive lattices are the downset lattices of posets.
pub fn enumerate_lattices(n: usize, class: LatticeClass) -> Result<Census<FinLattice>> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let items = lattices(n, class).into_iter().map(|(_, l)| l).collect();
    Ok(Census::from_items(format!("{} lattices, n={n}", class.name()), n, items, Exec::Sequential))
}
