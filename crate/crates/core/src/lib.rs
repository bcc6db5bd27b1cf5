//! Finite distributive lattice-ordered algebras and their relational
//! frames.
//!
//! The crate builds finite dℓ-magmas, dℓpq-algebras and their residuated
//! expansions; converts between algebras and Birkhoff, PQ and P frames;
//! enumerates these structures up to isomorphism; counts preorder forests;
//! and analyses congruence lattices and subdirect irreducibility.

pub mod bits;
pub mod canon;
pub mod counting;
pub mod error;
pub mod frames;
pub mod par;
pub mod poset;

pub use canon::{canonicalize, Canonical, CanonicalForm};
pub use error::{Error, Result, Verdict, Witness};
pub use poset::{downset_lattice, DownsetLattice, FinLattice, JoinIrreducibles, Poset};
pub mod algebra;
pub mod enumeration;
pub mod si;

pub use algebra::{FinAlgebra, Method, PropertyName, Signature};
pub use frames::{Frame, FrameKind, FrameProperty};
pub use par::Exec;
