use std::fmt;

use thiserror::Error;

/// Errors raised by constructors and checked conversions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty carrier: structures need at least one element")]
    Empty,
    #[error("structure too large: {what} has {size} elements, limit is {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a partial order: {0}")]
    NotAnOrder(Witness),
    #[error("not a lattice: {0}")]
    NotALattice(Witness),
    #[error("lattice is not distributive: {0}")]
    NotDistributive(Witness),
    #[error("law violated: {0}")]
    Law(Witness),
    #[error("missing signature part `{0}`")]
    Missing(&'static str),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("no characterization of `{0}` applies to this signature")]
    NoCharacterization(&'static str),
    #[error("invalid frame: {0}")]
    InvalidFrame(Witness),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("compute budget exhausted")]
    BudgetExceeded,
    #[error("non-integral value at index {index}: {numerator} / {denominator}")]
    NotIntegral {
        index: usize,
        numerator: u128,
        denominator: u128,
    },
    #[error("arithmetic overflow at index {0}")]
    Overflow(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A named condition together with the tuple that breaks it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub law: &'static str,
    pub tuple: Vec<usize>,
}

impl Witness {
    pub fn new(law: &'static str, tuple: impl Into<Vec<usize>>) -> Self {
        Witness {
            law,
            tuple: tuple.into(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {:?}", self.law, self.tuple)
    }
}

/// Outcome of a property check. Failures carry the first offending tuple
/// in index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Witness),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub(crate) fn fail(law: &'static str, tuple: impl Into<Vec<usize>>) -> Self {
        Verdict::Fails(Witness::new(law, tuple))
    }

    /// Turns a failing verdict into an error built by `f`.
    pub fn into_result(self, f: impl FnOnce(Witness) -> Error) -> Result<()> {
        match self {
            Verdict::Holds => Ok(()),
            Verdict::Fails(w) => Err(f(w)),
        }
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::fail("condition", Vec::new())
        }
    }
}
