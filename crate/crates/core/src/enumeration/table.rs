//! The eleven reference rows of algebra counts for cardinalities 2 to 8.

use std::fmt;

use crate::algebra::{PropertyName, Signature};
use crate::error::{Error, Result};

use super::{count_algebras, enumerate_lattices, ClassSpec, LatticeClass, Search};

/// One row: a class of algebras and its reference counts.
#[derive(Clone, Copy, Debug)]
pub struct Table1Row {
    pub row: usize,
    /// Name accepted by the command line.
    pub key: &'static str,
    pub label: &'static str,
    /// Reference counts for `n = 2..=8`; `None` where none is known.
    pub expected: [Option<u64>; 7],
    signature: Signature,
    constraints: &'static [PropertyName],
}

use PropertyName::{Associative as A, Commutative as C, Idempotent as I};

const fn row(
    row: usize,
    key: &'static str,
    label: &'static str,
    expected: [Option<u64>; 7],
    signature: Signature,
    constraints: &'static [PropertyName],
) -> Table1Row {
    Table1Row { row, key, label, expected, signature, constraints }
}

const N: Option<u64> = None;
const fn s(v: u64) -> Option<u64> {
    Some(v)
}

pub const TABLE1: [Table1Row; 11] = [
    row(1, "dl-magmas", "normal dℓ-magmas", [s(2), s(20), s(1116), N, N, N, N], Signature::MUL, &[]),
    row(
        2,
        "dlpq",
        "normal dℓpq-algebras",
        [s(2), s(6), s(46), s(3435), N, N, N],
        Signature::P.union(Signature::Q),
        &[],
    ),
    row(3, "comm-dl-magmas", "normal comm. dℓ-magmas", [s(2), s(10), s(148), s(3554), N, N, N], Signature::MUL, &[C]),
    row(4, "dlp", "normal dℓp-algebras", [s(2), s(4), s(15), s(46), s(183), s(688), N], Signature::P, &[]),
    row(
        5,
        "comm-dl-semigroups",
        "normal comm. dℓ-semigroups",
        [s(2), s(8), s(57), s(392), s(3212), N, N],
        Signature::MUL,
        &[C, A],
    ),
    row(
        6,
        "assoc-dlp",
        "normal assoc. dℓp-algebras",
        [s(2), s(4), s(13), s(35), s(109), s(315), s(998)],
        Signature::P,
        &[A],
    ),
    row(
        7,
        "comm-idem-dl-semigroups",
        "normal comm. idem. dℓ-semigroups",
        [s(1), s(2), s(8), s(25), s(97), s(366), N],
        Signature::MUL,
        &[C, I, A],
    ),
    row(
        8,
        "assoc-idem-dlp",
        "normal assoc. idem. dℓp-algebras",
        [s(1), s(2), s(7), s(18), s(57), s(163), s(521)],
        Signature::P,
        &[A, I],
    ),
    row(
        9,
        "comm-idem-dl-monoids",
        "normal comm. idem. dℓ-monoids",
        [s(1), s(2), s(6), s(15), s(44), s(115), s(326)],
        Signature::MUL.union(Signature::ONE),
        &[C, I, A],
    ),
    row(
        10,
        "assoc-idem-dlp1",
        "normal assoc. idem. dℓp1-algebras",
        [s(1), s(2), s(5), s(10), s(24), s(47), s(108)],
        Signature::P.union(Signature::ONE),
        &[A, I],
    ),
    row(
        11,
        "distributive-lattices",
        "distributive lattices",
        [s(1), s(1), s(2), s(3), s(5), s(8), s(15)],
        Signature::empty(),
        &[],
    ),
];

impl Table1Row {
    pub fn by_key(key: &str) -> Option<&'static Table1Row> {
        TABLE1.iter().find(|r| r.key == key)
    }

    pub fn by_number(row: usize) -> Option<&'static Table1Row> {
        TABLE1.iter().find(|r| r.row == row)
    }

    /// Reference count at cardinality `n`, if the row has one.
    pub fn expected(&self, n: usize) -> Option<u64> {
        (2..=8).contains(&n).then(|| self.expected[n - 2]).flatten()
    }

    /// The algebra class of this row at cardinality `n`; `None` for the
    /// lattice row.
    pub fn spec(&self, n: usize) -> Option<ClassSpec> {
        if self.signature.is_empty() {
            return None;
        }
        let mut spec = ClassSpec::new(self.signature, n);
        for &c in self.constraints {
            spec = spec.with(c);
        }
        Some(spec)
    }

    /// Number of isomorphism classes at cardinality `n`.
    pub fn count(&self, n: usize, search: &Search) -> Result<u64> {
        match self.spec(n) {
            Some(spec) => count_algebras(&spec, search),
            None => Ok(enumerate_lattices(n, LatticeClass::Distributive)?.count() as u64),
        }
    }
}

/// Result of one table cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellOutcome {
    Match(u64),
    Mismatch { expected: u64, got: u64 },
    /// No reference value; computed only on request.
    Extension(u64),
    /// Over budget.
    Skipped,
    /// No reference value and no extension requested.
    NotAttempted,
}

impl CellOutcome {
    pub fn is_failure(&self) -> bool {
        matches!(self, CellOutcome::Mismatch { .. })
    }
}

impl fmt::Display for CellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellOutcome::Match(v) => write!(f, "{v} match"),
            CellOutcome::Mismatch { expected, got } => write!(f, "MISMATCH({expected}, {got})"),
            CellOutcome::Extension(v) => write!(f, "{v} unverified extension"),
            CellOutcome::Skipped => f.write_str("skipped (budget)"),
            CellOutcome::NotAttempted => f.write_str("-"),
        }
    }
}

/// Computes one cell and compares it with the reference value. Cells with
/// no reference are computed only when `extend` is set.
pub fn table1_cell(row: &Table1Row, n: usize, search: &Search, extend: bool) -> Result<CellOutcome> {
    let expected = row.expected(n);
    if expected.is_none() && !extend {
        return Ok(CellOutcome::NotAttempted);
    }
    match row.count(n, search) {
        Ok(got) => Ok(match expected {
            Some(e) if e == got => CellOutcome::Match(got),
            Some(e) => CellOutcome::Mismatch { expected: e, got },
            None => CellOutcome::Extension(got),
        }),
        Err(Error::BudgetExceeded) => Ok(CellOutcome::Skipped),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par::Exec;

    #[test]
    fn rows_are_numbered_in_order() {
        for (i, r) in TABLE1.iter().enumerate() {
            assert_eq!(r.row, i + 1);
            assert_eq!(Table1Row::by_key(r.key).unwrap().row, r.row);
            if let Some(s) = r.spec(3) {
                s.validate().unwrap();
            }
        }
    }

    #[test]
    fn cells_compare_against_reference() {
        let s = Search::new(Exec::Sequential);
        let r = Table1Row::by_number(4).unwrap();
        assert_eq!(table1_cell(r, 4, &s, false).unwrap(), CellOutcome::Match(15));
        assert_eq!(table1_cell(r, 8, &s, false).unwrap(), CellOutcome::NotAttempted);
        let lat = Table1Row::by_number(11).unwrap();
        assert_eq!(table1_cell(lat, 8, &s, false).unwrap(), CellOutcome::Match(15));
        assert_eq!(
            CellOutcome::Mismatch { expected: 3, got: 4 }.to_string(),
            "MISMATCH(3, 4)"
        );
    }
}
