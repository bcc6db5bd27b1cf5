//! The term equivalence between unary-determined dℓ-magmas and
//! dℓpq-algebras.

use crate::error::{Error, Result, Verdict};

use super::{FinAlgebra, Signature};

/// Attaches `x·y = (px ∧ y) ∨ (x ∧ qy)`, keeping `p` and `q`.
pub fn mul_from_pq(a: &FinAlgebra) -> Result<FinAlgebra> {
    let p = a.require_p()?;
    let q = a.require_q()?;
    a.dlpq_axioms()?.into_result(Error::Law)?;
    let n = a.size();
    let mut t = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            t[x * n + y] = a.join(a.meet(p[x], y), a.meet(x, q[y]));
        }
    }
    let mut out = a.clone();
    out.mul = Some(t);
    out.one = None;
    out.declared |= Signature::DLPQ;
    // Validates the operator laws on the new table as a safety net.
    let table = out.mul.take().expect("just set");
    out.with_mul(table)
}

/// First pair breaking `x·y = (x·⊤ ∧ y) ∨ (x ∧ ⊤·y)`.
pub(crate) fn unary_determined(a: &FinAlgebra) -> Result<Verdict> {
    let m = a.require_mul()?;
    let n = a.size();
    let t = a.top();
    for x in 0..n {
        for y in 0..n {
            let rhs = a.join(a.meet(m[x * n + t], y), a.meet(x, m[t * n + y]));
            if m[x * n + y] != rhs {
                return Ok(Verdict::fail("x·y = (x·⊤∧y)∨(x∧⊤·y)", [x, y]));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Reads off `p x = x·⊤` and `q x = ⊤·x` from a unary-determined magma.
pub fn pq_from_mul(a: &FinAlgebra) -> Result<FinAlgebra> {
    let m = a.require_mul()?;
    unary_determined(a)?.into_result(Error::Law)?;
    let n = a.size();
    let t = a.top();
    let p: Vec<usize> = (0..n).map(|x| m[x * n + t]).collect();
    let q: Vec<usize> = (0..n).map(|x| m[t * n + x]).collect();
    let out = a.clone().with_p(p)?.with_q(q)?;
    out.declare_dlpq()
}
