//! Residuals by maximum scan, cross-checked against their closed forms.

use crate::error::{Error, Result, Witness};

use super::props::{check_property, Method, PropertyName};
use super::term::unary_determined;
use super::FinAlgebra;

/// Greatest `y` with `ok(y)`, provided the join of all such `y` still
/// satisfies `ok` (which is what residuation requires).
fn max_scan(a: &FinAlgebra, ok: impl Fn(usize) -> bool, law: &'static str, at: [usize; 2]) -> Result<usize> {
    let m = a.lattice().join_all((0..a.size()).filter(|&y| ok(y)));
    if ok(m) {
        Ok(m)
    } else {
        Err(Error::Law(Witness::new(law, at)))
    }
}

/// Attaches the Heyting arrow, and where the signature allows, `\`, `/`,
/// `p*` and `q*`. When `p` and `mul` are both present and `mul` is the
/// unary-determined product, the scanned residuals are compared with
/// `x\y = (px→y) ∧ q*(x→y)` and `x/y = p*(y→x) ∧ (qy→x)`.
pub fn residuals(a: &FinAlgebra) -> Result<FinAlgebra> {
    let n = a.size();
    let mut heyting = vec![0; n * n];
    for x in 0..n {
        for z in 0..n {
            heyting[x * n + z] = max_scan(a, |y| a.leq(a.meet(x, y), z), "x→z exists", [x, z])?;
        }
    }
    let (ldiv, rdiv) = match a.mul_table() {
        Some(m) => {
            let mut l = vec![0; n * n];
            let mut r = vec![0; n * n];
            for x in 0..n {
                for z in 0..n {
                    l[x * n + z] = max_scan(a, |y| a.leq(m[x * n + y], z), "x\\z exists", [x, z])?;
                    r[z * n + x] = max_scan(a, |y| a.leq(m[y * n + x], z), "z/x exists", [z, x])?;
                }
            }
            (Some(l), Some(r))
        }
        None => (None, None),
    };
    let star = |t: &[usize], law| -> Result<Vec<usize>> {
        (0..n).map(|y| max_scan(a, |x| a.leq(t[x], y), law, [y, y])).collect()
    };
    let p_star = a.p_table().map(|p| star(p, "p*y exists")).transpose()?;
    let q_star = a.q_table().map(|q| star(q, "q*y exists")).transpose()?;

    let mut out = a.clone();
    out.set_residual_tables(Some(heyting), ldiv, rdiv, p_star, q_star);

    if out.p_table().is_some() && out.mul_table().is_some() && unary_determined(&out)?.holds() {
        verify_closed_forms(&out)?;
    }
    Ok(out)
}

fn verify_closed_forms(a: &FinAlgebra) -> Result<()> {
    let n = a.size();
    let imp = a.heyting_table().expect("set");
    let ldiv = a.ldiv_table().expect("set");
    let rdiv = a.rdiv_table().expect("set");
    let ps = a.p_star_table().expect("set");
    let qs = a.q_star_table().unwrap_or(ps);
    for x in 0..n {
        for y in 0..n {
            let l = a.meet(imp[a.p(x) * n + y], qs[imp[x * n + y]]);
            if ldiv[x * n + y] != l {
                return Err(Error::Law(Witness::new("x\\y = (px→y)∧q*(x→y)", [x, y])));
            }
            let r = a.meet(ps[imp[y * n + x]], imp[a.q(y) * n + x]);
            if rdiv[x * n + y] != r {
                return Err(Error::Law(Witness::new("x/y = p*(y→x)∧(qy→x)", [x, y])));
            }
        }
    }
    Ok(())
}

/// Checks the unary-determined identity on an idempotent magma over a
/// Boolean lattice. It holds for every such magma, so `false` signals a
/// bug, not an admissible answer.
pub fn is_idempotent_boolean_magma_ud(a: &FinAlgebra) -> Result<bool> {
    if !a.lattice().is_boolean() {
        return Err(Error::InvalidParameters("lattice is not Boolean".into()));
    }
    if let crate::Verdict::Fails(w) = check_property(a, PropertyName::Idempotent, Method::Brute)? {
        return Err(Error::Law(w));
    }
    Ok(unary_determined(a)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mul_from_pq;
    use crate::poset::{downset_lattice, FinLattice, Poset};

    #[test]
    fn heyting_on_chains() {
        let a = residuals(&FinAlgebra::new(FinLattice::chain(5))).unwrap();
        let imp = a.heyting_table().unwrap();
        for x in 0..5 {
            for y in 0..5 {
                let want = if x <= y { 4 } else { y };
                assert_eq!(imp[x * 5 + y], want);
            }
        }
    }

    #[test]
    fn identity_is_self_adjoint() {
        let a = FinAlgebra::new(FinLattice::chain(4)).with_p(vec![0, 1, 2, 3]).unwrap();
        let r = residuals(&a).unwrap();
        assert_eq!(r.p_star_table().unwrap(), &[0, 1, 2, 3]);
    }

    #[test]
    fn residual_laws_on_a_dlpq_algebra() {
        let l = downset_lattice(&Poset::from_relations(3, &[(0, 1)]).unwrap()).unwrap().lattice;
        let n = l.size();
        // p: every nonzero downset goes to top, q = identity.
        let p: Vec<usize> = (0..n).map(|x| if x == 0 { 0 } else { n - 1 }).collect();
        let q: Vec<usize> = (0..n).collect();
        let a = FinAlgebra::new(l).with_p(p).unwrap().with_q(q).unwrap();
        let a = residuals(&mul_from_pq(&a).unwrap()).unwrap();
        let (ld, rd) = (a.ldiv_table().unwrap(), a.rdiv_table().unwrap());
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let m = a.leq(a.mul(x, y), z);
                    assert_eq!(m, a.leq(y, ld[x * n + z]));
                    assert_eq!(m, a.leq(x, rd[z * n + y]));
                }
            }
        }
    }

    #[test]
    fn non_normal_mul_has_no_left_residual() {
        let l = FinLattice::chain(2);
        let join: Vec<usize> = (0..4).map(|i| l.join(i / 2, i % 2)).collect();
        let a = FinAlgebra::new(l).with_mul(join).unwrap();
        assert!(matches!(residuals(&a), Err(Error::Law(_))));
    }

    #[test]
    fn boolean_lemma_smallest_case() {
        let l = FinLattice::chain(2);
        let meet: Vec<usize> = (0..4).map(|i| l.meet(i / 2, i % 2)).collect();
        let a = FinAlgebra::new(l).with_mul(meet).unwrap();
        assert!(is_idempotent_boolean_magma_ud(&a).unwrap());
        let c3 = FinAlgebra::new(FinLattice::chain(3));
        assert!(is_idempotent_boolean_magma_ud(&c3).is_err());
    }
}
