//! Labelled enumeration of idempotent binary operators on a distributive
//! lattice, without isomorph rejection.
//!
//! Cells are values on pairs of generators. Idempotence and monotonicity
//! confine `g·h` to `[g∧h, g∨h]`, and fix `g·g = g`.

use crate::algebra::{check_property, FinAlgebra, Method, PropertyName};
use crate::error::{Error, Result};
use crate::poset::FinLattice;

use super::Search;

struct Gens<'a> {
    l: &'a FinLattice,
    gens: Vec<usize>,
    below: Vec<Vec<usize>>,
}

impl<'a> Gens<'a> {
    fn new(l: &'a FinLattice) -> Result<Self> {
        if !l.is_distributive() {
            return Err(Error::InvalidParameters("lattice is not distributive".into()));
        }
        let mut gens = vec![l.bot()];
        if l.size() > 1 {
            gens.extend(l.join_irreducibles()?.elements);
        }
        let below = (0..l.size())
            .map(|x| (0..gens.len()).filter(|&i| l.leq(gens[i], x)).collect())
            .collect();
        Ok(Gens { l, gens, below })
    }

    fn extend(&self, c: &[usize]) -> Vec<usize> {
        let (n, k) = (self.l.size(), self.gens.len());
        let mut m = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let cells = self.below[x].iter().flat_map(|&i| self.below[y].iter().map(move |&j| c[i * k + j]));
                m[x * n + y] = self.l.join_all(cells);
            }
        }
        m
    }

    fn monotone_at(&self, c: &[usize], i: usize, j: usize) -> bool {
        let k = self.gens.len();
        let v = c[i * k + j];
        let (gi, gj) = (self.gens[i], self.gens[j]);
        (0..i).filter(|&a| self.l.leq(self.gens[a], gi)).all(|a| self.l.leq(c[a * k + j], v))
            && (0..j).filter(|&b| self.l.leq(self.gens[b], gj)).all(|b| self.l.leq(c[i * k + b], v))
    }
}

/// Every idempotent binary operator on `l`, as row-major tables. An
/// operator here preserves binary joins in each argument but need not be
/// normal.
pub fn idempotent_operators(l: &FinLattice, search: &Search) -> Result<Vec<Vec<usize>>> {
    let g = Gens::new(l)?;
    let k = g.gens.len();
    // Generators sorted by down-set size keep every lower neighbour earlier.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| l.order().down_mask(g.gens[i]).count_ones());
    let gens: Vec<usize> = order.iter().map(|&i| g.gens[i]).collect();
    let g = Gens { below: (0..l.size()).map(|x| (0..k).filter(|&i| l.leq(gens[i], x)).collect()).collect(), gens, l };

    let mut out = Vec::new();
    let mut c = vec![0; k * k];
    walk(&g, 0, &mut c, search, &mut out)?;
    Ok(out)
}

fn walk(g: &Gens, pos: usize, c: &mut Vec<usize>, search: &Search, out: &mut Vec<Vec<usize>>) -> Result<()> {
    let k = g.gens.len();
    if pos == k * k {
        search.check()?;
        let m = g.extend(c);
        let n = g.l.size();
        if (0..n).all(|x| m[x * n + x] == x) {
            out.push(m);
        }
        return Ok(());
    }
    let (i, j) = (pos / k, pos % k);
    let (a, b) = (g.gens[i], g.gens[j]);
    let (lo, hi) = (g.l.meet(a, b), g.l.join(a, b));
    for v in 0..g.l.size() {
        if !(g.l.leq(lo, v) && g.l.leq(v, hi)) || (i == j && v != a) {
            continue;
        }
        c[pos] = v;
        if g.monotone_at(c, i, j) {
            walk(g, pos + 1, c, search, out)?;
        }
    }
    Ok(())
}

/// Attaches each table and confirms it is an idempotent operator.
pub fn idempotent_operator_algebras(l: &FinLattice, search: &Search) -> Result<Vec<FinAlgebra>> {
    idempotent_operators(l, search)?
        .into_iter()
        .map(|m| {
            let a = FinAlgebra::new(l.clone()).with_mul(m)?;
            match check_property(&a, PropertyName::Idempotent, Method::Brute)? {
                crate::Verdict::Holds => Ok(a),
                crate::Verdict::Fails(w) => Err(Error::Law(w)),
            }
        })
        .collect()
}
