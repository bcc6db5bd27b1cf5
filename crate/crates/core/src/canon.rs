//! Canonical forms and automorphism groups of small finite structures.
//!
//! A structure is flattened into a [`Structure`]: relations, operation
//! tables, constants and unary predicates over `0..n`. The canonical form
//! is the least byte encoding over all labelings reachable by
//! individualization-refinement; colour refinement never separates
//! elements an isomorphism could swap, so the minimum is an invariant.

use std::cmp::Ordering;

use crate::bits::ones128;

/// Byte encoding that is equal for two structures iff they are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Lowercase hex, convenient for logs and fixture files.
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// A flattened relational structure on `0..n`.
#[derive(Clone, Debug, Default)]
pub struct Structure {
    n: usize,
    header: Vec<u8>,
    rel2: Vec<Vec<u128>>,
    rel3: Vec<Vec<u128>>,
    op1: Vec<Vec<usize>>,
    op2: Vec<Vec<usize>>,
    consts: Vec<usize>,
    preds: Vec<u128>,
}

impl Structure {
    /// `tag` distinguishes structure kinds that could otherwise collide.
    pub fn new(n: usize, tag: &[u8]) -> Self {
        assert!((1..=128).contains(&n), "structures have 1..=128 elements");
        Structure {
            n,
            header: tag.to_vec(),
            ..Default::default()
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Binary relation; `rows[x]` has bit `y` iff `x R y`.
    pub fn relation2(mut self, rows: Vec<u128>) -> Self {
        assert_eq!(rows.len(), self.n);
        self.header.push(b'r');
        self.rel2.push(rows);
        self
    }

    /// Ternary relation; `rows[x * n + y]` has bit `z` iff `x R y z`.
    pub fn relation3(mut self, rows: Vec<u128>) -> Self {
        assert_eq!(rows.len(), self.n * self.n);
        self.header.push(b't');
        self.rel3.push(rows);
        self
    }

    pub fn unary(mut self, table: Vec<usize>) -> Self {
        assert_eq!(table.len(), self.n);
        self.header.push(b'u');
        self.op1.push(table);
        self
    }

    /// Binary operation, row-major.
    pub fn binary(mut self, table: Vec<usize>) -> Self {
        assert_eq!(table.len(), self.n * self.n);
        self.header.push(b'b');
        self.op2.push(table);
        self
    }

    pub fn constant(mut self, c: usize) -> Self {
        assert!(c < self.n);
        self.header.push(b'c');
        self.consts.push(c);
        self
    }

    pub fn predicate(mut self, mask: u128) -> Self {
        self.header.push(b'p');
        self.preds.push(mask);
        self
    }

    fn signature(&self, v: usize, col: &[u32], buf: &mut Vec<u32>) {
        let n = self.n;
        let nn = n as u32;
        buf.clear();
        buf.push(col[v]);
        for &m in &self.preds {
            buf.push((m >> v & 1) as u32);
        }
        for &c in &self.consts {
            buf.push((c == v) as u32);
        }
        let mut scratch: Vec<u32> = Vec::new();
        let section = |buf: &mut Vec<u32>, scratch: &mut Vec<u32>| {
            scratch.sort_unstable();
            buf.push(scratch.len() as u32);
            buf.extend_from_slice(scratch);
            scratch.clear();
        };
        for f in &self.op1 {
            buf.push(col[f[v]]);
            scratch.extend((0..n).filter(|&u| f[u] == v).map(|u| col[u]));
            section(buf, &mut scratch);
        }
        for r in &self.rel2 {
            scratch.extend(ones128(r[v]).map(|u| col[u]));
            section(buf, &mut scratch);
            scratch.extend((0..n).filter(|&u| r[u] >> v & 1 == 1).map(|u| col[u]));
            section(buf, &mut scratch);
        }
        for m in &self.op2 {
            scratch.extend((0..n).map(|b| col[b] * nn + col[m[v * n + b]]));
            section(buf, &mut scratch);
            scratch.extend((0..n).map(|a| col[a] * nn + col[m[a * n + v]]));
            section(buf, &mut scratch);
            for a in 0..n {
                for b in 0..n {
                    if m[a * n + b] == v {
                        scratch.push(col[a] * nn + col[b]);
                    }
                }
            }
            section(buf, &mut scratch);
        }
        for r in &self.rel3 {
            for y in 0..n {
                scratch.extend(ones128(r[v * n + y]).map(|z| col[y] * nn + col[z]));
            }
            section(buf, &mut scratch);
            for x in 0..n {
                scratch.extend(ones128(r[x * n + v]).map(|z| col[x] * nn + col[z]));
            }
            section(buf, &mut scratch);
            for x in 0..n {
                for y in 0..n {
                    if r[x * n + y] >> v & 1 == 1 {
                        scratch.push(col[x] * nn + col[y]);
                    }
                }
            }
            section(buf, &mut scratch);
        }
    }

    /// Refines `col` to the coarsest equitable colouring below it.
    fn refine(&self, col: &mut Vec<u32>) {
        let n = self.n;
        let mut classes = distinct(col);
        let mut sigs: Vec<Vec<u32>> = vec![Vec::new(); n];
        loop {
            for (v, s) in sigs.iter_mut().enumerate() {
                self.signature(v, col, s);
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
            let mut rank = 0u32;
            for i in 0..n {
                if i > 0 && sigs[order[i]] != sigs[order[i - 1]] {
                    rank += 1;
                }
                col[order[i]] = rank;
            }
            let k = rank as usize + 1;
            if k == classes {
                return;
            }
            classes = k;
        }
    }

    /// Encoding under the labeling `perm` (old element `x` becomes `perm[x]`).
    pub fn encode(&self, perm: &[usize]) -> Vec<u8> {
        let n = self.n;
        let mut inv = vec![0; n];
        for (x, &y) in perm.iter().enumerate() {
            inv[y] = x;
        }
        let mut out = Vec::with_capacity(8 + self.header.len());
        out.extend_from_slice(&self.header);
        out.push(0xff);
        out.push(n as u8);
        let mut bits = BitWriter::new(&mut out);
        for r in &self.rel2 {
            for a in 0..n {
                for b in 0..n {
                    bits.push(r[inv[a]] >> inv[b] & 1 == 1);
                }
            }
        }
        for r in &self.rel3 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        bits.push(r[inv[a] * n + inv[b]] >> inv[c] & 1 == 1);
                    }
                }
            }
        }
        for &m in &self.preds {
            for a in 0..n {
                bits.push(m >> inv[a] & 1 == 1);
            }
        }
        bits.finish();
        for f in &self.op1 {
            out.extend((0..n).map(|a| perm[f[inv[a]]] as u8));
        }
        for m in &self.op2 {
            for a in 0..n {
                out.extend((0..n).map(|b| perm[m[inv[a] * n + inv[b]]] as u8));
            }
        }
        out.extend(self.consts.iter().map(|&c| perm[c] as u8));
        out
    }

    fn search(&self, mut col: Vec<u32>, best: &mut Best) {
        self.refine(&mut col);
        let n = self.n;
        if distinct(&col) == n {
            let perm: Vec<usize> = col.iter().map(|&c| c as usize).collect();
            let enc = self.encode(&perm);
            match best.enc.as_ref().map(|b| enc.cmp(b)) {
                None | Some(Ordering::Less) => {
                    best.enc = Some(enc);
                    best.perms.clear();
                    best.perms.push(perm);
                }
                Some(Ordering::Equal) => {
                    if best.keep_all {
                        best.perms.push(perm);
                    }
                }
                Some(Ordering::Greater) => {}
            }
            return;
        }
        // First non-singleton cell, by colour.
        let mut counts = vec![0usize; n];
        for &c in &col {
            counts[c as usize] += 1;
        }
        let target = (0..n).find(|&c| counts[c] > 1).expect("non-discrete colouring") as u32;
        for v in 0..n {
            if col[v] != target {
                continue;
            }
            // v goes just below the rest of its cell
            let child: Vec<u32> = col
                .iter()
                .enumerate()
                .map(|(u, &c)| 2 * c + (c == target && u != v) as u32)
                .collect();
            self.search(child, best);
        }
    }

    fn run(&self, keep_all: bool) -> Best {
        let mut best = Best {
            enc: None,
            perms: Vec::new(),
            keep_all,
        };
        self.search(vec![0; self.n], &mut best);
        best
    }

    /// Canonical form and one labeling attaining it.
    pub fn canonical_labeling(&self) -> (CanonicalForm, Vec<usize>) {
        let mut best = self.run(false);
        (
            CanonicalForm(best.enc.take().expect("at least one leaf")),
            best.perms.swap_remove(0),
        )
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        self.canonical_labeling().0
    }

    /// The full automorphism group, as permutations of `0..n`.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let best = self.run(true);
        let p0 = &best.perms[0];
        let mut inv0 = vec![0; self.n];
        for (x, &y) in p0.iter().enumerate() {
            inv0[y] = x;
        }
        let mut auts: Vec<Vec<usize>> = best
            .perms
            .iter()
            .map(|p| p.iter().map(|&y| inv0[y]).collect())
            .collect();
        auts.sort();
        auts.dedup();
        auts
    }
}

struct Best {
    enc: Option<Vec<u8>>,
    perms: Vec<Vec<usize>>,
    keep_all: bool,
}

fn distinct(col: &[u32]) -> usize {
    let mut v = col.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

struct BitWriter<'a> {
    out: &'a mut Vec<u8>,
    cur: u8,
    used: u8,
}

impl<'a> BitWriter<'a> {
    fn new(out: &'a mut Vec<u8>) -> Self {
        BitWriter { out, cur: 0, used: 0 }
    }

    fn push(&mut self, b: bool) {
        self.cur = self.cur << 1 | b as u8;
        self.used += 1;
        if self.used == 8 {
            self.out.push(self.cur);
            self.cur = 0;
            self.used = 0;
        }
    }

    fn finish(self) {
        if self.used > 0 {
            self.out.push(self.cur << (8 - self.used));
        }
    }
}

/// Types with a structure view for isomorphism testing.
pub trait Canonical {
    fn structure(&self) -> Structure;

    fn canonical_form(&self) -> CanonicalForm {
        self.structure().canonical_form()
    }
}

/// Canonical encoding of `x`.
pub fn canonicalize<T: Canonical + ?Sized>(x: &T) -> CanonicalForm {
    x.canonical_form()
}

pub fn is_isomorphic<T: Canonical + ?Sized>(a: &T, b: &T) -> bool {
    a.structure().size() == b.structure().size() && a.canonical_form() == b.canonical_form()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
        let mut rows = vec![0u128; n];
        for &(a, b) in edges {
            rows[a] |= 1 << b;
            rows[b] |= 1 << a;
        }
        Structure::new(n, b"g").relation2(rows)
    }

    #[test]
    fn relabeled_graphs_agree() {
        let a = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let b = graph(5, &[(4, 2), (2, 0), (0, 3), (3, 1)]);
        assert_eq!(a.canonical_form(), b.canonical_form());
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_ne!(a.canonical_form(), star.canonical_form());
    }

    #[test]
    fn regular_graphs_need_individualization() {
        // 6-cycle vs two triangles: same degree sequence, refinement alone
        // cannot split either.
        let c6 = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let tt = graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_ne!(c6.canonical_form(), tt.canonical_form());
        assert_eq!(c6.automorphisms().len(), 12);
        assert_eq!(tt.automorphisms().len(), 72);
    }

    #[test]
    fn labeling_reproduces_form() {
        let s = graph(4, &[(0, 1), (1, 2)]);
        let (f, perm) = s.canonical_labeling();
        assert_eq!(s.encode(&perm), f.0);
    }

    #[test]
    fn operations_and_constants_matter() {
        let a = Structure::new(3, b"x").unary(vec![1, 2, 0]);
        let b = Structure::new(3, b"x").unary(vec![2, 0, 1]);
        assert_eq!(a.canonical_form(), b.canonical_form());
        let c = Structure::new(3, b"x").unary(vec![1, 0, 2]);
        assert_ne!(a.canonical_form(), c.canonical_form());
        let d0 = Structure::new(3, b"x").unary(vec![1, 0, 2]).constant(2);
        let d1 = Structure::new(3, b"x").unary(vec![1, 0, 2]).constant(0);
        assert_ne!(d0.canonical_form(), d1.canonical_form());
        assert_eq!(a.automorphisms().len(), 3);
    }
}
