//! Finite posets, lattices and downset lattices.

use std::collections::{BTreeMap, HashMap};

use crate::bits::{self, ones128 as ones};
use crate::canon::{Canonical, CanonicalForm, Structure};
use crate::error::{Error, Result, Verdict, Witness};

/// Largest carrier a [`Poset`] may have; rows are stored as `u128` masks.
pub const MAX_POSET: usize = 128;

/// A finite partial order on `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    down: Vec<u128>,
    up: Vec<u128>,
}

impl Poset {
    /// Builds a poset from `leq(x, y)`, validating the order axioms.
    pub fn from_fn(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if n > MAX_POSET {
            return Err(Error::TooLarge {
                what: "poset",
                size: n,
                limit: MAX_POSET,
            });
        }
        let mut down = vec![0u128; n];
        let mut up = vec![0u128; n];
        for x in 0..n {
            for y in 0..n {
                if leq(x, y) {
                    down[y] |= 1 << x;
                    up[x] |= 1 << y;
                }
            }
        }
        let p = Poset { n, down, up };
        p.check_axioms().into_result(Error::NotAnOrder)?;
        Ok(p)
    }

    /// Builds a poset from a square 0/1 matrix.
    pub fn from_matrix(leq: &[Vec<bool>]) -> Result<Self> {
        let n = leq.len();
        if leq.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("order matrix must be square".into()));
        }
        Self::from_fn(n, |x, y| leq[x][y])
    }

    /// The reflexive-transitive closure of `relations` on `0..n`.
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        if relations.iter().any(|&(a, b)| a >= n || b >= n) {
            return Err(Error::Shape("relation endpoint out of range".into()));
        }
        let mut m = vec![vec![false; n]; n];
        for (x, row) in m.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(a, b) in relations {
            m[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if m[i][k] {
                    for j in 0..n {
                        if m[k][j] {
                            m[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::from_matrix(&m)
    }

    pub fn chain(n: usize) -> Self {
        Self::from_fn(n, |x, y| x <= y).expect("chains are posets")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_fn(n, |x, y| x == y).expect("antichains are posets")
    }

    fn check_axioms(&self) -> Verdict {
        for x in 0..self.n {
            if !self.leq(x, x) {
                return Verdict::fail("reflexivity", [x]);
            }
            for y in 0..self.n {
                if x != y && self.leq(x, y) && self.leq(y, x) {
                    return Verdict::fail("antisymmetry", [x, y]);
                }
                if self.leq(x, y) {
                    // everything below x is below y
                    let missing = self.down[x] & !self.down[y];
                    if missing != 0 {
                        let w = missing.trailing_zeros() as usize;
                        return Verdict::fail("transitivity", [w, x, y]);
                    }
                }
            }
        }
        Verdict::Holds
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.down[y] >> x & 1 == 1
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// Principal downset of `x` as a mask.
    #[inline]
    pub fn down_mask(&self, x: usize) -> u128 {
        self.down[x]
    }

    /// Principal upset of `x` as a mask.
    #[inline]
    pub fn up_mask(&self, x: usize) -> u128 {
        self.up[x]
    }

    pub fn full_mask(&self) -> u128 {
        if self.n == 128 { u128::MAX } else { (1u128 << self.n) - 1 }
    }

    pub fn is_downset(&self, mask: u128) -> bool {
        ones(mask).all(|x| self.down[x] & !mask == 0)
    }

    pub fn is_upset(&self, mask: u128) -> bool {
        ones(mask).all(|x| self.up[x] & !mask == 0)
    }

    /// Smallest downset containing `mask`.
    pub fn down_closure(&self, mask: u128) -> u128 {
        ones(mask).fold(0, |acc, x| acc | self.down[x])
    }

    pub fn leq_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|x| (0..self.n).map(|y| self.leq(x, y)).collect())
            .collect()
    }

    /// Covering pairs `(x, y)`: `x < y` with nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                if self.lt(x, y) {
                    let between = self.up[x] & self.down[y] & !(1 << x) & !(1 << y);
                    if between == 0 {
                        edges.push((x, y));
                    }
                }
            }
        }
        edges
    }

    pub fn is_antichain(&self) -> bool {
        (0..self.n).all(|x| self.down[x] == 1 << x)
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| self.leq(x, y) || self.leq(y, x)))
    }

    /// The order with `≤` reversed.
    pub fn dual(&self) -> Poset {
        Poset {
            n: self.n,
            down: self.up.clone(),
            up: self.down.clone(),
        }
    }

    /// A linear extension: every element appears after all elements below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| (self.down[x].count_ones(), x));
        order
    }

    /// The subposet on `elems` (in the given order).
    pub fn induced(&self, elems: &[usize]) -> Result<Poset> {
        Poset::from_fn(elems.len(), |i, j| self.leq(elems[i], elems[j]))
    }

    /// Relabels so that old element `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        let mut inv = vec![0; self.n];
        for (x, &y) in perm.iter().enumerate() {
            inv[y] = x;
        }
        Poset::from_fn(self.n, |a, b| self.leq(inv[a], inv[b])).expect("relabeling keeps order")
    }

    /// Disjoint union, with `other` placed after `self`.
    pub fn disjoint_union(&self, other: &Poset) -> Result<Poset> {
        let n = self.n;
        Poset::from_fn(n + other.n, |x, y| match (x < n, y < n) {
            (true, true) => self.leq(x, y),
            (false, false) => other.leq(x - n, y - n),
            _ => false,
        })
    }

    /// Ordinal sum: every element of `self` below every element of `other`.
    pub fn ordinal_sum(&self, other: &Poset) -> Result<Poset> {
        let n = self.n;
        Poset::from_fn(n + other.n, |x, y| match (x < n, y < n) {
            (true, true) => self.leq(x, y),
            (false, false) => other.leq(x - n, y - n),
            (true, false) => true,
            (false, true) => false,
        })
    }

    /// Strict-below masks in the form [`bits::for_each_downset`] expects.
    pub(crate) fn strict_below(&self) -> Vec<u128> {
        (0..self.n).map(|x| self.down[x] & !(1u128 << x)).collect()
    }

    /// Calls `f` on every downset, as a mask.
    pub fn for_each_downset(&self, mut f: impl FnMut(u128)) {
        bits::for_each_downset(&self.strict_below(), 0, &mut |m| f(m));
    }

    /// All downsets in size-then-value order.
    pub fn downsets(&self) -> Vec<u128> {
        let mut v = Vec::new();
        self.for_each_downset(|m| v.push(m));
        v.sort_by_key(|&m| (m.count_ones(), m));
        v
    }
}

/// A finite lattice with precomputed join and meet tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinLattice {
    order: Poset,
    join: Vec<usize>,
    meet: Vec<usize>,
    top: usize,
    bot: usize,
}

impl FinLattice {
    /// Computes joins and meets of a bounded poset; fails if some pair has
    /// no least upper or greatest lower bound.
    pub fn from_poset(order: Poset) -> Result<Self> {
        let n = order.size();
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let ub = order.up_mask(x) & order.up_mask(y);
                join[x * n + y] = ones(ub)
                    .find(|&u| ub & !order.up_mask(u) == 0)
                    .ok_or_else(|| Error::NotALattice(Witness::new("join exists", [x, y])))?;
                let lb = order.down_mask(x) & order.down_mask(y);
                meet[x * n + y] = ones(lb)
                    .find(|&u| lb & !order.down_mask(u) == 0)
                    .ok_or_else(|| Error::NotALattice(Witness::new("meet exists", [x, y])))?;
            }
        }
        let all = order.full_mask();
        let top = (0..n).find(|&x| order.down_mask(x) == all).ok_or_else(|| {
            Error::NotALattice(Witness::new("top exists", Vec::new()))
        })?;
        let bot = (0..n).find(|&x| order.up_mask(x) == all).ok_or_else(|| {
            Error::NotALattice(Witness::new("bottom exists", Vec::new()))
        })?;
        Ok(FinLattice {
            order,
            join,
            meet,
            top,
            bot,
        })
    }

    /// The lattice whose order is `x ≤ y` iff `join(x, y) = y`.
    pub fn from_join_table(n: usize, join: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let order = Poset::from_fn(n, |x, y| join(x, y) == y)?;
        let l = Self::from_poset(order)?;
        for x in 0..n {
            for y in 0..n {
                if l.join(x, y) != join(x, y) {
                    return Err(Error::NotALattice(Witness::new("join table", [x, y])));
                }
            }
        }
        Ok(l)
    }

    pub fn chain(n: usize) -> Self {
        Self::from_poset(Poset::chain(n)).expect("chains are lattices")
    }

    pub fn size(&self) -> usize {
        self.order.size()
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.order.leq(x, y)
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.size() + y]
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.size() + y]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bot, |a, x| self.join(a, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |a, x| self.meet(a, x))
    }

    /// First triple breaking `x∧(y∨z) = (x∧y)∨(x∧z)`, if any.
    pub fn distributivity(&self) -> Verdict {
        let n = self.size();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let l = self.meet(x, self.join(y, z));
                    let r = self.join(self.meet(x, y), self.meet(x, z));
                    if l != r {
                        return Verdict::fail("distributivity", [x, y, z]);
                    }
                }
            }
        }
        Verdict::Holds
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity().holds()
    }

    /// Distributive and complemented.
    pub fn is_boolean(&self) -> bool {
        let n = self.size();
        self.is_distributive()
            && (0..n).all(|x| (0..n).any(|y| self.meet(x, y) == self.bot && self.join(x, y) == self.top))
    }

    pub fn is_chain(&self) -> bool {
        self.order.is_chain()
    }

    /// Nonzero elements that are not the join of everything strictly below.
    pub fn join_irreducibles(&self) -> Result<JoinIrreducibles> {
        let elements: Vec<usize> = (0..self.size())
            .filter(|&x| {
                let below = self.order.down_mask(x) & !(1u128 << x);
                x != self.bot && self.join_all(ones(below)) != x
            })
            .collect();
        if elements.is_empty() {
            return Err(Error::Empty);
        }
        let poset = self.order.induced(&elements)?;
        Ok(JoinIrreducibles { poset, elements })
    }

    /// Relabels so that old element `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> FinLattice {
        FinLattice::from_poset(self.order.relabel(perm)).expect("relabeling keeps lattices")
    }

    pub(crate) fn join_table(&self) -> &[usize] {
        &self.join
    }

    pub(crate) fn meet_table(&self) -> &[usize] {
        &self.meet
    }
}

/// Join-irreducible elements of a lattice with their induced order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinIrreducibles {
    pub poset: Poset,
    /// `elements[j]` is the lattice element behind poset point `j`.
    pub elements: Vec<usize>,
}

/// The lattice of all downsets of a poset, ordered by inclusion.
#[derive(Clone, Debug)]
pub struct DownsetLattice {
    pub base: Poset,
    /// Downsets as masks over `base`, in size-then-value order.
    pub elements: Vec<u128>,
    pub lattice: FinLattice,
    index: HashMap<u128, usize>,
}

impl DownsetLattice {
    pub fn index_of(&self, downset: u128) -> Option<usize> {
        self.index.get(&downset).copied()
    }

    /// Index of the principal downset of base point `x`.
    pub fn principal(&self, x: usize) -> usize {
        self.index[&self.base.down_mask(x)]
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// All downsets of `w` under inclusion, with union and intersection as
/// join and meet. Fails only when there are more than [`MAX_POSET`]
/// downsets.
pub fn downset_lattice(w: &Poset) -> Result<DownsetLattice> {
    let elements = w.downsets();
    if elements.len() > MAX_POSET {
        return Err(Error::TooLarge {
            what: "downset lattice",
            size: elements.len(),
            limit: MAX_POSET,
        });
    }
    let index: HashMap<u128, usize> = elements.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let n = elements.len();
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for (i, &a) in elements.iter().enumerate() {
        for (j, &b) in elements.iter().enumerate() {
            join[i * n + j] = index[&(a | b)];
            meet[i * n + j] = index[&(a & b)];
        }
    }
    let order = Poset::from_fn(n, |i, j| elements[i] & !elements[j] == 0)?;
    let lattice = FinLattice {
        order,
        join,
        meet,
        top: n - 1,
        bot: 0,
    };
    Ok(DownsetLattice {
        base: w.clone(),
        elements,
        lattice,
        index,
    })
}

impl Canonical for Poset {
    fn structure(&self) -> Structure {
        Structure::new(self.n, b"poset").relation2(self.up.clone())
    }
}

impl Canonical for FinLattice {
    fn structure(&self) -> Structure {
        Structure::new(self.size(), b"lattice").relation2(self.order.up.clone())
    }
}

impl Poset {
    /// Number of downsets, without materializing them.
    pub fn downset_count(&self) -> usize {
        let mut k = 0;
        self.for_each_downset(|_| k += 1);
        k
    }
}

/// One poset per isomorphism class on `n` points, relabeled canonically and
/// sorted by canonical form.
pub fn posets(n: usize) -> Vec<Poset> {
    grow_posets(n, &|_| true).pop().unwrap_or_default()
}

/// Posets of every size whose downset lattice has at most `limit`
/// elements, one per isomorphism class. Downset counts only grow when a
/// point is added, so the generation tree can be pruned.
pub fn posets_with_downsets_at_most(limit: usize) -> Vec<Poset> {
    let keep = |p: &Poset| p.downset_count() <= limit;
    grow_posets(limit.saturating_sub(1), &keep)
        .into_iter()
        .flatten()
        .collect()
}

/// Level `k - 1` of the result holds the classes on `k` points passing
/// `keep`. Every poset arises from a smaller one by adding a maximal point
/// above some downset.
fn grow_posets(max: usize, keep: &dyn Fn(&Poset) -> bool) -> Vec<Vec<Poset>> {
    let mut levels: Vec<Vec<Poset>> = Vec::new();
    if max == 0 {
        return levels;
    }
    let first = Poset::antichain(1);
    levels.push(if keep(&first) { vec![first] } else { Vec::new() });
    for k in 1..max {
        let mut next: BTreeMap<CanonicalForm, Poset> = BTreeMap::new();
        for p in &levels[k - 1] {
            for d in p.downsets() {
                let q = Poset::from_fn(k + 1, |x, y| {
                    if y == k {
                        x == k || d >> x & 1 == 1
                    } else {
                        x != k && p.leq(x, y)
                    }
                })
                .expect("adding a maximal point keeps a partial order");
                if !keep(&q) {
                    continue;
                }
                let (form, perm) = q.structure().canonical_labeling();
                next.entry(form).or_insert_with(|| q.relabel(&perm));
            }
        }
        levels.push(next.into_values().collect());
    }
    levels
}

/// Random finite posets for property tests.
#[cfg(test)]
pub(crate) mod strategies {
    use proptest::prelude::*;

    use super::Poset;

    /// Closures of random pairs `i < j`, so the relation is acyclic.
    pub fn poset(max_n: usize) -> impl Strategy<Value = Poset> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                let pairs: Vec<(usize, usize)> =
                    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| bits[i * n + j]).collect();
                Poset::from_relations(n, &pairs).expect("acyclic")
            })
        })
    }

    /// A poset with a permutation of its points.
    pub fn relabeled_poset(max_n: usize) -> impl Strategy<Value = (Poset, Vec<usize>)> {
        poset(max_n).prop_flat_map(|p| {
            let n = p.size();
            (Just(p), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        })
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn m3() -> FinLattice {
        // bottom 0, atoms 1 2 3, top 4
        let p = Poset::from_relations(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        FinLattice::from_poset(p).unwrap()
    }

    #[test]
    fn rejects_empty_and_non_orders() {
        assert_eq!(Poset::from_fn(0, |_, _| true), Err(Error::Empty));
        assert!(matches!(
            Poset::from_fn(2, |_, _| true),
            Err(Error::NotAnOrder(_))
        ));
        assert!(matches!(
            Poset::from_fn(3, |x, y| x == y || (x, y) == (0, 1) || (x, y) == (1, 2)),
            Err(Error::NotAnOrder(w)) if w.law == "transitivity"
        ));
    }

    #[test]
    fn downset_lattice_examples() {
        let d = downset_lattice(&Poset::antichain(1)).unwrap();
        assert_eq!(d.size(), 2);
        assert!(d.lattice.is_chain());
        let d = downset_lattice(&Poset::antichain(2)).unwrap();
        assert_eq!(d.size(), 4);
        assert!(d.lattice.is_boolean());
        let d = downset_lattice(&Poset::chain(3)).unwrap();
        assert_eq!(d.size(), 4);
        assert!(d.lattice.is_chain());
        for n in 1..=7 {
            assert_eq!(downset_lattice(&Poset::antichain(n)).unwrap().size(), 1 << n);
            assert_eq!(downset_lattice(&Poset::chain(n)).unwrap().size(), n + 1);
        }
    }

    #[test]
    fn downset_lattice_is_ordered_and_distributive() {
        let w = Poset::from_relations(4, &[(0, 2), (1, 2), (1, 3)]).unwrap();
        let d = downset_lattice(&w).unwrap();
        assert!(d.elements.iter().all(|&m| w.is_downset(m)));
        assert_eq!(d.lattice.bot(), 0);
        assert_eq!(d.lattice.top(), d.size() - 1);
        assert!(d.lattice.is_distributive());
        let l = &d.lattice;
        for x in 0..l.size() {
            for y in 0..l.size() {
                assert_eq!(l.leq(x, y), l.join(x, y) == y);
                assert_eq!(l.leq(x, y), l.meet(x, y) == x);
            }
        }
        // Matches the generic construction from the order alone.
        let g = FinLattice::from_poset(l.order().clone()).unwrap();
        assert_eq!(&g, l);
    }

    #[test]
    fn join_irreducibles_examples() {
        let j = FinLattice::chain(2).join_irreducibles().unwrap();
        assert_eq!(j.poset.size(), 1);
        assert_eq!(j.elements, vec![1]);
        let d = downset_lattice(&Poset::antichain(2)).unwrap();
        let j = d.lattice.join_irreducibles().unwrap();
        assert!(j.poset.is_antichain());
        assert_eq!(j.poset.size(), 2);
        assert!(FinLattice::chain(1).join_irreducibles().is_err());
    }

    #[test]
    fn distributivity() {
        assert!(FinLattice::chain(5).is_distributive());
        let v = m3().distributivity();
        assert!(!v.holds());
        assert!(!m3().is_boolean());
    }

    #[test]
    fn non_lattice_rejected() {
        // two incomparable maximal elements
        let p = Poset::from_relations(3, &[(0, 1), (0, 2)]).unwrap();
        assert!(matches!(FinLattice::from_poset(p), Err(Error::NotALattice(_))));
    }

    #[test]
    fn hasse_edges_examples() {
        assert_eq!(Poset::chain(3).hasse_edges().len(), 2);
        assert_eq!(downset_lattice(&Poset::antichain(2)).unwrap().lattice.order().hasse_edges().len(), 4);
        assert!(Poset::antichain(4).hasse_edges().is_empty());
    }

    #[test]
    fn poset_class_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| posets(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 63, 318]);
    }

    #[test]
    fn distributive_lattice_counts_via_posets() {
        let ps = posets_with_downsets_at_most(8);
        let mut by_size = [0; 9];
        for p in &ps {
            by_size[p.downset_count()] += 1;
        }
        assert_eq!(&by_size[2..], &[1, 1, 2, 3, 5, 8, 15]);
    }

    #[test]
    fn canonical_forms_of_posets() {
        use crate::canon::canonicalize;
        assert_ne!(canonicalize(&Poset::chain(3)), canonicalize(&Poset::antichain(3)));
        let one = Poset::antichain(1);
        let two = Poset::antichain(2);
        let a = downset_lattice(&one.ordinal_sum(&two).unwrap()).unwrap().lattice;
        let b = downset_lattice(&two.ordinal_sum(&one).unwrap()).unwrap().lattice;
        assert_eq!(a.size(), 5);
        assert_eq!(b.size(), 5);
        assert_ne!(canonicalize(&a), canonicalize(&b));
    }

    #[test]
    fn sums_and_duals() {
        let v = Poset::antichain(1).ordinal_sum(&Poset::antichain(2)).unwrap();
        assert_eq!(v.hasse_edges().len(), 2);
        assert_eq!(v.dual().hasse_edges(), vec![(1, 0), (2, 0)]);
        let u = Poset::chain(2).disjoint_union(&Poset::chain(1)).unwrap();
        assert_eq!(downset_lattice(&u).unwrap().size(), 6);
    }
}
