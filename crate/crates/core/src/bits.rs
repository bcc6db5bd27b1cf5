//! Bitmask helpers shared by the lattice, frame and enumeration code.

/// Iterates the positions of the set bits of `m`, lowest first.
pub fn ones(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// As [`ones`], for 128-bit masks.
pub fn ones128(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Mask with the low `n` bits set.
pub fn low(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Calls `f` on every downset of an order on at most 128 points.
///
/// `below[e]` is the set of points strictly below `e`. Every reported
/// downset contains `forced`, which must itself be downward closed.
/// Points unrelated to everything are not branched on; their subsets are
/// swept with the submask trick at each leaf.
pub fn for_each_downset(below: &[u128], forced: u128, f: &mut impl FnMut(u128)) {
    let all = if below.len() >= 128 { u128::MAX } else { (1u128 << below.len()) - 1 };
    for_each_downset_in(below, forced, all, f)
}

/// As [`for_each_downset`], but only points in `allowed` may be added
/// beyond `forced`.
pub fn for_each_downset_in(below: &[u128], forced: u128, allowed: u128, f: &mut impl FnMut(u128)) {
    let m = below.len();
    assert!(m <= 128, "at most 128 points");
    let mut has_above = 0u128;
    for &b in below {
        has_above |= b;
    }
    let mut free = 0u128;
    let mut order = Vec::with_capacity(m);
    // Kahn-style linear extension: repeatedly take points whose lower
    // covers have all been placed.
    let all = if m == 128 { u128::MAX } else { (1u128 << m) - 1 };
    let mut placed = 0u128;
    while placed != all {
        let mut progressed = false;
        for e in 0..m {
            let bit = 1u128 << e;
            if placed & bit != 0 || below[e] & !placed != 0 {
                continue;
            }
            placed |= bit;
            progressed = true;
            if forced & bit != 0 || allowed & bit == 0 {
                continue;
            }
            if below[e] == 0 && has_above & bit == 0 {
                free |= bit;
            } else {
                order.push(e);
            }
        }
        assert!(progressed, "`below` must describe an acyclic order");
    }
    fn rec(
        k: usize,
        order: &[usize],
        below: &[u128],
        mask: u128,
        free: u128,
        f: &mut impl FnMut(u128),
    ) {
        if k == order.len() {
            let mut s = 0u128;
            loop {
                f(mask | s);
                if s == free {
                    break;
                }
                s = s.wrapping_sub(free) & free;
            }
            return;
        }
        let e = order[k];
        rec(k + 1, order, below, mask, free, f);
        if below[e] & !mask == 0 {
            rec(k + 1, order, below, mask | (1u128 << e), free, f);
        }
    }
    rec(0, &order, below, forced, free, f);
}

/// Splits the downsets of an order into disjoint work units. Each unit is
/// a `(forced, allowed)` pair for [`for_each_downset_in`], fixing which of
/// the first `k` points of a linear extension belong to the downset.
pub fn downset_seeds(below: &[u128], k: usize) -> Vec<(u128, u128)> {
    let m = below.len();
    let all = if m >= 128 { u128::MAX } else { (1u128 << m) - 1 };
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&e| (below[e].count_ones(), e));
    let prefix = order.iter().take(k).fold(0u128, |acc, &e| acc | 1u128 << e);
    let mut seeds = Vec::new();
    for_each_downset_in(below, 0, prefix, &mut |d| seeds.push((d, all & !(prefix & !d))));
    seeds
}
