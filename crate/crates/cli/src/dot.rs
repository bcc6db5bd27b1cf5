//! Graphviz output. The order is drawn as solid Hasse edges from bottom to
//! top; a frame's extra `P` edges are dotted; closed elements of an
//! algebra and identity points of a frame are filled.

use std::fmt::Write;

use latkit::{FinAlgebra, Frame, Poset};

use crate::json::Item;

/// Pairs of `p` not in the order and not implied by the other drawn pairs.
/// A preorder is generated under composition, any other weakening relation
/// under composition with the order on either side.
pub fn dotted_edges(w: &Poset, p: &[u128]) -> Vec<(usize, usize)> {
    let n = w.size();
    let transitive = (0..n).all(|x| (0..n).filter(|&y| p[x] >> y & 1 == 1).all(|y| p[y] & !p[x] == 0));
    let mut kept: Vec<(usize, usize)> =
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| p[x] >> y & 1 == 1 && !w.leq(x, y)).collect();
    let mut i = 0;
    while i < kept.len() {
        let (x, y) = kept[i];
        let others: Vec<(usize, usize)> = kept.iter().copied().filter(|&e| e != (x, y)).collect();
        if generated(w, &others, transitive)[x] >> y & 1 == 1 {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept
}

/// Rows of the relation generated by the order and `edges`.
pub fn generated(w: &Poset, edges: &[(usize, usize)], transitive: bool) -> Vec<u128> {
    let n = w.size();
    let mut rows: Vec<u128> = (0..n).map(|x| w.up_mask(x)).collect();
    if transitive {
        for &(x, y) in edges {
            rows[x] |= 1 << y;
        }
        loop {
            let next: Vec<u128> = (0..n)
                .map(|x| (0..n).filter(|&y| rows[x] >> y & 1 == 1).fold(rows[x], |m, y| m | rows[y]))
                .collect();
            if next == rows {
                return rows;
            }
            rows = next;
        }
    }
    // u ≤ x E y ≤ v
    for &(x, y) in edges {
        for u in (0..n).filter(|&u| w.leq(u, x)) {
            rows[u] |= w.up_mask(y);
        }
    }
    rows
}

fn header(out: &mut String, name: &str) {
    let _ = writeln!(out, "digraph {name} {{");
    out.push_str("  rankdir=BT;\n  node [shape=circle, width=0.3, fixedsize=true, fontsize=10];\n");
}

fn nodes(out: &mut String, n: usize, filled: impl Fn(usize) -> bool) {
    for x in 0..n {
        if filled(x) {
            let _ = writeln!(out, "  {x} [style=filled, fillcolor=black, fontcolor=white];");
        } else {
            let _ = writeln!(out, "  {x};");
        }
    }
}

fn hasse(out: &mut String, w: &Poset) {
    for (x, y) in w.hasse_edges() {
        let _ = writeln!(out, "  {x} -> {y} [dir=none];");
    }
}

pub fn algebra_dot(a: &FinAlgebra, closed: Option<&[usize]>) -> String {
    let mut out = String::new();
    header(&mut out, "algebra");
    let marked = closed.map(<[usize]>::to_vec).unwrap_or_default();
    nodes(&mut out, a.size(), |x| marked.contains(&x));
    hasse(&mut out, a.lattice().order());
    out.push_str("}\n");
    out
}

pub fn frame_dot(f: &Frame) -> String {
    let mut out = String::new();
    header(&mut out, "frame");
    let e = f.e_set.unwrap_or(0);
    nodes(&mut out, f.size(), |x| e >> x & 1 == 1);
    hasse(&mut out, &f.poset);
    if let Some(p) = &f.p_rel {
        let d = dotted_edges(&f.poset, p.rows());
        for &(x, y) in &d {
            if d.contains(&(y, x)) {
                if x < y {
                    let _ = writeln!(out, "  {x} -> {y} [style=dotted, dir=both];");
                }
            } else {
                let _ = writeln!(out, "  {x} -> {y} [style=dotted];");
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn render(item: &Item, closed: Option<&[usize]>) -> String {
    match item {
        Item::Algebra(a) => {
            let derived = match latkit::algebra::is_closure_operator(a) {
                Ok(true) => a.closed_elements().ok(),
                _ => None,
            };
            algebra_dot(a, closed.or(derived.as_deref()))
        }
        Item::Frame(f) => frame_dot(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implied_edges_are_dropped() {
        // 0 < 1, and 2 P 0; then 2 P 1 follows.
        let w = Poset::from_relations(3, &[(0, 1)]).unwrap();
        let mut p: Vec<u128> = (0..3).map(|x| w.up_mask(x)).collect();
        p[2] |= 0b011;
        assert_eq!(dotted_edges(&w, &p), vec![(2, 0)]);
        let dot = frame_dot(&Frame::p_frame(w, latkit::frames::BinRel::from_rows(p)));
        assert!(dot.contains("0 -> 1 [dir=none]"));
        assert!(dot.contains("2 -> 0 [style=dotted]"));
        assert!(!dot.contains("2 -> 1"));
    }

    #[test]
    fn symmetric_pairs_are_one_edge() {
        let w = Poset::antichain(2);
        let dot = frame_dot(&Frame::p_frame(w, latkit::frames::BinRel::from_rows(vec![0b11, 0b11])));
        assert!(dot.contains("0 -> 1 [style=dotted, dir=both]"));
        assert!(!dot.contains("1 -> 0"));
    }
}
