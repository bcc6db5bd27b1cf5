//! One JSON document shape for algebras and frames.
//!
//! ```json
//! {"size": 3, "leq": [[1,1,1],[0,1,1],[0,0,1]],
//!  "ops": {"p": [0,2,2]}, "constants": {"top": 2, "bot": 0},
//!  "declared": ["normal"], "closed": [0, 2]}
//! ```
//!
//! A document with a `frame` key is a frame on the poset `leq`; otherwise
//! it is an algebra on the lattice `leq`. Absent keys mean absent
//! signature parts.

use latkit::algebra::residuals;
use latkit::frames::{BinRel, TernRel};
use latkit::{Canonical, FinAlgebra, FinLattice, Frame, FrameKind, Poset, Signature};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ops {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mul: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heyting: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ldiv: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rdiv: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_star: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_star: Option<Vec<usize>>,
}

impl Ops {
    fn is_empty(&self) -> bool {
        *self == Ops::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub top: usize,
    pub bot: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub one: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDoc {
    pub kind: String,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<Vec<u8>>>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<u8>>>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<Vec<Vec<u8>>>>,
    /// Points of the identity candidate.
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Doc {
    pub size: usize,
    pub leq: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Ops::is_empty")]
    pub ops: Ops,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<Constants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameDoc>,
    /// `normal` and/or `dlpq`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub declared: Vec<String>,
    /// Elements drawn filled.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed: Option<Vec<usize>>,
}

/// A parsed document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Algebra(FinAlgebra),
    Frame(Frame),
}

impl Item {
    pub fn kind(&self) -> &'static str {
        match self {
            Item::Algebra(_) => "algebra",
            Item::Frame(_) => "frame",
        }
    }

    /// Relabeled into canonical order.
    pub fn canonical(&self) -> Item {
        match self {
            Item::Algebra(a) => Item::Algebra(a.relabel(&a.structure().canonical_labeling().1)),
            Item::Frame(f) => Item::Frame(f.relabel(&f.structure().canonical_labeling().1)),
        }
    }
}

fn bad(field: impl Into<String>, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("field `{}`: {msg}", field.into()))
}

fn bits(b: bool) -> u8 {
    u8::from(b)
}

fn matrix(n: usize, f: impl Fn(usize, usize) -> bool) -> Vec<Vec<u8>> {
    (0..n).map(|x| (0..n).map(|y| bits(f(x, y))).collect()).collect()
}

fn table_rows(n: usize, t: &[usize]) -> Vec<Vec<usize>> {
    t.chunks(n.max(1)).map(<[usize]>::to_vec).collect()
}

fn order_doc(w: &Poset) -> Vec<Vec<u8>> {
    matrix(w.size(), |x, y| w.leq(x, y))
}

pub fn algebra_doc(a: &FinAlgebra) -> Doc {
    let n = a.size();
    let bin = |t: Option<&[usize]>| t.map(|t| table_rows(n, t));
    let un = |t: Option<&[usize]>| t.map(<[usize]>::to_vec);
    let sig = a.signature();
    let mut declared = Vec::new();
    if sig.contains(Signature::NORMAL) {
        declared.push("normal".to_string());
    }
    if sig.contains(Signature::DLPQ) {
        declared.push("dlpq".to_string());
    }
    let closed = match latkit::algebra::is_closure_operator(a) {
        Ok(true) => a.closed_elements().ok(),
        _ => None,
    };
    Doc {
        size: n,
        leq: order_doc(a.lattice().order()),
        ops: Ops {
            mul: bin(a.mul_table()),
            p: un(a.p_table()),
            q: un(a.q_table()),
            heyting: bin(a.heyting_table()),
            ldiv: bin(a.ldiv_table()),
            rdiv: bin(a.rdiv_table()),
            p_star: un(a.p_star_table()),
            q_star: un(a.q_star_table()),
        },
        constants: Some(Constants { top: a.top(), bot: a.bot(), one: a.one() }),
        frame: None,
        declared,
        closed,
    }
}

pub fn frame_doc(f: &Frame) -> Doc {
    let n = f.size();
    let rel = |r: &Option<BinRel>| r.as_ref().map(|r| matrix(n, |x, y| r.contains(x, y)));
    Doc {
        size: n,
        leq: order_doc(&f.poset),
        ops: Ops::default(),
        constants: None,
        frame: Some(FrameDoc {
            kind: f.kind.name().to_string(),
            p: rel(&f.p_rel),
            q: rel(&f.q_rel),
            r: f.r.as_ref().map(|r| {
                (0..n).map(|x| matrix(n, |y, z| r.contains(x, y, z))).collect()
            }),
            e: f.e_set.map(|e| (0..n).filter(|&x| e >> x & 1 == 1).collect()),
        }),
        declared: Vec::new(),
        closed: None,
    }
}

pub fn to_doc(item: &Item) -> Doc {
    match item {
        Item::Algebra(a) => algebra_doc(a),
        Item::Frame(f) => frame_doc(f),
    }
}

fn read_matrix(field: &str, n: usize, m: &[Vec<u8>]) -> Result<Vec<Vec<bool>>, CliError> {
    if m.len() != n {
        return Err(bad(field, format!("expected {n} rows, found {}", m.len())));
    }
    m.iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != n {
                return Err(bad(format!("{field}[{i}]"), format!("expected {n} entries, found {}", row.len())));
            }
            row.iter()
                .enumerate()
                .map(|(j, &v)| match v {
                    0 => Ok(false),
                    1 => Ok(true),
                    _ => Err(bad(format!("{field}[{i}][{j}]"), "entries must be 0 or 1")),
                })
                .collect()
        })
        .collect()
}

fn read_table(field: &str, n: usize, rows: &[Vec<usize>]) -> Result<Vec<usize>, CliError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(bad(field, format!("expected a {n}×{n} table")));
    }
    let flat: Vec<usize> = rows.concat();
    if let Some(i) = flat.iter().position(|&v| v >= n) {
        return Err(bad(format!("{field}[{}][{}]", i / n, i % n), format!("entry must be below {n}")));
    }
    Ok(flat)
}

fn read_unary(field: &str, n: usize, t: &[usize]) -> Result<Vec<usize>, CliError> {
    if t.len() != n {
        return Err(bad(field, format!("expected {n} entries, found {}", t.len())));
    }
    if let Some(i) = t.iter().position(|&v| v >= n) {
        return Err(bad(format!("{field}[{i}]"), format!("entry must be below {n}")));
    }
    Ok(t.to_vec())
}

fn lib(field: &str) -> impl Fn(latkit::Error) -> CliError + '_ {
    move |e| bad(field, e)
}

pub fn from_doc(doc: &Doc) -> Result<Item, CliError> {
    let n = doc.size;
    if n == 0 {
        return Err(bad("size", "must be at least 1"));
    }
    let leq = read_matrix("leq", n, &doc.leq)?;
    let poset = Poset::from_matrix(&leq).map_err(lib("leq"))?;
    match &doc.frame {
        Some(fd) => {
            if !doc.ops.is_empty() || doc.constants.is_some() || !doc.declared.is_empty() {
                return Err(bad("frame", "a frame document carries no ops, constants or declared tags"));
            }
            Ok(Item::Frame(read_frame(poset, fd)?))
        }
        None => Ok(Item::Algebra(read_algebra(doc, poset)?)),
    }
}

fn read_frame(poset: Poset, fd: &FrameDoc) -> Result<Frame, CliError> {
    let n = poset.size();
    let kind: FrameKind = fd.kind.parse().map_err(lib("frame.kind"))?;
    let rel = |field: &str, m: &Option<Vec<Vec<u8>>>| -> Result<Option<BinRel>, CliError> {
        m.as_ref()
            .map(|m| {
                let b = read_matrix(field, n, m)?;
                Ok(BinRel::from_fn(n, |x, y| b[x][y]))
            })
            .transpose()
    };
    let r = fd
        .r
        .as_ref()
        .map(|r| {
            if r.len() != n {
                return Err(bad("frame.R", format!("expected {n} slices, found {}", r.len())));
            }
            let slices = r
                .iter()
                .enumerate()
                .map(|(x, s)| read_matrix(&format!("frame.R[{x}]"), n, s))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(TernRel::from_fn(n, |x, y, z| slices[x][y][z]))
        })
        .transpose()?;
    let e_set = fd
        .e
        .as_ref()
        .map(|e| {
            e.iter().try_fold(0u128, |m, &x| {
                if x < n {
                    Ok(m | 1 << x)
                } else {
                    Err(bad("frame.E", format!("point {x} out of range")))
                }
            })
        })
        .transpose()?;
    let f = Frame { poset, kind, r, p_rel: rel("frame.P", &fd.p)?, q_rel: rel("frame.Q", &fd.q)?, e_set };
    f.validate().map_err(lib("frame"))?;
    Ok(f)
}

fn read_algebra(doc: &Doc, poset: Poset) -> Result<FinAlgebra, CliError> {
    let n = doc.size;
    let lattice = FinLattice::from_poset(poset).map_err(lib("leq"))?;
    if let Some(c) = &doc.constants {
        if c.top != lattice.top() {
            return Err(bad("constants.top", format!("the top of `leq` is {}", lattice.top())));
        }
        if c.bot != lattice.bot() {
            return Err(bad("constants.bot", format!("the bottom of `leq` is {}", lattice.bot())));
        }
    }
    let ops = &doc.ops;
    let mut a = FinAlgebra::new(lattice);
    if let Some(m) = &ops.mul {
        a = a.with_mul(read_table("ops.mul", n, m)?).map_err(lib("ops.mul"))?;
    }
    if let Some(p) = &ops.p {
        a = a.with_p(read_unary("ops.p", n, p)?).map_err(lib("ops.p"))?;
    }
    if let Some(q) = &ops.q {
        a = a.with_q(read_unary("ops.q", n, q)?).map_err(lib("ops.q"))?;
    }
    if let Some(e) = doc.constants.as_ref().and_then(|c| c.one) {
        a = a.with_one(e).map_err(lib("constants.one"))?;
    }
    // Residuals are recomputed, then checked against the given tables.
    let given = [
        ("ops.heyting", Signature::HEYTING, ops.heyting.as_ref().map(|t| read_table("ops.heyting", n, t)).transpose()?),
        ("ops.ldiv", Signature::LDIV, ops.ldiv.as_ref().map(|t| read_table("ops.ldiv", n, t)).transpose()?),
        ("ops.rdiv", Signature::RDIV, ops.rdiv.as_ref().map(|t| read_table("ops.rdiv", n, t)).transpose()?),
        ("ops.p_star", Signature::P_STAR, ops.p_star.as_ref().map(|t| read_unary("ops.p_star", n, t)).transpose()?),
        ("ops.q_star", Signature::Q_STAR, ops.q_star.as_ref().map(|t| read_unary("ops.q_star", n, t)).transpose()?),
    ];
    if given.iter().any(|g| g.2.is_some()) {
        let full = residuals(&a).map_err(lib("ops"))?;
        let mut keep = a.signature() & Signature::PARTS;
        for (field, flag, table) in &given {
            let Some(table) = table else { continue };
            let have = match *flag {
                Signature::HEYTING => full.heyting_table(),
                Signature::LDIV => full.ldiv_table(),
                Signature::RDIV => full.rdiv_table(),
                Signature::P_STAR => full.p_star_table(),
                _ => full.q_star_table(),
            };
            match have {
                None => return Err(bad(*field, "the residuated operation is absent")),
                Some(h) if h != table.as_slice() => {
                    let i = h.iter().zip(table).position(|(x, y)| x != y).expect("tables differ");
                    return Err(bad(*field, format!("entry {i} is not the residual ({} expected)", h[i])));
                }
                Some(_) => keep |= *flag,
            }
        }
        a = full.reduct(keep);
    }
    for tag in &doc.declared {
        a = match tag.as_str() {
            "normal" => a.declare_normal().map_err(lib("declared"))?,
            "dlpq" => a.declare_dlpq().map_err(lib("declared"))?,
            other => return Err(bad("declared", format!("unknown tag `{other}`"))),
        };
    }
    if let Some(closed) = &doc.closed {
        let fixed = a.closed_elements().map_err(lib("closed"))?;
        let mut c = closed.clone();
        c.sort_unstable();
        c.dedup();
        if c != fixed {
            return Err(bad("closed", format!("the fixed points of p are {fixed:?}")));
        }
    }
    Ok(a)
}

pub fn parse(text: &str) -> Result<Item, CliError> {
    let doc: Doc = serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    from_doc(&doc)
}

pub fn to_json(item: &Item) -> String {
    serde_json::to_string(&to_doc(item)).expect("documents serialize")
}

pub fn to_json_pretty(item: &Item) -> String {
    serde_json::to_string_pretty(&to_doc(item)).expect("documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_algebra() -> FinAlgebra {
        FinAlgebra::new(FinLattice::chain(3)).with_p(vec![0, 2, 2]).unwrap().declare_normal().unwrap()
    }

    #[test]
    fn algebra_round_trip() {
        let a = chain_algebra();
        let text = to_json(&Item::Algebra(a.clone()));
        assert!(text.contains("\"closed\":[0,2]"));
        assert_eq!(parse(&text).unwrap(), Item::Algebra(a));
    }

    #[test]
    fn residuals_round_trip() {
        let a = latkit::algebra::mul_from_pq(&chain_algebra().with_q(vec![0, 2, 2]).unwrap()).unwrap();
        let r = residuals(&a).unwrap();
        let text = to_json(&Item::Algebra(r.clone()));
        assert_eq!(parse(&text).unwrap(), Item::Algebra(r));
    }

    #[test]
    fn frame_round_trip() {
        let w = Poset::from_relations(3, &[(0, 1)]).unwrap();
        let p = BinRel::from_fn(3, |x, y| w.leq(x, y) || (x == 2 && y == 0));
        let f = Frame::p_frame(w, p).with_e_set(0b101);
        let text = to_json(&Item::Frame(f.clone()));
        assert_eq!(parse(&text).unwrap(), Item::Frame(f));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = parse(r#"{"size":2,"leq":[[1,1],[0,1]],"ops":{"p":[0,5]}}"#).unwrap_err();
        assert!(e.to_string().contains("ops.p[1]"), "{e}");
        let e = parse(r#"{"size":2,"leq":[[1,1],[0,1]],"ops":{"heyting":[[1,1],[0,0]]}}"#).unwrap_err();
        assert!(e.to_string().contains("ops.heyting"), "{e}");
        let e = parse("{\"size\":2,\n\"leq\":[[1,1],[0,1]],\n\"opz\":{}}").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        assert!(parse(r#"{"size":2,"leq":[[1,1],[1,1]]}"#).is_err());
    }
}
