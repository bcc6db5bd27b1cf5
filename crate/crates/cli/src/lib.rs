//! The `latkit` command line: enumeration tables, property checks,
//! conversions, preorder counts, SI analysis and diagram output.

pub mod dot;
pub mod json;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use latkit::algebra::{check_property, mul_from_pq, pq_from_mul};
use latkit::counting::{
    augmentation_preorder_count, brute_force_preorder_count, preorder_counts, SequenceName, Variant,
    AUGMENTATION_LIMIT, BRUTE_FORCE_LIMIT,
};
use latkit::enumeration::{
    enumerate_algebras, enumerate_lattices, enumerate_linear_frames, enumerate_pforest_frames, group_by_poset,
    linear_frame_algebras, table1_cell, CellOutcome, LatticeClass, Search, Table1Row, TABLE1,
};
use latkit::frames::{
    algebraic_counterpart, downset_algebra, frame_from_algebra, frame_property, pq_from_r, pq_structure_from_wc_r,
    r_from_pq, wc_r_from_pq_structure,
};
use latkit::si::{build_chain, congruence_lattice, si_census, ChainFamilySpec, Partition, SI_CLOSURE_FIXTURES};
use latkit::{Canonical, Exec, FinAlgebra, FrameKind, FrameProperty, Method, PropertyName, Verdict};

use json::Item;

pub const BUDGET_ENV: &str = "LATKIT_BUDGET_SECONDS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Lib(#[from] latkit::Error),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Lib(_) | CliError::Io(_) => 1,
        }
    }
}

/// Whether the command's own check passed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
        }
    }

    fn and(self, ok: bool) -> Status {
        if ok {
            self
        } else {
            Status::Failed
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "latkit", version, about = "Finite distributive lattice-ordered algebras and their frames")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count a class by cardinality and compare with the reference values.
    Enumerate(EnumerateArgs),
    /// Decide a property of an algebra or frame file.
    Check(CheckArgs),
    /// Convert between frame presentations and algebras.
    Convert(ConvertArgs),
    /// Preorder tree and forest counts.
    Count(CountArgs),
    /// Subdirectly irreducible closure algebras and chain families.
    Si(SiArgs),
    /// Draw an algebra or frame.
    Render(RenderArgs),
}

fn parse_exec(s: &str) -> Result<Exec, String> {
    s.parse().map_err(|e: latkit::Error| e.to_string())
}

/// `n` or the inclusive range `a..b`.
fn parse_sizes(s: &str) -> Result<SizeRange, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad size `{t}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if lo == 0 || lo > hi {
        return Err(format!("empty size range `{s}`"));
    }
    Ok(SizeRange { lo, hi })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeRange {
    pub lo: usize,
    pub hi: usize,
}

impl SizeRange {
    fn is_single(self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    /// A table row key, `pforest-frames`, `linear-frames` or
    /// `linear-algebras`.
    #[arg(long)]
    pub class: String,
    /// `n` or `a..b`.
    #[arg(long, value_parser = parse_sizes)]
    pub size: SizeRange,
    /// Also compute cells with no reference value.
    #[arg(long)]
    pub extend: bool,
    /// Write every structure, one JSON document per line.
    #[arg(long, value_name = "FILE")]
    pub jsonl: Option<PathBuf>,
    /// `sequential` or `parallel`.
    #[arg(long, value_parser = parse_exec, default_value = "parallel")]
    pub exec: Exec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Brute,
    Characterized,
    Both,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub property: String,
    #[arg(long, value_enum, default_value = "both")]
    pub method: MethodArg,
    /// JSON document, `-` for stdin.
    pub file: PathBuf,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    /// `pq`, `birkhoff`, `pq-structure`, `wc-birkhoff`, `frame`, `algebra`
    /// or `mul`.
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    #[arg(long)]
    pub pretty: bool,
    pub file: PathBuf,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    /// `T`, `c`, `F`, `Ts`, `cs` or `Fs`; all six as a table when omitted.
    #[arg(long)]
    pub sequence: Option<String>,
    #[arg(long)]
    pub to: usize,
    /// Recount by enumeration and compare.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("what").required(true).args(["census", "chain"])))]
pub struct SiArgs {
    /// Census of SI closure algebras up to this size.
    #[arg(long, value_name = "N")]
    pub census: Option<usize>,
    /// `A:k`, `B:k`, `Bp:k` or `C:n,k`.
    #[arg(long, value_name = "SPEC")]
    pub chain: Option<String>,
    /// Print the chain as JSON instead of its summary.
    #[arg(long, requires = "chain")]
    pub json: bool,
    #[arg(long, value_name = "FILE", requires = "census")]
    pub jsonl: Option<PathBuf>,
    #[arg(long, value_parser = parse_exec, default_value = "parallel")]
    pub exec: Exec,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    /// JSON document to draw as DOT, `-` for stdin.
    #[arg(long = "dot", value_name = "FILE")]
    pub file: PathBuf,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Parses `argv`, runs the command, and returns the exit code. Output goes
/// to `out`, diagnostics to `err`.
pub fn main_with(argv: impl IntoIterator<Item = std::ffi::OsString>, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(&cli.command, out) {
        Ok(s) => s.exit_code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cmd: &Command, out: &mut dyn Write) -> Result<Status, CliError> {
    match cmd {
        Command::Enumerate(a) => enumerate(a, out),
        Command::Check(a) => check(a, out),
        Command::Convert(a) => convert(a, out),
        Command::Count(a) => count(a, out),
        Command::Si(a) => si(a, out),
        Command::Render(a) => render(a, out),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

fn load(path: &Path) -> Result<Item, CliError> {
    json::parse(&read_input(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn budget() -> Result<Option<Duration>, CliError> {
    match std::env::var(BUDGET_ENV) {
        Err(_) => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|s| s.is_finite() && *s > 0.0)
            .map(|s| Some(Duration::from_secs_f64(s)))
            .ok_or_else(|| CliError::Usage(format!("{BUDGET_ENV} must be a positive number of seconds, got `{v}`"))),
    }
}

fn search(exec: Exec) -> Result<Search, CliError> {
    let s = Search::new(exec);
    Ok(match budget()? {
        Some(b) => s.with_budget(b),
        None => s,
    })
}

fn compare(expected: Option<u64>, got: u64, extend: bool) -> CellOutcome {
    match expected {
        Some(e) if e == got => CellOutcome::Match(got),
        Some(e) => CellOutcome::Mismatch { expected: e, got },
        None if extend => CellOutcome::Extension(got),
        None => CellOutcome::NotAttempted,
    }
}

fn counted(c: &CellOutcome) -> Option<u64> {
    match *c {
        CellOutcome::Match(v) | CellOutcome::Extension(v) | CellOutcome::Mismatch { got: v, .. } => Some(v),
        _ => None,
    }
}

const PFOREST_FRAMES: [u64; 3] = [1, 5, 34];

fn enumerate(args: &EnumerateArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    budget()?;
    let mut sink = match &args.jsonl {
        Some(p) => Some(io::BufWriter::new(fs::File::create(p)?)),
        None => None,
    };
    let mut emit = |item: Item| -> io::Result<()> {
        if let Some(w) = sink.as_mut() {
            writeln!(w, "{}", json::to_json(&item.canonical()))?;
        }
        Ok(())
    };
    let mut t = Tally { status: Status::Ok, total: Some(0) };
    let exec = args.exec;
    match args.class.as_str() {
        "pforest-frames" => {
            writeln!(out, "preorder forest P-frames")?;
            for n in args.size.lo..=args.size.hi {
                let expected = PFOREST_FRAMES.get(n - 1).copied();
                if expected.is_none() && !args.extend {
                    t.cell(out, n, CellOutcome::NotAttempted)?;
                    continue;
                }
                let census = enumerate_pforest_frames(n, exec)?;
                t.cell(out, n, compare(expected, census.count() as u64, args.extend))?;
                for (w, k) in group_by_poset(&census) {
                    writeln!(out, "  poset {:?}: {k}", w.hasse_edges())?;
                }
                for f in census.items() {
                    emit(Item::Frame(f.clone()))?;
                }
            }
        }
        "linear-frames" => {
            writeln!(out, "linear P-frames")?;
            for n in args.size.lo..=args.size.hi {
                let census = enumerate_linear_frames(n, exec)?;
                t.cell(out, n, compare(Some(1 << (n - 1)), census.count() as u64, false))?;
                for l in census.items() {
                    emit(Item::Frame(l.frame.clone()))?;
                }
            }
        }
        "linear-algebras" => {
            writeln!(out, "downset algebras of linear P-frames")?;
            if args.size.lo < 2 {
                return Err(CliError::Usage("linear-algebras needs sizes of at least 2".into()));
            }
            for n in args.size.lo..=args.size.hi {
                let census = linear_frame_algebras(n, exec)?;
                let units = census
                    .items()
                    .filter(|a| latkit::algebra::find_identity_element(a).ok().flatten().is_some())
                    .count() as u64;
                t.cell(out, n, compare(Some(1 << (n - 2)), census.count() as u64, false))?;
                let id = compare(Some(n as u64 - 1), units, false);
                t.status = t.status.and(!id.is_failure());
                writeln!(out, "  with identity: {id}")?;
                for a in census.items() {
                    emit(Item::Algebra(a.clone()))?;
                }
            }
        }
        key => {
            let row = Table1Row::by_key(key).ok_or_else(|| {
                let keys: Vec<&str> = TABLE1.iter().map(|r| r.key).collect();
                CliError::Usage(format!(
                    "unknown class `{key}`; expected one of {}, pforest-frames, linear-frames, linear-algebras",
                    keys.join(", ")
                ))
            })?;
            writeln!(out, "row {} {}", row.row, row.label)?;
            for n in args.size.lo..=args.size.hi {
                let s = search(exec)?;
                let outcome = if args.jsonl.is_some() { table_cell_with_members(row, n, &s, args.extend, &mut emit)? } else { table1_cell(row, n, &s, args.extend)? };
                t.cell(out, n, outcome)?;
            }
        }
    }
    if !args.size.is_single() {
        match t.total {
            Some(t) => writeln!(out, "total: {t}")?,
            None => writeln!(out, "total: incomplete")?,
        }
    }
    Ok(t.status)
}

struct Tally {
    status: Status,
    /// `None` once a cell was skipped.
    total: Option<u64>,
}

impl Tally {
    fn cell(&mut self, out: &mut dyn Write, n: usize, c: CellOutcome) -> io::Result<()> {
        self.status = self.status.and(!c.is_failure());
        match (&c, counted(&c)) {
            (CellOutcome::NotAttempted, _) => {}
            (_, Some(v)) => self.total = self.total.map(|t| t + v),
            (_, None) => self.total = None,
        }
        writeln!(out, "n={n}: {c}")
    }
}

fn table_cell_with_members(
    row: &Table1Row,
    n: usize,
    s: &Search,
    extend: bool,
    emit: &mut dyn FnMut(Item) -> io::Result<()>,
) -> Result<CellOutcome, CliError> {
    let expected = row.expected(n);
    if expected.is_none() && !extend {
        return Ok(CellOutcome::NotAttempted);
    }
    let items: Vec<FinAlgebra> = match row.spec(n) {
        Some(spec) => match enumerate_algebras(&spec, s) {
            Ok(c) => c.members.into_iter().map(|m| m.item).collect(),
            Err(latkit::Error::BudgetExceeded) => return Ok(CellOutcome::Skipped),
            Err(e) => return Err(e.into()),
        },
        None => enumerate_lattices(n, LatticeClass::Distributive)?.items().cloned().map(FinAlgebra::new).collect(),
    };
    for a in &items {
        emit(Item::Algebra(a.clone()))?;
    }
    Ok(compare(expected, items.len() as u64, extend))
}

fn show(v: &Verdict) -> String {
    match v {
        Verdict::Holds => "holds".into(),
        Verdict::Fails(w) => format!("fails: {w}"),
    }
}

enum Prop {
    Algebra(PropertyName),
    Frame(FrameProperty),
}

fn parse_property(name: &str, item: &Item) -> Result<Prop, CliError> {
    if let (Item::Frame(_), Ok(p)) = (item, name.parse::<FrameProperty>()) {
        return Ok(Prop::Frame(p));
    }
    name.parse::<PropertyName>().map(Prop::Algebra).map_err(|_| {
        let mut names: Vec<&str> = PropertyName::ALL.iter().map(|p| p.name()).collect();
        if matches!(item, Item::Frame(_)) {
            names.extend(FrameProperty::ALL.iter().map(|p| p.name()));
        }
        CliError::Usage(format!("unknown property `{name}`; expected one of {}", names.join(", ")))
    })
}

/// The algebra a method needs: the brute force reads `mul`, the
/// characterization reads `p` and `q`; missing parts are derived through
/// the term equivalence.
fn with_parts(a: &FinAlgebra, method: Method, prop: PropertyName) -> latkit::Result<FinAlgebra> {
    let needs_mul = method == Method::Brute
        && matches!(
            prop,
            PropertyName::Associative
                | PropertyName::Commutative
                | PropertyName::Idempotent
                | PropertyName::UnaryDetermined
                | PropertyName::HasIdentity
                | PropertyName::ConservativeMul
                | PropertyName::WeaklyConservative
        );
    if needs_mul && a.mul_table().is_none() && a.p_table().is_some() {
        let b = if a.q_table().is_none() { a.clone().with_q(a.p_table().expect("present").to_vec())? } else { a.clone() };
        return mul_from_pq(&b);
    }
    if method == Method::Characterized && a.p_table().is_none() && a.mul_table().is_some() {
        return pq_from_mul(a);
    }
    Ok(a.clone())
}

fn decide(item: &Item, prop: &Prop, method: Method) -> latkit::Result<Verdict> {
    match (item, prop) {
        (Item::Algebra(a), Prop::Algebra(p)) => check_property(&with_parts(a, method, *p)?, *p, method),
        (Item::Frame(f), Prop::Algebra(p)) => {
            let a = downset_algebra(f)?;
            check_property(&with_parts(&a, method, *p)?, *p, method)
        }
        (Item::Frame(f), Prop::Frame(p)) => match method {
            Method::Brute => algebraic_counterpart(f, *p),
            Method::Characterized => frame_property(f, *p),
        },
        (Item::Algebra(_), Prop::Frame(_)) => unreachable!("frame properties parse only for frames"),
    }
}

fn check(args: &CheckArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    let item = load(&args.file)?;
    let prop = parse_property(&args.property, &item)?;
    let methods: &[(Method, &str)] = match args.method {
        MethodArg::Brute => &[(Method::Brute, "brute")],
        MethodArg::Characterized => &[(Method::Characterized, "characterized")],
        MethodArg::Both => &[(Method::Brute, "brute"), (Method::Characterized, "characterized")],
    };
    let mut verdicts = Vec::new();
    for &(m, label) in methods {
        match decide(&item, &prop, m) {
            Ok(v) => {
                writeln!(out, "{} ({label}): {}", args.property, show(&v))?;
                verdicts.push(v.holds());
            }
            Err(e) if methods.len() > 1 => {
                writeln!(out, "{} ({label}): not decided: {e}", args.property)?;
                writeln!(out, "DISCREPANCY: only one method applies")?;
                return Ok(Status::Failed);
            }
            Err(e) => return Err(e.into()),
        }
    }
    if verdicts.windows(2).any(|w| w[0] != w[1]) {
        writeln!(out, "DISCREPANCY: brute {}, characterized {}", word(verdicts[0]), word(verdicts[1]))?;
        return Ok(Status::Failed);
    }
    Ok(if verdicts.iter().all(|&h| h) { Status::Ok } else { Status::Failed })
}

fn word(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}

fn convert(args: &ConvertArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    let item = load(&args.file)?;
    let wrong = |want: &str| CliError::Usage(format!("--from {} expects a {want} document, got a {}", args.from, item.kind()));
    let result = match (args.from.as_str(), args.to.as_str(), &item) {
        ("pq" | "p", "birkhoff", Item::Frame(f)) => Item::Frame(r_from_pq(f)?),
        ("birkhoff", "pq", Item::Frame(f)) => Item::Frame(pq_from_r(f)?),
        ("pq-structure", "wc-birkhoff" | "birkhoff", Item::Frame(f)) => Item::Frame(wc_r_from_pq_structure(f)?),
        ("wc-birkhoff" | "birkhoff", "pq-structure", Item::Frame(f)) => Item::Frame(pq_structure_from_wc_r(f)?),
        ("frame" | "pq" | "birkhoff" | "pq-structure", "algebra", Item::Frame(f)) => {
            Item::Algebra(downset_algebra(f)?)
        }
        ("algebra", "frame", Item::Algebra(a)) => Item::Frame(frame_from_algebra(a)?),
        ("pq", "mul", Item::Algebra(a)) => Item::Algebra(mul_from_pq(a)?),
        ("mul", "pq", Item::Algebra(a)) => Item::Algebra(pq_from_mul(a)?),
        ("pq" | "p" | "birkhoff" | "pq-structure" | "wc-birkhoff" | "frame", _, Item::Algebra(_)) => {
            return Err(wrong("frame"))
        }
        ("algebra" | "mul", _, Item::Frame(_)) => return Err(wrong("algebra")),
        (from, to, _) => {
            return Err(CliError::Usage(format!(
                "no conversion from `{from}` to `{to}`; supported: pq→birkhoff, birkhoff→pq, \
                 pq-structure→wc-birkhoff, wc-birkhoff→pq-structure, frame→algebra, algebra→frame, pq→mul, mul→pq"
            )))
        }
    };
    if let Item::Frame(f) = &result {
        if f.kind == FrameKind::Birkhoff && f.validate()?.witness().is_some() {
            return Err(latkit::Error::InvalidFrame(f.validate()?.witness().cloned().expect("fails")).into());
        }
    }
    let text = if args.pretty { json::to_json_pretty(&result) } else { json::to_json(&result) };
    writeln!(out, "{text}")?;
    Ok(Status::Ok)
}

fn oracle_variant(name: SequenceName) -> Option<Variant> {
    Variant::ALL.into_iter().find(|v| v.sequence() == name)
}

fn count(args: &CountArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    if args.to == 0 {
        return Err(CliError::Usage("--to must be at least 1".into()));
    }
    let counts = preorder_counts(args.to)?;
    let names: Vec<SequenceName> = match &args.sequence {
        Some(s) => vec![s.parse().map_err(|e: latkit::Error| CliError::Usage(format!("{e}; expected T, c, F, Ts, cs or Fs")))?],
        None => {
            write!(out, "{}", counts.render())?;
            SequenceName::ALL.to_vec()
        }
    };
    let mut status = Status::Ok;
    for name in names {
        let values = &counts.get(name).values;
        if args.sequence.is_some() {
            writeln!(out, "{}", values.iter().map(u128::to_string).collect::<Vec<_>>().join(" "))?;
        }
        let cells: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| match name.reference().get(i) {
                Some(&e) if e == v => "match".to_string(),
                Some(&e) => {
                    status = Status::Failed;
                    format!("MISMATCH({e}, {v})")
                }
                None => "-".to_string(),
            })
            .collect();
        writeln!(out, "{name} reference: {}", cells.join(" "))?;
        if args.oracle {
            let Some(variant) = oracle_variant(name) else {
                writeln!(out, "{name} oracle: none (derived by the Euler transform)")?;
                continue;
            };
            let mut cells = Vec::new();
            for (i, &v) in values.iter().enumerate() {
                let n = i + 1;
                let got = if n <= BRUTE_FORCE_LIMIT {
                    brute_force_preorder_count(n, variant)?
                } else if n < AUGMENTATION_LIMIT {
                    augmentation_preorder_count(n, variant)?
                } else {
                    cells.push("-".to_string());
                    continue;
                };
                if u128::from(got) == v {
                    cells.push("agrees".to_string());
                } else {
                    status = Status::Failed;
                    cells.push(format!("DISAGREES({got})"));
                }
            }
            writeln!(out, "{name} oracle: {}", cells.join(" "))?;
        }
    }
    Ok(status)
}

fn classes(p: &Partition) -> String {
    p.classes()
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| format!("{{{}}}", c.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn si(args: &SiArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    if let Some(spec) = &args.chain {
        let spec: ChainFamilySpec = spec.parse().map_err(|e: latkit::Error| CliError::Usage(e.to_string()))?;
        let a = build_chain(spec)?;
        if args.json {
            writeln!(out, "{}", json::to_json(&Item::Algebra(a)))?;
            return Ok(Status::Ok);
        }
        let l = congruence_lattice(&a)?;
        writeln!(out, "chain {spec}: {} elements", a.size())?;
        if let Some(p) = a.p_table() {
            writeln!(out, "p: {p:?}")?;
        }
        if let Some(e) = a.one() {
            writeln!(out, "one: {e}")?;
        }
        writeln!(out, "congruences: {}", l.len())?;
        match &l.monolith {
            Some(m) => writeln!(out, "monolith: {}", classes(m))?,
            None => writeln!(out, "monolith: none")?,
        }
        writeln!(out, "subdirectly irreducible: {}", yes(l.is_subdirectly_irreducible()))?;
        writeln!(out, "simple: {}", yes(l.is_simple()))?;
        return Ok(Status::Ok);
    }
    let n_max = args.census.expect("clap group");
    let census = match si_census(n_max, &search(args.exec)?) {
        Err(latkit::Error::BudgetExceeded) => {
            writeln!(out, "skipped (budget)")?;
            return Ok(Status::Failed);
        }
        r => r?,
    };
    let fixtures: Vec<(&str, usize, latkit::CanonicalForm)> = SI_CLOSURE_FIXTURES
        .iter()
        .map(|f| Ok((f.name, f.size, f.algebra()?.canonical_form())))
        .collect::<latkit::Result<_>>()?;
    let name_of = |a: &FinAlgebra| {
        let form = a.canonical_form();
        fixtures.iter().find(|f| f.2 == form).map(|f| f.0)
    };
    writeln!(out, "{}: {}", census.label, census.count())?;
    let mut status = Status::Ok;
    for n in 2..=n_max {
        let mut names: Vec<String> = Vec::new();
        let mut unnamed = 0;
        for a in census.items().filter(|a| a.size() == n) {
            match name_of(a) {
                Some(name) => names.push(name.to_string()),
                None => unnamed += 1,
            }
        }
        names.sort_by_key(|s| fixtures.iter().position(|f| f.0 == s).expect("named"));
        for k in 0..unnamed {
            names.push(format!("new{}", k + 1));
        }
        if names.is_empty() {
            writeln!(out, "n={n}: none")?;
        } else {
            writeln!(out, "n={n}: {}", names.join(" "))?;
        }
    }
    if n_max <= 8 {
        let expected = fixtures.iter().filter(|f| f.1 <= n_max).count() as u64;
        let found = census.items().filter(|a| name_of(a).is_some()).count() as u64;
        let c = compare(Some(expected), census.count() as u64, false);
        status = status.and(!c.is_failure() && found == expected);
        writeln!(out, "fixtures: {c}")?;
    }
    if let Some(path) = &args.jsonl {
        let mut w = io::BufWriter::new(fs::File::create(path)?);
        for a in census.items() {
            writeln!(w, "{}", json::to_json(&Item::Algebra(a.clone()).canonical()))?;
        }
        w.flush()?;
    }
    Ok(status)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render(args: &RenderArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    let text = read_input(&args.file)?;
    let doc: json::Doc = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: malformed JSON: {e}", args.file.display())))?;
    let item = json::from_doc(&doc).map_err(|e| CliError::Input(format!("{}: {e}", args.file.display())))?;
    let dot = dot::render(&item, doc.closed.as_deref());
    match &args.output {
        Some(p) => fs::write(p, dot)?,
        None => out.write_all(dot.as_bytes())?,
    }
    Ok(Status::Ok)
}
