//! Reporting helpers for the acceptance suite in `tests/acceptance.rs`.

use std::fmt::Write;
use std::time::{Duration, Instant};

/// One criterion's verdict with the evidence behind it.
#[derive(Debug, Default)]
pub struct Outcome {
    pub pass: bool,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn new() -> Self {
        Outcome { pass: true, notes: Vec::new() }
    }

    /// Records a condition; any false one fails the criterion.
    pub fn require(&mut self, ok: bool, note: impl Into<String>) {
        let note = note.into();
        if !ok {
            self.pass = false;
            self.notes.push(format!("FAILED {note}"));
        } else if !note.is_empty() {
            self.notes.push(note);
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Fails with the error text.
    pub fn error(&mut self, e: impl std::fmt::Display) {
        self.pass = false;
        self.notes.push(format!("error: {e}"));
    }

    pub fn within(&mut self, what: &str, took: Duration, limit: Duration) {
        self.require(took <= limit, format!("{what} {took:.2?} (limit {limit:?})"));
    }
}

/// A named criterion.
pub type Criterion = (&'static str, fn() -> Outcome);

/// Runs criteria in order, printing one line each, and returns how many
/// failed.
pub fn run(criteria: &[Criterion]) -> usize {
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = std::panic::catch_unwind(f).unwrap_or_else(|_| {
            let mut o = Outcome::new();
            o.error("panicked");
            o
        });
        failed += usize::from(!o.pass);
        let mut line = format!("{} [{:>2}] {name} ({:.1?})", if o.pass { "PASS" } else { "FAIL" }, i + 1, start.elapsed());
        if !o.notes.is_empty() {
            let _ = write!(line, ": {}", o.notes.join("; "));
        }
        println!("{line}");
    }
    failed
}
