//! Runner for the end-to-end acceptance checks: each check returns a verdict
//! and a one-line summary, and panics are caught and reported as failures.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// Result of one check: pass flag plus what was measured.
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
        }
    }
}

/// A named check, run once.
pub type Check = (&'static str, Box<dyn FnOnce() -> Verdict>);

pub struct Line {
    pub id: usize,
    pub name: &'static str,
    pub verdict: Verdict,
    pub elapsed: Duration,
}

impl std::fmt::Display for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {} ({:.1}s): {}",
            self.id,
            if self.verdict.pass { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed.as_secs_f64(),
            self.verdict.detail
        )
    }
}

fn panic_text(e: &(dyn std::any::Any + Send)) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panicked".into())
}

/// Runs one check, turning a panic into a failing verdict.
pub fn run(id: usize, name: &'static str, check: impl FnOnce() -> Verdict) -> Line {
    let start = Instant::now();
    let verdict = catch_unwind(AssertUnwindSafe(check))
        .unwrap_or_else(|e| Verdict::new(false, format!("panic: {}", panic_text(e.as_ref()))));
    Line {
        id,
        name,
        verdict,
        elapsed: start.elapsed(),
    }
}

/// Runs every check in order, printing one line each as it finishes.
/// Returns the number of failures.
pub fn run_all(checks: Vec<Check>) -> usize {
    let mut failed = 0;
    for (i, (name, check)) in checks.into_iter().enumerate() {
        let line = run(i + 1, name, check);
        println!("{line}");
        if !line.verdict.pass {
            failed += 1;
        }
    }
    failed
}
