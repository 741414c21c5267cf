//! Check records produced by the identity suites and diagnostics. The CLI
//! renders these; the core only accumulates them.

use alloc::string::String;
use alloc::vec::Vec;

use crate::numerics::{Ctx, Real};

/// One verified statement: a named residual (already nonnegative) against a
/// tolerance, with an optional index and a free-form note.
pub struct Check {
    pub name: String,
    pub index: Option<i64>,
    pub residual: Real,
    pub tol: Real,
    pub pass: bool,
    pub note: String,
}

impl Check {
    pub fn new(
        cx: &Ctx,
        name: impl Into<String>,
        index: Option<i64>,
        residual: Real,
        tol: &Real,
        note: impl Into<String>,
    ) -> Self {
        let residual = residual.abs();
        let pass = !residual.is_nan() && cx.le(&residual, tol);
        Check {
            name: name.into(),
            index,
            residual,
            tol: tol.clone(),
            pass,
            note: note.into(),
        }
    }

    /// A check that records a precomputed verdict (used when "pass" is not a
    /// plain residual-below-tolerance comparison).
    pub fn verdict(
        name: impl Into<String>,
        index: Option<i64>,
        residual: Real,
        tol: Real,
        pass: bool,
        note: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            index,
            residual: residual.abs(),
            tol,
            pass,
            note: note.into(),
        }
    }
}

#[derive(Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn new() -> Self {
        VerifyReport { checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerifyReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    /// Largest residual among checks sharing a name prefix (whole report if
    /// the prefix is empty).
    pub fn worst_residual(&self, cx: &Ctx, prefix: &str) -> Real {
        let mut worst = cx.zero();
        for c in &self.checks {
            if c.name.starts_with(prefix) {
                worst = worst.max(&c.residual);
            }
        }
        worst
    }
}
