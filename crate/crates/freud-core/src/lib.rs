//! Computational kernel for monic orthogonal polynomials of the weight
//! exp(-x^4) on the real line and for their Sobolev variants, where the inner
//! product adds point masses on derivative values at the origin:
//!
//! ```text
//! <f, g> = integral f(x) g(x) exp(-x^4) dx  +  sum_k lambda_k f^(k)(0) g^(k)(0)
//! ```
//!
//! The crate computes recurrence coefficients (two independent engines with a
//! declared trusted range), squared norms, connection coefficients between the
//! two polynomial families, zeros with certified enclosures and interlacing
//! verdicts, and scaled-ratio asymptotics against conformal-map targets.
//!
//! Everything is arbitrary-precision; precision is carried by an explicit
//! context ([`numerics::Ctx`]), never global state. The crate is no_std
//! (alloc required); IO lives in the companion CLI crate.

#![cfg_attr(all(not(feature = "std"), not(test)), no_std)]

extern crate alloc;

pub mod asymptotics;
pub mod freud;
pub mod numerics;
pub mod report;
pub mod sobolev;
pub mod zeros;

use alloc::string::String;
use core::fmt;

/// Unified error type for the computational layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Invalid argument (wrong parity, negative mass, out-of-range index...).
    Param(&'static str),
    /// Precision was insufficient and escalation hit its cap, or a recurrence
    /// lost positivity. Carries the first index where trust broke down.
    Precision { index: usize, detail: String },
    /// An iterative solver did not converge within its budget.
    Iteration { index: usize, detail: String },
    /// Evaluation point outside the operation's domain (e.g. on a branch cut).
    Domain(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Param(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Precision { index, detail } => {
                write!(f, "precision exhausted at index {index}: {detail}")
            }
            Error::Iteration { index, detail } => {
                write!(f, "iteration budget exceeded at index {index}: {detail}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
