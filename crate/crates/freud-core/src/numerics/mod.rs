//! Precision-carrying scalar arithmetic and the small linear-algebra kernel
//! the rest of the crate is built on.

mod gamma;
mod poly;
mod scalar;
mod tridiag;

pub use gamma::gamma_quarter;
pub use poly::{poly_eval, Poly};
pub use scalar::{Complex, Ctx, Real};
pub use tridiag::{symtridiag_eigen, thomas_solve};
