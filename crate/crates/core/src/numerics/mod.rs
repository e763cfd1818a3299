//! Shared numerical kernels: CSR matrices, conjugate gradients with optional
//! null-space projection, a Thomas tridiagonal solve, quadrature rules, and
//! finite-difference / order-measurement helpers backing the test oracles.
//!
//! All reductions use a fixed summation order, so every kernel is
//! deterministic for fixed inputs regardless of thread count.

pub mod cg;
pub mod fd;
pub mod quad;
pub mod richardson;
pub mod sparse;
pub mod tridiag;

pub use cg::{cg_solve, NullSpace, SolveReport};
pub use sparse::{CsrMatrix, LinearOperator};
pub use tridiag::tridiag_solve;
