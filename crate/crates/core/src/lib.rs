//! Exact symbolic engine for the Lie symmetries of the Benney moment
//! equations
//!
//! `A^i_t + A^{i+1}_x + i A^0_x A^{i-1} = 0`, `i = 0, 1, 2, …`
//!
//! * [`poly`]: weighted-graded polynomials with exact rational coefficients
//! * [`solver`]: the basis solutions `η^i_k` of the determining chains
//! * [`operator`]: verification of canonical operators, point generators,
//!   brackets and the `H^s` identities
//! * [`numeric`]: a finite-difference integrator used to check the finite
//!   point symmetries numerically

pub mod numeric;
pub mod operator;
pub mod poly;
pub mod solver;

pub use operator::{
    CanonicalOperator, ChainId, Form, OperatorError, PointGeneratorId, VerificationReport,
};
pub use poly::{Monomial, PolyError, Polynomial, Variable, WeightedDegree};
pub use solver::{generate_eta_matrix, generate_eta_row, EtaMatrix, EtaRow, SolverError};
