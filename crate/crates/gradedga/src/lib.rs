//! Graded symmetry group numerics in real Clifford algebras R(p,q,r).
//!
//! The crate provides dense multivector arithmetic over complex coefficients,
//! plane/sphere embeddings with the orientation-correct (twisted) group
//! action, the invariant decomposition of bivectors into commuting simple
//! 2-blades, closed-form exponentials and principal logarithms for Spin
//! groups, factorization of k-reflections into commuting simple factors,
//! and the 2^n x 2^n Clifford matrix representation in which the geometric
//! product becomes a matrix-vector product.

pub mod algebra;
pub mod decomposition;
pub mod embedding;
pub mod error;
pub mod exp_log;
pub mod factorization;
pub mod json;
pub mod matrix_rep;
pub mod multivector;
mod poly;
pub mod tolerance;

pub use algebra::{Algebra, MAX_DIM};
pub use decomposition::{
    lambda_polynomial, solve_lambdas, split, split_k2, wedge_powers, Decomposition, WedgePowers,
};
pub use embedding::{embed_plane, embed_sphere, sandwich, versor_det, witt_basis, Parity, Versor};
pub use error::{GaError, Result};
pub use exp_log::{
    co, exp_bivector, exp_series, exp_simple, gauge_rotor, log_simple, rotor_power, si, sinhc,
    Rotor, SimpleBivector,
};
pub use factorization::{factor_even, factor_odd, log_rotor, tangent_split, Factorization, TangentSplit};
pub use matrix_rep::{
    e3_blocks, solve_gp, BladeOrder, CliffordRep, ConjugationMatrix, E3Blocks, GradeOp, REP_MAX_DIM,
};
pub use multivector::Multivector;
pub use tolerance::Tolerance;

pub use num_complex::Complex64;
