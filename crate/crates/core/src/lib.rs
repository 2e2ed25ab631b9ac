//! Crystal bases `B(infinity)` for quantum generalized Kac-Moody algebras.
//!
//! The crate realizes `B(infinity)` by iterating strict embeddings into
//! tensor products with elementary crystals, and cross-checks the result
//! against an independent graded-dimension computation in `U_q^-` and
//! against pointwise invariants of quiver representations.

pub mod cartan;
pub mod crystal;
pub mod elementary;
pub mod tensor;
pub mod binfinity;
pub mod oracle;
pub mod geometry;
pub mod cli;
