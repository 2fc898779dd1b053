//! Exact computation of the linear strand of a finite point configuration in
//! projective n-space, extraction of its special quadrics, constructive
//! product-ideal certificates from splitting quadrics, and the resulting
//! classification of configurations with a nonzero top strand number into
//! "on a rational normal curve" or "on a union of two linear subspaces".

pub mod combinat;
pub mod exactfield;
pub mod classify;
pub mod harness;
pub mod ideal;
pub mod io;
pub mod koszul;
pub mod projective;
pub mod selftest;
pub mod split;

pub use exactfield::{FieldDesc, Matrix, Scalar, DEFAULT_PRIME};
pub use projective::{PointConfig, Position, ProjPoint};
