//! Rational homotopy of suspended projective spaces through free graded Lie
//! algebras: Whitehead products, the tensor Hopf algebra of loop homology,
//! and automorphisms of truncated Whitehead algebras.

pub mod aut_group;
pub mod cli;
pub mod error;
pub mod expr_io;
pub mod graded_lie;
pub mod homotopy_model;
pub mod linalg;
pub mod lyndon;
pub mod schedule;
pub mod tensor_hopf;

pub use error::{Error, Result};
pub use graded_lie::{bracket, lyndon_basis, rank, reduce, HallBasisElement, LieElement};
pub use homotopy_model::{truncated_algebra, RingMode, TruncatedAlgebra};
pub use linalg::Rational;
pub use schedule::{Family, Generator, GeneratorSchedule, Word};
pub use tensor_hopf::{hurewicz, TensorElement};
