//! Index iteration theory for symplectic paths built from normal-form
//! generator blocks: Maslov-type indices, nullities, mean indices, splitting
//! numbers, common index jump tuples, and machine verification of the
//! identities that hold at those tuples.
//!
//! Conventions: Darboux coordinates `(p₁,…,pₙ,q₁,…,qₙ)`,
//! `J = [[0, −I], [I, 0]]`, paths `γ(t) = exp(tJQ)`. The index is normalized so
//! that the planar rotation by `θt` with `θ ∈ (0, 2π)` has index 1 and the
//! full turn `t ↦ e^{2πit}` has mean index 2.
#![no_std]

extern crate alloc;

pub mod angle;
pub mod cijt;
pub mod error;
pub mod expm;
pub mod generators;
pub mod index;
pub mod linalg;
pub mod paths;
pub mod splitting;
pub mod tolerance;
pub mod verify;

pub use angle::{Angle, FracPart, Phase};
pub use error::{Error, Result};
pub use generators::{AGInvariants, Block, BlockSpec, PathSpec};
pub use index::IndexRecord;
pub use linalg::{SymplecticMatrix, UnitEigenvalue};
pub use paths::MeanIndex;
pub use tolerance::Tolerances;
