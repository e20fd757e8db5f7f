//! Finite-model toolkit for Boolean covers of quantum event structures.
//!
//! The crate works with small, explicitly enumerated structures so that every
//! categorical identity can be checked by exhaustion:
//!
//! * [`algebra`]: quantum and Boolean event algebras, their homomorphisms and
//!   maximal Boolean subalgebras (blocks).
//! * [`observable`]: finite Borel partition frames, observables and the
//!   commutative-triangle arrows between them.
//! * [`presheaf`]: finite categories of Boolean observables, presheaves on them,
//!   representables, the Hom-functor `R(Ξ)` and categories of elements.
//! * [`adjunction`]: the left adjoint `L` as a tensor-relation quotient, the
//!   counit and the `Nat(X, R(Ξ)) ≅ Hom(LX, Ξ)` bijection check.
//! * [`localization`]: prelocalization and localization systems, pullbacks of
//!   covers, pasting maps with their cocycle conditions and the end-to-end
//!   Boolean representation verdict.
//! * [`stone`]: Stone spaces of finite Boolean algebras, measurement charts and
//!   the Boolean power fibration.
//! * [`corpus`]: the curated instances and independent brute-force oracles.
//! * [`format`](mod@format) and [`cli`]: the text file formats and the batch frontend.

#![allow(clippy::needless_range_loop)]

pub mod adjunction;
pub mod algebra;
pub mod budget;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod format;
pub mod localization;
pub mod observable;
pub mod presheaf;
pub mod report;
pub mod stone;
mod unionfind;

pub use algebra::{
    enumerate_blocks, enumerate_homomorphisms, validate_boolean_algebra, validate_homomorphism,
    validate_quantum_algebra, validate_quantum_spec, AlgebraSpec, Block, BooleanAlgebra, EventAlgebra, EventHomomorphism,
};
pub use budget::Budget;
pub use error::{Error, Result, StructureError};
pub use observable::{BorelFrame, Observable, ObservableArrow};
pub use presheaf::{ArrowSelection, FiniteCategory, Presheaf, Section};
pub use report::{Check, ValidationReport};
