//! Exact homological algebra for finitely generated FI-modules on a finite
//! degree window.
//!
//! Everything here works over an exact field (arbitrary-precision rationals
//! or a prime field), with dense linear algebra and canonical echelon bases
//! so that equality of subspaces, modules and reports is structural.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`] — exact field elements and field descriptors;
//! * [`linalg`] — dense matrices and canonical subspace calculus;
//! * [`fi`] — injections between finite sets, their composition and
//!   enumeration, the self-embedding and the standard inclusions;
//! * [`module`] — the central [`module::TruncatedFIModule`] type with the
//!   shift and derivative functors, submodules, quotients and torsion;
//! * [`homology`] — free covers, adaptable resolutions and the homology
//!   functors with certification horizons;
//! * [`filtration`] — the induced-module filtration test, projectivity over
//!   group algebras and projective-dimension classification;
//! * [`complex`] — the finite complex of filtered modules attached to a
//!   module, and its verification.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI
//! live in the companion `fimod-cli` crate.

#![no_std]

extern crate alloc;

pub mod complex;
pub mod fi;
pub mod filtration;
pub mod homology;
pub mod linalg;
pub mod module;
pub mod scalar;

pub use fi::Injection;
pub use linalg::{Matrix, Subspace};
pub use module::{ExtendedDegree, FreeModuleSpec, ModuleMap, TruncatedFIModule};
pub use scalar::{FieldSpec, Scalar};
