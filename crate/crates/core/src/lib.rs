//! Subspace-relative block decompositions, Schur complements (bilateral
//! shorted operators), block Moore–Penrose inverses and EP classification
//! for dense complex matrices.
//!
//! Everything is generic over the real field ([`Real`], implemented for
//! `f32` and `f64`); the unsuffixed aliases at the crate root are the
//! double-precision instantiations used by the CLI.

pub mod blockdecomp;
pub mod complement;
pub mod corpus;
pub mod epclass;
mod error;
mod matrix;
pub mod numerics;
mod scalar;
pub mod subspace;
pub mod suite;

pub use blockdecomp::{decompose, BlockOp};
pub use complement::{
    ball_bound, check_complementable, complementing_subspace, douglas_solve, kernel_witness, schur, schur_unsafe,
    schur_with_z, singleton_probe, verify_structure, BallBoundReport, ComplementabilityReport, ComplementingSubspace,
    KernelWitness, Probe, Route, SchurResult, StructureReport, Verdict,
};
pub use corpus::{make_example, random_case, random_complementable, ExampleName, LabeledCase, RandomKind, RandomSpec};
pub use epclass::{block_pinv, ep_equivalence_report, is_ep, is_hypo_ep, EpReport};
pub use error::{Error, Hypothesis, Result};
pub use matrix::Matrix;
pub use numerics::{gamma, numerical_rank, operator_norm, penrose_residual, pinv, singular_values, svd, SvdFactors, TolPolicy};
pub use scalar::{Real, Scalar};
pub use subspace::{null_of, preimage, range_of, Check, Subspace};

pub use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type Mat = Matrix<f64>;
pub type Mat32 = Matrix<f32>;
pub type Tol = TolPolicy<f64>;
pub type Tol32 = TolPolicy<f32>;
