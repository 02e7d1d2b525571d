//! Classical workbench for quantum-centric supercomputing studies: exact
//! state-vector and density-matrix simulation, Pauli-operator analysis, model
//! Hamiltonians, product-formula compilation, measurement estimators, and
//! SWAP-network compilation.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the double-precision instantiation used by the CLI.

pub mod circuits;
pub mod dm;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod measure;
pub mod pauli;
pub mod scalar;
pub mod sv;
pub mod swapnet;
pub mod trotter;

pub use error::{Error, Result};
pub use scalar::{Scalar, C};

/// Double-precision instantiations.
pub type StateVector = sv::StateVec<f64>;
pub type DensityMatrix64 = dm::DensityMatrix<f64>;
pub type Circuit64 = circuits::Circuit<f64>;
pub type Gate64 = circuits::Gate<f64>;
pub type QubitOperator64 = pauli::QubitOperator<f64>;
pub type PauliTerm64 = pauli::PauliTerm<f64>;
pub type TrotterPlan64 = trotter::TrotterPlan<f64>;
pub type NoiseModel64 = dm::NoiseModel<f64>;
