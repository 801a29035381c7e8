//! Exact simulation of quantum cloning machines.
//!
//! Covers universal and asymmetric cloners, phase-covariant and
//! probabilistic cloning, cloning attacks on QKD including the mean-king
//! protocol, sequential cloning with matrix-product states, Gaussian
//! continuous-variable cloning, telecloning and a three-qubit cloning circuit.

pub mod asym;
pub mod circuits;
pub mod combin;
pub mod cvclone;
pub mod error;
pub mod linalg;
pub mod optimize;
pub mod phasecov;
pub mod probclone;
pub mod qkd;
pub mod seqclone;
pub mod teleclone;
pub mod tol;
pub mod uqcm;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{
    bell_state, fidelity, gen_pauli, is_broadcastable, mub, partial_trace, sym_basis, sym_embed,
    symmetrizer, tensor, DensityMatrix, MubFamily, OccupationVector, Operand, StateVector, C64,
    CMat, CVec,
};
