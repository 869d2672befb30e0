//! Numerical toolkit for squeeze-rotate-unsqueeze (SRU) spin metrology.
//!
//! The crate builds exact finite-dimensional spin and truncated-Fock states,
//! assembles the SRU protocol families (one spin, two spins, two rotations,
//! two-axis squeezing) and the bosonic squeeze-displace-unsqueeze (SDU)
//! reference protocols, and evaluates quantum Fisher information both from
//! closed-form expressions and from finite-difference state derivatives, so
//! every closed form ships with an independent numerical cross-check.
//!
//! Modules:
//! - [`spin`]: spin-j operators, spin coherent states, one-axis and two-spin
//!   squeezing unitaries.
//! - [`fock`]: truncated-Fock bosonic operators and the SDU protocol states.
//! - [`protocols`]: SRU protocol state builders and their closed-form
//!   branch decompositions.
//! - [`metrology`]: QFI/SLD machinery, closed-form QFI expressions,
//!   multiparameter bounds, SLD compatibility maps, superchannel estimation.
//! - [`wigner`]: Wigner 3j symbols, multipole operators and the spherical
//!   Wigner function.

pub mod fock;
pub mod linalg;
pub mod metrology;
pub mod protocols;
pub mod spin;
pub mod wigner;

pub use linalg::{CMatrix, CVector, C64};
pub use spin::{SpinLabel, SpinOperator, SpinState};
