//! Exact evolution, Fubini-Study geometry, curvature and topology, quantum
//! speed limits, entanglement measures and geometric phases for three exactly
//! solvable spin families (an anisotropic two-qubit XXZ chain, the collective
//! all-range Ising model on N qubits, and the pairwise Ising model on N
//! spin-s sites).
//!
//! Every closed-form expression the crate evaluates is registered under an
//! equation label and calibrated against a first-principles numerical oracle;
//! `calibrate::run` writes the resulting verdict table.

pub mod error;
pub mod statespace;
pub mod models;
pub mod evolution;
pub mod geometry;
pub mod dynamics;
pub mod entanglement;
pub mod phases;
pub mod figures;
pub mod calibrate;
pub mod acceptance;

pub use error::{Error, Result};
