//! Classical desk-scale simulator and verifier for Hamiltonian simulation by
//! a linear combination of quantum-walk steps.
//!
//! Every operator is built explicitly as a dense complex matrix (or an exact
//! compressed restriction of one) so that the pipeline can be certified
//! against an exact matrix-exponential oracle:
//!
//! * [`hamiltonian`] — sparse Hermitian matrices, their two classical oracles,
//!   instance generators (seeded random, parity paths, blown-up parity), and
//!   JSON serialization.
//! * [`walk`] — the state-preparation isometry `T`, the register swap `S`, the
//!   walk step `U = iS(2TT† − 1)`, and spectral verification against the
//!   arcsin eigenvalue relation.
//! * [`bessel`] — Bessel rows via Miller's recurrence, normalized
//!   linear-combination coefficients, and certified truncation bounds.
//! * [`lcu`] — select/prepare/W assemblies, oblivious amplitude amplification,
//!   and the Chebyshev closed form for the amplification iterate.
//! * [`simulator`] — segment planning, the end-to-end pipeline, query
//!   accounting, and the exact-evolution oracle.
//! * [`batch`] — data-parallel execution of independent runs (rayon behind the
//!   `parallel` feature, with a sequential fallback).
//! * [`verify`] — fixed-seed verification suites used by the CLI and the
//!   acceptance tests.

pub mod batch;
pub mod bessel;
pub mod error;
pub mod hamiltonian;
pub mod lcu;
pub mod linalg;
pub mod simulator;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};
