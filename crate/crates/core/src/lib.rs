//! Heisenberg-limited parity interferometry with the ground state of a
//! two-mode (double-well) Bose condensate.
//!
//! The crate is organized bottom-up:
//!
//! * [`eigen`]: symmetric tridiagonal eigensolver and the spectrally built
//!   rotation `exp(-i a Sx)` used as the beam splitter.
//! * [`spinalg`]: the `N+1` dimensional two-mode basis, Schwinger spin
//!   operators, parity, cat states and the extreme `Sy` eigenstates.
//! * [`model`]: the two-site Bose-Hubbard Hamiltonian in its spin form,
//!   ground state and gap via swap-symmetry blocking, and `chi` sweeps.
//! * [`interferometer`]: phase imprint, beam splitter, parity statistics,
//!   error propagation, and closed-form reference signals.
//! * [`oracle`]: independent brute-force kernels (dense Jacobi, Wigner-d
//!   binomial sums, finite differences) used to cross-check the above.
//! * [`verify`]: the invariant and acceptance suite behind `dwcat verify`.
//! * [`cli`] and [`output`]: the command-line front end and its CSV/JSON
//!   writers.
//!
//! Units: `hbar = 1`; `J`, `U` and `eps` are angular frequencies.

pub mod cli;
pub mod eigen;
pub mod error;
pub mod interferometer;
pub mod model;
pub mod oracle;
pub mod output;
pub mod spinalg;
pub mod verify;

pub use error::{Error, Result};

pub use num_complex::Complex64;
