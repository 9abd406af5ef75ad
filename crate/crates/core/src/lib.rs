//! Quasi-static quantum Otto engine whose working medium is a pair of spins
//! `(s1, s2)` of arbitrary magnitude, coupled by isotropic Heisenberg
//! exchange `8J s1·s2` and driven by a field `2B (s1z + s2z)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectrum`]: exact multiplet spectrum, canonical level labels, crossings.
//! * [`ensemble`]: canonical states, partition functions, Shannon entropy.
//! * [`cycle`]: average heat, work, efficiency and entropy production.
//! * [`regime`]: positive-work conditions, coupling bounds, efficiency bounds,
//!   worst/best-case scenarios and majorization.
//! * [`coc`]: complete Otto cycles between pairs of levels.
//! * [`oracle`]: brute-force Hamiltonian and Jacobi eigensolver used as an
//!   independent check on everything above.
//! * [`lemmas`] and [`verify`]: randomized falsification suites.
//!
//! Energies are in units where the Bohr magneton and `k_B` are one; the
//! constant `8 s1 s2 J` shared by all eigenvalues is dropped.

pub mod coc;
pub mod cycle;
pub mod ensemble;
mod error;
pub mod lemmas;
pub mod oracle;
pub mod regime;
pub mod spectrum;
pub mod verify;

pub use coc::{CocClass, CocRecord};
pub use cycle::{CycleParams, CycleReport, Regime};
pub use ensemble::ThermalState;
pub use error::{Error, Result};
pub use spectrum::{EnergyLevel, SpinPair, Spectrum};
