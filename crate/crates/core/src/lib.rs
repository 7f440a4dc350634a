//! Spectral simulation of the two-dimensional non-Hermitian SSH lattice.
//!
//! The crate builds Bloch, ribbon and finite-lattice Hamiltonians with
//! arbitrary Pauli-product perturbations, checks their symmetries, and
//! diagnoses how on-site potentials make the spectrum real under periodic or
//! open boundaries: reality statistics, parameter scans, line gaps, spectral
//! winding numbers, the non-Bloch modular condition and skin-effect
//! indicators.
//!
//! ```
//! use nhssh::prelude::*;
//!
//! let params = ModelParams::reference().with_perturbation(PerturbationSpec::alpha(0.6));
//! let spectrum = bloch_spectrum(&params, &KGrid::square(16)).unwrap();
//! assert!(spectrum.max_abs_im() < 1e-8);
//! ```

pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod grid;
pub mod hamiltonian;
pub mod linalg;
pub mod plot;
pub mod spectra;
pub mod symmetry;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::analysis::*;
    pub use crate::error::{Error, Result};
    pub use crate::grid::KGrid;
    pub use crate::hamiltonian::*;
    pub use crate::linalg::C64;
    pub use crate::spectra::*;
    pub use crate::symmetry::*;
}
