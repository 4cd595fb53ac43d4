//! Closed-form spectra of Witten-deformed Laplacians on cone strata and
//! product local models, with min/max ideal boundary conditions, Morse
//! number bookkeeping, and a finite-difference oracle for cross-checks.

pub mod complexes;
pub mod cone;
pub mod error;
pub mod fd;
pub mod hermite;
pub mod morse;
pub mod opalg;
pub mod quad;
pub mod space;
pub mod spectrum;
pub mod spheres;

pub use error::{Error, Result};
pub use spectrum::{Branch, EigLadder, Ibc, Level, Sign, SpectrumTable};

/// Spectrum assembled from closed-form ladders; shares the table layout.
pub type AssembledSpectrum = SpectrumTable;
