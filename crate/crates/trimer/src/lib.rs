//! Entanglement of the mixed spin-(1,1/2,1) Heisenberg trimer.

pub mod cli;
pub mod density;
pub mod elements;
pub mod error;
pub mod linalg;
pub mod negativity;
pub mod phases;
pub mod reconstruct;
pub mod spectrum;
pub mod sweep;

pub use density::{DensityMatrix, Subsystem, TransposedMatrix};
pub use error::{Error, Result};
pub use negativity::{full_report, NegativityReport, Temperature};
pub use spectrum::{Branch, CouplingParams, Level, SpectrumEntry};
