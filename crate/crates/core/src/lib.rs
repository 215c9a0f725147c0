//! Real-time quantum evolution as sums of complex probabilities over discrete
//! phase-space paths, built on Schwinger's finite Weyl algebra.

pub mod dft;
pub mod error;
pub mod field_theory;
pub mod grid;
pub mod numeric;
pub mod propagator;
pub mod scattering;
pub mod state;
pub mod wavelet;
pub mod weyl;

pub use error::{Error, Result};
pub use state::{NormConvention, StateVector};
