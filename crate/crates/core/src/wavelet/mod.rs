//! Daubechies `L = 3` scaling functions.
//!
//! The scaling function solves `s(x) = sum_l h_l sqrt(2) s(2x - l)` with
//! support `[0, 5]`. Its values at the integers are an eigenvector of the
//! refinement matrix, and the equation then fills in every dyadic rational.
//! Derivatives follow the same way with an extra factor 2.

mod overlap;
mod refinement;

pub use overlap::{connection_coefficients, overlap_tables, OverlapTables};
pub use refinement::{
    daubechies_h, mother_wavelet_on_dyadics, scaling_on_dyadics, DyadicSamples,
    RefinementCoefficients, MAX_LEVEL, SUPPORT,
};
