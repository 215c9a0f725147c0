//! One-dimensional scattering from finite-time Moller operators.
//!
//! A free Gaussian packet is shifted back by `tau` with the free evolution,
//! then carried forward with `N` full steps `X`, giving the interacting
//! state `psi(0) = X^N psi_0(-tau)`. Projecting `V psi(0)` on sharp momenta
//! approximates the half-shell T-matrix. The Lippmann-Schwinger solver in
//! [`lippmann_schwinger`] is the independent reference.

pub mod lippmann_schwinger;
mod packet;
mod pipeline;

pub use lippmann_schwinger::{ls_oracle, LsSolution};
pub use packet::{gaussian_packet, gaussian_potential, packet_stats, PacketSpec, PacketStats};
pub use pipeline::{
    half_shell_t, packet_s_element, s_operator, scattering_state, HalfShellResult, ScatterConfig,
    ScatterRun, DENSE_S_LIMIT,
};
