use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::PhaseGrid;
use crate::numeric::pairwise_sum_by;
use crate::state::StateVector;

/// Gaussian momentum profile `e^{-(p - <p>)^2 / 4 dp^2}` of a particle of
/// mass `mass`, freely shifted to time `-tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    pub mean_p: f64,
    pub delta_p: f64,
    pub mass: f64,
    pub tau: f64,
}

impl PacketSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_p > 0.0 && self.delta_p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "packet width must be positive, got {}",
                self.delta_p
            )));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive, got {}",
                self.mass
            )));
        }
        if !self.mean_p.is_finite() || !self.tau.is_finite() {
            return Err(Error::InvalidParameter(
                "packet parameters must be finite".into(),
            ));
        }
        Ok(())
    }

    /// Coordinate width `1 / (2 dp)` of the minimal-uncertainty packet.
    pub fn delta_x(&self) -> f64 {
        0.5 / self.delta_p
    }

    /// Same packet at a different time shift.
    pub fn at_tau(self, tau: f64) -> Self {
        Self { tau, ..self }
    }
}

/// The four first moments of a packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketStats {
    pub mean_x: f64,
    pub mean_p: f64,
    pub delta_x: f64,
    pub delta_p: f64,
}

/// Unnormalized momentum amplitudes `e^{-(p-<p>)^2/4dp^2 + i p^2 tau / 2m}`.
pub(crate) fn momentum_profile(grid: &PhaseGrid, spec: &PacketSpec) -> Vec<Complex64> {
    grid.p()
        .iter()
        .map(|&p| {
            let re = -(p - spec.mean_p).powi(2) / (4.0 * spec.delta_p * spec.delta_p);
            let im = p * p * spec.tau / (2.0 * spec.mass);
            Complex64::new(re, im).exp()
        })
        .collect()
}

/// Unit-norm coordinate-basis packet `psi_0(-tau)`.
///
/// Fails when more than `1e-6` of the probability sits within five sites of
/// either grid edge.
pub fn gaussian_packet(grid: &PhaseGrid, spec: &PacketSpec) -> Result<StateVector> {
    spec.validate()?;
    let phi = StateVector::new(grid.basis(), momentum_profile(grid, spec))?.normalized()?;
    let psi = grid.to_position(&phi)?;
    let m = grid.m();
    let edge = 5.min(m / 2);
    let a = psi.amplitudes();
    let leak = pairwise_sum_by(edge, |i| a[i].norm_sqr() + a[m - 1 - i].norm_sqr());
    if leak > 1e-6 {
        return Err(Error::PacketLeak { fraction: leak });
    }
    Ok(psi)
}

fn moments(values: &[f64], weights: &[f64]) -> (f64, f64) {
    let n = values.len();
    let total = pairwise_sum_by(n, |i| weights[i]);
    let mean = pairwise_sum_by(n, |i| weights[i] * values[i]) / total;
    let var = pairwise_sum_by(n, |i| weights[i] * (values[i] - mean).powi(2)) / total;
    (mean, var.max(0.0).sqrt())
}

/// Mean and spread of `x` and `p` for a coordinate-basis state.
pub fn packet_stats(grid: &PhaseGrid, psi: &StateVector) -> Result<PacketStats> {
    if psi.norm_sqr() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let wx: Vec<f64> = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let phi = grid.to_momentum(psi)?;
    let wp: Vec<f64> = phi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let (mean_x, delta_x) = moments(grid.x(), &wx);
    let (mean_p, delta_p) = moments(grid.p(), &wp);
    Ok(PacketStats {
        mean_x,
        mean_p,
        delta_x,
        delta_p,
    })
}

/// `V(x_l) = lambda e^{-alpha x_l^2}`.
pub fn gaussian_potential(grid: &PhaseGrid, lambda: f64, alpha: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "potential range parameter must be positive, got {alpha}"
        )));
    }
    Ok(grid
        .x()
        .iter()
        .map(|x| lambda * (-alpha * x * x).exp())
        .collect())
}
