use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::packet::{gaussian_packet, gaussian_potential, momentum_profile, PacketSpec};
use crate::error::{Error, Result};
use crate::grid::{make_grid, PhaseGrid};
use crate::propagator::{evolve, evolve_fast, free_step_kernel, full_step_kernel, StepKernel};
use crate::state::StateVector;
use crate::weyl::DenseOperator;

/// Largest grid `K` for which [`s_operator`] builds the dense matrix.
pub const DENSE_S_LIMIT: usize = 400;

/// A scattering run: grid, Gaussian potential `lambda e^{-alpha x^2}`, packet
/// and Trotter count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterConfig {
    pub k: usize,
    pub trotter_n: usize,
    pub lambda: f64,
    pub alpha: f64,
    pub packet: PacketSpec,
}

impl ScatterConfig {
    /// `lambda = .5`, `alpha = 2`, `m = 1`, `<p> = 2.5`, `dp = .25`,
    /// `K = 300`, `N = 100`, `tau = 7`.
    pub fn standard() -> Self {
        Self {
            k: 300,
            trotter_n: 100,
            lambda: 0.5,
            alpha: 2.0,
            packet: PacketSpec {
                mean_p: 2.5,
                delta_p: 0.25,
                mass: 1.0,
                tau: 7.0,
            },
        }
    }

    /// Checks parameters and the wrap-around condition
    /// `<p> tau / m + 4 dx < K eps`.
    pub fn validate(&self) -> Result<()> {
        self.validate_parameters()?;
        let grid = make_grid(self.k)?;
        let displacement = (self.packet.mean_p * self.packet.tau / self.packet.mass).abs();
        let spread = 4.0 * self.packet.delta_x();
        if displacement + spread >= grid.extent() {
            return Err(Error::WrapAround {
                displacement,
                spread,
                extent: grid.extent(),
            });
        }
        Ok(())
    }

    fn validate_parameters(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("grid K must be at least 1".into()));
        }
        if self.trotter_n == 0 {
            return Err(Error::InvalidParameter(
                "Trotter count must be at least 1".into(),
            ));
        }
        if !(self.alpha > 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "potential needs finite lambda and alpha > 0, got {} and {}",
                self.lambda, self.alpha
            )));
        }
        self.packet.validate()
    }

    pub fn dt(&self) -> f64 {
        self.packet.tau / self.trotter_n as f64
    }
}

/// States and kernels of one scattering run.
#[derive(Debug, Clone)]
pub struct ScatterRun {
    pub grid: PhaseGrid,
    pub potential: Vec<f64>,
    pub kernel: StepKernel,
    /// `psi_0(-tau)`.
    pub initial: StateVector,
    /// `psi_0(0)`.
    pub free: StateVector,
    /// `psi(0) = X^N psi_0(-tau)`.
    pub evolved: StateVector,
    /// `| |psi(0)|^2 - |psi_0(-tau)|^2 |`.
    pub norm_drift: f64,
}

fn kinetic(grid: &PhaseGrid, mass: f64) -> Vec<f64> {
    grid.p().iter().map(|p| p * p / (2.0 * mass)).collect()
}

fn full_kernel(config: &ScatterConfig, grid: &PhaseGrid, potential: &[f64]) -> Result<StepKernel> {
    let dt = config.dt();
    let free = free_step_kernel(grid.basis(), &kinetic(grid, config.packet.mass), dt)?;
    full_step_kernel(&free, potential, dt)
}

/// `psi(0) = X^N psi_0(-tau)` with `dt = tau / N`.
pub fn scattering_state(config: &ScatterConfig) -> Result<ScatterRun> {
    config.validate()?;
    let grid = make_grid(config.k)?;
    let potential = gaussian_potential(&grid, config.lambda, config.alpha)?;
    let kernel = full_kernel(config, &grid, &potential)?;
    let initial = gaussian_packet(&grid, &config.packet)?;
    let free = gaussian_packet(&grid, &config.packet.at_tau(0.0))?;
    let evolved = evolve(&kernel, &initial, config.trotter_n)?;
    let norm_drift = (evolved.norm_sqr() - initial.norm_sqr()).abs();
    log::info!(
        "scattering K = {}, N = {}, tau = {}: norm drift {:.3e}",
        config.k,
        config.trotter_n,
        config.packet.tau,
        norm_drift
    );
    Ok(ScatterRun {
        grid,
        potential,
        kernel,
        initial,
        free,
        evolved,
        norm_drift,
    })
}

/// Half-shell T-matrix column `<p|T(E_i)|p_i>` and its Born approximation.
#[derive(Debug, Clone)]
pub struct HalfShellResult {
    pub p: Vec<f64>,
    pub t_re: Vec<f64>,
    pub t_im: Vec<f64>,
    pub born_re: Vec<f64>,
    pub born_im: Vec<f64>,
    /// T interpolated to `p = <p>`.
    pub on_shell_t: Complex64,
    /// Born term interpolated to `p = <p>`.
    pub on_shell_born: Complex64,
    pub norm_drift: f64,
}

fn interpolate(grid: &PhaseGrid, values: &[Complex64], p: f64) -> Complex64 {
    let pos = p / grid.eps() + grid.k() as f64;
    let lo = pos.floor().clamp(0.0, (grid.m() - 2) as f64);
    let i = lo as usize;
    let f = pos - lo;
    values[i] * (1.0 - f) + values[i + 1] * f
}

fn momentum_of_v_times(run: &ScatterRun, psi: &StateVector) -> Result<Vec<Complex64>> {
    let mut v_psi = psi.clone();
    v_psi
        .amplitudes_mut()
        .iter_mut()
        .zip(&run.potential)
        .for_each(|(a, v)| *a *= v);
    Ok(run.grid.to_momentum(&v_psi)?.into_amplitudes())
}

/// Sharp-momentum T-matrix column from the scattering state.
///
/// The momentum components of `V psi(0)` are divided by the overlap of the
/// packet with a sharp momentum, `C 2 sqrt(pi) dp`, where `C` normalizes the
/// Gaussian profile.
pub fn half_shell_t(config: &ScatterConfig) -> Result<HalfShellResult> {
    let run = scattering_state(config)?;
    let profile = momentum_profile(&run.grid, &config.packet.at_tau(0.0));
    let profile_norm = StateVector::new(run.grid.basis(), profile)?.norm();
    let scale = profile_norm / (2.0 * PI.sqrt() * config.packet.delta_p);
    let t: Vec<Complex64> = momentum_of_v_times(&run, &run.evolved)?
        .into_iter()
        .map(|z| z * scale)
        .collect();
    let born: Vec<Complex64> = momentum_of_v_times(&run, &run.free)?
        .into_iter()
        .map(|z| z * scale)
        .collect();
    let p0 = config.packet.mean_p;
    Ok(HalfShellResult {
        p: run.grid.p().to_vec(),
        t_re: t.iter().map(|z| z.re).collect(),
        t_im: t.iter().map(|z| z.im).collect(),
        born_re: born.iter().map(|z| z.re).collect(),
        born_im: born.iter().map(|z| z.im).collect(),
        on_shell_t: interpolate(&run.grid, &t, p0),
        on_shell_born: interpolate(&run.grid, &born, p0),
        norm_drift: run.norm_drift,
    })
}

/// `S(tau) = Y^{-N} X^{2N} Y^{-N}` as a dense matrix; `Y^{-N}` is the free
/// kernel for time step `-tau`.
pub fn s_operator(config: &ScatterConfig) -> Result<DenseOperator> {
    config.validate_parameters()?;
    if config.k > DENSE_S_LIMIT {
        return Err(Error::DenseGuard {
            k: config.k,
            limit: DENSE_S_LIMIT,
        });
    }
    let grid = make_grid(config.k)?;
    let potential = gaussian_potential(&grid, config.lambda, config.alpha)?;
    let x = full_kernel(config, &grid, &potential)?;
    let back = free_step_kernel(
        grid.basis(),
        &kinetic(&grid, config.packet.mass),
        -config.packet.tau,
    )?;
    let m = grid.m();
    let columns: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|j| -> Result<Vec<Complex64>> {
            let e = StateVector::basis_state(grid.basis(), grid.basis().label(j))?;
            let v = back.apply_fast(&e)?;
            let v = evolve_fast(&x, &v, 2 * config.trotter_n)?;
            Ok(back.apply_fast(&v)?.into_amplitudes())
        })
        .collect::<Result<_>>()?;
    let mat = DMatrix::from_fn(m, m, |r, c| columns[c][r]);
    DenseOperator::new(grid.basis(), mat)
}

/// `<psi_0|S(tau)|psi_0>` for the configured packet at time zero.
pub fn packet_s_element(config: &ScatterConfig) -> Result<Complex64> {
    config.validate_parameters()?;
    let grid = make_grid(config.k)?;
    let potential = gaussian_potential(&grid, config.lambda, config.alpha)?;
    let x = full_kernel(config, &grid, &potential)?;
    let back = free_step_kernel(
        grid.basis(),
        &kinetic(&grid, config.packet.mass),
        -config.packet.tau,
    )?;
    let psi = gaussian_packet(&grid, &config.packet.at_tau(0.0))?;
    let v = back.apply_fast(&psi)?;
    let v = evolve_fast(&x, &v, 2 * config.trotter_n)?;
    psi.inner(&back.apply_fast(&v)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::packet_stats;

    fn small() -> ScatterConfig {
        ScatterConfig {
            k: 150,
            trotter_n: 50,
            ..ScatterConfig::standard()
        }
        .with_tau(4.0)
    }

    impl ScatterConfig {
        fn with_tau(mut self, tau: f64) -> Self {
            self.packet.tau = tau;
            self
        }
    }

    #[test]
    fn free_run_returns_the_time_zero_packet() {
        let cfg = ScatterConfig {
            lambda: 0.0,
            ..small()
        };
        let run = scattering_state(&cfg).unwrap();
        assert!(run.evolved.max_abs_diff(&run.free) < 1e-10);
        let t = half_shell_t(&cfg).unwrap();
        assert!(t.t_re.iter().chain(&t.t_im).all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn wrap_guard() {
        let cfg = ScatterConfig::standard().with_tau(12.0);
        let err = scattering_state(&cfg).unwrap_err();
        assert!(matches!(err, Error::WrapAround { .. }));
        assert!(err.is_guard());
    }

    #[test]
    fn weak_coupling_matches_born() {
        let cfg = ScatterConfig {
            lambda: 1e-4,
            ..small()
        };
        let t = half_shell_t(&cfg).unwrap();
        let rel = (t.on_shell_t - t.on_shell_born).norm() / t.on_shell_born.norm();
        assert!(rel < 1e-3, "{rel}");
    }

    #[test]
    fn trotter_refinement_is_first_order() {
        let diff = |n: usize| {
            let a = scattering_state(&ScatterConfig {
                trotter_n: n,
                ..small()
            })
            .unwrap();
            let b = scattering_state(&ScatterConfig {
                trotter_n: 2 * n,
                ..small()
            })
            .unwrap();
            a.evolved.max_abs_diff(&b.evolved)
        };
        let ratio = diff(25) / diff(50);
        assert!(ratio > 1.6 && ratio < 2.4, "{ratio}");
    }

    #[test]
    fn scattering_state_conserves_momentum_scale() {
        let run = scattering_state(&small()).unwrap();
        assert!(run.norm_drift < 1e-10);
        let s = packet_stats(&run.grid, &run.evolved).unwrap();
        assert!(s.mean_p > 2.0 && s.mean_p < 2.6);
    }

    #[test]
    fn s_matrix_properties() {
        let cfg = ScatterConfig {
            k: 60,
            trotter_n: 20,
            ..ScatterConfig::standard()
        }
        .with_tau(3.0);
        let s = s_operator(&cfg).unwrap();
        assert!(s.unitarity_residual() < 1e-9);
        let free = s_operator(&ScatterConfig { lambda: 0.0, ..cfg }).unwrap();
        assert!(free.max_abs_diff(&DenseOperator::identity(free.basis())) < 1e-10);
        let big = ScatterConfig { k: 401, ..cfg };
        assert!(s_operator(&big).unwrap_err().is_guard());
    }
}
