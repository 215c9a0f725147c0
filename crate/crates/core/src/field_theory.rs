//! Truncated `phi^4` field theory on `F` wavelet modes.
//!
//! `H = 1/2 sum Pi_n^2 + (m^2/2) sum Phi_n^2 + sum D_mn Phi_m Phi_n
//!    + lambda sum Gamma_klmn Phi_k Phi_l Phi_m Phi_n`,
//! with every mode sampled on the same symmetric grid. One Trotter step applies
//! `e^{-i H_F(phi) dt}` on the grid and then the free kernel along each mode
//! axis, so path weights carry `e^{-i sum H_F dt}` and the evolution is
//! `e^{-iHt}`.
//!
//! States are stored row-major over the mode slots, mode 0 most significant:
//! the tuple `(s_0, ..., s_{F-1})` sits at `sum_i s_i M^(F-1-i)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{make_grid, PhaseGrid};
use crate::propagator::{free_step_kernel, StepKernel};
use crate::wavelet::{overlap_tables, OverlapTables};
use crate::weyl::WeylBasis;

/// Largest field state, `M^F` entries.
pub const FIELD_LIMIT: u128 = 10_000_000;

/// Largest field space [`TensorKernel::materialize`] builds densely.
pub const DENSE_FIELD_LIMIT: usize = 4096;

/// Mean and width of one mode of the initial Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePacket {
    pub mean: f64,
    pub width: f64,
}

#[derive(Debug, Clone)]
pub struct FieldConfig {
    pub grid: PhaseGrid,
    pub fields: usize,
    pub mass_sq: f64,
    pub lambda: f64,
    /// `F x F`, symmetric.
    pub d: DMatrix<f64>,
    /// Row-major `F^4`, fully permutation symmetric.
    pub gamma: Vec<f64>,
    pub trotter_n: usize,
    pub total_time: f64,
    pub initial: Vec<ModePacket>,
}

impl FieldConfig {
    /// Two modes `s(x)`, `s(x - 1)` on `M = 41` points, `N = 20`, `t = 0.5`,
    /// means and widths `0.5`, `m^2 = 1`, `lambda = 1`.
    pub fn two_mode_demo() -> Result<Self> {
        let tables = overlap_tables(&[0, 1], 256)?;
        let packet = ModePacket {
            mean: 0.5,
            width: 0.5,
        };
        Self::from_tables(make_grid(20)?, &tables, 1.0, 1.0, 20, 0.5, vec![packet; 2])
    }

    pub fn from_tables(
        grid: PhaseGrid,
        tables: &OverlapTables,
        mass_sq: f64,
        lambda: f64,
        trotter_n: usize,
        total_time: f64,
        initial: Vec<ModePacket>,
    ) -> Result<Self> {
        let cfg = FieldConfig {
            grid,
            fields: tables.len(),
            mass_sq,
            lambda,
            d: tables.d.clone(),
            gamma: tables.gamma_flat().to_vec(),
            trotter_n,
            total_time,
            initial,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn basis(&self) -> WeylBasis {
        self.grid.basis()
    }

    /// `M^F`.
    pub fn state_len(&self) -> Result<usize> {
        state_len(self.grid.m(), self.fields)
    }

    pub fn dt(&self) -> f64 {
        if self.trotter_n == 0 {
            0.0
        } else {
            self.total_time / self.trotter_n as f64
        }
    }

    pub fn gamma(&self, k: usize, l: usize, m: usize, n: usize) -> f64 {
        let f = self.fields;
        self.gamma[((k * f + l) * f + m) * f + n]
    }

    pub fn validate(&self) -> Result<()> {
        let f = self.fields;
        if f == 0 {
            return Err(Error::InvalidParameter("need at least one mode".into()));
        }
        if self.d.shape() != (f, f) {
            return Err(Error::DimensionMismatch {
                expected: f * f,
                found: self.d.len(),
            });
        }
        if self.gamma.len() != f.pow(4) {
            return Err(Error::DimensionMismatch {
                expected: f.pow(4),
                found: self.gamma.len(),
            });
        }
        if self.initial.len() != f {
            return Err(Error::DimensionMismatch {
                expected: f,
                found: self.initial.len(),
            });
        }
        let scalars = [self.mass_sq, self.lambda, self.total_time];
        if scalars.iter().any(|v| !v.is_finite()) || self.total_time < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "need finite m^2, lambda and t >= 0, got {scalars:?}"
            )));
        }
        for p in &self.initial {
            if !(p.width > 0.0) || !p.mean.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "mode packet needs a finite mean and width > 0, got {p:?}"
                )));
            }
        }
        let tol = 1e-12 * (1.0 + self.d.amax());
        if (&self.d - self.d.transpose()).amax() > tol {
            return Err(Error::InvalidParameter("D is not symmetric".into()));
        }
        let scale = 1.0 + self.gamma.iter().fold(0.0f64, |a, g| a.max(g.abs()));
        for k in 0..f {
            for l in 0..f {
                for m in 0..f {
                    for n in 0..f {
                        let g = self.gamma(k, l, m, n);
                        let others = [
                            self.gamma(l, k, m, n),
                            self.gamma(k, m, l, n),
                            self.gamma(k, l, n, m),
                        ];
                        if others.iter().any(|o| (o - g).abs() > 1e-12 * scale) {
                            return Err(Error::InvalidParameter(
                                "Gamma is not permutation symmetric".into(),
                            ));
                        }
                    }
                }
            }
        }
        self.state_len()?;
        Ok(())
    }

    /// The same configuration with modes `a` and `b` exchanged in every table.
    pub fn swap_modes(&self, a: usize, b: usize) -> Self {
        let f = self.fields;
        let sw = |i: usize| {
            if i == a {
                b
            } else if i == b {
                a
            } else {
                i
            }
        };
        let d = DMatrix::from_fn(f, f, |i, j| self.d[(sw(i), sw(j))]);
        let mut gamma = vec![0.0; self.gamma.len()];
        for k in 0..f {
            for l in 0..f {
                for m in 0..f {
                    for n in 0..f {
                        gamma[((k * f + l) * f + m) * f + n] =
                            self.gamma(sw(k), sw(l), sw(m), sw(n));
                    }
                }
            }
        }
        let mut initial = self.initial.clone();
        initial.swap(a, b);
        FieldConfig {
            d,
            gamma,
            initial,
            ..self.clone()
        }
    }
}

fn state_len(m: usize, fields: usize) -> Result<usize> {
    let size = (m as u128).checked_pow(fields as u32).unwrap_or(u128::MAX);
    if size > FIELD_LIMIT {
        return Err(Error::MemoryGuard {
            size,
            limit: FIELD_LIMIT,
        });
    }
    Ok(size as usize)
}

/// Amplitudes on the `M^F` tuples of mode grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    basis: WeylBasis,
    fields: usize,
    amplitudes: Vec<Complex64>,
}

impl FieldState {
    pub fn new(basis: WeylBasis, fields: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = state_len(basis.dim(), fields)?;
        if amplitudes.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: amplitudes.len(),
            });
        }
        Ok(FieldState {
            basis,
            fields,
            amplitudes,
        })
    }

    pub fn basis(&self) -> WeylBasis {
        self.basis
    }

    pub fn fields(&self) -> usize {
        self.fields
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// Flat index of a tuple of slots.
    pub fn index(&self, slots: &[usize]) -> usize {
        let m = self.basis.dim();
        slots.iter().fold(0, |acc, &s| acc * m + s)
    }

    /// Slots of a flat index.
    pub fn slots(&self, mut index: usize) -> Vec<usize> {
        let m = self.basis.dim();
        let mut out = vec![0; self.fields];
        for s in out.iter_mut().rev() {
            *s = index % m;
            index /= m;
        }
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs_diff(&self, other: &FieldState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.im.abs())
            .fold(0.0, f64::max)
    }

    /// Amplitudes along `mode` with every other mode at `label`.
    pub fn slice(&self, mode: usize, label: i64) -> Result<Vec<Complex64>> {
        self.check_mode(mode)?;
        let fixed = self.basis.slot(label)?;
        let mut slots = vec![fixed; self.fields];
        Ok((0..self.basis.dim())
            .map(|s| {
                slots[mode] = s;
                self.amplitudes[self.index(&slots)]
            })
            .collect())
    }

    /// Sum of the amplitudes over every other mode.
    pub fn marginal_amplitude(&self, mode: usize) -> Result<Vec<Complex64>> {
        self.check_mode(mode)?;
        let mut out = vec![Complex64::default(); self.basis.dim()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            out[self.slots(i)[mode]] += a;
        }
        Ok(out)
    }

    /// Reduced probability of `mode`.
    pub fn marginal_probability(&self, mode: usize) -> Result<Vec<f64>> {
        self.check_mode(mode)?;
        let mut out = vec![0.0; self.basis.dim()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            out[self.slots(i)[mode]] += a.norm_sqr();
        }
        Ok(out)
    }

    /// `<phi_mode>` on `grid`.
    pub fn mean(&self, grid: &PhaseGrid, mode: usize) -> Result<f64> {
        let p = self.marginal_probability(mode)?;
        Ok(p.iter().zip(grid.x()).map(|(w, x)| w * x).sum::<f64>() / p.iter().sum::<f64>())
    }

    /// Exchanges two mode axes.
    pub fn swap_modes(&self, a: usize, b: usize) -> Result<Self> {
        self.check_mode(a)?;
        self.check_mode(b)?;
        let mut out = self.amplitudes.clone();
        for (i, z) in self.amplitudes.iter().enumerate() {
            let mut s = self.slots(i);
            s.swap(a, b);
            out[self.index(&s)] = *z;
        }
        Ok(FieldState {
            amplitudes: out,
            ..self.clone()
        })
    }

    /// Per-axis discrete Fourier transform into mode momenta.
    pub fn to_momentum(&self, grid: &PhaseGrid) -> Result<Self> {
        if grid.basis() != self.basis {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: grid.m(),
            });
        }
        let mut out = self.amplitudes.clone();
        for axis in 0..self.fields {
            out = map_axis(&out, self.basis.dim(), self.fields, axis, |line| {
                grid.dft()
                    .forward(line)
                    .expect("line length matches the grid")
            });
        }
        Ok(FieldState {
            amplitudes: out,
            ..self.clone()
        })
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.fields {
            return Err(Error::IndexOutOfRange {
                index: mode as i64,
                min: 0,
                max: self.fields as i64 - 1,
            });
        }
        Ok(())
    }
}

/// Applies `op` to every line of `data` along `axis`, lines in parallel.
fn map_axis(
    data: &[Complex64],
    m: usize,
    fields: usize,
    axis: usize,
    op: impl Fn(&mut [Complex64]) + Sync,
) -> Vec<Complex64> {
    let stride = m.pow((fields - 1 - axis) as u32);
    let lines = data.len() / m;
    let start = |l: usize| (l / stride) * stride * m + l % stride;
    let mapped: Vec<Vec<Complex64>> = (0..lines)
        .into_par_iter()
        .map(|l| {
            let base = start(l);
            let mut line: Vec<Complex64> = (0..m).map(|j| data[base + j * stride]).collect();
            op(&mut line);
            line
        })
        .collect();
    let mut out = vec![Complex64::default(); data.len()];
    for (l, line) in mapped.into_iter().enumerate() {
        let base = start(l);
        for (j, z) in line.into_iter().enumerate() {
            out[base + j * stride] = z;
        }
    }
    out
}

/// `H_F(phi)` at every grid tuple, in state order.
pub fn potential_samples(config: &FieldConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let f = config.fields;
    let m = config.grid.m();
    let x = config.grid.x();
    let len = config.state_len()?;
    let samples = (0..len)
        .into_par_iter()
        .map(|mut idx| {
            let mut phi = vec![0.0; f];
            for v in phi.iter_mut().rev() {
                *v = x[idx % m];
                idx /= m;
            }
            let mut quad = 0.0;
            let mut grad = 0.0;
            let mut quartic = 0.0;
            for a in 0..f {
                quad += phi[a] * phi[a];
                for b in 0..f {
                    let ab = phi[a] * phi[b];
                    grad += config.d[(a, b)] * ab;
                    for c in 0..f {
                        for d in 0..f {
                            quartic += config.gamma(a, b, c, d) * ab * phi[c] * phi[d];
                        }
                    }
                }
            }
            0.5 * config.mass_sq * quad + grad + config.lambda * quartic
        })
        .collect();
    Ok(samples)
}

/// `F`-fold tensor power of a one-mode free kernel.
#[derive(Debug, Clone)]
pub struct TensorKernel {
    fields: usize,
    axis: StepKernel,
}

impl TensorKernel {
    pub fn fields(&self) -> usize {
        self.fields
    }

    /// The one-mode factor.
    pub fn axis(&self) -> &StepKernel {
        &self.axis
    }

    /// Applies the one-mode kernel along every axis.
    pub fn apply(&self, state: &FieldState) -> Result<FieldState> {
        let basis = self.axis.basis();
        if state.basis() != basis || state.fields() != self.fields {
            return Err(Error::DimensionMismatch {
                expected: state_len(basis.dim(), self.fields)?,
                found: state.amplitudes().len(),
            });
        }
        let m = basis.dim();
        let k = self.axis.matrix();
        let mut data = state.amplitudes().to_vec();
        for axis in 0..self.fields {
            data = map_axis(&data, m, self.fields, axis, |line| {
                let input = line.to_vec();
                for (i, out) in line.iter_mut().enumerate() {
                    *out = (0..m).map(|j| k[(i, j)] * input[j]).sum();
                }
            });
        }
        FieldState::new(basis, self.fields, data)
    }

    /// The `M^F x M^F` matrix.
    pub fn materialize(&self) -> Result<DMatrix<Complex64>> {
        let dim = state_len(self.axis.basis().dim(), self.fields)?;
        if dim > DENSE_FIELD_LIMIT {
            return Err(Error::MemoryGuard {
                size: (dim as u128).pow(2),
                limit: (DENSE_FIELD_LIMIT as u128).pow(2),
            });
        }
        let mut out = self.axis.matrix().clone();
        for _ in 1..self.fields {
            out = out.kronecker(self.axis.matrix());
        }
        Ok(out)
    }
}

/// Free field kernel with `K(pi) = pi^2 / 2` per mode and step `dt`.
pub fn free_field_kernel(config: &FieldConfig) -> Result<TensorKernel> {
    config.validate()?;
    free_field_kernel_dt(config, config.dt())
}

fn free_field_kernel_dt(config: &FieldConfig, dt: f64) -> Result<TensorKernel> {
    let kinetic: Vec<f64> = config.grid.p().iter().map(|p| 0.5 * p * p).collect();
    Ok(TensorKernel {
        fields: config.fields,
        axis: free_step_kernel(config.basis(), &kinetic, dt)?,
    })
}

/// `N` steps of `P_X diag(e^{-i H_F dt})`; `N = 0` returns the state as is.
pub fn evolve_fields(config: &FieldConfig, state: &FieldState) -> Result<FieldState> {
    config.validate()?;
    if state.basis() != config.basis() || state.fields() != config.fields {
        return Err(Error::DimensionMismatch {
            expected: config.state_len()?,
            found: state.amplitudes().len(),
        });
    }
    if config.trotter_n == 0 {
        return Ok(state.clone());
    }
    let dt = config.dt();
    let kernel = free_field_kernel_dt(config, dt)?;
    let phases: Vec<Complex64> = potential_samples(config)?
        .iter()
        .map(|&h| Complex64::from_polar(1.0, -h * dt))
        .collect();
    let mut psi = state.clone();
    for _ in 0..config.trotter_n {
        psi.amplitudes
            .iter_mut()
            .zip(&phases)
            .for_each(|(a, p)| *a *= p);
        psi = kernel.apply(&psi)?;
    }
    Ok(psi)
}

/// Unit-norm product of real Gaussians `e^{-(phi - mean)^2 / (4 width^2)}`.
pub fn initial_field_packet(config: &FieldConfig) -> Result<FieldState> {
    config.validate()?;
    let x = config.grid.x();
    let modes: Vec<Vec<f64>> = config
        .initial
        .iter()
        .map(|p| {
            let g: Vec<f64> = x
                .iter()
                .map(|v| (-(v - p.mean).powi(2) / (4.0 * p.width * p.width)).exp())
                .collect();
            let n = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            g.into_iter().map(|v| v / n).collect()
        })
        .collect();
    let len = config.state_len()?;
    let m = config.grid.m();
    let amps = (0..len)
        .map(|mut idx| {
            let mut a = 1.0;
            for mode in modes.iter().rev() {
                a *= mode[idx % m];
                idx /= m;
            }
            Complex64::new(a, 0.0)
        })
        .collect();
    FieldState::new(config.basis(), config.fields, amps)
}

/// Dense `M^F x M^F` Hamiltonian on the field grid: per-mode discrete kinetic
/// operators plus `diag(H_F)`.
pub fn dense_field_hamiltonian(config: &FieldConfig) -> Result<DMatrix<Complex64>> {
    let dim = config.state_len()?;
    if dim > DENSE_FIELD_LIMIT {
        return Err(Error::MemoryGuard {
            size: (dim as u128).pow(2),
            limit: (DENSE_FIELD_LIMIT as u128).pow(2),
        });
    }
    let grid = &config.grid;
    let m = grid.m();
    let mut kin: Vec<Complex64> = grid
        .p()
        .iter()
        .map(|p| Complex64::new(0.5 * p * p, 0.0))
        .collect();
    grid.dft().forward(&mut kin)?;
    let scale = 1.0 / (m as f64).sqrt();
    let basis = grid.basis();
    let t = DMatrix::from_fn(m, m, |r, c| {
        kin[basis.slot_mod(basis.label(r) - basis.label(c))] * scale
    });
    let mut h = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        potential_samples(config)?
            .into_iter()
            .map(|v| Complex64::new(v, 0.0)),
    ));
    for axis in 0..config.fields {
        let mut term = DMatrix::<Complex64>::identity(1, 1);
        for a in 0..config.fields {
            term = if a == axis {
                term.kronecker(&t)
            } else {
                term.kronecker(&DMatrix::identity(m, m))
            };
        }
        h += term;
    }
    Ok(h)
}
