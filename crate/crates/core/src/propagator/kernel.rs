use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::hamiltonian::MixedHamiltonian;
use crate::dft::Dft;
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum_by;
use crate::state::StateVector;
use crate::weyl::{DenseOperator, WeylBasis};

/// What a [`StepKernel`] represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// Free kernel `P_X`, diagonal in the U-eigenbasis.
    FreePx,
    /// Full split step `X = P_X diag(e^{-i V dt})`.
    FullX,
    /// Phase-space product step built from a mixed symbol.
    MixedStep,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::FreePx => "FreeP_X",
            KernelKind::FullX => "FullX",
            KernelKind::MixedStep => "MixedStep",
        }
    }
}

#[derive(Debug, Clone)]
struct Factored {
    dft: Dft,
    kinetic_phase: Vec<Complex64>,
    potential_phase: Option<Vec<Complex64>>,
}

/// An `M x M` one-step kernel in the X basis.
///
/// Free and full kernels also keep their factored form, which
/// [`evolve_fast`] applies with two FFTs per step.
#[derive(Debug, Clone)]
pub struct StepKernel {
    basis: WeylBasis,
    matrix: DMatrix<Complex64>,
    kind: KernelKind,
    dt: f64,
    factored: Option<Factored>,
}

impl StepKernel {
    pub fn basis(&self) -> WeylBasis {
        self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn to_operator(&self) -> DenseOperator {
        DenseOperator::new(self.basis, self.matrix.clone()).expect("square")
    }

    /// `max |T^dagger T - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        self.to_operator().unitarity_residual()
    }

    /// Largest deviation of a column sum from 1.
    pub fn column_sum_residual(&self) -> f64 {
        let m = self.basis.dim();
        (0..m)
            .map(|c| (pairwise_sum_by(m, |r| self.matrix[(r, c)]) - 1.0).norm())
            .fold(0.0, f64::max)
    }

    /// Dense matrix-vector product, rows in parallel.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        self.check(psi)?;
        let a = psi.amplitudes();
        let m = self.basis.dim();
        let out: Vec<Complex64> = (0..m)
            .into_par_iter()
            .map(|i| pairwise_sum_by(m, |j| self.matrix[(i, j)] * a[j]))
            .collect();
        Ok(StateVector::new(self.basis, out)?.with_convention(psi.convention()))
    }

    /// Applies the factored form; falls back to [`Self::apply`] without one.
    pub fn apply_fast(&self, psi: &StateVector) -> Result<StateVector> {
        self.check(psi)?;
        let Some(f) = &self.factored else {
            return self.apply(psi);
        };
        let mut data = psi.amplitudes().to_vec();
        if let Some(v) = &f.potential_phase {
            data.iter_mut().zip(v).for_each(|(a, p)| *a *= p);
        }
        f.dft.inverse(&mut data)?;
        data.iter_mut()
            .zip(&f.kinetic_phase)
            .for_each(|(a, p)| *a *= p);
        f.dft.forward(&mut data)?;
        Ok(StateVector::new(self.basis, data)?.with_convention(psi.convention()))
    }

    fn check(&self, psi: &StateVector) -> Result<()> {
        if psi.basis() != self.basis {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: psi.basis().dim(),
            });
        }
        Ok(())
    }
}

fn check_len(basis: WeylBasis, len: usize) -> Result<()> {
    if len != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: len,
        });
    }
    Ok(())
}

/// `P_X(k'; k) = sum_m <k'|u_m> e^{-i (K(p_m) - K(p_0)) dt} <u_m|k>`.
///
/// `kinetic` is indexed by the slot of the momentum label `m`. The matrix is
/// circulant, `P_X(k'; k) = c(k' - k)`.
pub fn free_step_kernel(basis: WeylBasis, kinetic: &[f64], dt: f64) -> Result<StepKernel> {
    check_len(basis, kinetic.len())?;
    let m = basis.dim();
    let k0 = kinetic[basis.slot_mod(0)];
    let phases: Vec<Complex64> = kinetic
        .iter()
        .map(|&k| Complex64::from_polar(1.0, -(k - k0) * dt))
        .collect();
    let dft = Dft::new(basis);
    let mut c = phases.clone();
    dft.forward(&mut c)?;
    let scale = 1.0 / (m as f64).sqrt();
    c.iter_mut().for_each(|z| *z *= scale);
    let matrix = DMatrix::from_fn(m, m, |r, col| {
        c[basis.slot_mod(basis.label(r) - basis.label(col))]
    });
    Ok(StepKernel {
        basis,
        matrix,
        kind: KernelKind::FreePx,
        dt,
        factored: Some(Factored {
            dft,
            kinetic_phase: phases,
            potential_phase: None,
        }),
    })
}

/// `X = P_X diag(e^{-i V(x_j) dt})`.
pub fn full_step_kernel(free: &StepKernel, potential: &[f64], dt: f64) -> Result<StepKernel> {
    if free.kind != KernelKind::FreePx {
        return Err(Error::KernelKind {
            expected: KernelKind::FreePx.name(),
            found: free.kind.name(),
        });
    }
    check_len(free.basis, potential.len())?;
    let phases: Vec<Complex64> = potential
        .iter()
        .map(|&v| Complex64::from_polar(1.0, -v * dt))
        .collect();
    let mut matrix = free.matrix.clone();
    for (j, p) in phases.iter().enumerate() {
        matrix.column_mut(j).iter_mut().for_each(|z| *z *= p);
    }
    let mut factored = free.factored.clone();
    if let Some(f) = factored.as_mut() {
        f.potential_phase = Some(phases);
    }
    Ok(StepKernel {
        basis: free.basis,
        matrix,
        kind: KernelKind::FullX,
        dt,
        factored,
    })
}

/// `T(k'; k) = sum_n <k'|u_n><u_n|k> e^{-i H~(p_n, x_k) dt}`.
///
/// Not unitary in general; the deviation is logged.
pub fn mixed_step_kernel(mixed: &MixedHamiltonian, dt: f64) -> Result<StepKernel> {
    let basis = mixed.basis();
    let m = basis.dim();
    let dft = Dft::new(basis);
    let scale = 1.0 / (m as f64).sqrt();
    let mut matrix = DMatrix::<Complex64>::zeros(m, m);
    let h = mixed.samples();
    for col in 0..m {
        let mut c: Vec<Complex64> = (0..m)
            .map(|n| (Complex64::new(0.0, -dt) * h[(n, col)]).exp())
            .collect();
        dft.forward(&mut c)?;
        let lk = basis.label(col);
        for r in 0..m {
            matrix[(r, col)] = c[basis.slot_mod(basis.label(r) - lk)] * scale;
        }
    }
    let kernel = StepKernel {
        basis,
        matrix,
        kind: KernelKind::MixedStep,
        dt,
        factored: None,
    };
    log::info!(
        "mixed step kernel M = {m}, dt = {dt}: unitarity deviation {:.3e}",
        kernel.unitarity_residual()
    );
    Ok(kernel)
}

/// Applies the dense kernel `steps` times.
pub fn evolve(kernel: &StepKernel, psi: &StateVector, steps: usize) -> Result<StateVector> {
    kernel.check(psi)?;
    let mut state = psi.clone();
    for _ in 0..steps {
        state = kernel.apply(&state)?;
    }
    Ok(state)
}

/// Like [`evolve`], using the FFT-factored form when the kernel has one.
pub fn evolve_fast(kernel: &StepKernel, psi: &StateVector, steps: usize) -> Result<StateVector> {
    kernel.check(psi)?;
    let mut state = psi.clone();
    for _ in 0..steps {
        state = kernel.apply_fast(&state)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::propagator::SplitHamiltonian;

    fn kinetic(basis: WeylBasis) -> Vec<f64> {
        let e = basis.epsilon();
        basis
            .labels()
            .map(|l| (l as f64 * e).powi(2) / 2.0)
            .collect()
    }

    #[test]
    fn trivial_free_kernels_are_identity() {
        let basis = WeylBasis::symmetric(4).unwrap();
        let id = DenseOperator::identity(basis);
        let zero = free_step_kernel(basis, &[0.0; 9], 0.3).unwrap();
        assert!(zero.to_operator().max_abs_diff(&id) < 1e-15);
        let still = free_step_kernel(basis, &kinetic(basis), 0.0).unwrap();
        assert!(still.to_operator().max_abs_diff(&id) < 1e-15);
    }

    #[test]
    fn free_kernel_sums_and_unitarity() {
        let basis = WeylBasis::symmetric(1).unwrap();
        let k = free_step_kernel(basis, &kinetic(basis), 0.1).unwrap();
        assert!(k.column_sum_residual() < 1e-12);
        assert!(k.unitarity_residual() < 1e-12);
    }

    #[test]
    fn forward_then_backward_is_identity() {
        let basis = WeylBasis::symmetric(20).unwrap();
        let kin = kinetic(basis);
        let f = free_step_kernel(basis, &kin, 0.07).unwrap();
        let b = free_step_kernel(basis, &kin, -0.07).unwrap();
        let prod = f.to_operator().mul(&b.to_operator());
        assert!(prod.max_abs_diff(&DenseOperator::identity(basis)) < 1e-12);
    }

    #[test]
    fn full_kernel_with_zero_potential() {
        let basis = WeylBasis::symmetric(6).unwrap();
        let f = free_step_kernel(basis, &kinetic(basis), 0.2).unwrap();
        let x = full_step_kernel(&f, &[0.0; 13], 0.2).unwrap();
        assert_eq!(x.matrix(), f.matrix());
        assert_eq!(x.kind(), KernelKind::FullX);
        assert!(full_step_kernel(&x, &[0.0; 13], 0.2).is_err());
    }

    #[test]
    fn full_kernel_departs_linearly_in_coupling() {
        let g = make_grid(15).unwrap();
        let f = free_step_kernel(g.basis(), &kinetic(g.basis()), 0.1).unwrap();
        let dev = |lam: f64| {
            let v: Vec<f64> = g.x().iter().map(|x| lam * (-2.0 * x * x).exp()).collect();
            let x = full_step_kernel(&f, &v, 0.1).unwrap();
            x.to_operator().max_abs_diff(&f.to_operator())
        };
        let ratio = dev(1e-3) / dev(5e-4);
        assert!((ratio - 2.0).abs() < 1e-3, "{ratio}");
    }

    #[test]
    fn fast_path_matches_dense() {
        let g = make_grid(300).unwrap();
        let h = SplitHamiltonian::on_grid(&g, |p| p * p / 2.0, |x| 0.5 * (-2.0 * x * x).exp());
        let f = free_step_kernel(g.basis(), h.kinetic(), 0.07).unwrap();
        let x = full_step_kernel(&f, h.potential(), 0.07).unwrap();
        let psi = StateVector::basis_state(g.basis(), 3).unwrap();
        let dense = evolve(&x, &psi, 5).unwrap();
        let fast = evolve_fast(&x, &psi, 5).unwrap();
        assert!(dense.max_abs_diff(&fast) < 1e-11);
    }

    #[test]
    fn zero_steps_is_bitwise_identity() {
        let basis = WeylBasis::symmetric(3).unwrap();
        let f = free_step_kernel(basis, &kinetic(basis), 0.5).unwrap();
        let psi = StateVector::new(
            basis,
            (0..7)
                .map(|i| Complex64::new(i as f64 * 0.1, -0.3))
                .collect(),
        )
        .unwrap();
        assert_eq!(evolve(&f, &psi, 0).unwrap(), psi);
        assert_eq!(evolve_fast(&f, &psi, 0).unwrap(), psi);
    }

    #[test]
    fn mixed_kernel_reductions() {
        let basis = WeylBasis::symmetric(3).unwrap();
        let zero = mixed_step_kernel(&MixedHamiltonian::zero(basis), 0.4).unwrap();
        assert!(
            zero.to_operator()
                .max_abs_diff(&DenseOperator::identity(basis))
                < 1e-15
        );

        let kin = kinetic(basis);
        let e = basis.epsilon();
        let h = MixedHamiltonian::from_fn(basis, |n, _| {
            Complex64::new((n as f64 * e).powi(2) / 2.0, 0.0)
        });
        let mixed = mixed_step_kernel(&h, 0.3).unwrap();
        let free = free_step_kernel(basis, &kin, 0.3).unwrap();
        assert!(mixed.to_operator().max_abs_diff(&free.to_operator()) < 1e-12);
    }

    #[test]
    fn separable_symbol_gives_a_unitary_step() {
        let basis = WeylBasis::symmetric(2).unwrap();
        let e = basis.epsilon();
        let h = MixedHamiltonian::from_fn(basis, |n, k| {
            Complex64::new(((n as f64 * e).powi(2) + (k as f64 * e).powi(2)) / 2.0, 0.0)
        });
        let dt = 0.05;
        assert!(mixed_step_kernel(&h, dt).unwrap().unitarity_residual() < 1e-12 * dt * dt);
    }

    #[test]
    fn mixed_kernel_unitarity_defect_is_second_order() {
        let basis = WeylBasis::symmetric(2).unwrap();
        let m = basis.dim();
        let a = DMatrix::from_fn(m, m, |r, c| {
            Complex64::new(
                ((r * 7 + c * 3) % 5) as f64 * 0.2 - 0.4,
                ((r * 2 + c * 5) % 7) as f64 * 0.1 - 0.3,
            )
        });
        let herm = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
        let h = MixedHamiltonian::from_operator(&DenseOperator::new(basis, herm).unwrap());
        let defect = |dt: f64| mixed_step_kernel(&h, dt).unwrap().unitarity_residual();
        let (d1, d2) = (defect(0.05), defect(0.025));
        assert!(d1 > 1e-6 && d1 < 10.0 * 0.05 * 0.05, "{d1}");
        let ratio = d1 / d2;
        assert!(ratio > 3.5 && ratio < 4.5, "{ratio}");
    }
}
