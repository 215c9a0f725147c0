use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{DenseOperator, WeylBasis};
use crate::numeric::pairwise_sum_by;

/// Order of the monomials in a Weyl expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// `O = sum c_mn U^m V^n`
    UV,
    /// `O = sum d_mn V^m U^n`
    VU,
}

/// Expansion coefficients of an operator in monomials of the Weyl pair.
///
/// `coefficients()[(m, n)]` multiplies `U^m V^n` (or `V^m U^n`), with powers
/// `0..M`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylCoefficients {
    basis: WeylBasis,
    c: DMatrix<Complex64>,
    ordering: Ordering,
}

impl WeylCoefficients {
    pub fn new(basis: WeylBasis, c: DMatrix<Complex64>, ordering: Ordering) -> Self {
        assert_eq!(c.nrows(), basis.dim());
        assert_eq!(c.ncols(), basis.dim());
        Self { basis, c, ordering }
    }

    pub fn zeros(basis: WeylBasis, ordering: Ordering) -> Self {
        let m = basis.dim();
        Self::new(basis, DMatrix::zeros(m, m), ordering)
    }

    pub fn basis(&self) -> WeylBasis {
        self.basis
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn coefficients(&self) -> &DMatrix<Complex64> {
        &self.c
    }

    pub fn coefficients_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.c
    }

    pub fn max_abs_diff(&self, other: &WeylCoefficients) -> f64 {
        self.c
            .iter()
            .zip(other.c.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Expands `op` as a polynomial in `U` and `V`.
pub fn weyl_decompose(op: &DenseOperator, ordering: Ordering) -> WeylCoefficients {
    let basis = op.basis();
    let m = basis.dim();
    let o = op.matrix();
    let inv_m = 1.0 / m as f64;
    let c = match ordering {
        // c_an = (1/M) sum_k e^{-2 pi i n k/M} <k+a|O|k>
        Ordering::UV => DMatrix::from_fn(m, m, |a, n| {
            let n = n as i64;
            pairwise_sum_by(m, |k| basis.phase(-n, basis.label(k)) * o[((k + a) % m, k)]) * inv_m
        }),
        // d_ma = (1/M) sum_r e^{-2 pi i m r/M} <r|O|r-a>
        Ordering::VU => DMatrix::from_fn(m, m, |mm, a| {
            let mm = mm as i64;
            pairwise_sum_by(m, |r| {
                basis.phase(-mm, basis.label(r)) * o[(r, (r + m - a) % m)]
            }) * inv_m
        }),
    };
    WeylCoefficients { basis, c, ordering }
}

/// Sums the monomial expansion back into a dense operator.
pub fn weyl_reconstruct(coeffs: &WeylCoefficients) -> DenseOperator {
    let basis = coeffs.basis;
    let m = basis.dim();
    let c = &coeffs.c;
    let mat = match coeffs.ordering {
        // (U^a V^n)_{rk} = delta_{r,k+a} e^{2 pi i n k/M}
        Ordering::UV => DMatrix::from_fn(m, m, |r, k| {
            let a = (r + m - k) % m;
            let kl = basis.label(k);
            pairwise_sum_by(m, |n| c[(a, n)] * basis.phase(n as i64, kl))
        }),
        // (V^m U^a)_{rk} = delta_{r,k+a} e^{2 pi i m r/M}
        Ordering::VU => DMatrix::from_fn(m, m, |r, k| {
            let a = (r + m - k) % m;
            let rl = basis.label(r);
            pairwise_sum_by(m, |mm| c[(mm, a)] * basis.phase(mm as i64, rl))
        }),
    };
    DenseOperator::new(basis, mat).expect("square by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{build_clock_v, build_shift_u};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(basis: WeylBasis, seed: u64) -> DenseOperator {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = basis.dim();
        let mut a = DMatrix::<Complex64>::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                a[(i, j)] =
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
        DenseOperator::new(basis, h).unwrap()
    }

    #[test]
    fn identity_has_single_constant_term() {
        let basis = WeylBasis::zero_based(5).unwrap();
        let c = weyl_decompose(&DenseOperator::identity(basis), Ordering::UV);
        for ((i, j), z) in c
            .coefficients()
            .iter()
            .enumerate()
            .map(|(idx, z)| ((idx % 5, idx / 5), z))
        {
            let expect = if i == 0 && j == 0 { 1.0 } else { 0.0 };
            assert!((z - Complex64::new(expect, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn shift_is_its_own_monomial() {
        for basis in [
            WeylBasis::zero_based(6).unwrap(),
            WeylBasis::symmetric(3).unwrap(),
        ] {
            let c = weyl_decompose(&build_shift_u(basis), Ordering::UV);
            let m = basis.dim();
            for a in 0..m {
                for n in 0..m {
                    let expect = if a == 1 && n == 0 { 1.0 } else { 0.0 };
                    assert!(
                        (c.coefficients()[(a, n)] - Complex64::new(expect, 0.0)).norm() < 1e-14
                    );
                }
            }
        }
    }

    #[test]
    fn constant_term_reconstructs_scaled_identity() {
        let basis = WeylBasis::zero_based(4).unwrap();
        let mut c = WeylCoefficients::zeros(basis, Ordering::UV);
        let lambda = Complex64::new(0.7, -1.3);
        c.coefficients_mut()[(0, 0)] = lambda;
        let op = weyl_reconstruct(&c);
        assert!(op.max_abs_diff(&DenseOperator::identity(basis).scale(lambda)) < 1e-15);
    }

    #[test]
    fn round_trip_on_random_operators() {
        for (m, seed) in [(3usize, 1u64), (4, 2), (7, 3)] {
            for ordering in [Ordering::UV, Ordering::VU] {
                let basis = WeylBasis::zero_based(m).unwrap();
                let o = random_hermitian(basis, seed);
                let back = weyl_reconstruct(&weyl_decompose(&o, ordering));
                assert!(back.max_abs_diff(&o) < 1e-12);
            }
        }
        let basis = WeylBasis::symmetric(2).unwrap();
        let o = random_hermitian(basis, 9);
        assert!(weyl_reconstruct(&weyl_decompose(&o, Ordering::UV)).max_abs_diff(&o) < 1e-12);
    }

    #[test]
    fn coefficient_round_trip() {
        let basis = WeylBasis::zero_based(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = DMatrix::from_fn(5, 5, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let coeffs = WeylCoefficients::new(basis, c, Ordering::VU);
        let again = weyl_decompose(&weyl_reconstruct(&coeffs), Ordering::VU);
        assert!(again.max_abs_diff(&coeffs) < 1e-12);
    }

    #[test]
    fn orderings_differ_by_commutator_phase() {
        let basis = WeylBasis::zero_based(5).unwrap();
        let mut uv = WeylCoefficients::zeros(basis, Ordering::UV);
        uv.coefficients_mut()[(1, 1)] = Complex64::new(1.0, 0.0);
        let mut vu = WeylCoefficients::zeros(basis, Ordering::VU);
        vu.coefficients_mut()[(1, 1)] = Complex64::new(1.0, 0.0);
        let a = weyl_reconstruct(&uv);
        let b = weyl_reconstruct(&vu);
        assert!(a.max_abs_diff(&b.scale(basis.root_of_unity(-1))) < 1e-14);
        let direct = build_shift_u(basis).mul(&build_clock_v(basis));
        assert!(a.max_abs_diff(&direct) < 1e-14);
    }

    #[test]
    fn operators_commuting_with_shift_have_no_clock_dependence() {
        let basis = WeylBasis::zero_based(6).unwrap();
        let u = build_shift_u(basis);
        // polynomial in U commutes with U
        let op = DenseOperator::identity(basis)
            .scale(Complex64::new(0.3, 0.0))
            .sub(&u.pow(2).scale(Complex64::new(0.0, 1.1)))
            .sub(&u.pow(5).scale(Complex64::new(-2.0, 0.4)));
        let c = weyl_decompose(&op, Ordering::UV);
        for a in 0..6 {
            for n in 1..6 {
                assert!(c.coefficients()[(a, n)].norm() < 1e-14);
            }
        }
    }
}
