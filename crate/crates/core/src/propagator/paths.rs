use std::ops::Add;

use num_complex::Complex64;
use rayon::prelude::*;

use super::hamiltonian::MixedHamiltonian;
use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, pairwise_sum_by};
use crate::weyl::WeylBasis;

/// Largest number of phase-space paths [`brute_force_amplitude`] enumerates.
pub const PATH_LIMIT: u128 = 10_000_000;

const BLOCK: usize = 4096;

/// Result of an explicit sum over discrete phase-space paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathEnsembleResult {
    /// Sum of `P_N W` over paths starting at the initial label.
    pub amplitude: Complex64,
    /// Number of enumerated paths, `M^(2N)`.
    pub path_count: u128,
    /// Sum of `P_N` over every path.
    pub normalization_sum: Complex64,
}

/// `P(k'; n, k) = <k'|u_n><u_n|k> = e^{-2 pi i n (k' - k)/M} / M`.
pub fn conditional_probability(basis: WeylBasis, k_next: i64, n: i64, k: i64) -> Result<Complex64> {
    basis.slot(k_next)?;
    basis.slot(n)?;
    basis.slot(k)?;
    Ok(basis.phase(-n, k_next - k) / basis.dim() as f64)
}

#[derive(Debug, Clone, Copy, Default)]
struct Pair(Complex64, Complex64);

impl Add for Pair {
    type Output = Pair;
    fn add(self, o: Pair) -> Pair {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

/// Enumerates every path `(n_N, k_N, ..., n_1, k_1)` ending at `k_f`.
///
/// Each path carries `P_N = prod_i P(k_{i+1}; n_i, k_i)` with
/// `k_{N+1} = k_f`. `normalization_sum` adds `P_N` over all paths. The
/// amplitude adds `P_N W` over paths with `k_1 = k_i`, where
/// `W = e^{-i sum_i H~(p_{n_i}, x_{k_i}) dt}` when `functional_on` and
/// `W = 1` otherwise.
pub fn brute_force_amplitude(
    mixed: &MixedHamiltonian,
    dt: f64,
    steps: usize,
    k_i: i64,
    k_f: i64,
    functional_on: bool,
) -> Result<PathEnsembleResult> {
    let basis = mixed.basis();
    let m = basis.dim();
    let start = basis.slot(k_i)?;
    let end = basis.slot(k_f)?;
    if steps == 0 {
        return Err(Error::InvalidParameter(
            "path sum needs at least one step".into(),
        ));
    }
    let count = (m as u128)
        .checked_pow(2 * steps as u32)
        .filter(|&c| c <= PATH_LIMIT)
        .ok_or(Error::EnumerationGuard {
            paths: (m as u128).saturating_pow(2 * steps as u32),
            limit: PATH_LIMIT,
        })?;
    let total = count as usize;

    let inv_m = 1.0 / m as f64;
    let h = mixed.samples();
    let weight: Vec<Complex64> = h
        .iter()
        .map(|z| (Complex64::new(0.0, -dt) * z).exp())
        .collect();
    let path = |mut idx: usize| -> Pair {
        // digits, least significant first: k_1, n_1, k_2, n_2, ...
        let mut p = Complex64::new(1.0, 0.0);
        let mut w = Complex64::new(1.0, 0.0);
        let mut k = idx % m;
        idx /= m;
        let first = k;
        for step in 0..steps {
            let n = idx % m;
            idx /= m;
            let next = if step + 1 == steps {
                end
            } else {
                let v = idx % m;
                idx /= m;
                v
            };
            let d = basis.label(next) - basis.label(k);
            p *= basis.phase(-basis.label(n), d) * inv_m;
            if functional_on {
                w *= weight[n + k * m];
            }
            k = next;
        }
        let amp = if first == start {
            p * w
        } else {
            Complex64::default()
        };
        Pair(p, amp)
    };

    // The last digit k_{N+1} is fixed, leaving M^(2N) indices.
    let blocks = total.div_ceil(BLOCK);
    let partial: Vec<Pair> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(total);
            pairwise_sum_by(hi - lo, |i| path(lo + i))
        })
        .collect();
    let sum = pairwise_sum(&partial);
    Ok(PathEnsembleResult {
        amplitude: sum.1,
        path_count: count,
        normalization_sum: sum.0,
    })
}
