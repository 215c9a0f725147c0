use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::refinement::{daubechies_h, scaling_on_dyadics, DyadicSamples, MAX_LEVEL, SUPPORT};
use crate::error::{Error, Result};

const CONVERGENCE: f64 = 1e-4;

/// Derivative overlaps `D_mn = int s'(x - m) s'(x - n) dx` and quartic overlaps
/// `Gamma_klmn = int s(x - k) s(x - l) s(x - m) s(x - n) dx` for a set of
/// integer translates.
#[derive(Debug, Clone)]
pub struct OverlapTables {
    pub modes: Vec<i64>,
    pub points_per_unit: usize,
    /// Exact values from the connection coefficients.
    pub d: DMatrix<f64>,
    /// Trapezoid values from the derivative samples, for comparison.
    pub d_trapezoid: DMatrix<f64>,
    gamma: Vec<f64>,
    /// Largest change of any `Gamma` entry when the points per unit double.
    pub gamma_change: f64,
    /// Largest change of any trapezoid `D` entry when the points per unit double.
    pub d_trapezoid_change: f64,
}

impl OverlapTables {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// `Gamma` by positions in `modes`.
    pub fn gamma(&self, k: usize, l: usize, m: usize, n: usize) -> f64 {
        let f = self.len();
        self.gamma[((k * f + l) * f + m) * f + n]
    }

    /// Row-major `F^4` array of `Gamma`.
    pub fn gamma_flat(&self) -> &[f64] {
        &self.gamma
    }
}

/// `r_n = int s'(x) s'(x - n) dx` for `n = -4..=4`.
///
/// Solves `r_n = 4 sum_{l,m} h_l h_m r_{2n+m-l}` with `sum n^2 r_n = -2`.
pub fn connection_coefficients() -> Result<[f64; 9]> {
    let h = daubechies_h().h;
    let size = 9;
    let mut sys = DMatrix::<f64>::zeros(size + 1, size);
    for n in -4i64..=4 {
        let row = (n + 4) as usize;
        sys[(row, row)] += 1.0;
        for (l, hl) in h.iter().enumerate() {
            for (m, hm) in h.iter().enumerate() {
                let j = 2 * n + m as i64 - l as i64;
                if (-4..=4).contains(&j) {
                    sys[(row, (j + 4) as usize)] -= 4.0 * hl * hm;
                }
            }
        }
        sys[(size, row)] = (n * n) as f64;
    }
    let mut rhs = DVector::zeros(size + 1);
    rhs[size] = -2.0;
    let sol = sys
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Singular(format!("connection coefficients: {e}")))?;
    let res = (&sys * &sol - &rhs).amax();
    if res > 1e-10 {
        return Err(Error::Singular(format!(
            "connection coefficient system inconsistent (residual {res:.2e})"
        )));
    }
    Ok(std::array::from_fn(|i| 0.5 * (sol[i] + sol[8 - i])))
}

fn multisets(f: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..f {
        for b in a..f {
            for c in b..f {
                for d in c..f {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

fn permutations(idx: [usize; 4]) -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push([idx[a], idx[b], idx[c], idx[d]]);
                    }
                }
            }
        }
    }
    out
}

fn gamma_table(s: &DyadicSamples, modes: &[i64]) -> Vec<f64> {
    let f = modes.len();
    let ppu = s.points_per_unit() as i64;
    let lo = modes.iter().min().copied().unwrap_or(0) * ppu;
    let hi = (modes.iter().max().copied().unwrap_or(0) + SUPPORT as i64) * ppu;
    let sets = multisets(f);
    let values: Vec<f64> = sets
        .par_iter()
        .map(|set| {
            (lo..=hi)
                .map(|i| {
                    set.iter()
                        .map(|&q| s.value(i - modes[q] * ppu))
                        .product::<f64>()
                })
                .sum::<f64>()
                * s.step()
        })
        .collect();
    let mut table = vec![0.0; f * f * f * f];
    for (set, v) in sets.iter().zip(values) {
        for [a, b, c, d] in permutations(*set) {
            table[((a * f + b) * f + c) * f + d] = v;
        }
    }
    table
}

fn d_trapezoid(s: &DyadicSamples, modes: &[i64]) -> DMatrix<f64> {
    let f = modes.len();
    let ppu = s.points_per_unit() as i64;
    DMatrix::from_fn(f, f, |a, b| {
        let shift = (modes[b] - modes[a]) * ppu;
        (0..s.derivative.len())
            .map(|i| s.derivative[i] * s.derivative_at(i as i64 - shift))
            .sum::<f64>()
            * s.step()
    })
}

fn max_diff(a: impl IntoIterator<Item = f64>, b: impl IntoIterator<Item = f64>) -> f64 {
    a.into_iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Overlap tables for the translates `s(x - n)`, `n` in `modes`, by the
/// trapezoid rule with `points_per_unit` samples per unit length.
///
/// Fails if any `Gamma` entry moves by more than `1e-4` when the sampling is
/// doubled.
pub fn overlap_tables(modes: &[i64], points_per_unit: usize) -> Result<OverlapTables> {
    if modes.is_empty() {
        return Err(Error::InvalidParameter("no modes given".into()));
    }
    if !points_per_unit.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "points per unit must be a power of two, got {points_per_unit}"
        )));
    }
    let level = points_per_unit.trailing_zeros();
    if level + 1 > MAX_LEVEL {
        return Err(Error::MemoryGuard {
            size: (SUPPORT as u128) << (level + 1),
            limit: (SUPPORT as u128) << MAX_LEVEL,
        });
    }
    let fine = scaling_on_dyadics(level + 1)?;
    let coarse = fine.coarsen(level);

    let gamma = gamma_table(&coarse, modes);
    let gamma_fine = gamma_table(&fine, modes);
    let gamma_change = max_diff(gamma.iter().copied(), gamma_fine);
    if gamma_change > CONVERGENCE {
        return Err(Error::NotConverged {
            what: "quartic overlaps",
            change: gamma_change,
            tolerance: CONVERGENCE,
        });
    }

    let r = connection_coefficients()?;
    let f = modes.len();
    let d = DMatrix::from_fn(f, f, |a, b| {
        let k = modes[b] - modes[a];
        if (-4..=4).contains(&k) {
            r[(k + 4) as usize]
        } else {
            0.0
        }
    });
    let d_trap = d_trapezoid(&coarse, modes);
    let d_trapezoid_change = max_diff(
        d_trap.iter().copied(),
        d_trapezoid(&fine, modes).iter().copied(),
    );

    Ok(OverlapTables {
        modes: modes.to_vec(),
        points_per_unit,
        d,
        d_trapezoid: d_trap,
        gamma,
        gamma_change,
        d_trapezoid_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connection_coefficients_are_the_known_rationals() {
        let r = connection_coefficients().unwrap();
        let known = [
            -3.0 / 560.0,
            -4.0 / 35.0,
            92.0 / 105.0,
            -356.0 / 105.0,
            295.0 / 56.0,
        ];
        for (i, k) in known.iter().enumerate() {
            assert!((r[i] - k).abs() < 1e-10, "r[{}] = {}", i as i64 - 4, r[i]);
            assert!((r[8 - i] - k).abs() < 1e-10);
        }
    }

    #[test]
    fn two_mode_tables() {
        let t = overlap_tables(&[0, 1], 256).unwrap();
        assert!((t.gamma(0, 0, 0, 0) - 0.9528539).abs() < 1e-5);
        assert!((t.gamma(0, 0, 0, 1) - 0.0670946).abs() < 1e-5);
        assert!((t.gamma(0, 0, 1, 1) - 0.0890895).abs() < 1e-5);
        assert!((t.gamma(0, 1, 1, 1) + 0.1424536).abs() < 1e-5);
        assert!(t.gamma_change < 1e-5);
        assert!((t.d[(0, 0)] - 295.0 / 56.0).abs() < 1e-6);
        assert!((t.d[(0, 1)] + 356.0 / 105.0).abs() < 1e-6);
        assert_eq!(t.gamma(0, 0, 0, 0), t.gamma(1, 1, 1, 1));
        assert!((t.d_trapezoid[(0, 0)] - t.d[(0, 0)]).abs() < 0.2);
    }

    #[test]
    fn gamma_is_permutation_symmetric() {
        let t = overlap_tables(&[0, 1, 6], 64).unwrap();
        for set in multisets(3) {
            let v = t.gamma(set[0], set[1], set[2], set[3]);
            for [a, b, c, d] in permutations(set) {
                assert_eq!(t.gamma(a, b, c, d), v);
            }
        }
        assert_eq!(t.d, t.d.transpose());
        assert_eq!(t.gamma(0, 0, 2, 2), 0.0);
    }

    #[test]
    fn rejects_bad_sampling() {
        assert!(overlap_tables(&[0, 1], 100).is_err());
        assert!(overlap_tables(&[], 256).is_err());
        assert!(overlap_tables(&[0], 1 << 16).unwrap_err().is_guard());
    }
}
