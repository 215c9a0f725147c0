use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Right end of the support `[0, 5]`.
pub const SUPPORT: usize = 5;

/// Finest dyadic level [`scaling_on_dyadics`] will build.
pub const MAX_LEVEL: u32 = 16;

/// The six refinement coefficients `h_0..h_5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementCoefficients {
    pub h: [f64; 6],
}

impl RefinementCoefficients {
    /// `|sum_l h_l - sqrt 2|`.
    pub fn sum_residual(&self) -> f64 {
        (self.h.iter().sum::<f64>() - std::f64::consts::SQRT_2).abs()
    }

    /// Largest `|sum_l h_l h_{l-2k} - delta_k0|`.
    pub fn orthonormality_residual(&self) -> f64 {
        (0..3)
            .map(|k| {
                let s: f64 = (2 * k..6).map(|l| self.h[l] * self.h[l - 2 * k]).sum();
                (s - if k == 0 { 1.0 } else { 0.0 }).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Mother-wavelet coefficients `(-1)^l h_{5-l}`.
    pub fn wavelet(&self) -> [f64; 6] {
        std::array::from_fn(|l| {
            if l % 2 == 0 {
                self.h[5 - l]
            } else {
                -self.h[5 - l]
            }
        })
    }
}

/// Closed-form Daubechies coefficients,
/// `h_0 = (1 + sqrt 10 + sqrt(5 + 2 sqrt 10)) / (16 sqrt 2)` and relatives.
pub fn daubechies_h() -> RefinementCoefficients {
    let a = 10f64.sqrt();
    let b = (5.0 + 2.0 * a).sqrt();
    let d = 16.0 * std::f64::consts::SQRT_2;
    RefinementCoefficients {
        h: [
            (1.0 + a + b) / d,
            (5.0 + a + 3.0 * b) / d,
            (10.0 - 2.0 * a + 2.0 * b) / d,
            (10.0 - 2.0 * a - 2.0 * b) / d,
            (5.0 + a - 3.0 * b) / d,
            (1.0 + a - b) / d,
        ],
    }
}

/// A function and its derivative at `x = n / 2^level`, `0 <= n <= 5 2^level`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicSamples {
    pub level: u32,
    pub values: Vec<f64>,
    pub derivative: Vec<f64>,
}

impl DyadicSamples {
    pub fn points_per_unit(&self) -> usize {
        1 << self.level
    }

    pub fn step(&self) -> f64 {
        1.0 / self.points_per_unit() as f64
    }

    pub fn x(&self, n: usize) -> f64 {
        n as f64 * self.step()
    }

    /// Value at `x = n / 2^level` for any integer `n`, zero off the support.
    pub fn value(&self, n: i64) -> f64 {
        usize::try_from(n)
            .ok()
            .and_then(|i| self.values.get(i))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn derivative_at(&self, n: i64) -> f64 {
        usize::try_from(n)
            .ok()
            .and_then(|i| self.derivative.get(i))
            .copied()
            .unwrap_or(0.0)
    }

    /// Trapezoid `int f(x) dx`; the endpoints vanish.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.step()
    }

    /// Trapezoid `int f(x) g(x - shift) dx` for an integer shift.
    pub fn overlap(&self, other: &DyadicSamples, shift: i64) -> f64 {
        assert_eq!(self.level, other.level);
        let off = shift * self.points_per_unit() as i64;
        (0..self.values.len())
            .map(|i| self.values[i] * other.value(i as i64 - off))
            .sum::<f64>()
            * self.step()
    }

    /// Restriction to a coarser level.
    pub fn coarsen(&self, level: u32) -> DyadicSamples {
        assert!(level <= self.level);
        let stride = 1usize << (self.level - level);
        DyadicSamples {
            level,
            values: self.values.iter().step_by(stride).copied().collect(),
            derivative: self.derivative.iter().step_by(stride).copied().collect(),
        }
    }

    /// Largest `|f(x) - sum_l h_l sqrt 2 f(2x - l)|` over the stored points.
    pub fn refinement_residual(&self, h: &RefinementCoefficients) -> f64 {
        let ppu = self.points_per_unit() as i64;
        (0..self.values.len())
            .map(|n| {
                let rhs: f64 = (0..6)
                    .map(|l| {
                        let idx = 2 * n as i64 - l as i64 * ppu;
                        std::f64::consts::SQRT_2 * h.h[l] * self.value(idx)
                    })
                    .sum();
                (self.values[n] - rhs).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn refinement_matrix(h: &RefinementCoefficients) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(SUPPORT + 1, SUPPORT + 1);
    for k in 0..=SUPPORT {
        for l in 0..6 {
            let j = 2 * k as i64 - l as i64;
            if (0..=SUPPORT as i64).contains(&j) {
                a[(k, j as usize)] += std::f64::consts::SQRT_2 * h.h[l];
            }
        }
    }
    a
}

fn eigen_residual(v: &[f64], h: &RefinementCoefficients, eigenvalue: f64) -> f64 {
    let a = refinement_matrix(h);
    let x = DVector::from_column_slice(v);
    (&a * &x - &x * eigenvalue).amax()
}

/// Integer samples: eigenvector of the refinement matrix for `eigenvalue`,
/// normalized by `sum s(n) = 1` (eigenvalue 1) or `sum n s'(n) = -1`
/// (eigenvalue 1/2).
fn integer_values(h: &RefinementCoefficients, eigenvalue: f64) -> Result<Vec<f64>> {
    let n = SUPPORT + 1;
    let a = refinement_matrix(h);
    let mut sys = DMatrix::<f64>::zeros(n + 1, n);
    sys.view_mut((0, 0), (n, n))
        .copy_from(&(a - DMatrix::identity(n, n) * eigenvalue));
    let rhs_value = if eigenvalue == 1.0 {
        for j in 0..n {
            sys[(n, j)] = 1.0;
        }
        1.0
    } else {
        for j in 0..n {
            sys[(n, j)] = j as f64;
        }
        -1.0
    };
    let mut rhs = DVector::zeros(n + 1);
    rhs[n] = rhs_value;
    let svd = sys.svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Singular(format!("refinement eigenvector: {e}")))?;
    let v: Vec<f64> = sol.iter().copied().collect();
    let res = eigen_residual(&v, h, eigenvalue);
    if res > 1e-10 {
        return Err(Error::Singular(format!(
            "refinement eigenvalue {eigenvalue} has no clean eigenvector (residual {res:.2e})"
        )));
    }
    Ok(v)
}

fn refine(coarse: &[f64], level: u32, weights: &[f64; 6]) -> Vec<f64> {
    // coarse holds level - 1; x = n / 2^level maps to 2x - l at coarse index n - l 2^(level-1)
    let half = 1usize << (level - 1);
    let len = SUPPORT * (1 << level) + 1;
    (0..len)
        .map(|n| {
            (0..6)
                .filter_map(|l| {
                    let idx = n.checked_sub(l * half)?;
                    coarse.get(idx).map(|v| weights[l] * v)
                })
                .sum()
        })
        .collect()
}

fn check_level(level: u32) -> Result<()> {
    if level > MAX_LEVEL {
        return Err(Error::MemoryGuard {
            size: (SUPPORT as u128) << level,
            limit: (SUPPORT as u128) << MAX_LEVEL,
        });
    }
    Ok(())
}

/// The scaling function and its derivative at every `n / 2^level`.
pub fn scaling_on_dyadics(level: u32) -> Result<DyadicSamples> {
    check_level(level)?;
    let h = daubechies_h();
    let mut s = integer_values(&h, 1.0)?;
    let mut ds = integer_values(&h, 0.5)?;
    let ws: [f64; 6] = std::array::from_fn(|l| std::f64::consts::SQRT_2 * h.h[l]);
    let wd: [f64; 6] = std::array::from_fn(|l| 2.0 * std::f64::consts::SQRT_2 * h.h[l]);
    for j in 1..=level {
        s = refine(&s, j, &ws);
        ds = refine(&ds, j, &wd);
    }
    Ok(DyadicSamples {
        level,
        values: s,
        derivative: ds,
    })
}

/// `w(x) = sum_l (-1)^l h_{5-l} sqrt 2 s(2x - l)` on the `level` mesh.
pub fn mother_wavelet_on_dyadics(level: u32) -> Result<DyadicSamples> {
    check_level(level)?;
    if level == 0 {
        return Err(Error::InvalidParameter(
            "mother wavelet needs level >= 1".into(),
        ));
    }
    let h = daubechies_h();
    let coarse = scaling_on_dyadics(level - 1)?;
    let g = h.wavelet();
    let ws: [f64; 6] = std::array::from_fn(|l| std::f64::consts::SQRT_2 * g[l]);
    let wd: [f64; 6] = std::array::from_fn(|l| 2.0 * std::f64::consts::SQRT_2 * g[l]);
    Ok(DyadicSamples {
        level,
        values: refine(&coarse.values, level, &ws),
        derivative: refine(&coarse.derivative, level, &wd),
    })
}
