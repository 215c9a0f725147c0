//! Momentum-space Lippmann-Schwinger equation for `V(x) = lambda e^{-alpha x^2}`.
//!
//! `T(p, p0) = V(p, p0) + int dq V(p, q) 2m / (p0^2 - q^2 + i0) T(q, p0)` with
//! `V(p, q) = lambda / (2 pi) sqrt(pi / alpha) e^{-(p - q)^2 / 4 alpha}`.
//! The integral is folded onto `q >= 0`, the pole at `q = p0` is handled by
//! subtraction, and the unknowns are `T` at `+-q_j` and `+-p0`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::gauss_legendre;

const CONVERGENCE: f64 = 1e-3;

/// Solution of the half-shell equation.
#[derive(Debug, Clone)]
pub struct LsSolution {
    /// On-shell `T(p0, p0)`.
    pub on_shell: Complex64,
    /// Positive quadrature momenta.
    pub nodes: Vec<f64>,
    /// `T(q_j, p0)` at the nodes.
    pub half_shell: Vec<Complex64>,
    /// Relative change of the on-shell value when the rule is doubled.
    pub convergence: f64,
}

fn potential(lambda: f64, alpha: f64, p: f64, q: f64) -> f64 {
    lambda / (2.0 * PI) * (PI / alpha).sqrt() * (-(p - q).powi(2) / (4.0 * alpha)).exp()
}

fn solve(
    lambda: f64,
    alpha: f64,
    mass: f64,
    p0: f64,
    points: usize,
) -> Result<(Complex64, Vec<f64>, Vec<Complex64>)> {
    let top = 2.0 * p0 + 14.0 * alpha.sqrt();
    let (mut q, mut w) = gauss_legendre(points, 0.0, 2.0 * p0);
    let (q2, w2) = gauss_legendre(points, 2.0 * p0, top);
    q.extend(q2);
    w.extend(w2);
    let n = q.len();

    // unknown order: T(q_0..q_{n-1}), T(-q_0..-q_{n-1}), T(p0), T(-p0)
    let size = 2 * n + 2;
    let mom = |i: usize| -> f64 {
        match i {
            i if i < n => q[i],
            i if i < 2 * n => -q[i - n],
            i if i == 2 * n => p0,
            _ => -p0,
        }
    };
    let c: Vec<f64> = (0..n)
        .map(|j| 2.0 * mass * w[j] / (p0 * p0 - q[j] * q[j]))
        .collect();
    let sum_c: f64 = c.iter().sum();
    let principal_tail = ((top + p0) / (top - p0)).ln() / (2.0 * p0);
    let pole = Complex64::new(
        -sum_c + 2.0 * mass * principal_tail,
        -PI * 2.0 * mass / (2.0 * p0),
    );

    let mut a = DMatrix::<Complex64>::identity(size, size);
    let mut b = DVector::<Complex64>::zeros(size);
    for r in 0..size {
        let p = mom(r);
        b[r] = Complex64::new(potential(lambda, alpha, p, p0), 0.0);
        for j in 0..n {
            a[(r, j)] -= c[j] * potential(lambda, alpha, p, q[j]);
            a[(r, n + j)] -= c[j] * potential(lambda, alpha, p, -q[j]);
        }
        a[(r, 2 * n)] -= pole * potential(lambda, alpha, p, p0);
        a[(r, 2 * n + 1)] -= pole * potential(lambda, alpha, p, -p0);
    }
    let t = a.lu().solve(&b).ok_or_else(|| {
        Error::Singular(format!("Lippmann-Schwinger system with {points} points"))
    })?;
    Ok((t[2 * n], q, t.iter().take(n).copied().collect()))
}

/// On-shell and half-shell T for the Gaussian potential.
///
/// Uses `points` Gauss-Legendre nodes on `[0, 2 p0]` and as many on the tail,
/// and fails if doubling `points` moves the on-shell value by more than 0.1%.
pub fn ls_oracle(lambda: f64, alpha: f64, mass: f64, p0: f64, points: usize) -> Result<LsSolution> {
    if !(p0 > 0.0) || !(alpha > 0.0) || !(mass > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need p0, alpha, mass > 0, got {p0}, {alpha}, {mass}"
        )));
    }
    if points < 64 || !points.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "quadrature needs an even count >= 64, got {points}"
        )));
    }
    let (on_shell, nodes, half_shell) = solve(lambda, alpha, mass, p0, points)?;
    let (fine, _, _) = solve(lambda, alpha, mass, p0, 2 * points)?;
    let convergence = if fine.norm() == 0.0 {
        (fine - on_shell).norm()
    } else {
        (fine - on_shell).norm() / fine.norm()
    };
    if convergence > CONVERGENCE {
        return Err(Error::NotConverged {
            what: "Lippmann-Schwinger on-shell T",
            change: convergence,
            tolerance: CONVERGENCE,
        });
    }
    Ok(LsSolution {
        on_shell,
        nodes,
        half_shell,
        convergence,
    })
}
