//! Reproducible reductions.
//!
//! Every sum in the kernels goes through a fixed binary tree so the result
//! does not depend on thread count or scheduling.

use std::ops::Add;

const LEAF: usize = 16;

/// Sums `f(0) + ... + f(n-1)` along a fixed pairwise tree.
pub fn pairwise_sum_by<T, F>(n: usize, f: F) -> T
where
    T: Copy + Default + Add<Output = T>,
    F: Fn(usize) -> T,
{
    fn go<T, F>(lo: usize, hi: usize, f: &F) -> T
    where
        T: Copy + Default + Add<Output = T>,
        F: Fn(usize) -> T,
    {
        if hi - lo <= LEAF {
            let mut acc = T::default();
            for i in lo..hi {
                acc = acc + f(i);
            }
            acc
        } else {
            let mid = lo + (hi - lo) / 2;
            go(lo, mid, f) + go(mid, hi, f)
        }
    }
    go(0, n, &f)
}

/// Pairwise sum of a slice.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    pairwise_sum_by(xs.len(), |i| xs[i])
}

/// Gauss-Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_sum_on_integers() {
        let xs: Vec<i64> = (0..1000).collect();
        assert_eq!(pairwise_sum(&xs), 999 * 1000 / 2);
        assert_eq!(pairwise_sum::<f64>(&[]), 0.0);
    }

    #[test]
    fn pairwise_beats_naive_on_cancellation() {
        let n = 1 << 20;
        let xs: Vec<f64> = (0..n).map(|_| 0.1).collect();
        let exact = 0.1 * n as f64;
        let naive: f64 = xs.iter().sum();
        let tree = pairwise_sum(&xs);
        assert!((tree - exact).abs() <= (naive - exact).abs());
        assert!((tree - exact).abs() < 1e-8);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8, 0.0, 2.0);
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(15)).sum();
        assert!((integral - 2f64.powi(16) / 16.0).abs() < 1e-9);
        let (x, w) = gauss_legendre(64, -1.0, 3.0);
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * (-x * x).exp()).sum();
        let exact = 0.5 * std::f64::consts::PI.sqrt() * (0.842700792950 + 0.999977909503);
        assert!((integral - exact).abs() < 1e-10);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }
}
