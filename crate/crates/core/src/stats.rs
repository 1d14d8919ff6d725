//! Small numerical-statistics toolkit: pairwise summation, Monte Carlo
//! mean/stderr, least-squares fits on log-log data, quantiles, Wilson
//! intervals, and fourth-order cumulative quadrature.

use serde::{Deserialize, Serialize};

/// Pairwise (cascade) summation. Reduction order is fixed by the recursion,
/// so ensemble reductions give identical results regardless of how the
/// samples were produced (sequentially or from a worker pool).
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStderr {
    pub mean: f64,
    pub stderr: f64,
}

impl MeanStderr {
    /// Sample mean and standard error of the mean.
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self { mean: f64::NAN, stderr: f64::NAN };
        }
        let mean = pairwise_sum(xs) / n as f64;
        if n == 1 {
            return Self { mean, stderr: f64::INFINITY };
        }
        let devs: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
        let var = pairwise_sum(&devs) / (n as f64 - 1.0);
        Self { mean, stderr: (var / n as f64).sqrt() }
    }

    /// Standard error of `self - other` for independent estimates.
    pub fn combined_stderr(&self, other: &MeanStderr) -> f64 {
        (self.stderr * self.stderr + other.stderr * other.stderr).sqrt()
    }
}

/// Ordinary least-squares line fit; returns `(slope, intercept, r_squared)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = pairwise_sum(xs) / n;
    let my = pairwise_sum(ys) / n;
    let sxy: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let sxx: Vec<f64> = xs.iter().map(|x| (x - mx) * (x - mx)).collect();
    let syy: Vec<f64> = ys.iter().map(|y| (y - my) * (y - my)).collect();
    let cov = pairwise_sum(&sxy);
    let vx = pairwise_sum(&sxx);
    let vy = pairwise_sum(&syy);
    let slope = cov / vx;
    let intercept = my - slope * mx;
    let r2 = if vy == 0.0 { 1.0 } else { cov * cov / (vx * vy) };
    (slope, intercept, r2)
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly).0
}

/// Growth exponent of a cumulative divergent quantity, fitted on consecutive
/// increments `y_{j+1} - y_j` against `x_{j+1}` in log-log coordinates.
///
/// Differencing removes the x-independent component of `y`, which otherwise
/// biases a finite-range fit of `log y` when the additive constant is
/// comparable to the divergent part.
pub fn divergence_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert!(xs.len() >= 3, "need at least three points to fit increments");
    let dx: Vec<f64> = xs[1..].to_vec();
    let dy: Vec<f64> = ys.windows(2).map(|w| w[1] - w[0]).collect();
    log_log_slope(&dx, &dy)
}

/// Wilson score interval for a binomial proportion at one standard normal
/// quantile `z` (z = 1.96 for 95%).
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = p + z2 / (2.0 * n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (((centre - half) / denom).max(0.0), ((centre + half) / denom).min(1.0))
}

/// Empirical quantile (linear interpolation between order statistics).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let w = pos - lo as f64;
        sorted[lo] * (1.0 - w) + sorted[hi] * w
    }
}

/// Quadrature weights for the prefix integral `int_0^{t_j}` on a uniform
/// grid of `len` nodes with spacing `h`, fourth-order accurate: Simpson for
/// even `j`, Simpson + 3/8 ending for odd `j >= 3`, and the cubic
/// Newton-Cotes rule (which reads two nodes past the interval) for `j = 1`.
///
/// The returned vector has length `len`; entries beyond the nodes the rule
/// touches are zero. Scalar and field-valued integrators share these
/// weights so their prefix integrals agree exactly.
pub fn prefix_quadrature_weights(len: usize, j: usize, h: f64) -> Vec<f64> {
    assert!(j < len);
    let mut w = vec![0.0; len];
    if j == 0 {
        return w;
    }
    if j == 1 {
        if len >= 4 {
            w[0] = 9.0 * h / 24.0;
            w[1] = 19.0 * h / 24.0;
            w[2] = -5.0 * h / 24.0;
            w[3] = h / 24.0;
        } else {
            w[0] = h / 2.0;
            w[1] = h / 2.0;
        }
        return w;
    }
    let simpson_end = if j % 2 == 0 { j } else { j - 3 };
    for m in (2..=simpson_end).step_by(2) {
        w[m - 2] += h / 3.0;
        w[m - 1] += 4.0 * h / 3.0;
        w[m] += h / 3.0;
    }
    if j % 2 == 1 {
        w[j - 3] += 3.0 * h / 8.0;
        w[j - 2] += 9.0 * h / 8.0;
        w[j - 1] += 9.0 * h / 8.0;
        w[j] += 3.0 * h / 8.0;
    }
    w
}

/// Cumulative integral of uniformly sampled values via
/// [`prefix_quadrature_weights`]; fourth-order accurate at every node.
pub fn cumulative_integral(h: f64, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|j| {
            let w = prefix_quadrature_weights(n, j, h);
            let terms: Vec<f64> = w.iter().zip(f).map(|(wi, fi)| wi * fi).collect();
            pairwise_sum(&terms)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-9);
    }

    #[test]
    fn linear_fit_recovers_line() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 2.0).collect();
        let (a, b, r2) = linear_fit(&xs, &ys);
        assert!((a - 3.0).abs() < 1e-12);
        assert!((b + 2.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn divergence_slope_ignores_additive_constant() {
        let xs: Vec<f64> = (4..13).map(|j| (1u64 << j) as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 5.0 * x.powf(0.3) + 40.0).collect();
        assert!((log_log_slope(&xs, &ys) - 0.3).abs() > 0.05); // raw fit is biased
        assert!((divergence_slope(&xs, &ys) - 0.3).abs() < 0.01);
    }

    #[test]
    fn cumulative_integral_fourth_order() {
        // integral of cos on [0, 2]: sin(t)
        for &n in &[41usize, 40, 201] {
            let h = 2.0 / (n - 1) as f64;
            let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).cos()).collect();
            let cum = cumulative_integral(h, &f);
            for m in 0..n {
                let exact = (m as f64 * h).sin();
                assert!(
                    (cum[m] - exact).abs() < 30.0 * h.powi(4),
                    "node {m}: {} vs {exact}",
                    cum[m]
                );
            }
        }
    }

    #[test]
    fn wilson_contains_p_hat() {
        let (lo, hi) = wilson_interval(30, 100, 1.96);
        assert!(lo < 0.3 && 0.3 < hi);
        assert!(lo > 0.2 && hi < 0.41);
    }
}
