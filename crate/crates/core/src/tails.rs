//! Empirical path-regularity and tail machinery: grid Hoelder seminorms,
//! the Garsia-Rodemich-Rumsey moment-to-Hoelder bound, and exponential tail
//! estimation for the sup-in-time norms of the stochastic objects.

use crate::error::Error;
use crate::field::SpectralField;
use crate::nonlin::renormalized_nonlinearity;
use crate::norms::NormDescriptor;
use crate::random::{derive_member_seed, sample_initial_data, RandomDataSpec, RandomFamily};
use crate::solver::linear_propagator;
use crate::stats::{linear_fit, quantile, wilson_interval};
use crate::Result;
use rayon::prelude::*;
use serde::Serialize;

/// A scalar observable sampled along one path.
#[derive(Debug, Clone, Serialize)]
pub struct PathSample {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub seed: u64,
}

impl PathSample {
    pub fn validate(&self) -> Result<()> {
        if self.times.len() < 3 || self.times.len() != self.values.len() {
            return Err(Error::Degenerate("path needs at least three aligned samples".into()));
        }
        if self.times[0] != 0.0 || self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Degenerate("time grid must increase strictly from 0".into()));
        }
        Ok(())
    }
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.len() < 3 {
        return Err(Error::Degenerate("need at least three time points".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Degenerate("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Grid Hoelder seminorm of a field path:
/// `max_{t' < t} ||f(t) - f(t')|| / |t - t'|^gamma`.
pub fn holder_seminorm(
    times: &[f64],
    states: &[SpectralField],
    gamma: f64,
    norm: &NormDescriptor,
) -> Result<f64> {
    check_grid(times)?;
    assert!(gamma > 0.0 && gamma < 1.0);
    let mut worst: f64 = 0.0;
    for i in 0..times.len() {
        for j in (i + 1)..times.len() {
            let d = norm.eval(&states[j].sub(&states[i]))?;
            worst = worst.max(d / (times[j] - times[i]).powf(gamma));
        }
    }
    Ok(worst)
}

/// Scalar-path variant over precomputed observable values.
pub fn holder_seminorm_scalar(path: &PathSample, gamma: f64) -> Result<f64> {
    path.validate()?;
    let mut worst: f64 = 0.0;
    for i in 0..path.times.len() {
        for j in (i + 1)..path.times.len() {
            let d = (path.values[j] - path.values[i]).abs();
            worst = worst.max(d / (path.times[j] - path.times[i]).powf(gamma));
        }
    }
    Ok(worst)
}

/// The Garsia-Rodemich-Rumsey constant
/// `C(beta, q) = 32^q ((q beta + 1)/(q beta - 1))^q`; needs `q beta > 1`.
pub fn grr_constant(beta: f64, q: f64) -> Result<f64> {
    if q * beta <= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "GRR needs q beta > 1 (got q={q}, beta={beta})"
        )));
    }
    Ok((32.0 * (q * beta + 1.0) / (q * beta - 1.0)).powf(q))
}

/// Right-hand side of the GRR corollary evaluated on the grid: the Hoelder
/// seminorm at `gamma = beta - 1/q` is dominated by
/// `C(beta,q)^{1/q} ( sum sum d(f(u), f(v))^q / |u - v|^{q beta + 1} du dv )^{1/q}`
/// with the double integral taken as a Riemann sum over off-diagonal cells.
pub fn grr_bound(
    times: &[f64],
    states: &[SpectralField],
    beta: f64,
    q: f64,
    norm: &NormDescriptor,
) -> Result<f64> {
    check_grid(times)?;
    let c = grr_constant(beta, q)?;
    let n = times.len();
    let cell = |i: usize| -> f64 {
        let lo = if i == 0 { times[0] } else { 0.5 * (times[i - 1] + times[i]) };
        let hi = if i == n - 1 { times[n - 1] } else { 0.5 * (times[i] + times[i + 1]) };
        hi - lo
    };
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = norm.eval(&states[j].sub(&states[i]))?;
            acc += d.powf(q) / (times[j] - times[i]).abs().powf(q * beta + 1.0) * cell(i) * cell(j);
        }
    }
    Ok(c.powf(1.0 / q) * acc.powf(1.0 / q))
}

/// The moment transport step: given an increment bound
/// `E d(f(t), f(t'))^q <= K |t - t'|^{1 + eta}`, the GRR route bounds
/// `E ||f||_{Holder(gamma)}^q` by
/// `K C(beta,q) 2 T^{2 + eta - q beta} / ((1 + eta - q beta)(2 + eta - q beta))`,
/// finite iff `q beta - eta < 1`.
pub fn kolmogorov_moment_bound(
    k_const: f64,
    eta: f64,
    q: f64,
    beta: f64,
    t_final: f64,
) -> Result<f64> {
    let c = grr_constant(beta, q)?;
    if q * beta - eta >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "moment bound diverges unless q beta - eta < 1 (got {})",
            q * beta - eta
        )));
    }
    let e1 = 1.0 + eta - q * beta;
    let e2 = 2.0 + eta - q * beta;
    Ok(k_const * c * 2.0 * t_final.powf(e2) / (e1 * e2))
}

/// Which sup-in-time observable the tail experiment samples.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TailObservable {
    /// `sup_t ||z(t)||_{W^{s1, infinity}}`: linear in the data, Gaussian
    /// tails (`-log P` linear in `lambda^2`).
    ZSupNorm { alpha: f64, s1: f64, m_grid: usize },
    /// `sup_t ||N(z(t))||_{W^{s2, infinity}}`: quadratic in the data,
    /// exponential tails (`-log P` linear in `lambda`).
    NzSupNorm { alpha: f64, s2: f64, m_grid: usize },
}

impl TailObservable {
    fn sample(&self, seed: u64, times: &[f64]) -> Result<f64> {
        match *self {
            TailObservable::ZSupNorm { alpha, s1, m_grid } => {
                let u0 = sample_initial_data(&RandomDataSpec::new(
                    RandomFamily::Gaussian,
                    alpha,
                    m_grid,
                    seed,
                ));
                let grid = (8 * m_grid + 2).next_power_of_two();
                let norm = NormDescriptor::Grid { s: s1, p: f64::INFINITY, grid_points: grid };
                let mut worst: f64 = 0.0;
                for &t in times {
                    worst = worst.max(norm.eval(&linear_propagator(&u0, t))?);
                }
                Ok(worst)
            }
            TailObservable::NzSupNorm { alpha, s2, m_grid } => {
                let u0 = sample_initial_data(&RandomDataSpec::new(
                    RandomFamily::Gaussian,
                    alpha,
                    m_grid,
                    seed,
                ));
                let grid = (16 * m_grid + 2).next_power_of_two();
                let norm = NormDescriptor::Grid { s: s2, p: f64::INFINITY, grid_points: grid };
                let mut worst: f64 = 0.0;
                for &t in times {
                    let nz = renormalized_nonlinearity(&linear_propagator(&u0, t));
                    worst = worst.max(norm.eval(&nz)?);
                }
                Ok(worst)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TailRow {
    pub lambda: f64,
    pub exceedances: usize,
    pub p_hat: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailReport {
    pub observable: TailObservable,
    pub t_final: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub rows: Vec<TailRow>,
    /// `-log p_hat` regressed on `lambda^2` (Gaussian-type decay).
    pub fit_in_lambda_sq: TailFit,
    /// `-log p_hat` regressed on `lambda` (first-power decay).
    pub fit_in_lambda: TailFit,
    /// Positive root of `fit_in_lambda = fit_in_lambda_sq`: where the
    /// quadratic-decay law overtakes the linear one. Reported only; no
    /// claim pins its location.
    pub regime_crossover: Option<f64>,
}

impl TailReport {
    pub fn csv(&self) -> String {
        let mut out = String::from("lambda,p_hat,ci_low,ci_high\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{:.12e},{:.12e},{:.12e},{:.12e}\n",
                r.lambda, r.p_hat, r.wilson_low, r.wilson_high
            ));
        }
        out
    }

    pub fn json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Default quantile levels for the exceedance thresholds; the deepest level
/// keeps >= 10 expected exceedances at 10^3 samples and up.
pub const DEFAULT_QUANTILES: [f64; 8] = [0.5, 0.3, 0.2, 0.1, 0.05, 0.03, 0.02, 0.01];

/// Estimate exceedance probabilities of a sup-in-time observable on the
/// empirical quantile grid and fit the two candidate decay laws.
pub fn tail_check(
    observable: TailObservable,
    t_final: f64,
    time_nodes: usize,
    quantiles: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<TailReport> {
    if time_nodes < 3 || n_samples < 100 {
        return Err(Error::Degenerate(
            "tail estimation needs >= 3 time nodes and >= 100 samples".into(),
        ));
    }
    let min_level = quantiles.iter().cloned().fold(1.0, f64::min);
    if min_level * (n_samples as f64) < 10.0 {
        return Err(Error::Degenerate(format!(
            "deepest quantile {min_level} leaves fewer than 10 expected exceedances at {n_samples} samples"
        )));
    }
    let times: Vec<f64> =
        (0..time_nodes).map(|j| t_final * j as f64 / (time_nodes - 1) as f64).collect();
    let values: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|i| observable.sample(derive_member_seed(seed, i as u64), &times))
        .collect::<Result<Vec<f64>>>()?;
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    let rows: Vec<TailRow> = quantiles
        .iter()
        .map(|&ql| {
            let lambda = quantile(&sorted, 1.0 - ql);
            let exceedances = values.iter().filter(|&&v| v > lambda).count();
            let p_hat = exceedances as f64 / n_samples as f64;
            let (wilson_low, wilson_high) = wilson_interval(exceedances, n_samples, 1.96);
            TailRow { lambda, exceedances, p_hat, wilson_low, wilson_high }
        })
        .collect();
    let xs_sq: Vec<f64> = rows.iter().map(|r| r.lambda * r.lambda).collect();
    let xs: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
    let ys: Vec<f64> = rows.iter().map(|r| -r.p_hat.ln()).collect();
    let (a2, b2, r2_sq) = linear_fit(&xs_sq, &ys);
    let (a1, b1, r2_lin) = linear_fit(&xs, &ys);
    // a2 L^2 + b2 = a1 L + b1 with L > 0
    let regime_crossover = if a2.abs() > 1e-300 {
        let disc = a1 * a1 - 4.0 * a2 * (b2 - b1);
        (disc >= 0.0)
            .then(|| (a1 + disc.sqrt()) / (2.0 * a2))
            .filter(|l| *l > 0.0 && l.is_finite())
    } else {
        None
    };
    Ok(TailReport {
        observable,
        t_final,
        n_samples,
        seed,
        rows,
        fit_in_lambda_sq: TailFit { slope: a2, intercept: b2, r_squared: r2_sq },
        fit_in_lambda: TailFit { slope: a1, intercept: b1, r_squared: r2_lin },
        regime_crossover,
    })
}

/// Sample `count` field paths of the free evolution `z` and check the GRR
/// domination `seminorm <= bound` pathwise; returns the worst
/// `seminorm / bound` quotient (must be <= 1).
#[allow(clippy::too_many_arguments)]
pub fn grr_domination_worst_quotient(
    alpha: f64,
    s1: f64,
    m_grid: usize,
    t_final: f64,
    time_nodes: usize,
    beta: f64,
    q: f64,
    count: usize,
    seed: u64,
) -> Result<f64> {
    let gamma = beta - 1.0 / q;
    assert!(gamma > 0.0);
    let times: Vec<f64> =
        (0..time_nodes).map(|j| t_final * j as f64 / (time_nodes - 1) as f64).collect();
    let grid = (8 * m_grid + 2).next_power_of_two();
    let norm = NormDescriptor::Grid { s: s1, p: f64::INFINITY, grid_points: grid };
    let quotients: Vec<Result<f64>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let u0 = sample_initial_data(&RandomDataSpec::new(
                RandomFamily::Gaussian,
                alpha,
                m_grid,
                derive_member_seed(seed, i as u64),
            ));
            let states: Vec<SpectralField> =
                times.iter().map(|&t| linear_propagator(&u0, t)).collect();
            let semi = holder_seminorm(&times, &states, gamma, &norm)?;
            let bound = grr_bound(&times, &states, beta, q, &norm)?;
            Ok(semi / bound)
        })
        .collect();
    let mut worst: f64 = 0.0;
    for r in quotients {
        worst = worst.max(r?);
    }
    Ok(worst)
}
