//! Time evolution: the linear propagator `S(t) = e^{-it phi(D)}`, the full
//! BBM flow, the perturbed flow for the remainder `v` driven by a random
//! linear solution `z`, and a Picard fixed-point reference solver.
//!
//! The marching scheme is an integrating-factor RK4 on `w(t) = S(-t)u(t)`,
//! so the linear flow is exact and only the nonlinearity is stepped. The
//! zero mode of the vector field vanishes identically (`phi(0) = 0` and the
//! nonlinearity is renormalized), hence the mean is conserved to roundoff.

use crate::error::Error;
use crate::field::SpectralField;
use crate::multiplier::{apply_multiplier, MultiplierSymbol};
use crate::nonlin::renormalized_nonlinearity;
use crate::norms::sobolev_norm;
use crate::phi;
use crate::random::{mollify, MollifierKernel};
use crate::stats::prefix_quadrature_weights;
use crate::Result;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `S(t) f`: coefficientwise multiplication by `e^{-it phi(n)}`. Exactly
/// norm-preserving in every `H^s` (the symbol is unimodular).
pub fn linear_propagator(f: &SpectralField, t: f64) -> SpectralField {
    SpectralField::from_fn(f.m_grid(), |n| {
        f.coeff(n) * Complex64::from_polar(1.0, -t * phi(n as f64))
    })
}

/// `E(u) = (1/2) ||u||_{H^1}^2`, the conserved energy of the flow.
pub fn energy(u: &SpectralField) -> f64 {
    let n = sobolev_norm(u, 1.0);
    0.5 * n * n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    IfRk4,
    Picard,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_final: f64,
    pub m_grid: usize,
    pub scheme: Scheme,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
}

impl SolverConfig {
    pub fn if_rk4(dt: f64, t_final: f64, m_grid: usize) -> Self {
        Self { dt, t_final, m_grid, scheme: Scheme::IfRk4, picard_tol: 1e-12, picard_max_iter: 60 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || self.t_final < 0.0 || !(self.picard_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "solver config needs dt > 0, t_final >= 0, picard_tol > 0 (got {self:?})"
            )));
        }
        Ok(())
    }

    /// The time grid `0, dt, 2dt, ..., t_final` (last interval may be short).
    fn grid(&self) -> Vec<f64> {
        let mut times = vec![0.0];
        let mut t = 0.0;
        let eps = 1e-12 * self.dt;
        while t + self.dt < self.t_final - eps {
            t += self.dt;
            times.push(t);
        }
        if self.t_final > eps {
            times.push(self.t_final);
        }
        times
    }
}

/// A computed orbit: states at the grid times, the configuration that
/// produced it, and a flag marking numerical blow-up (the trajectory is then
/// truncated at the last finite state, not discarded: inflation experiments
/// intentionally drive large solutions).
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    pub config: SolverConfig,
    pub blew_up: bool,
}

impl Trajectory {
    pub fn final_state(&self) -> &SpectralField {
        self.states.last().expect("trajectory has at least the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Uniform spacing of the interior grid.
    pub fn step(&self) -> f64 {
        self.config.dt
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// `t, ||u||_{H^s} (one column per requested s), E` rows.
    pub fn norm_csv(&self, s_list: &[f64]) -> String {
        let mut header = String::from("t");
        for s in s_list {
            header.push_str(&format!(",h{s}"));
        }
        header.push_str(",energy\n");
        let mut out = header;
        for (t, u) in self.times.iter().zip(&self.states) {
            out.push_str(&format!("{t:.12e}"));
            for &s in s_list {
                out.push_str(&format!(",{:.12e}", sobolev_norm(u, s)));
            }
            out.push_str(&format!(",{:.12e}\n", energy(u)));
        }
        out
    }
}

/// The rough forcing `z(t) = S(t) z0` entering the perturbed flow; `z0` is
/// either a mollification of rough data or the data itself. The field is
/// regenerated from the symbol at every stage time, never interpolated.
#[derive(Debug, Clone)]
pub struct ZSource {
    z0: SpectralField,
    label: String,
}

impl ZSource {
    pub fn zero(m_grid: usize) -> Self {
        Self { z0: SpectralField::zeros(m_grid), label: "zero".into() }
    }

    /// `z(t) = S(t)(u0z mollified at scale k)`.
    pub fn mollified(u0z: &SpectralField, kernel: MollifierKernel, k: f64) -> Self {
        Self {
            z0: mollify(u0z, kernel, k),
            label: format!("{}@{k}", kernel.name()),
        }
    }

    /// `z(t) = S(t) u0z` with the data taken as is.
    pub fn exact_linear(u0z: &SpectralField) -> Self {
        Self { z0: u0z.clone(), label: "exact-linear".into() }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn initial(&self) -> &SpectralField {
        &self.z0
    }

    /// Evaluate `z(t)` on the band `m_grid`.
    pub fn at(&self, t: f64, m_grid: usize) -> SpectralField {
        linear_propagator(&self.z0.truncated(m_grid), t)
    }
}

/// Full BBM flow `i u_t = phi(D) u + N(u)/2` from `u0`.
pub fn integrate_bbm(u0: &SpectralField, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    match cfg.scheme {
        Scheme::IfRk4 => {
            let m = cfg.m_grid;
            Ok(march(u0.truncated(m), cfg, |t, u| {
                // -(i/2) N(u), truncated back to the working band
                renormalized_nonlinearity(u)
                    .truncated(m)
                    .scaled(Complex64::new(0.0, -0.5))
                    .pipe_propagate(-t)
            }))
        }
        Scheme::Picard => picard_march(u0, cfg),
    }
}

/// Perturbed flow for the remainder:
/// `i v_t = phi(D) v + phi(D)(v^2)/2 + phi(D)(v z) + N(z)/2`, `v(0) = 0`.
/// Returns `v`; the solution of the full problem is `u = z + v`.
pub fn integrate_perturbed(z_source: &ZSource, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let m = cfg.m_grid;
    Ok(march(SpectralField::zeros(m), cfg, |t, v| {
        let z = z_source.at(t, m);
        let vv = v.product_dealiased(v);
        let vz = v.product_dealiased(&z);
        let zz = z.product_dealiased(&z);
        SpectralField::from_fn(m, |n| {
            if n == 0 {
                Complex64::ZERO
            } else {
                let p = phi(n as f64);
                // -i [ phi(D)(v^2)/2 + phi(D)(vz) + phi(D) P_{!=0}(z^2)/2 ]
                Complex64::new(0.0, -1.0)
                    * p
                    * (0.5 * vv.coeff(n) + vz.coeff(n) + 0.5 * zz.coeff(n))
            }
        })
        .pipe_propagate(-t)
    }))
}

trait PipePropagate {
    fn pipe_propagate(self, t: f64) -> SpectralField;
}

impl PipePropagate for SpectralField {
    fn pipe_propagate(self, t: f64) -> SpectralField {
        linear_propagator(&self, t)
    }
}

/// Integrating-factor RK4 on `w(t) = S(-t) u(t)`: `rhs(t, u)` must return
/// `S(-t)` applied to the physical-variable vector field.
fn march(
    u0: SpectralField,
    cfg: &SolverConfig,
    rhs: impl Fn(f64, &SpectralField) -> SpectralField,
) -> Trajectory {
    let times = cfg.grid();
    let mut states = Vec::with_capacity(times.len());
    states.push(u0.clone());
    let mut w = u0;
    let mut blew_up = false;
    for pair in times.windows(2) {
        let (t, t_next) = (pair[0], pair[1]);
        let h = t_next - t;
        let f = |tau: f64, wv: &SpectralField| rhs(tau, &linear_propagator(wv, tau));
        let k1 = f(t, &w);
        let mut w2 = w.clone();
        w2.axpy_in_place(Complex64::new(0.5 * h, 0.0), &k1);
        let k2 = f(t + 0.5 * h, &w2);
        let mut w3 = w.clone();
        w3.axpy_in_place(Complex64::new(0.5 * h, 0.0), &k2);
        let k3 = f(t + 0.5 * h, &w3);
        let mut w4 = w.clone();
        w4.axpy_in_place(Complex64::new(h, 0.0), &k3);
        let k4 = f(t + h, &w4);
        w.axpy_in_place(Complex64::new(h / 6.0, 0.0), &k1);
        w.axpy_in_place(Complex64::new(h / 3.0, 0.0), &k2);
        w.axpy_in_place(Complex64::new(h / 3.0, 0.0), &k3);
        w.axpy_in_place(Complex64::new(h / 6.0, 0.0), &k4);
        if w.has_non_finite() {
            blew_up = true;
            break;
        }
        states.push(linear_propagator(&w, t_next));
    }
    let times = times[..states.len()].to_vec();
    Trajectory { times, states, config: *cfg, blew_up }
}

/// Solve by Duhamel fixed point on a uniform grid over `[0, t_final]`:
///
/// ```text
/// u(t) = S(t) u0 - (i/2) int_0^t S(t - t') N(u(t')) dt',
/// ```
///
/// iterated until successive iterates differ by less than `picard_tol` in
/// `H^1`. Contracts when `t_final <= c / ||u0||_{FL^1}` with `c ~ 1/2` (the
/// Duhamel operator gains a factor `t ||u0||_{FL^1} / 4` per order);
/// otherwise the iteration count signals the failure.
pub fn picard_solve(u0: &SpectralField, t_final: f64, cfg: &SolverConfig) -> Result<SpectralField> {
    cfg.validate()?;
    let traj = picard_trajectory(u0, t_final, cfg)?;
    Ok(traj.states.last().unwrap().clone())
}

fn picard_trajectory(u0: &SpectralField, t_final: f64, cfg: &SolverConfig) -> Result<Trajectory> {
    let m = cfg.m_grid;
    let u0 = u0.truncated(m);
    let mut steps = (t_final / cfg.dt).ceil() as usize;
    steps = steps.max(2);
    if steps % 2 == 1 {
        steps += 1;
    }
    let h = t_final / steps as f64;
    let times: Vec<f64> = (0..=steps).map(|j| j as f64 * h).collect();
    let free: Vec<SpectralField> = times.iter().map(|&t| linear_propagator(&u0, t)).collect();
    let mut current = free.clone();
    for _ in 0..cfg.picard_max_iter {
        // rotate the nonlinearity once per node: S(t_j - t_l) = S(t_j) S(-t_l)
        let rotated: Vec<SpectralField> = current
            .iter()
            .zip(&times)
            .map(|(u, &t)| {
                linear_propagator(
                    &renormalized_nonlinearity(u).truncated(m).scaled(Complex64::new(0.0, -0.5)),
                    -t,
                )
            })
            .collect();
        let mut next = Vec::with_capacity(times.len());
        let mut delta: f64 = 0.0;
        for j in 0..times.len() {
            let w = prefix_quadrature_weights(times.len(), j, h);
            let mut acc = SpectralField::zeros(m);
            for (l, &wl) in w.iter().enumerate() {
                if wl != 0.0 {
                    acc.axpy_in_place(Complex64::new(wl, 0.0), &rotated[l]);
                }
            }
            let u_new = free[j].add(&linear_propagator(&acc, times[j]));
            delta = delta.max(sobolev_norm(&u_new.sub(&current[j]), 1.0));
            next.push(u_new);
        }
        current = next;
        if delta < cfg.picard_tol {
            return Ok(Trajectory {
                times,
                states: current,
                config: *cfg,
                blew_up: false,
            });
        }
    }
    Err(Error::NonContraction { iterations: cfg.picard_max_iter })
}

fn picard_march(u0: &SpectralField, cfg: &SolverConfig) -> Result<Trajectory> {
    // window-by-window Picard: each dt-interval is solved to tolerance by
    // the grid fixed point with an internal sub-grid
    let times = cfg.grid();
    let mut states = vec![u0.truncated(cfg.m_grid)];
    let inner = SolverConfig { dt: cfg.dt / 16.0, ..*cfg };
    for pair in times.windows(2) {
        let h = pair[1] - pair[0];
        let next = picard_solve(states.last().unwrap(), h, &inner)?;
        states.push(next);
    }
    Ok(Trajectory { times, states, config: *cfg, blew_up: false })
}

/// Largest window on which the Picard iteration still contracts, found by
/// bisection on `t`; used to probe the local-existence scaling `T ~ 1/L`.
pub fn picard_contraction_window(u0: &SpectralField, cfg: &SolverConfig, t_hi: f64) -> f64 {
    let contracts = |t: f64| picard_solve(u0, t, cfg).is_ok();
    let (mut lo, mut hi) = (0.0, t_hi);
    if contracts(t_hi) {
        return t_hi;
    }
    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        if contracts(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Convenience: apply a multiplier symbol along a whole trajectory.
pub fn map_states(traj: &Trajectory, sym: &MultiplierSymbol) -> Vec<SpectralField> {
    traj.states.iter().map(|u| apply_multiplier(u, sym)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::fourier_lebesgue_norm;
    use crate::random::{sample_initial_data, RandomDataSpec, RandomFamily};

    fn smooth_data() -> SpectralField {
        SpectralField::from_nonnegative_modes(4, &[(1, Complex64::new(0.5, 0.0))])
    }

    #[test]
    fn propagator_identity_group_law_unitarity() {
        let f = sample_initial_data(&RandomDataSpec::new(RandomFamily::Gaussian, 0.4, 32, 8));
        let id = linear_propagator(&f, 0.0);
        assert_eq!(id, f);
        let a = linear_propagator(&linear_propagator(&f, 1.3), 2.1);
        let b = linear_propagator(&f, 3.4);
        let scale = sobolev_norm(&f, 0.0);
        assert!(sobolev_norm(&a.sub(&b), 0.0) <= 1e-12 * scale);
        for s in [-1.0, 0.0, 1.0] {
            let n0 = sobolev_norm(&f, s);
            let n1 = sobolev_norm(&linear_propagator(&f, 7.3), s);
            assert!((n0 - n1).abs() <= 1e-12 * n0);
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let cfg = SolverConfig::if_rk4(1e-2, 0.3, 16);
        let traj = integrate_bbm(&SpectralField::zeros(16), &cfg).unwrap();
        assert!(!traj.blew_up);
        assert!(traj.final_state().is_zero());
        let tz = integrate_perturbed(&ZSource::zero(16), &cfg).unwrap();
        assert!(tz.final_state().is_zero());
    }

    #[test]
    fn energy_values_and_conservation() {
        let two_mode = SpectralField::from_nonnegative_modes(2, &[(1, Complex64::ONE)]);
        assert!((energy(&two_mode) - 2.0).abs() < 1e-14);
        assert_eq!(energy(&SpectralField::zeros(3)), 0.0);

        let cfg = SolverConfig::if_rk4(1e-3, 1.0, 32);
        let traj = integrate_bbm(&smooth_data(), &cfg).unwrap();
        let e0 = energy(&traj.states[0]);
        let drift = traj
            .states
            .iter()
            .map(|u| (energy(u) - e0).abs() / e0)
            .fold(0.0, f64::max);
        assert!(drift < 1e-8, "relative energy drift {drift}");
    }

    #[test]
    fn mean_mode_constant_to_roundoff() {
        let mut u0 = smooth_data();
        u0.set_coeff(0, Complex64::new(0.7, 0.0));
        let cfg = SolverConfig::if_rk4(1e-2, 1.0, 16);
        let traj = integrate_bbm(&u0, &cfg).unwrap();
        for u in &traj.states {
            assert!((u.coeff(0) - Complex64::new(0.7, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn time_reversal_symmetry() {
        // evolve, reflect, evolve, reflect recovers the datum
        let u0 = SpectralField::from_nonnegative_modes(
            8,
            &[(1, Complex64::new(0.4, 0.0)), (2, Complex64::new(0.1, 0.2))],
        );
        let cfg = SolverConfig::if_rk4(1e-3, 0.5, 32);
        let fwd = integrate_bbm(&u0, &cfg).unwrap();
        let back = integrate_bbm(&fwd.final_state().reflected(), &cfg).unwrap();
        let recovered = back.final_state().reflected();
        assert!(sobolev_norm(&recovered.sub(&u0.truncated(32)), 0.0) < 1e-6);
    }

    #[test]
    fn rk4_fourth_order_convergence() {
        let u0 = smooth_data();
        let m = 24;
        let reference =
            integrate_bbm(&u0, &SolverConfig::if_rk4(1.0 / 1024.0, 1.0, m)).unwrap();
        let err = |dt: f64| {
            let traj = integrate_bbm(&u0, &SolverConfig::if_rk4(dt, 1.0, m)).unwrap();
            sobolev_norm(&traj.final_state().sub(reference.final_state()), 0.0)
        };
        let e1 = err(1.0 / 64.0);
        let e2 = err(1.0 / 128.0);
        let ratio = e1 / e2;
        assert!((ratio - 16.0).abs() <= 3.2, "halving dt gave ratio {ratio}");
    }

    #[test]
    fn picard_agrees_with_rk4_and_trivial_cases() {
        let u0 = smooth_data();
        let cfg = SolverConfig {
            dt: 0.05 / 16.0,
            t_final: 0.05,
            m_grid: 16,
            scheme: Scheme::Picard,
            picard_tol: 1e-12,
            picard_max_iter: 60,
        };
        let fixed = picard_solve(&u0, 0.05, &cfg).unwrap();
        let rk = integrate_bbm(&u0, &SolverConfig::if_rk4(1e-3, 0.05, 16)).unwrap();
        assert!(sobolev_norm(&fixed.sub(rk.final_state()), 1.0) < 1e-7);
        let zero = picard_solve(&SpectralField::zeros(8), 0.05, &cfg).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn picard_window_scales_inversely_with_data_size() {
        let cfg = SolverConfig {
            dt: 4e-3,
            t_final: 0.0,
            m_grid: 16,
            scheme: Scheme::Picard,
            picard_tol: 1e-10,
            picard_max_iter: 25,
        };
        let windows: Vec<f64> = [1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&lam| {
                let u0 = SpectralField::from_nonnegative_modes(
                    8,
                    &[(1, Complex64::new(lam, 0.0)), (3, Complex64::new(0.5 * lam, 0.0))],
                );
                let l = fourier_lebesgue_norm(&u0, 0.0, 1.0);
                picard_contraction_window(&u0, &cfg, 8.0) * l
            })
            .collect();
        let lo = windows.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = windows.iter().cloned().fold(0.0, f64::max);
        assert!(hi / lo <= 4.0, "T * L should be stable within factor 4: {windows:?}");
    }

    #[test]
    fn splitting_consistency_smooth_data() {
        // z + v from the perturbed flow equals the direct solve when the
        // data is split as u0 = z0 + 0
        let spec = RandomDataSpec::new(RandomFamily::Gaussian, 0.5, 64, 3);
        let u0 = sample_initial_data(&spec);
        let z_src = ZSource::mollified(&u0, MollifierKernel::Fejer, 8.0);
        let cfg = SolverConfig::if_rk4(1e-3, 0.5, 64);
        let v = integrate_perturbed(&z_src, &cfg).unwrap();
        let direct = integrate_bbm(z_src.initial(), &cfg).unwrap();
        let mut worst: f64 = 0.0;
        for (j, t) in v.times.iter().enumerate() {
            let u_split = z_src.at(*t, 64).add(&v.states[j]);
            worst = worst.max(sobolev_norm(&u_split.sub(&direct.states[j]), 0.0));
        }
        assert!(worst < 1e-6, "splitting mismatch {worst}");
    }

    #[test]
    fn remainder_is_smoother_than_the_free_evolution() {
        // with rough alpha = 0.4 data, ||v(T)||_{H^{0.7}} is stable under
        // truncation doubling while ||z(T)||_{H^{0.7}} keeps growing
        let t_final = 0.2;
        let spec = RandomDataSpec::new(RandomFamily::Gaussian, 0.4, 0, 77);
        let run = |m: usize| -> (f64, f64) {
            let u0 = sample_initial_data(&spec.with_m_grid(m));
            let z_src = ZSource::exact_linear(&u0);
            let cfg = SolverConfig::if_rk4(1e-3, t_final, m);
            let v = integrate_perturbed(&z_src, &cfg).unwrap();
            (
                sobolev_norm(v.final_state(), 0.7),
                sobolev_norm(&z_src.at(t_final, m), 0.7),
            )
        };
        let (v_small, z_small) = run(256);
        let (v_big, z_big) = run(512);
        assert!(
            (v_big - v_small).abs() <= 0.1 * v_small,
            "remainder norm drifted: {v_small} -> {v_big}"
        );
        assert!(z_big > 1.3 * z_small, "free evolution should keep growing: {z_small} -> {z_big}");
    }

    #[test]
    fn blow_up_is_flagged_not_fatal() {
        // absurd time step on large data drives the scheme non-finite
        let u0 = SpectralField::from_nonnegative_modes(4, &[(1, Complex64::new(1e8, 0.0))]);
        let cfg = SolverConfig::if_rk4(10.0, 100.0, 4);
        let traj = integrate_bbm(&u0, &cfg).unwrap();
        assert!(traj.blew_up);
        assert!(!traj.states.is_empty());
        assert!(traj.times.len() == traj.states.len());
    }

    #[test]
    fn trajectory_serialization_and_csv() {
        let cfg = SolverConfig::if_rk4(0.05, 0.2, 8);
        let traj = integrate_bbm(&smooth_data(), &cfg).unwrap();
        let json = traj.to_json().unwrap();
        assert!(json.contains("\"times\""));
        let csv = traj.norm_csv(&[0.0, 1.0]);
        assert!(csv.starts_with("t,h0,h1,energy\n"));
        assert_eq!(csv.lines().count(), traj.times.len() + 1);
    }
}
