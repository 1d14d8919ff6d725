//! The I-method: the smoothing multiplier `m_N`, the modified energy
//! `E(Iv) = ||Iv||_{H^1}^2 / 2`, its exact growth decomposition into
//! commutator / forcing / cross terms, empirical commutator-decay probes,
//! the `||Iz||_{L^p}` moment check, and the nonlinear Gronwall arithmetic
//! that turns the energy inequality into a blow-up-time prediction.

use crate::error::Error;
use crate::field::SpectralField;
use crate::multiplier::MultiplierSymbol;
use crate::norms::{bracket, phi_beta, sobolev_norm, wsp_norm};
use crate::random::{derive_member_seed, sample_initial_data, RandomDataSpec, RandomFamily};
use crate::solver::{energy, Trajectory, ZSource};
use crate::stats::{cumulative_integral, MeanStderr};
use crate::Result;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Parameters of the smoothing operator `I = I_{N,s}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IParams {
    /// Frequency cutoff below which `I` is the identity.
    pub cutoff: f64,
    /// Target regularity `s in (1/2, 1)`; the symbol decays like
    /// `(N/|n|)^{1-s}` above the cutoff.
    pub s: f64,
}

impl IParams {
    pub fn new(cutoff: f64, s: f64) -> Self {
        assert!(cutoff >= 1.0, "cutoff must be >= 1");
        assert!(s > 0.0 && s < 1.0, "need 0 < 1 - s < 1");
        Self { cutoff, s }
    }

    /// `m_N(n)`: 1 on `|n| <= N`, `(N/|n|)^{1-s}` above; values in (0, 1].
    pub fn multiplier(&self, n: i64) -> f64 {
        let a = n.unsigned_abs() as f64;
        if a <= self.cutoff {
            1.0
        } else {
            (self.cutoff / a).powf(1.0 - self.s)
        }
    }

    pub fn symbol(&self) -> MultiplierSymbol {
        let p = *self;
        MultiplierSymbol::new(format!("I[N={},s={}]", p.cutoff, p.s), move |n| {
            Complex64::new(p.multiplier(n), 0.0)
        })
    }

    pub fn apply(&self, f: &SpectralField) -> SpectralField {
        SpectralField::from_fn(f.m_grid(), |n| f.coeff(n) * self.multiplier(n))
    }
}

/// Free-function form of the symbol evaluation.
pub fn i_multiplier(n: i64, p: &IParams) -> f64 {
    p.multiplier(n)
}

/// Default spatial integrability exponent paired with a target regularity
/// `s`: `1/s` for `s <= 1/2` and `1/(1-s)` above. Probes taking a `p_int`
/// use this when nothing forces another choice.
pub fn default_integrability(s: f64) -> f64 {
    assert!(s > 0.0 && s < 1.0);
    if s <= 0.5 {
        1.0 / s
    } else {
        1.0 / (1.0 - s)
    }
}

/// `E(Iv) = (1/2) ||Iv||_{H^1}^2`.
pub fn modified_energy(v: &SpectralField, p: &IParams) -> f64 {
    energy(&p.apply(v))
}

/// Normalized pairing `(1/2pi) int f g dx = sum_n fhat(n) ghat(-n)`,
/// real for real fields.
fn real_pairing(f: &SpectralField, g: &SpectralField) -> f64 {
    let mut acc = Complex64::ZERO;
    for (n, c) in f.modes() {
        acc += c * g.coeff(-n);
    }
    acc.re
}

/// `d/dx (Iv)` on the band of `v`.
fn dx_i(v: &SpectralField, p: &IParams) -> SpectralField {
    SpectralField::from_fn(v.m_grid(), |n| {
        v.coeff(n) * Complex64::new(0.0, n as f64) * p.multiplier(n)
    })
}

/// Time series of the modified energy and the cumulative integrals of its
/// three growth contributions: the self-interaction commutator (I), the
/// rough forcing (II), and the cross term (III).
#[derive(Debug, Clone, Serialize)]
pub struct EnergyTrace {
    pub times: Vec<f64>,
    pub e_values: Vec<f64>,
    pub term_i: Vec<f64>,
    pub term_ii: Vec<f64>,
    pub term_iii: Vec<f64>,
    /// Instantaneous integrands of the three terms at the nodes (the
    /// cumulative columns are their prefix quadratures).
    pub rate_i: Vec<f64>,
    pub rate_ii: Vec<f64>,
    pub rate_iii: Vec<f64>,
}

impl EnergyTrace {
    /// Ledger defect `E(t) - E(0) - (I + II + III)(t)` at node `j`.
    pub fn residual(&self, j: usize) -> f64 {
        self.e_values[j] - self.e_values[0] - self.term_i[j] - self.term_ii[j] - self.term_iii[j]
    }

    /// Worst `|residual| / max(1, E)` along the trace.
    pub fn max_relative_residual(&self) -> f64 {
        (0..self.times.len())
            .map(|j| self.residual(j).abs() / self.e_values[j].max(1.0))
            .fold(0.0, f64::max)
    }

    /// First time the energy reaches `ceiling`, if it does.
    pub fn crossing_time(&self, ceiling: f64) -> Option<f64> {
        self.times
            .iter()
            .zip(&self.e_values)
            .find(|(_, &e)| e >= ceiling)
            .map(|(&t, _)| t)
    }

    /// `t,E,term_I,term_II,term_III,residual` rows.
    pub fn csv(&self) -> String {
        let mut out = String::from("t,E,term_I,term_II,term_III,residual\n");
        for j in 0..self.times.len() {
            out.push_str(&format!(
                "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
                self.times[j],
                self.e_values[j],
                self.term_i[j],
                self.term_ii[j],
                self.term_iii[j],
                self.residual(j)
            ));
        }
        out
    }
}

/// Decompose the growth of `E(Iv)` along a perturbed-flow trajectory:
///
/// ```text
/// dE/dt = (1/2) int dx(Iv) [I(v^2) - (Iv)^2]      (I)
///       + (1/2) int dx(Iv) I(P_{!=0} z^2)         (II)
///       +       int dx(Iv) I(v z)                 (III)
/// ```
///
/// (the removed piece `int dx(Iv) (Iv)^2` integrates to zero). All spatial
/// integrals are spectral and exact at the trajectory's truncation; time
/// integrals are fourth-order prefix quadratures, so the ledger closes up
/// to integrator plus quadrature error.
pub fn energy_growth_decomposition(
    v_traj: &Trajectory,
    z_source: &ZSource,
    p: &IParams,
) -> Result<EnergyTrace> {
    let times = &v_traj.times;
    if times.len() < 3 {
        return Err(Error::Degenerate("trajectory too short for quadrature".into()));
    }
    let h = times[1] - times[0];
    for w in times.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h {
            return Err(Error::GridMismatch(
                "energy decomposition needs a uniform time grid".into(),
            ));
        }
    }
    let m = v_traj.config.m_grid;
    let node: Vec<(f64, f64, f64, f64)> = v_traj
        .states
        .par_iter()
        .zip(times.par_iter())
        .map(|(v, &t)| {
            let z = z_source.at(t, m);
            let dxiv = dx_i(v, p);
            let vv = v.product_dealiased(v);
            let iv = p.apply(v);
            let iviv = iv.product_dealiased(&iv);
            let commutator = SpectralField::from_fn(vv.m_grid(), |n| {
                p.multiplier(n) * vv.coeff(n) - iviv.coeff(n)
            });
            let g1 = 0.5 * real_pairing(&dxiv, &commutator);
            let mut zz = z.product_dealiased(&z);
            zz.set_coeff(0, Complex64::ZERO);
            let izz = SpectralField::from_fn(zz.m_grid(), |n| p.multiplier(n) * zz.coeff(n));
            let g2 = 0.5 * real_pairing(&dxiv, &izz);
            let vz = v.product_dealiased(&z);
            let ivz = SpectralField::from_fn(vz.m_grid(), |n| p.multiplier(n) * vz.coeff(n));
            let g3 = real_pairing(&dxiv, &ivz);
            (modified_energy(v, p), g1, g2, g3)
        })
        .collect();
    let e_values: Vec<f64> = node.iter().map(|x| x.0).collect();
    let g1: Vec<f64> = node.iter().map(|x| x.1).collect();
    let g2: Vec<f64> = node.iter().map(|x| x.2).collect();
    let g3: Vec<f64> = node.iter().map(|x| x.3).collect();
    Ok(EnergyTrace {
        times: times.clone(),
        e_values,
        term_i: cumulative_integral(h, &g1),
        term_ii: cumulative_integral(h, &g2),
        term_iii: cumulative_integral(h, &g3),
        rate_i: g1,
        rate_ii: g2,
        rate_iii: g3,
    })
}

/// `t, ||u||_{H^s} (per s), E, E(Iu)` rows for a trajectory.
pub fn trajectory_norm_csv(traj: &Trajectory, s_list: &[f64], p: &IParams) -> String {
    let mut out = String::from("t");
    for s in s_list {
        out.push_str(&format!(",h{s}"));
    }
    out.push_str(",energy,modified_energy\n");
    for (t, u) in traj.times.iter().zip(&traj.states) {
        out.push_str(&format!("{t:.12e}"));
        for &s in s_list {
            out.push_str(&format!(",{:.12e}", sobolev_norm(u, s)));
        }
        out.push_str(&format!(",{:.12e},{:.12e}\n", energy(u), modified_energy(u, p)));
    }
    out
}

/// Self-interaction commutator quotient
/// `|int dx(Iw) [I(w^2) - (Iw)^2]| / ||Iw||_{H^1}^3`
/// (scale invariant: degree three over degree three).
pub fn commutator_v2_ratio(w: &SpectralField, p: &IParams) -> f64 {
    let dxiw = dx_i(w, p);
    let ww = w.product_dealiased(w);
    let iw = p.apply(w);
    let iwiw = iw.product_dealiased(&iw);
    let commutator =
        SpectralField::from_fn(ww.m_grid(), |n| p.multiplier(n) * ww.coeff(n) - iwiw.coeff(n));
    let denom = sobolev_norm(&iw, 1.0).powi(3);
    if denom == 0.0 {
        return 0.0;
    }
    real_pairing(&dxiw, &commutator).abs() / denom
}

/// Product commutator quotient
/// `||I(wz) - (Iw)(Iz)||_{L^2} / (||Iw||_{H^1} ||z||_{W^{s_z, p_int}})`.
pub fn commutator_vz_ratio(
    w: &SpectralField,
    z: &SpectralField,
    p: &IParams,
    s_z: f64,
    p_int: f64,
) -> Result<f64> {
    let wz = w.product_dealiased(z);
    let iwz = SpectralField::from_fn(wz.m_grid(), |n| p.multiplier(n) * wz.coeff(n));
    let iwiz = p.apply(w).product_dealiased(&p.apply(z));
    let num = sobolev_norm(&iwz.sub(&iwiz), 0.0);
    let grid = (8 * z.m_grid() + 2).next_power_of_two();
    let denom = sobolev_norm(&p.apply(w), 1.0) * wsp_norm(z, s_z, p_int, grid)?;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(num / denom)
}

/// Ensembles for the commutator probes: spectrum-decayed Gaussian fields,
/// fields concentrated near the cutoff, and two-block low/high fields (the
/// worst case the commutator estimates single out).
pub fn probe_ensemble(p: &IParams, m_grid: usize, n_fields: usize, seed: u64) -> Vec<SpectralField> {
    let n_cut = p.cutoff as i64;
    (0..n_fields)
        .map(|i| {
            let member = derive_member_seed(seed, i as u64);
            let decay = RandomDataSpec::new(
                RandomFamily::Gaussian,
                p.s + 0.5,
                m_grid,
                member,
            );
            match i % 3 {
                0 => sample_initial_data(&decay),
                1 => {
                    let full = sample_initial_data(&decay.with_seed(member ^ 0x5f5f));
                    SpectralField::from_fn(m_grid, |n| {
                        if n.unsigned_abs() as i64 >= n_cut / 2 {
                            full.coeff(n)
                        } else {
                            Complex64::ZERO
                        }
                    })
                }
                _ => {
                    let full = sample_initial_data(&decay.with_seed(member ^ 0xa0a0));
                    SpectralField::from_fn(m_grid, |n| {
                        let a = n.unsigned_abs() as i64;
                        if a <= 4 || (a - n_cut).abs() <= 4 || (a - 2 * n_cut).abs() <= 4 {
                            full.coeff(n)
                        } else {
                            Complex64::ZERO
                        }
                    })
                }
            }
        })
        .collect()
}

/// Worst `commutator_v2_ratio` over a probe ensemble at one cutoff.
pub fn commutator_v2_worst_ratio(
    p: &IParams,
    m_grid: usize,
    n_fields: usize,
    seed: u64,
) -> f64 {
    let ensemble = probe_ensemble(p, m_grid, n_fields, seed);
    ensemble
        .par_iter()
        .map(|w| commutator_v2_ratio(w, p))
        .reduce(|| 0.0, f64::max)
}

/// Worst `commutator_vz_ratio` over probe fields paired with rough Gaussian
/// `z` data of decay `alpha`.
#[allow(clippy::too_many_arguments)]
pub fn commutator_vz_worst_ratio(
    p: &IParams,
    alpha: f64,
    s_z: f64,
    p_int: f64,
    m_grid: usize,
    n_fields: usize,
    seed: u64,
) -> Result<f64> {
    let ensemble = probe_ensemble(p, m_grid, n_fields, seed);
    let ratios: Vec<Result<f64>> = ensemble
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            let z = sample_initial_data(&RandomDataSpec::new(
                RandomFamily::Gaussian,
                alpha,
                m_grid,
                derive_member_seed(seed ^ 0x7777, i as u64),
            ));
            commutator_vz_ratio(w, &z, p, s_z, p_int)
        })
        .collect();
    let mut worst: f64 = 0.0;
    for r in ratios {
        worst = worst.max(r?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct IzMomentRow {
    pub cutoff: f64,
    pub p_int: f64,
    /// `E[||Iz||_{L^p}^p]^{1/p} / (p^{1/2} phi_{2alpha}(N)^{1/2})`.
    pub ratio: MeanStderr,
    /// For `p = 2`: the exact value `sum m^2(n) <n>^{-2 alpha}` of
    /// `E||Iz||_{L^2}^2`, turned into the same ratio.
    pub closed_form_ratio: Option<f64>,
}

/// Moment growth of the smoothed random linear solution at `t = 0`:
/// the ratio should stay bounded (by ~2) across cutoffs and integrability
/// exponents. Band: `8 N`; quadrature grid: `4` points per mode.
pub fn iz_moment_check(
    alpha: f64,
    s: f64,
    p_int: f64,
    n_list: &[u64],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<IzMomentRow>> {
    assert!(p_int >= 2.0);
    n_list
        .iter()
        .map(|&ncut| {
            let p = IParams::new(ncut as f64, s);
            let m_grid = 8 * ncut as usize;
            let grid = (4 * m_grid + 2).next_power_of_two();
            let denom = p_int.sqrt() * phi_beta(ncut, 2.0 * alpha).sqrt();
            let samples: Vec<Result<f64>> = (0..n_samples)
                .into_par_iter()
                .map(|i| {
                    let u0 = sample_initial_data(&RandomDataSpec::new(
                        RandomFamily::Gaussian,
                        alpha,
                        m_grid,
                        derive_member_seed(seed, i as u64),
                    ));
                    Ok(wsp_norm(&p.apply(&u0), 0.0, p_int, grid)?.powf(p_int))
                })
                .collect();
            let values = samples.into_iter().collect::<Result<Vec<f64>>>()?;
            let est = MeanStderr::from_samples(&values);
            // delta-method transport of the stderr through x -> x^{1/p}/denom
            let mean_ratio = est.mean.powf(1.0 / p_int) / denom;
            let stderr_ratio = if est.mean > 0.0 {
                est.stderr * est.mean.powf(1.0 / p_int - 1.0) / (p_int * denom)
            } else {
                0.0
            };
            let closed_form_ratio = if (p_int - 2.0).abs() < 1e-12 {
                let m = m_grid as i64;
                let exact: f64 = (-m..=m)
                    .map(|n| {
                        let mm = p.multiplier(n);
                        mm * mm * bracket(n as f64).powf(-2.0 * alpha)
                    })
                    .sum();
                Some(exact.sqrt() / denom)
            } else {
                None
            };
            Ok(IzMomentRow {
                cutoff: ncut as f64,
                p_int,
                ratio: MeanStderr { mean: mean_ratio, stderr: stderr_ratio },
                closed_form_ratio,
            })
        })
        .collect()
}

/// Closed-form nonlinear Gronwall bound: if
/// `f(t) <= c + a int_0^t f + b int_0^t f^gamma` with `0 <= gamma < 1`, then
///
/// ```text
/// f^{1-gamma}(t) <= c^{1-gamma} e^{(1-gamma) a t} + (b/a)(e^{(1-gamma) a t} - 1),
/// ```
///
/// returned here raised back to the power `1/(1-gamma)`. The `a -> 0` limit
/// is reached through `expm1`, which is the series evaluation of
/// `(e^x - 1)/a` in the regime where subtracting 1 would cancel.
pub fn gronwall_bound(c: f64, a: f64, b: f64, gamma: f64, t: f64) -> f64 {
    assert!((0.0..1.0).contains(&gamma));
    assert!(c >= 0.0 && a >= 0.0 && b >= 0.0 && t >= 0.0);
    let one_minus = 1.0 - gamma;
    let growth = (one_minus * a * t).exp();
    let forcing = if a > 1e-8 {
        b / a * ((one_minus * a * t).exp_m1())
    } else {
        // expm1(x)/a with x = (1-gamma) a t, expanded once more for a = 0
        b * one_minus * t * (1.0 + 0.5 * one_minus * a * t)
    };
    (c.powf(one_minus) * growth + forcing).powf(1.0 / one_minus)
}

/// Lower bound for the time at which the modified energy can first reach
/// its ceiling `C N^{2-}`:
///
/// ```text
/// T >= 2 log(1 + C^{1/2} N^{2 alpha - eps} phi_{2 alpha}(N)^{1/2} Lambda)
///      / (C phi_{2 alpha}(N)^{1/2} Lambda),
/// ```
///
/// with `C` the probe-calibrated constant and `Lambda` the observed size of
/// `||I u0||_{L^2} / (2 phi_{2 alpha}(N))^{1/2}`.
pub fn blowup_time_lower_bound(
    c_const: f64,
    lambda: f64,
    n_cutoff: f64,
    alpha: f64,
    eps: f64,
) -> f64 {
    assert!(c_const > 0.0 && lambda > 0.0 && n_cutoff >= 1.0);
    let phi_half = phi_beta(n_cutoff as u64, 2.0 * alpha).sqrt();
    let arg = 1.0 + c_const.sqrt() * n_cutoff.powf(2.0 * alpha - eps) * phi_half * lambda;
    2.0 * arg.ln() / (c_const * phi_half * lambda)
}
