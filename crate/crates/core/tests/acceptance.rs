//! Acceptance suite: every quantitative property the library is expected to
//! reproduce, one test per criterion, each printing a PASS line with the
//! measured values (run with `--nocapture` to see them).
//!
//! Tolerances are pinned here, not configured elsewhere.

use bbm_lab::field::SpectralField;
use bbm_lab::imethod::{
    commutator_v2_worst_ratio, commutator_vz_worst_ratio, energy_growth_decomposition,
    gronwall_bound, iz_moment_check, modified_energy, IParams,
};
use bbm_lab::inflation::{
    bilinear_flp_probe, build_inflation_data, enumerate_trees, xi1_exact, xi_series,
    InflationParams,
};
use bbm_lab::nonlin::{
    nz_convergence, quartic_bound_check, sharpness_divergence, zero_mode_constant_analytic,
    zero_mode_constant_mc,
};
use bbm_lab::norms::{fourier_lebesgue_norm, phi_beta, sobolev_norm};
use bbm_lab::random::{
    coefficient_draw, derive_member_seed, estimate_moment, moment_table_check, sample_initial_data,
    MollifierKernel, RandomDataSpec, RandomFamily,
};
use bbm_lab::solver::{
    energy, integrate_bbm, integrate_perturbed, picard_solve, Scheme, SolverConfig, ZSource,
};
use bbm_lab::stats::{divergence_slope, log_log_slope, MeanStderr};
use bbm_lab::tails::{grr_domination_worst_quotient, tail_check, TailObservable, DEFAULT_QUANTILES};
use bbm_lab::NormDescriptor;
use num_complex::Complex64;
use std::time::Instant;

const MASTER_SEED: u64 = 0xBB_2026;

fn pass(criterion: u32, name: &str, detail: String) {
    println!("criterion {criterion:2} ({name}): PASS  [{detail}]");
}

/// 1. Energy conservation along the smooth flow.
#[test]
fn criterion_01_energy_conservation() {
    let start = Instant::now();
    let u0 = SpectralField::from_nonnegative_modes(256, &[(1, Complex64::new(0.5, 0.0))]);
    let cfg = SolverConfig::if_rk4(1e-3, 1.0, 256);
    let traj = integrate_bbm(&u0, &cfg).unwrap();
    let e0 = energy(&traj.states[0]);
    let drift = traj
        .states
        .iter()
        .map(|u| (energy(u) - e0).abs() / e0)
        .fold(0.0, f64::max);
    let elapsed = start.elapsed().as_secs_f64();
    assert!(drift < 1e-8, "relative energy drift {drift}");
    assert!(elapsed < 10.0, "runtime {elapsed} s exceeds the 10 s budget");
    pass(1, "energy conservation", format!("drift {drift:.2e}, runtime {elapsed:.2} s"));
}

/// 2. Divergence rate of the zero-mode constant `C_k`.
#[test]
fn criterion_02_ck_divergence() {
    let ks: Vec<f64> = (4..=12).map(|j| (1u64 << j) as f64).collect();
    let mut details = Vec::new();
    for alpha in [0.3, 0.35, 0.45] {
        let vals: Vec<f64> = ks
            .iter()
            .map(|&k| zero_mode_constant_analytic(alpha, k, MollifierKernel::Dirichlet, k as usize))
            .collect();
        let slope = divergence_slope(&ks, &vals);
        let target = 1.0 - 2.0 * alpha;
        assert!(
            (slope - target).abs() <= 0.05,
            "alpha={alpha}: slope {slope} vs {target}"
        );
        details.push(format!("a={alpha}: {slope:.3}"));
    }
    // alpha = 1/2: C_k / log k flat on the top octave
    let flat: Vec<f64> = [2048.0f64, 4096.0]
        .iter()
        .map(|&k| zero_mode_constant_analytic(0.5, k, MollifierKernel::Dirichlet, k as usize) / k.ln())
        .collect();
    let rel = (flat[1] - flat[0]).abs() / flat[0];
    assert!(rel < 0.1, "C_k/log k varied by {rel} on the top octave");
    // Monte Carlo route agrees with the analytic value
    let (alpha, k) = (0.35, 32.0);
    let exact = zero_mode_constant_analytic(alpha, k, MollifierKernel::Dirichlet, k as usize);
    let mc = zero_mode_constant_mc(
        alpha,
        k,
        MollifierKernel::Dirichlet,
        0.0,
        10_000,
        derive_member_seed(MASTER_SEED, 2),
        k as usize,
    );
    assert!(
        (mc.mean - exact).abs() <= 3.0 * mc.stderr,
        "MC {} +- {} vs analytic {exact}",
        mc.mean,
        mc.stderr
    );
    pass(
        2,
        "C_k divergence",
        format!("{}; log-flatness {rel:.3}; MC z={:.2}", details.join(", "), (mc.mean - exact) / mc.stderr),
    );
}

/// 3. Regularity threshold of the random data at alpha = 1/2.
#[test]
fn criterion_03_regularity_threshold() {
    let seed = derive_member_seed(MASTER_SEED, 3);
    let levels: Vec<usize> = (6..=10).map(|j| 1usize << j).collect();
    let scan = |s: f64| -> Vec<f64> {
        levels
            .iter()
            .map(|&m| {
                // shared seed couples the truncation levels pathwise
                let spec = RandomDataSpec::new(RandomFamily::Gaussian, 0.5, m, seed);
                estimate_moment(&spec, &NormDescriptor::Sobolev { s }, 2.0, 1000)
                    .unwrap()
                    .mean
            })
            .collect()
    };
    let bounded = scan(-0.1);
    let divergent = scan(0.1);
    let bounded_ratios: Vec<f64> = bounded.windows(2).map(|w| w[1] / w[0]).collect();
    let divergent_ratios: Vec<f64> = divergent.windows(2).map(|w| w[1] / w[0]).collect();
    for r in &bounded_ratios {
        assert!(*r < 1.1, "bounded side ratio {r} >= 1.1");
    }
    for w in bounded_ratios.windows(2) {
        assert!(w[1] < w[0], "bounded side ratios must decrease toward 1");
    }
    for r in &divergent_ratios {
        assert!(*r > 1.1, "divergent side ratio {r} <= 1.1");
    }
    pass(
        3,
        "regularity threshold",
        format!(
            "s=-0.1 ratios {:?} | s=+0.1 ratios {:?}",
            bounded_ratios.iter().map(|r| (r * 1e3).round() / 1e3).collect::<Vec<_>>(),
            divergent_ratios.iter().map(|r| (r * 1e3).round() / 1e3).collect::<Vec<_>>()
        ),
    );
}

/// 4. Convergence of `N(z_k)` above the threshold, divergence rate below.
#[test]
fn criterion_04_nz_convergence_and_sharpness() {
    let ks: Vec<u64> = (4..=9).map(|j| 1u64 << j).collect();
    let report = nz_convergence(0.4, 0.7, MollifierKernel::Fejer, &ks, 60, derive_member_seed(MASTER_SEED, 4)).unwrap();
    assert!(report.mc_matches_analytic(4.0), "MC strayed from the pairing oracle");
    // Cauchy decay, monotone within 3 stderr on the MC ladder
    for w in report.rows.windows(2) {
        let (a, b) = (w[0].mc.unwrap(), w[1].mc.unwrap());
        assert!(
            b.mean <= a.mean + 3.0 * a.combined_stderr(&b),
            "no decay between k={} and k={}",
            w[0].parameter,
            w[1].parameter
        );
    }
    // the exact curve decays strictly beyond its peak
    let oracle: Vec<f64> = report.rows.iter().map(|r| r.analytic.unwrap()).collect();
    assert!(oracle[5] < oracle[4] && oracle[4] < oracle[3] && oracle[3] < oracle[2]);

    let ns: Vec<u64> = (6..=12).map(|j| 1u64 << j).collect();
    let sharp = sharpness_divergence(0.2, 1, &ns, 100, derive_member_seed(MASTER_SEED, 41)).unwrap();
    let slope = sharp.fitted_slope.unwrap();
    assert!((slope - 0.2).abs() <= 0.05, "variance growth slope {slope}");
    assert!(sharp.mc_matches_analytic(4.0));
    pass(
        4,
        "N(z) convergence/sharpness",
        format!("cauchy tail {:?} decays; variance slope {slope:.3}", &oracle[3..]),
    );
}

/// 5. The rough/smooth splitting is consistent with the direct solve and
/// the limit does not depend on the mollifier family.
#[test]
fn criterion_05_splitting_consistency() {
    let m_grid = 128;
    let u0 = sample_initial_data(&RandomDataSpec::new(
        RandomFamily::Gaussian,
        0.5,
        m_grid,
        derive_member_seed(MASTER_SEED, 5),
    ));
    let cfg = SolverConfig::if_rk4(1e-3, 0.5, m_grid);
    let z_src = ZSource::mollified(&u0, MollifierKernel::Fejer, 16.0);
    let v = integrate_perturbed(&z_src, &cfg).unwrap();
    let direct = integrate_bbm(z_src.initial(), &cfg).unwrap();
    let mut worst: f64 = 0.0;
    for (j, t) in v.times.iter().enumerate() {
        let split = z_src.at(*t, m_grid).add(&v.states[j]);
        worst = worst.max(sobolev_norm(&split.sub(&direct.states[j]), 0.0));
    }
    assert!(worst < 1e-6, "splitting mismatch {worst}");

    // fejer and gaussian-symbol mollifications of the same datum produce
    // remainders that approach each other as the scale doubles; a band of
    // 4x the largest scale keeps the gaussian symbol unclipped
    let m_wide = 512;
    let u0w = sample_initial_data(&RandomDataSpec::new(
        RandomFamily::Gaussian,
        0.5,
        m_wide,
        derive_member_seed(MASTER_SEED, 5),
    ));
    let cfg_wide = SolverConfig::if_rk4(1e-3, 0.5, m_wide);
    let sup_h_diff = |k: f64| -> f64 {
        let vf =
            integrate_perturbed(&ZSource::mollified(&u0w, MollifierKernel::Fejer, k), &cfg_wide)
                .unwrap();
        let vg = integrate_perturbed(
            &ZSource::mollified(&u0w, MollifierKernel::GaussianSymbol, k),
            &cfg_wide,
        )
        .unwrap();
        vf.states
            .iter()
            .zip(&vg.states)
            .map(|(a, b)| sobolev_norm(&a.sub(b), 0.7))
            .fold(0.0, f64::max)
    };
    let ladder: Vec<f64> = [32.0, 64.0, 128.0].iter().map(|&k| sup_h_diff(k)).collect();
    for w in ladder.windows(2) {
        assert!(w[1] < w[0], "mollifier-family gap did not shrink: {ladder:?}");
    }
    pass(
        5,
        "splitting consistency",
        format!("direct-vs-split {worst:.2e}; family gap {ladder:?}"),
    );
}

/// 6. The modified-energy ledger closes and the commutator/moment probes
/// show their decay rates.
#[test]
fn criterion_06_imethod_ledger_and_probes() {
    // ledger closure along a rough-data run
    let m_grid = 96;
    let u0 = sample_initial_data(&RandomDataSpec::new(
        RandomFamily::Gaussian,
        0.5,
        m_grid,
        derive_member_seed(MASTER_SEED, 6),
    ));
    let z_src = ZSource::mollified(&u0, MollifierKernel::Fejer, 24.0);
    let cfg = SolverConfig::if_rk4(1e-3, 1.0, m_grid);
    let v = integrate_perturbed(&z_src, &cfg).unwrap();
    let p = IParams::new(16.0, 0.9);
    let trace = energy_growth_decomposition(&v, &z_src, &p).unwrap();
    let residual = trace.max_relative_residual();
    assert!(residual < 1e-6, "ledger residual {residual}");

    // commutator probe slopes over N in 2^4..2^8
    let ns: Vec<u64> = (4..=8).map(|j| 1u64 << j).collect();
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let v2: Vec<f64> = ns
        .iter()
        .map(|&n| {
            commutator_v2_worst_ratio(
                &IParams::new(n as f64, 0.9),
                4 * n as usize,
                2000,
                derive_member_seed(MASTER_SEED, 61),
            )
        })
        .collect();
    let v2_slope = log_log_slope(&xs, &v2);
    assert!(v2_slope <= -1.4, "self-commutator slope {v2_slope} ({v2:?})");
    let vz: Vec<f64> = ns
        .iter()
        .map(|&n| {
            commutator_vz_worst_ratio(
                &IParams::new(n as f64, 0.9),
                0.5,
                -0.1,
                8.0,
                4 * n as usize,
                200,
                derive_member_seed(MASTER_SEED, 62),
            )
            .unwrap()
        })
        .collect();
    let vz_slope = log_log_slope(&xs, &vz);
    assert!(vz_slope < 0.0, "product-commutator slope {vz_slope} ({vz:?})");

    // smoothed-data moment ratio bounded by 2
    let seed = derive_member_seed(MASTER_SEED, 63);
    let mut worst_ratio: f64 = 0.0;
    let all_n: Vec<u64> = (4..=10).map(|j| 1u64 << j).collect();
    for row in iz_moment_check(0.5, 0.9, 2.0, &all_n, 150, seed).unwrap() {
        worst_ratio = worst_ratio.max(row.ratio.mean);
    }
    for p_int in [4.0, 8.0] {
        for row in iz_moment_check(0.5, 0.9, p_int, &[16, 128, 1024], 150, seed).unwrap() {
            worst_ratio = worst_ratio.max(row.ratio.mean);
        }
    }
    assert!(worst_ratio <= 2.0, "Iz moment ratio {worst_ratio}");
    pass(
        6,
        "I-method ledger",
        format!(
            "residual {residual:.2e}; slopes {v2_slope:.2} / {vz_slope:.2}; moment ratio {worst_ratio:.2}"
        ),
    );
}

/// 7. Gronwall arithmetic: the closed form is exact on the equality ODE and
/// the predicted ceiling-crossing time is a valid lower bound on 20/20
/// rough trajectories.
#[test]
fn criterion_07_gronwall_machinery() {
    // closed form vs RK4 on f' = a f + b f^gamma
    let (c, a, b, gamma, t_end) = (0.5f64, 1.0, 1.0, 0.5, 1.0);
    let mut f = c;
    let dt = 1e-4;
    let rhs = |x: f64| a * x + b * x.powf(gamma);
    let steps = (t_end / dt) as usize;
    for _ in 0..steps {
        let k1 = rhs(f);
        let k2 = rhs(f + 0.5 * dt * k1);
        let k3 = rhs(f + 0.5 * dt * k2);
        let k4 = rhs(f + dt * k3);
        f += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    let bound = gronwall_bound(c, a, b, gamma, t_end);
    assert!((bound - f).abs() < 1e-6, "closed form {bound} vs ODE {f}");
    assert!(bound >= f - 1e-6);

    // 20 rough trajectories at alpha = 1/2: the Gronwall prediction with
    // measured coefficients never exceeds the observed crossing time. The
    // predicted time for the full ceiling ~ C N^2 exceeds the horizon (the
    // energy is expected to stay far below it); a low ceiling inside the
    // observed range exercises the inequality on genuine crossings.
    let m_grid = 96;
    let p = IParams::new(16.0, 0.9);
    let ceiling = 0.25 * p.cutoff * p.cutoff; // E ceiling ~ C N^2 with C = 1/4
    let cfg = SolverConfig::if_rk4(2e-3, 2.0, m_grid);
    let mut worst_margin = f64::INFINITY;
    let mut crossings = 0usize;
    for member in 0..20u64 {
        let u0 = sample_initial_data(&RandomDataSpec::new(
            RandomFamily::Gaussian,
            0.5,
            m_grid,
            derive_member_seed(MASTER_SEED, 70 + member),
        ));
        let z_src = ZSource::mollified(&u0, MollifierKernel::Fejer, 32.0);
        let v = integrate_perturbed(&z_src, &cfg).unwrap();
        let trace = energy_growth_decomposition(&v, &z_src, &p).unwrap();
        // measured energy-inequality coefficients from the node rates:
        // E' <= a_w E + b_w E^{1/2} holds along the trace by construction
        let (mut a_w, mut b_w) = (1e-9f64, 1e-9f64);
        for j in 1..trace.times.len() {
            let e = trace.e_values[j];
            if e < 1e-12 {
                continue;
            }
            a_w = a_w.max(trace.rate_iii[j].max(0.0) / e);
            b_w = b_w.max((trace.rate_i[j] + trace.rate_ii[j]).max(0.0) / e.sqrt());
        }
        // crossing bound for E' <= aE + bE^{1/2}, E(0) = 0:
        // T >= (2/a) log(1 + a sqrt(ceiling)/b)
        let predict = |ceil: f64| 2.0 / a_w * (1.0 + a_w * ceil.sqrt() / b_w).ln();
        let predicted = predict(ceiling);
        let observed = trace.crossing_time(ceiling).unwrap_or(cfg.t_final);
        assert!(
            observed >= predicted.min(cfg.t_final) - 1e-9,
            "member {member}: observed {observed} < predicted {predicted}"
        );
        // a ceiling at half the realized peak is always crossed mid-run
        let e_max = trace.e_values.iter().cloned().fold(0.0, f64::max);
        let low_ceiling = 0.5 * e_max;
        if let Some(t_cross) = trace.crossing_time(low_ceiling) {
            crossings += 1;
            let predicted_low = predict(low_ceiling);
            assert!(
                t_cross >= predicted_low - 1e-6,
                "member {member}: crossed {low_ceiling:.3e} at {t_cross} before predicted {predicted_low}"
            );
            worst_margin = worst_margin.min(t_cross / predicted_low);
        }
    }
    assert_eq!(crossings, 20, "every trajectory crosses half its own peak");
    pass(
        7,
        "Gronwall machinery",
        format!(
            "ODE gap {:.1e}; 20/20 crossings, min observed/predicted {worst_margin:.2}",
            (bound - f).abs()
        ),
    );
}

/// 8. Tree combinatorics and the power series engine.
#[test]
fn criterion_08_trees_and_series() {
    let expected = [1usize, 1, 2, 5, 14, 42, 132];
    for (j, &count) in expected.iter().enumerate() {
        assert_eq!(enumerate_trees(j).unwrap().len(), count, "tree count at order {j}");
    }

    let u0 = SpectralField::from_nonnegative_modes(
        2,
        &[(1, Complex64::new(0.4, 0.0)), (2, Complex64::new(0.1, 0.05))],
    )
    .truncated(16);
    let t = 0.05;
    let series = xi_series(&u0, t, 4, t / 32.0);
    let cfg = SolverConfig {
        dt: t / 32.0,
        t_final: t,
        m_grid: 16,
        scheme: Scheme::Picard,
        picard_tol: 1e-13,
        picard_max_iter: 60,
    };
    let fixed = picard_solve(&u0, t, &cfg).unwrap();
    let diff = sobolev_norm(&fixed.sub(&series.partial_sum(4)), 1.0);
    assert!(diff < 1e-6, "series vs fixed point {diff}");

    // geometric stability of the per-order constants in FL^1
    let l1 = fourier_lebesgue_norm(&u0, 0.0, 1.0);
    let consts: Vec<f64> = (1..=4)
        .map(|j| {
            let nj = fourier_lebesgue_norm(series.final_term(j), 0.0, 1.0);
            (nj / l1).powf(1.0 / j as f64) / (t * l1)
        })
        .collect();
    let hi = consts.iter().cloned().fold(0.0, f64::max);
    let lo = consts.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(hi / lo <= 4.0 && hi <= 1.0, "per-order constants {consts:?}");
    pass(
        8,
        "trees and series",
        format!("counts ok; series-vs-picard {diff:.1e}; constants {consts:?}"),
    );
}

/// 9. Norm inflation at the frozen two-bump parameters.
#[test]
fn criterion_09_norm_inflation() {
    let start = Instant::now();
    let params = InflationParams {
        n_freq: 512.0,
        a_width: 63.0,
        r_amp: 1.0,
        t_time: 4e-3,
        s: -1.0,
        p: 2.0,
        case: 1,
        delta: 1.0 / 3.0,
        theta: 0.0,
    };
    let m_grid = 2048;
    let cfg = SolverConfig::if_rk4(params.t_time / 128.0, params.t_time, m_grid);
    let bump = build_inflation_data(&params, m_grid).unwrap();
    let perturbation = fourier_lebesgue_norm(&bump, params.s, params.p);
    assert!(perturbation <= 0.1, "perturbation norm {perturbation}");

    // norm inflation at zero: u0 = 0
    let traj = integrate_bbm(&bump, &cfg).unwrap();
    assert!(!traj.blew_up);
    let final_norm = fourier_lebesgue_norm(traj.final_state(), params.s, params.p);
    let amplification = final_norm / perturbation;
    assert!(amplification >= 10.0, "amplification {amplification}");

    // the closed-form second-term prediction is within a factor 4
    let xi1 = xi1_exact(&bump, params.t_time).truncated(m_grid);
    let predicted = fourier_lebesgue_norm(&xi1, params.s, params.p);
    let quotient = predicted / final_norm;
    assert!(
        (0.25..=4.0).contains(&quotient),
        "prediction {predicted} vs measured {final_norm}"
    );

    // series remainder is dominated by the second term
    let series = xi_series(&bump, params.t_time, 4, params.t_time / 16.0);
    let tail = fourier_lebesgue_norm(&series.tail_sum(), params.s, params.p);
    assert!(tail <= 0.5 * predicted, "tail {tail} vs Xi1 {predicted}");

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "runtime {elapsed} s exceeds the 2 min budget");
    pass(
        9,
        "norm inflation",
        format!(
            "perturbation {perturbation:.3}, amplification {amplification:.1}, prediction/measured {quotient:.2}, tail/Xi1 {:.1e}, {elapsed:.1} s",
            tail / predicted
        ),
    );
}

/// 10. The bilinear multiplier estimate: bounded constant at (0, 2),
/// quantified failure at (0, 4).
#[test]
fn criterion_10_fl_bilinear() {
    let sizes: Vec<u64> = (5..=9).map(|j| 1u64 << j).collect();
    let bounded = bilinear_flp_probe(0.0, 2.0, &sizes, 60, false, derive_member_seed(MASTER_SEED, 10));
    let vals: Vec<f64> = bounded.rows.iter().map(|r| r.analytic.unwrap()).collect();
    let hi = vals.iter().cloned().fold(0.0, f64::max);
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(hi / lo <= 2.0, "constant unstable across truncations: {vals:?}");

    let a_sizes: Vec<u64> = (3..=7).map(|j| 1u64 << j).collect();
    let growing = bilinear_flp_probe(0.0, 4.0, &a_sizes, 0, true, 0);
    let slope = growing.fitted_slope.unwrap();
    let target = 1.0 - 2.0 * 0.0 - 2.0 / 4.0;
    assert!((slope - target).abs() <= 0.1, "counterexample slope {slope} vs {target}");
    pass(
        10,
        "FL bilinear estimate",
        format!("constant {lo:.2}..{hi:.2}; counterexample slope {slope:.3}"),
    );
}

/// 11. The non-Gaussian program: moment tables for both families and the
/// quartic space-time bound under truncation doubling.
#[test]
fn criterion_11_non_gaussian_program() {
    let tuples = vec![
        vec![3, -3],
        vec![1, 2, 3],
        vec![1, -1, 1, -1],
        vec![2, -2, 7, -7],
        vec![1, 2, -3, 5, -5],
        vec![4, -4, 4, -4, 4, -4, 4, -4],
        vec![1, -1, 2, -2, 3, -3, 4, -4],
    ];
    for family in [RandomFamily::Gaussian, RandomFamily::UniformPhase] {
        let report =
            moment_table_check(family, &tuples, 100_000, derive_member_seed(MASTER_SEED, 11));
        assert!(report.all_pass(), "{family:?} moment table failed");
    }
    // E|g|^8 = 24 for the complex Gaussian
    let oct: Vec<f64> = (0..100_000u64)
        .map(|i| {
            coefficient_draw(RandomFamily::Gaussian, derive_member_seed(MASTER_SEED, 111 ^ i), 1)
                .norm()
                .powi(8)
        })
        .collect();
    let oct_est = MeanStderr::from_samples(&oct);
    assert!((oct_est.mean - 24.0).abs() <= 3.0 * oct_est.stderr);

    // Quartic space-time moment bounded under truncation doubling. Near
    // the regularity edge the truncation curve converges slowly, so
    // boundedness is certified two ways: the exact pairing sum has
    // doubling ratios that decrease toward 1 over six octaves, and the
    // coupled Monte Carlo estimates of the fourth moment show the same
    // decreasing-ratio signature for both coefficient families.
    let exact_curve: Vec<f64> = (6..=12)
        .map(|j| bbm_lab::nonlin::nz_second_moment_exact(0.5, 0.9, 1usize << j))
        .collect();
    let exact_ratios: Vec<f64> = exact_curve.windows(2).map(|w| w[1] / w[0]).collect();
    for w in exact_ratios.windows(2) {
        assert!(w[1] < w[0], "exact second-moment ratios must decrease: {exact_ratios:?}");
    }
    assert!(*exact_ratios.last().unwrap() < 1.1);
    let mut drift_report = Vec::new();
    for family in [RandomFamily::Gaussian, RandomFamily::UniformPhase] {
        let ests: Vec<MeanStderr> = [64usize, 128, 256, 512]
            .iter()
            .map(|&m| {
                // one shared seed couples the levels pathwise
                quartic_bound_check(
                    0.5,
                    0.9,
                    1.0,
                    400,
                    family,
                    m,
                    9,
                    derive_member_seed(MASTER_SEED, 112),
                )
                .unwrap()
            })
            .collect();
        let ratios: Vec<f64> = ests.windows(2).map(|w| w[1].mean / w[0].mean).collect();
        for w in ratios.windows(2) {
            assert!(
                w[1] < w[0],
                "{family:?}: quartic doubling ratios must decrease: {ratios:?}"
            );
        }
        drift_report.push(format!(
            "{family:?}: ratios {:?}",
            ratios.iter().map(|r| (r * 1e3).round() / 1e3).collect::<Vec<_>>()
        ));
    }
    pass(
        11,
        "non-Gaussian program",
        format!(
            "tables ok; E|g|^8 = {:.2}; exact ratios {:?}; quartic {}",
            oct_est.mean,
            exact_ratios.iter().map(|r| (r * 1e3).round() / 1e3).collect::<Vec<_>>(),
            drift_report.join(" | ")
        ),
    );
}

/// 12. Exponential tails of the stochastic objects and pathwise GRR
/// domination.
#[test]
fn criterion_12_tails() {
    let z_obs = TailObservable::ZSupNorm { alpha: 0.5, s1: -0.1, m_grid: 64 };
    let z_rep = tail_check(z_obs, 1.0, 17, &DEFAULT_QUANTILES, 10_000, derive_member_seed(MASTER_SEED, 12)).unwrap();
    assert!(
        z_rep.fit_in_lambda_sq.slope > 0.0 && z_rep.fit_in_lambda_sq.r_squared > 0.9,
        "z tail fit {:?}",
        z_rep.fit_in_lambda_sq
    );

    let nz_obs = TailObservable::NzSupNorm { alpha: 0.5, s2: 0.7, m_grid: 64 };
    let nz_rep = tail_check(nz_obs, 1.0, 17, &DEFAULT_QUANTILES, 10_000, derive_member_seed(MASTER_SEED, 121)).unwrap();
    assert!(
        nz_rep.fit_in_lambda.slope > 0.0 && nz_rep.fit_in_lambda.r_squared > 0.9,
        "N(z) tail fit {:?}",
        nz_rep.fit_in_lambda
    );

    let worst = grr_domination_worst_quotient(
        0.5,
        -0.1,
        32,
        1.0,
        17,
        0.5,
        4.0,
        100,
        derive_member_seed(MASTER_SEED, 122),
    )
    .unwrap();
    assert!(worst <= 1.0, "GRR domination failed: {worst}");
    pass(
        12,
        "tails",
        format!(
            "z: R2 {:.3}; N(z): R2 {:.3}; GRR quotient {worst:.3}",
            z_rep.fit_in_lambda_sq.r_squared, nz_rep.fit_in_lambda.r_squared
        ),
    );
}

/// Helper consistency: the modified energy of the I-smoothed datum sits
/// between the probe quantities used above (keeps criterion 7's inputs
/// honest if internals change).
#[test]
fn gronwall_inputs_are_well_defined() {
    let p = IParams::new(16.0, 0.9);
    let u0 = sample_initial_data(&RandomDataSpec::new(
        RandomFamily::Gaussian,
        0.5,
        96,
        derive_member_seed(MASTER_SEED, 99),
    ));
    let lambda = sobolev_norm(&p.apply(&u0), 0.0) / (2.0 * phi_beta(16, 1.0)).sqrt();
    assert!(lambda.is_finite() && lambda > 0.0);
    assert!(modified_energy(&u0, &p) > 0.0);
    assert!(bbm_lab::imethod::blowup_time_lower_bound(1.0, lambda, 16.0, 0.5, 0.01) > 0.0);
}
