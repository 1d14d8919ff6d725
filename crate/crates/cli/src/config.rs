//! Experiment configuration: one JSON document with a section per module.
//! Unknown keys are rejected so schema errors name the offending field, and
//! serialization round-trips bit-exactly.

use bbm_lab::random::{MollifierKernel, RandomFamily};
use bbm_lab::solver::Scheme;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
#[clap(rename_all = "kebab-case")]
pub enum ExperimentKind {
    RegularityScan,
    CkDivergence,
    NzConvergence,
    Sharpness,
    GwpEnergyTrace,
    Inflation,
    Tails,
    ChaosMoments,
    SolverValidate,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::RegularityScan => "regularity-scan",
            ExperimentKind::CkDivergence => "ck-divergence",
            ExperimentKind::NzConvergence => "nz-convergence",
            ExperimentKind::Sharpness => "sharpness",
            ExperimentKind::GwpEnergyTrace => "gwp-energy-trace",
            ExperimentKind::Inflation => "inflation",
            ExperimentKind::Tails => "tails",
            ExperimentKind::ChaosMoments => "chaos-moments",
            ExperimentKind::SolverValidate => "solver-validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
#[clap(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RandomSection {
    pub family: RandomFamily,
    pub alpha: f64,
    pub m_grid: usize,
}

impl Default for RandomSection {
    fn default() -> Self {
        Self { family: RandomFamily::Gaussian, alpha: 0.5, m_grid: 128 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub dt: f64,
    pub t_final: f64,
    pub m_grid: usize,
    pub scheme: Scheme,
    pub mollifier: MollifierKernel,
    pub mollifier_scale: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_final: 1.0,
            m_grid: 256,
            scheme: Scheme::IfRk4,
            mollifier: MollifierKernel::Fejer,
            mollifier_scale: 24.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ImethodSection {
    pub cutoff: f64,
    pub s: f64,
}

impl Default for ImethodSection {
    fn default() -> Self {
        Self { cutoff: 16.0, s: 0.9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NonlinearitySection {
    pub alpha: f64,
    pub s2: f64,
    pub kernel: MollifierKernel,
    pub k_list: Vec<u64>,
    pub n_samples: usize,
    /// Divergence experiment below the quarter threshold.
    pub sharpness_alpha: f64,
    pub test_mode: i64,
    pub n_list: Vec<u64>,
    /// Scales for the zero-mode constant scan.
    pub ck_alphas: Vec<f64>,
    pub ck_scales: Vec<u64>,
    pub ck_mc_samples: usize,
}

impl Default for NonlinearitySection {
    fn default() -> Self {
        Self {
            alpha: 0.4,
            s2: 0.7,
            kernel: MollifierKernel::Fejer,
            k_list: (4..=9).map(|j| 1 << j).collect(),
            n_samples: 60,
            sharpness_alpha: 0.2,
            test_mode: 1,
            n_list: (6..=12).map(|j| 1 << j).collect(),
            ck_alphas: vec![0.3, 0.35, 0.45],
            ck_scales: (4..=12).map(|j| 1 << j).collect(),
            ck_mc_samples: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InflationSection {
    pub s: f64,
    pub p: f64,
    pub n_target: u32,
    /// When set, search parameters from (s, p, n_target) instead of using
    /// the explicit bundle below.
    pub auto_select: bool,
    pub n_freq: f64,
    pub a_width: f64,
    pub r_amp: f64,
    pub t_time: f64,
    pub m_grid: usize,
    pub dt_factor: f64,
}

impl Default for InflationSection {
    fn default() -> Self {
        Self {
            s: -1.0,
            p: 2.0,
            n_target: 2,
            auto_select: false,
            n_freq: 512.0,
            a_width: 63.0,
            r_amp: 1.0,
            t_time: 4e-3,
            m_grid: 2048,
            dt_factor: 128.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TailsSection {
    pub alpha: f64,
    pub s1: f64,
    pub s2: f64,
    pub m_grid: usize,
    pub t_final: f64,
    pub time_nodes: usize,
    pub n_samples: usize,
    pub grr_paths: usize,
}

impl Default for TailsSection {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            s1: -0.1,
            s2: 0.7,
            m_grid: 64,
            t_final: 1.0,
            time_nodes: 17,
            n_samples: 10_000,
            grr_paths: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MomentsSection {
    pub n_samples: usize,
    pub quartic_samples: usize,
    pub quartic_levels: Vec<usize>,
    pub quartic_s: f64,
    pub quartic_t: f64,
}

impl Default for MomentsSection {
    fn default() -> Self {
        Self {
            n_samples: 100_000,
            quartic_samples: 400,
            quartic_levels: vec![64, 128, 256, 512],
            quartic_s: 0.9,
            quartic_t: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegularitySection {
    pub alpha: f64,
    pub s_offsets: Vec<f64>,
    pub levels: Vec<usize>,
    pub n_samples: usize,
}

impl Default for RegularitySection {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            s_offsets: vec![-0.1, 0.1],
            levels: (6..=10).map(|j| 1 << j).collect(),
            n_samples: 1000,
        }
    }
}

/// The full experiment description. `experiment` is the only mandatory key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub random: RandomSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub imethod: ImethodSection,
    #[serde(default)]
    pub nonlinearity: NonlinearitySection,
    #[serde(default)]
    pub inflation: InflationSection,
    #[serde(default)]
    pub tails: TailsSection,
    #[serde(default)]
    pub moments: MomentsSection,
    #[serde(default)]
    pub regularity: RegularitySection,
}

fn default_seed() -> u64 {
    2026
}

impl ExperimentConfig {
    pub fn defaults_for(kind: ExperimentKind) -> Self {
        Self {
            experiment: kind,
            seed: default_seed(),
            random: Default::default(),
            solver: Default::default(),
            imethod: Default::default(),
            nonlinearity: Default::default(),
            inflation: Default::default(),
            tails: Default::default(),
            moments: Default::default(),
            regularity: Default::default(),
        }
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// FNV-1a over the canonical serialization; recorded in run manifests.
    pub fn hash(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.to_canonical_json().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}
