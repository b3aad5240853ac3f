//! JSON experiment configuration and its conversion into core objects.
//!
//! Documents are parsed into plain data first; every mathematical check
//! happens when the data is turned into channels, states and pmfs, so
//! malformed documents and invalid parameters fail with different errors.

use std::fs;
use std::path::{Path, PathBuf};

use cqsum::channels::{example1_channel, CqMac, CqPtp, SourcePair};
use cqsum::pmf::JointPmf;
use cqsum::quantum::{CMatrix, Complex64, DensityOperator};
use cqsum::rates::{Example1Mode, Example1SourceModel, RateGrid};
use cqsum::sim::ParityPolicy;
use cqsum::Tolerances;
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

/// Schema identifier accepted in the top-level `"schema"` field.
pub const CONFIG_SCHEMA: &str = "cqsum-config/1";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: String,
    pub command: Option<String>,
    pub channel: Option<ChannelRef>,
    pub source: Option<SourceSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "empty_object")]
    pub params: Value,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

impl ExperimentConfig {
    /// Parses a configuration document. Relative channel file references
    /// are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let mut config: ExperimentConfig = serde_json::from_str(text).map_err(CliError::Json)?;
        if config.schema != CONFIG_SCHEMA {
            return Err(CliError::Config(format!(
                "unsupported schema {:?}, expected {CONFIG_SCHEMA:?}",
                config.schema
            )));
        }
        if let Some(ChannelRef::File { file }) = &config.channel {
            let path = if file.is_relative() { base.join(file) } else { file.clone() };
            let text = fs::read_to_string(&path)
                .map_err(|e| CliError::Config(format!("channel file {}: {e}", path.display())))?;
            let spec: ChannelSpec = serde_json::from_str(&text).map_err(CliError::Json)?;
            config.channel = Some(ChannelRef::Inline(spec));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// An empty configuration, for commands that can run on defaults.
    pub fn empty() -> Self {
        ExperimentConfig {
            schema: CONFIG_SCHEMA.to_string(),
            command: None,
            channel: None,
            source: None,
            seed: None,
            params: empty_object(),
        }
    }

    pub fn params<T: for<'de> Deserialize<'de>>(&self) -> Result<T, CliError> {
        serde_json::from_value(self.params.clone()).map_err(CliError::Json)
    }

    pub fn channel(&self) -> Result<&ChannelSpec, CliError> {
        match &self.channel {
            Some(ChannelRef::Inline(spec)) => Ok(spec),
            Some(ChannelRef::File { .. }) => unreachable!("file references are resolved on parse"),
            None => Err(CliError::Config("this command needs a \"channel\"".into())),
        }
    }

    pub fn source(&self) -> Result<SourcePair, CliError> {
        match &self.source {
            Some(spec) => spec.build(),
            None => Err(CliError::Config("this command needs a \"source\"".into())),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ChannelRef {
    File { file: PathBuf },
    Inline(ChannelSpec),
}

/// A complex matrix entry: either a real number or `[re, im]`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn value(self) -> Complex64 {
        match self {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// Full density matrix, row by row.
    Matrix(Vec<Vec<Entry>>),
    /// State vector, normalized on construction.
    Pure(Vec<Entry>),
    /// Diagonal density matrix.
    Diagonal(Vec<f64>),
    /// Pure qubit `c|0⟩ + sqrt(1 − c²)|1⟩` with overlap `c` against `|0⟩`.
    Overlap(f64),
}

impl StateSpec {
    pub fn build(&self, tol: &Tolerances) -> Result<DensityOperator, CliError> {
        Ok(match self {
            StateSpec::Matrix(rows) => {
                let d = rows.len();
                if d == 0 || rows.iter().any(|r| r.len() != d) {
                    return Err(CliError::Config("density matrices must be square and non-empty".into()));
                }
                DensityOperator::new(CMatrix::from_fn(d, d, |i, j| rows[i][j].value()), tol)?
            }
            StateSpec::Pure(amplitudes) => {
                let v: Vec<Complex64> = amplitudes.iter().map(|a| a.value()).collect();
                DensityOperator::pure(&v)?
            }
            StateSpec::Diagonal(p) => DensityOperator::diagonal(p)?,
            StateSpec::Overlap(c) => DensityOperator::pure_qubit_with_overlap(*c)?,
        })
    }
}

fn build_states(specs: &[StateSpec], tol: &Tolerances) -> Result<Vec<DensityOperator>, CliError> {
    specs.iter().map(|s| s.build(tol)).collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    /// Point-to-point channel `x ↦ ρ_x`.
    Ptp { states: Vec<StateSpec> },
    /// Two-sender channel; `states` is row-major in `x1`.
    Mac { inputs: [usize; 2], states: Vec<StateSpec> },
    /// `ρ_{x1 x2} = σ_{x1 ⊕_q x2}` with `σ_u = states[u]`.
    Additive { q: u32, states: Vec<StateSpec> },
    /// Noisy binary OR channel: `ρ_{00} = ρ(q)`, every other pair `ρ(1 − q)`.
    Example1 { q_noise: f64, sigma0: StateSpec, sigma1: StateSpec },
}

impl ChannelSpec {
    pub fn mac(&self, tol: &Tolerances) -> Result<CqMac, CliError> {
        Ok(match self {
            ChannelSpec::Ptp { .. } => {
                return Err(CliError::Config("this command needs a two-sender channel".into()))
            }
            ChannelSpec::Mac { inputs, states } => CqMac::new(inputs[0], inputs[1], build_states(states, tol)?)?,
            ChannelSpec::Additive { q, states } => CqMac::additive(&CqPtp::new(build_states(states, tol)?)?, *q)?,
            ChannelSpec::Example1 { q_noise, sigma0, sigma1 } => {
                example1_channel(*q_noise, &sigma0.build(tol)?, &sigma1.build(tol)?)?
            }
        })
    }

    pub fn ptp(&self, tol: &Tolerances) -> Result<CqPtp, CliError> {
        match self {
            ChannelSpec::Ptp { states } | ChannelSpec::Additive { states, .. } => {
                Ok(CqPtp::new(build_states(states, tol)?)?)
            }
            _ => Err(CliError::Config("this command needs a point-to-point channel".into())),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpec {
    /// Joint pmf table `W(s1, s2)`, row-major in `s1`.
    Joint(Vec<Vec<f64>>),
    /// Uniform binary sources that differ with probability `p`.
    Flip(f64),
}

impl SourceSpec {
    pub fn build(&self) -> Result<SourcePair, CliError> {
        let table = match self {
            SourceSpec::Joint(t) => t.clone(),
            SourceSpec::Flip(p) => {
                if !(0.0..=1.0).contains(p) {
                    return Err(CliError::Config(format!("flip probability {p} is outside [0, 1]")));
                }
                vec![vec![(1.0 - p) / 2.0, p / 2.0], vec![p / 2.0, (1.0 - p) / 2.0]]
            }
        };
        Ok(SourcePair::new(JointPmf::from_table(&table)?))
    }
}

pub fn joint(table: &[Vec<f64>]) -> Result<JointPmf, CliError> {
    Ok(JointPmf::from_table(table)?)
}

fn default_grid() -> RateGrid {
    RateGrid::default()
}

fn default_draws() -> usize {
    1
}

fn default_q() -> u32 {
    2
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EmbeddingsConfig {
    Given(Vec<cqsum::rates::EmbeddingSpec>),
    Search { max_q: u32 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesParams {
    pub q: Option<u32>,
    pub p_v1x1: Option<Vec<Vec<f64>>>,
    pub p_v2x2: Option<Vec<Vec<f64>>>,
    pub function: Option<Vec<Vec<usize>>>,
    pub embeddings: Option<EmbeddingsConfig>,
    #[serde(default = "default_grid")]
    pub grid: RateGrid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeParams {
    #[serde(default = "default_q")]
    pub q: u32,
    #[serde(default = "default_grid")]
    pub grid: RateGrid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub p: [f64; 2],
    pub q_noise: [f64; 2],
    pub overlap: [f64; 2],
    pub step: f64,
    pub theta_points: usize,
    pub model: Example1SourceModel,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            p: [0.05, 0.45],
            q_noise: [0.0, 0.4],
            overlap: [0.0, 0.9],
            step: 0.05,
            theta_points: 401,
            model: Example1SourceModel::Split,
        }
    }
}

fn default_theta_points() -> usize {
    401
}

fn default_model() -> Example1SourceModel {
    Example1SourceModel::Split
}

fn default_mode() -> Example1Mode {
    Example1Mode::ClosedForm
}

fn default_unstructured_grid() -> RateGrid {
    RateGrid { resolution: 8, refine: true }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Example1Config {
    pub p: Option<f64>,
    pub q_noise: Option<f64>,
    pub overlap: Option<f64>,
    pub sigma0: Option<StateSpec>,
    pub sigma1: Option<StateSpec>,
    #[serde(default = "default_theta_points")]
    pub theta_points: usize,
    #[serde(default = "yes")]
    pub refine: bool,
    #[serde(default = "default_model")]
    pub model: Example1SourceModel,
    #[serde(default = "default_mode")]
    pub mode: Example1Mode,
    #[serde(default = "default_unstructured_grid")]
    pub unstructured_grid: RateGrid,
    #[serde(default)]
    pub search: Option<SearchConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodePoint {
    pub n: usize,
    pub k: usize,
    pub l: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PtpParams {
    pub p_v: Option<Vec<f64>>,
    pub delta: f64,
    pub points: Vec<CodePoint>,
    #[serde(default = "default_draws")]
    pub draws: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MacSumConfig {
    #[serde(default = "default_q")]
    pub q: u32,
    pub p_v1x1: Vec<Vec<f64>>,
    pub p_v2x2: Vec<Vec<f64>>,
    pub delta: f64,
    pub points: Vec<CodePoint>,
    #[serde(default = "default_draws")]
    pub draws: usize,
    pub p_m1: Option<Vec<f64>>,
    pub p_m2: Option<Vec<f64>>,
    #[serde(default)]
    pub save_code: bool,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EvalConfig {
    Exact,
    MonteCarlo { trials: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndToEndParams {
    #[serde(default = "default_q")]
    pub q: u32,
    pub p_v1x1: Vec<Vec<f64>>,
    pub p_v2x2: Vec<Vec<f64>>,
    pub delta: f64,
    /// Channel block length.
    pub n: usize,
    pub k: usize,
    /// Syndrome length, which is also the message length of the channel code.
    pub l: usize,
    /// Source block length.
    pub source_n: usize,
    pub eval: EvalConfig,
    #[serde(default)]
    pub save_code: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PinchingParams {
    pub joint: Vec<Vec<f64>>,
    pub states: Vec<StateSpec>,
    pub n: Vec<usize>,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveragePoint {
    pub n: usize,
    pub k: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageParams {
    #[serde(default = "default_q")]
    pub q: u32,
    pub p_v: Vec<f64>,
    pub delta: f64,
    pub trials: usize,
    pub points: Vec<CoveragePoint>,
}

fn default_policy() -> ParityPolicy {
    ParityPolicy::PerTrial
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KmParams {
    #[serde(default = "default_q")]
    pub q: u32,
    pub n: usize,
    pub l: Vec<usize>,
    pub trials: usize,
    #[serde(default = "default_policy")]
    pub policy: ParityPolicy,
}
