//! Experiment configuration: one JSON file per run, with kind-specific parameters.

use std::path::{Path, PathBuf};

use lab_core::colour::{ColourSystem, ColouredEdge, SystemRecipe};
use lab_core::cores::Core;
use lab_core::probe::{NoiseRadius, ProbeScale, DEFAULT_HYPOTHESIS_THRESHOLD};
use lab_core::rational::{serde_rational_vec_vec, Prob};
use lab_core::table::TableFunction;
use lab_core::{PatternGraph, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DEFAULT_TRIALS: u64 = 10_000;

pub const KINDS: [&str; 12] = [
    "distribution",
    "pointprob",
    "span-check",
    "gamma",
    "decompose",
    "dispersedness",
    "general-position",
    "halasz",
    "nu-gamma",
    "kappa-gamma",
    "scale-probe",
    "concentration",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub experiment: Experiment,
    pub seed: u64,
    /// Falls back to [`DEFAULT_TRIALS`] for sampling kinds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    /// Base path for the `.jsonl` and `.csv` outputs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, seed: u64, trials: Option<u64>) -> Self {
        ExperimentConfig { experiment, seed, trials, out: None }
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn kind(&self) -> &'static str {
        self.experiment.kind()
    }

    pub fn trials(&self) -> u64 {
        self.trials.unwrap_or(DEFAULT_TRIALS)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum Experiment {
    Distribution(DistributionParams),
    Pointprob(PointProbParams),
    SpanCheck(SpanCheckParams),
    Gamma(GammaParams),
    Decompose(DecomposeParams),
    Dispersedness(DispersednessParams),
    GeneralPosition(GeneralPositionParams),
    Halasz(HalaszParams),
    NuGamma(NuGammaParams),
    KappaGamma(KappaGammaParams),
    ScaleProbe(ScaleProbeParams),
    Concentration(ConcentrationParams),
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        let i = match self {
            Experiment::Distribution(_) => 0,
            Experiment::Pointprob(_) => 1,
            Experiment::SpanCheck(_) => 2,
            Experiment::Gamma(_) => 3,
            Experiment::Decompose(_) => 4,
            Experiment::Dispersedness(_) => 5,
            Experiment::GeneralPosition(_) => 6,
            Experiment::Halasz(_) => 7,
            Experiment::NuGamma(_) => 8,
            Experiment::KappaGamma(_) => 9,
            Experiment::ScaleProbe(_) => 10,
            Experiment::Concentration(_) => 11,
        };
        KINDS[i]
    }
}

/// A pattern by name (`"K3"`, `"K2+K1"`) or spelled out as `{name, n, edges}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatternSpec {
    Name(String),
    Graph(PatternGraph),
}

impl PatternSpec {
    pub fn named(name: &str) -> Self {
        PatternSpec::Name(name.to_string())
    }

    pub fn build(&self) -> CliResult<PatternGraph> {
        match self {
            PatternSpec::Name(n) => Ok(PatternGraph::by_name(n)?),
            PatternSpec::Graph(g) => Ok(g.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionParams {
    pub pattern: PatternSpec,
    pub n: usize,
    pub p: Prob,
    /// Largest `C(n, 2)` enumerated exhaustively.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointProbParams {
    pub pattern: PatternSpec,
    pub ns: Vec<usize>,
    pub p: Prob,
}

/// Cores built from their coloured part, with the uncoloured apex added automatically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoreSpec {
    /// Coloured vertices `a` (colour by colour), shades `t` with `t_g = 1`, and the edges
    /// `(u, v, colour, shade)` among them.
    Coloured { a: Vec<usize>, t: Vec<usize>, edges: Vec<(usize, usize, usize, usize)> },
    /// The extended core of the coloured system `(a, t, edges)`: one new top-colour vertex per
    /// adjacency pattern.
    Extended { a: Vec<usize>, t: Vec<usize>, edges: Vec<(usize, usize, usize, usize)> },
    Explicit(Core),
    /// Every complete core with `g <= g_max` (at most 2) and one lower colour with
    /// `a_1 <= a1_max`, `t_1 <= t1_max`, over all edge sets inside colour 1.
    Sweep { g_max: usize, a1_max: usize, t1_max: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanCheckParams {
    pub cores: Vec<CoreSpec>,
    pub patterns: Vec<PatternSpec>,
    pub p: Prob,
    /// Also express Γ of every downward tree through the basis and check the evaluation.
    #[serde(default)]
    pub certificates: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    pub core: CoreSpec,
    pub pattern: PatternSpec,
    pub edges: Vec<ColouredEdge>,
    pub p: Prob,
}

/// Fixture `i` is built from `system` with its seed replaced by `derive_seed(seed, "fixture", i)`
/// and `n_min + i mod (n_max - n_min + 1)` uncoloured vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureSweep {
    pub system: SystemRecipe,
    pub n_min: usize,
    pub n_max: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposeParams {
    pub fixtures: FixtureSweep,
    pub pattern: PatternSpec,
    /// Number of fixtures on which the identity must be checked; fixtures with an
    /// unrepresented pattern are skipped and replaced.
    pub count: usize,
    pub p: Prob,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersednessParams {
    pub system: SystemRecipe,
    pub pattern: PatternSpec,
    pub p: Prob,
    pub q: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralPositionParams {
    pub system: SystemRecipe,
    pub p: Prob,
    /// Defaults to `3^g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CubeSpec {
    /// `f(ξ) = Σ_j v_j Σ_{i ∈ I_j} ξ_i` on `n` coordinates.
    Blocks { n: usize },
    Linear { coefficients: Vec<Vec<f64>>, offset: Vec<f64> },
    Constant { n: usize, value: Vec<f64> },
    /// `X_H` of the graph on `n` vertices whose edges are the coordinates.
    Subgraph { pattern: PatternSpec, n: usize },
}

fn default_threshold() -> f64 {
    DEFAULT_HYPOTHESIS_THRESHOLD
}

fn default_coordinates() -> usize {
    4
}

fn default_hypothesis_trials() -> u64 {
    200
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalaszCase {
    pub function: CubeSpec,
    #[serde(with = "serde_rational_vec_vec")]
    pub directions: Vec<Vec<Rational>>,
    /// Defaults to `d` equal contiguous blocks of the coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<Vec<usize>>>,
    pub epsilon: f64,
    pub s: f64,
    pub r: NoiseRadius,
    pub x: Vec<f64>,
    pub p: Prob,
    #[serde(default = "default_threshold")]
    pub hypothesis_threshold: f64,
    #[serde(default = "default_coordinates")]
    pub hypothesis_coordinates: usize,
    #[serde(default = "default_hypothesis_trials")]
    pub hypothesis_trials: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalaszParams {
    pub cases: Vec<HalaszCase>,
    /// Largest allowed spread of the fitted constants across the cases.
    #[serde(default = "default_scaling_factor")]
    pub scaling_factor: f64,
}

fn default_scaling_factor() -> f64 {
    3.0
}

fn default_slack() -> f64 {
    2.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NuGammaParams {
    /// A restricted recipe; the fixture seed and uncoloured count are set per fixture.
    pub system: SystemRecipe,
    pub ns: Vec<usize>,
    pub fixtures: usize,
    pub pattern: PatternSpec,
    pub p: Prob,
    /// The constant is fitted at the first `n`; later sizes must stay within `slack` times it.
    #[serde(default = "default_slack")]
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaGammaParams {
    /// A system with `g - 1` colours.
    pub system: SystemRecipe,
    pub pattern: PatternSpec,
    pub p: Prob,
    /// Default: the lowest vertex of `U*`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<usize>,
    /// Default: the lowest other uncoloured vertex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaSpec {
    Table(TableFunction<Rational>),
    /// `μ_G`, rounded to the nearest integer.
    MuAverage,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleProbeParams {
    /// Restricted for the medium scale; `g - 1` colours for the rough scale.
    pub system: SystemRecipe,
    pub scale: ProbeScale,
    pub pattern: PatternSpec,
    pub p: Prob,
    pub lambda: LambdaSpec,
}

fn both_scales() -> Vec<ProbeScale> {
    vec![ProbeScale::Medium, ProbeScale::Rough]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationParams {
    pub system: SystemRecipe,
    pub pattern: PatternSpec,
    pub p: Prob,
    #[serde(default = "both_scales")]
    pub scales: Vec<ProbeScale>,
}

/// A coloured system on the listed coloured vertices only, edges given as `(u, v, colour, shade)`.
pub fn coloured_system(a: &[usize], t: &[usize], edges: &[(usize, usize, usize, usize)]) -> CliResult<ColourSystem> {
    let params = lab_core::colour::ColourParams::new(a.to_vec(), t.to_vec())?;
    let mut colours = Vec::new();
    for (i, &ai) in a.iter().enumerate() {
        colours.extend(std::iter::repeat_n(lab_core::colour::VertexColour::Colour(i + 1), ai));
    }
    let edges = edges.iter().map(|&(u, v, c, s)| ColouredEdge::new(u, v, c, s)).collect();
    Ok(ColourSystem::new_valid(params, colours, edges)?)
}
