//! Small-ball bound harness for almost-linear functions on the Bernoulli cube.

use serde::{Deserialize, Serialize};

use super::cube::{delta_profile, small_ball_estimate, CubeFunction, DeltaProfile};
use crate::error::{LabError, Result};
use crate::linalg::rational_rank;
use crate::rational::{to_f64, Prob, Rational};
use crate::stats::EstimationResult;

pub const DEFAULT_HYPOTHESIS_THRESHOLD: f64 = 1e-3;
pub const HYPOTHESIS_NOTE: &str =
    "hypothesis checked against a configurable frequency threshold; the asymptotic deviation bound cannot be certified by sampling";

/// Noise radius `r`. `ScaleMultiple(ρ)` means `r = ρ·s/√(N ln N)`, which makes the ball
/// radius `r·√(N ln N)` exactly `ρ·s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NoiseRadius {
    Absolute(f64),
    ScaleMultiple {
        scale_multiple: f64,
    },
}

impl NoiseRadius {
    pub fn r(&self, n: usize, s: f64) -> f64 {
        match *self {
            NoiseRadius::Absolute(r) => r,
            NoiseRadius::ScaleMultiple { scale_multiple } => scale_multiple * s / log_scale(n),
        }
    }

    pub fn ball_radius(&self, n: usize, s: f64) -> f64 {
        match *self {
            NoiseRadius::Absolute(r) => r * log_scale(n),
            NoiseRadius::ScaleMultiple { scale_multiple } => scale_multiple * s,
        }
    }
}

fn log_scale(n: usize) -> f64 {
    let n = n as f64;
    (n * n.ln()).sqrt()
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
pub struct HalaszConfig {
    #[serde(with = "crate::rational::serde_rational_vec_vec")]
    pub directions: Vec<Vec<Rational>>,
    pub classes: Vec<Vec<usize>>,
    pub epsilon: f64,
    pub s: f64,
    pub r: NoiseRadius,
    pub x: Vec<f64>,
    pub p: Prob,
    pub trials: u64,
    pub seed: u64,
    #[serde(default = "default_threshold")]
    pub hypothesis_threshold: f64,
    /// Coordinates probed per class, evenly spaced through the class.
    #[serde(default = "default_coordinates")]
    pub hypothesis_coordinates: usize,
    #[serde(default = "default_hypothesis_trials")]
    pub hypothesis_trials: u64,
}

impl HalaszConfig {
    pub fn validate(&self, n: usize, d: usize) -> Result<()> {
        if self.directions.is_empty() || self.directions.len() != self.classes.len() {
            return Err(LabError::invalid("need one index class per direction vector"));
        }
        if self.directions.iter().any(|v| v.len() != d) || self.x.len() != d {
            return Err(LabError::invalid(format!("direction vectors and target must have dimension {d}")));
        }
        if rational_rank(&self.directions).rank != d {
            return Err(LabError::invalid("direction vectors do not span the output space"));
        }
        let mut seen = vec![false; n];
        for class in &self.classes {
            for &i in class {
                if i >= n {
                    return Err(LabError::invalid(format!("class index {i} out of range for N = {n}")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(LabError::invalid(format!("coordinate {i} lies in two classes")));
                }
            }
            if (class.len() as f64) < self.epsilon * n as f64 {
                return Err(LabError::invalid(format!(
                    "class of size {} is below ε·N = {}",
                    class.len(),
                    self.epsilon * n as f64
                )));
            }
        }
        if !(self.s > 0.0) {
            return Err(LabError::invalid("scale s must be positive"));
        }
        let r = self.r.r(n, self.s);
        if !(r > 0.0) {
            return Err(LabError::invalid("noise radius r must be positive"));
        }
        let ball = self.r.ball_radius(n, self.s);
        if ball < self.s {
            return Err(LabError::invalid(format!("r·√(N ln N) = {ball} is below s = {}", self.s)));
        }
        if self.trials == 0 || self.hypothesis_trials == 0 {
            return Err(LabError::invalid("trials must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub class: usize,
    pub profile: DeltaProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalaszReport {
    pub n: usize,
    pub d: usize,
    pub r: f64,
    pub radius: f64,
    pub small_ball: EstimationResult,
    /// `(r√(ln N)/s)^d`.
    pub bound_shape: f64,
    pub fitted_c: f64,
    pub hypothesis: Vec<HypothesisCheck>,
    pub max_violation_frequency: f64,
    pub hypothesis_threshold: f64,
    pub hypothesis_ok: bool,
    pub note: String,
    pub warnings: Vec<String>,
}

pub fn halasz_report<F: CubeFunction + ?Sized>(f: &F, cfg: &HalaszConfig) -> Result<HalaszReport> {
    let n = f.dim();
    let d = f.out_dim();
    cfg.validate(n, d)?;
    let r = cfg.r.r(n, cfg.s);
    let radius = cfg.r.ball_radius(n, cfg.s);

    let mut hypothesis = Vec::new();
    for (j, (class, dir)) in cfg.classes.iter().zip(&cfg.directions).enumerate() {
        let v: Vec<f64> = dir.iter().map(to_f64).collect();
        let picks = cfg.hypothesis_coordinates.min(class.len());
        for k in 0..picks {
            let i = class[k * class.len() / picks];
            let profile = delta_profile(f, i, cfg.p, cfg.hypothesis_trials, cfg.seed, cfg.s, &v, r);
            hypothesis.push(HypothesisCheck { class: j, profile });
        }
    }
    let max_violation_frequency =
        hypothesis.iter().map(|h| h.profile.deviation.estimate).fold(0.0, f64::max);
    let hypothesis_ok = max_violation_frequency <= cfg.hypothesis_threshold;
    let mut warnings = Vec::new();
    if !hypothesis_ok {
        warnings.push(format!(
            "hypothesis violation: delta deviation frequency {max_violation_frequency} exceeds threshold {}",
            cfg.hypothesis_threshold
        ));
    }

    let small_ball = small_ball_estimate(f, &cfg.x, radius, cfg.p, cfg.trials, cfg.seed);
    let bound_shape = (r * (n as f64).ln().sqrt() / cfg.s).powi(d as i32);
    let fitted_c = small_ball.estimate / bound_shape;
    Ok(HalaszReport {
        n,
        d,
        r,
        radius,
        small_ball,
        bound_shape,
        fitted_c,
        hypothesis,
        max_violation_frequency,
        hypothesis_threshold: cfg.hypothesis_threshold,
        hypothesis_ok,
        note: HYPOTHESIS_NOTE.to_string(),
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingVerdict {
    pub fitted_c: Vec<f64>,
    /// `max c / min c`; infinite when some fitted c is zero.
    pub spread: f64,
    pub bounded: bool,
}

/// Whether the fitted constants stay within `factor` of each other across a sweep.
pub fn scaling_verdict(reports: &[HalaszReport], factor: f64) -> ScalingVerdict {
    let fitted_c: Vec<f64> = reports.iter().map(|r| r.fitted_c).collect();
    let max = fitted_c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = fitted_c.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if min > 0.0 { max / min } else { f64::INFINITY };
    ScalingVerdict { fitted_c, spread, bounded: spread <= factor }
}
