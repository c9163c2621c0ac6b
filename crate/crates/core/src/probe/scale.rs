//! Concentration and anticoncentration probes at the medium and rough scales, and the
//! consistency checks of ν and κ against Γ.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::expectation::{exact_mu, exact_nu, mu_average};
use crate::colour::{
    adjacency_pattern, apply_extension, classify_generality, kappa_table, pattern_width, psi_table,
    sample_extension_with, ColourSystem, ColouredEdge, Generality, RestrictedColourSystem, VertexColour,
};
use crate::cores::{core_of_restricted, gamma, u_partition};
use crate::error::{LabError, Result};
use crate::graph::{sample_gnp_with, PatternGraph};
use crate::rational::{int, rational_pow, to_f64, Prob, Rational};
use crate::seed::trial_rng;
use crate::stats::EstimationResult;
use crate::table::TableFunction;

/// `n^e · ln n` for a half-integer exponent given as `2e`.
pub fn log_scale(n: usize, twice_exponent: i64) -> f64 {
    let n = n as f64;
    n.powf(twice_exponent as f64 / 2.0) * n.ln()
}

fn n_pow(n: usize, e: i64) -> Rational {
    if e >= 0 {
        rational_pow(&int(n as i64), e as usize)
    } else {
        int(1) / rational_pow(&int(n as i64), (-e) as usize)
    }
}

fn in_star(cs: &ColourSystem, u: usize, below: usize) -> bool {
    let m = pattern_width(cs, below);
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    adjacency_pattern(cs, u, below) == full
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NuGammaReport {
    pub n: usize,
    pub nu: TableFunction<Rational>,
    pub gamma: TableFunction<Rational>,
    /// `‖ν - n^{h-g-1} Γ‖_∞`, exact.
    #[serde(with = "crate::rational::serde_rational")]
    pub deviation: Rational,
    /// `n^{h-g-3/2} ln n`.
    pub scale: f64,
    pub ratio: f64,
    pub warnings: Vec<String>,
}

/// Compares ν for the pair `(u, v)` with Γ of the core at the edge from `v` to the apex.
pub fn nu_gamma_check(
    rcs: &RestrictedColourSystem,
    ext: &crate::colour::Extension,
    h: &PatternGraph,
    p: Prob,
    u: usize,
    v: usize,
) -> Result<NuGammaReport> {
    let cs = rcs.system();
    let g = rcs.g();
    if h.vertex_count() < g + 1 {
        return Err(LabError::invalid(format!("H needs at least g + 1 = {} vertices", g + 1)));
    }
    let nu = exact_nu(rcs, ext, h, p, u, v)?;
    let mut warnings = Vec::new();
    if !in_star(cs, u, g) {
        warnings.push(format!("u = {u} is not in U*: it misses some lower-colour vertex in some shade"));
    }
    let extended = apply_extension(rcs, ext)?;
    let generality = classify_generality(&extended, p)?;
    if generality != Generality::PGeneral {
        warnings.push(format!("the extended system is not p-general ({generality:?})"));
    }
    let core = core_of_restricted(rcs)?;
    let vi = cs.coloured_order().iter().position(|&c| c == v).expect("v is coloured");
    let e = ColouredEdge::new(vi, core.apex(), g, 1);
    let gamma = gamma(&core, h, &[e], p)?;

    let n = cs.order();
    let exp = h.vertex_count() as i64 - g as i64 - 1;
    let scaled = gamma.map(|x| x * n_pow(n, exp));
    let deviation = nu.sup_distance(&scaled)?;
    let scale = log_scale(n, 2 * exp - 1);
    let ratio = to_f64(&deviation) / scale;
    Ok(NuGammaReport { n, nu, gamma, deviation, scale, ratio, warnings })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaGammaReport {
    pub n: usize,
    /// Index into the `E^g` edges of the extended core, in pattern order.
    pub edge: usize,
    pub gamma: TableFunction<Rational>,
    pub scale: f64,
    /// One ratio per trial, in trial order.
    pub ratios: Vec<f64>,
    pub median: f64,
    pub mean: f64,
    pub max: f64,
    pub warnings: Vec<String>,
}

/// Samples `G0` and compares κ for `(u, v)` with `n^{h-g-1} Γ_{C,e}(·, 1)`, where `cs` has
/// `g-1` colours and `e` is the top edge of the extended core for the class of `v`.
pub fn kappa_gamma_check(
    cs: &ColourSystem,
    h: &PatternGraph,
    p: Prob,
    u: usize,
    v: usize,
    trials: u64,
    seed: u64,
) -> Result<KappaGammaReport> {
    cs.require_valid()?;
    if u == v {
        return Err(LabError::invalid("kappa_gamma_check needs u != v"));
    }
    for w in [u, v] {
        if w >= cs.order() || cs.colour_of(w) != VertexColour::Uncoloured {
            return Err(LabError::invalid(format!("{w} is not an uncoloured vertex")));
        }
    }
    let g = cs.g() + 1;
    if h.vertex_count() < g + 1 {
        return Err(LabError::invalid(format!("H needs at least g + 1 = {} vertices", g + 1)));
    }
    let part = u_partition(cs)?;
    let mut warnings = Vec::new();
    if !part.star_class().contains(&u) {
        warnings.push(format!("u = {u} is not in U*"));
    }
    let edge = part.classes.iter().position(|(_, members)| members.contains(&v)).expect("partition covers U");
    let e = part.classes[edge].0;
    let gamma_full = gamma(&part.core, h, &[e], p)?;
    // drop the trailing t_g = 1 coordinate
    let gamma = TableFunction::from_fn(cs.params().t.clone(), |j| {
        let mut k = j.to_vec();
        k.push(1);
        gamma_full.get(&k).expect("shade tuple in range").clone()
    });

    let n = cs.order();
    let exp = h.vertex_count() as i64 - g as i64 - 1;
    let target = gamma.map(|x| x * n_pow(n, exp));
    let scale = log_scale(n, 2 * exp - 1);
    let uncoloured = cs.uncoloured();
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let g0 = sample_gnp_with(uncoloured.len(), p, &mut trial_rng(seed, "g0", t));
            let kappa = kappa_table(h, cs, &g0, u, v)?.to_rational();
            Ok(to_f64(&kappa.sup_distance(&target)?) / scale)
        })
        .collect::<Result<_>>()?;
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.is_empty() {
        0.0
    } else if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2]) / 2.0
    };
    let mean = ratios.iter().sum::<f64>() / ratios.len().max(1) as f64;
    let max = sorted.last().copied().unwrap_or(0.0);
    Ok(KappaGammaReport { n, edge, gamma, scale, ratios, median, mean, max, warnings })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeScale {
    /// `n^{h-g-1} ln n` around `μ_{G,S}`, randomness over `(S, G0)`.
    Medium,
    /// `n^{h-g-1/2} ln n` around `μ_G`, randomness over `(S, G0)`.
    Rough,
}

impl ProbeScale {
    fn twice_exponent(self, h: usize, g: usize) -> i64 {
        let base = 2 * (h as i64 - g as i64);
        match self {
            ProbeScale::Medium => base - 2,
            ProbeScale::Rough => base - 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub n: usize,
    pub scale: ProbeScale,
    pub threshold: f64,
    /// Frequency of `‖ψ - target‖_∞ > threshold`.
    pub violations: EstimationResult,
    pub max_ratio: f64,
}

pub fn concentration_probe(
    rcs: &RestrictedColourSystem,
    h: &PatternGraph,
    p: Prob,
    scale: ProbeScale,
    trials: u64,
    seed: u64,
) -> Result<ConcentrationReport> {
    let cs = rcs.system();
    let n = cs.order();
    let threshold = log_scale(n, scale.twice_exponent(h.vertex_count(), rcs.g()));
    let average = match scale {
        ProbeScale::Rough => Some(mu_average(rcs, h, p)?),
        ProbeScale::Medium => None,
    };
    let u_count = cs.uncoloured().len();
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let ext = sample_extension_with(rcs, p, &mut trial_rng(seed, "extension", t));
            let g0 = sample_gnp_with(u_count, p, &mut trial_rng(seed, "g0", t));
            let extended = apply_extension(rcs, &ext)?;
            let psi = psi_table(h, &extended, &g0)?.to_rational();
            let target = match &average {
                Some(mu) => mu.clone(),
                None => exact_mu(rcs, &ext, h, p)?,
            };
            Ok(to_f64(&psi.sup_distance(&target)?) / threshold)
        })
        .collect::<Result<_>>()?;
    let hits = ratios.iter().filter(|&&r| r > 1.0).count() as u64;
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(ConcentrationReport {
        n,
        scale,
        threshold,
        violations: EstimationResult::from_counts(hits, trials, seed),
        max_ratio,
    })
}

/// The system a scale probe runs on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScaleProbeSystem {
    /// Randomness over the extension; the target is `μ_{G,S}`.
    Medium(RestrictedColourSystem),
    /// A system with `g-1` colours; randomness over `G0`, the target is ψ.
    Rough(ColourSystem),
}

/// Estimates `Pr(‖target - λ‖_∞ <= n^e ln n)` with `e = h-g-1` (medium) or `h-g-1/2` (rough).
pub fn scale_probe(
    system: &ScaleProbeSystem,
    h: &PatternGraph,
    p: Prob,
    lambda: &TableFunction<Rational>,
    trials: u64,
    seed: u64,
) -> Result<EstimationResult> {
    let (cs, g, scale) = match system {
        ScaleProbeSystem::Medium(rcs) => (rcs.system(), rcs.g(), ProbeScale::Medium),
        ScaleProbeSystem::Rough(cs) => (cs, cs.g() + 1, ProbeScale::Rough),
    };
    if lambda.shape() != cs.params().t.as_slice() {
        return Err(LabError::invalid(format!(
            "λ has shape {:?}, the system has shades {:?}",
            lambda.shape(),
            cs.params().t
        )));
    }
    let n = cs.order();
    let window = log_scale(n, scale.twice_exponent(h.vertex_count(), g));
    let u_count = cs.uncoloured().len();
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let target = match system {
                ScaleProbeSystem::Medium(rcs) => {
                    let ext = sample_extension_with(rcs, p, &mut trial_rng(seed, "extension", t));
                    exact_mu(rcs, &ext, h, p)?
                }
                ScaleProbeSystem::Rough(cs) => {
                    let g0 = sample_gnp_with(u_count, p, &mut trial_rng(seed, "g0", t));
                    psi_table(h, cs, &g0)?.to_rational()
                }
            };
            Ok(u64::from(to_f64(&target.sup_distance(lambda)?) <= window))
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    Ok(EstimationResult::from_counts(hits, trials, seed))
}
