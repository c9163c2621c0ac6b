//! Restricted colour systems, random-neighbourhood extensions, and dispersedness.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::position::{classify_generality, is_complete, Generality};
use super::realize::psi_table;
use super::system::{ColourParams, ColourSystem, ColouredEdge, VertexColour};
use crate::error::{LabError, Result};
use crate::graph::{coin, Graph, PatternGraph};
use crate::rational::Prob;
use crate::seed::{rng_from_seed, trial_rng, LabRng};
use crate::stats::EstimationResult;
use crate::table::TableFunction;

/// A valid colour system with `g >= 1`, `t_g = 1`, and no colour-g edge between a coloured
/// and an uncoloured vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ColourSystem", into = "ColourSystem")]
pub struct RestrictedColourSystem {
    inner: ColourSystem,
}

impl TryFrom<ColourSystem> for RestrictedColourSystem {
    type Error = LabError;

    fn try_from(cs: ColourSystem) -> Result<Self> {
        RestrictedColourSystem::new(cs)
    }
}

impl From<RestrictedColourSystem> for ColourSystem {
    fn from(r: RestrictedColourSystem) -> Self {
        r.inner
    }
}

impl RestrictedColourSystem {
    pub fn new(cs: ColourSystem) -> Result<Self> {
        cs.require_valid()?;
        let g = cs.g();
        if g == 0 {
            return Err(LabError::invalid("a restricted colour system needs g >= 1"));
        }
        if cs.params().shades(g) != 1 {
            return Err(LabError::invalid("a restricted colour system needs t_g = 1"));
        }
        if let Some(e) = cs
            .edges()
            .iter()
            .find(|e| e.colour == g && (!cs.colour_of(e.u).is_coloured() || !cs.colour_of(e.v).is_coloured()))
        {
            return Err(LabError::invalid(format!("colour-g edge {e} touches an uncoloured vertex")));
        }
        Ok(RestrictedColourSystem { inner: cs })
    }

    pub fn system(&self) -> &ColourSystem {
        &self.inner
    }

    pub fn g(&self) -> usize {
        self.inner.g()
    }

    /// The system with parameters `(g-1, ...)` obtained by deleting the colour-g vertices.
    pub fn ignoring_top_colour(&self) -> ColourSystem {
        let g = self.g();
        let p = self.inner.params();
        let params = ColourParams { g: g - 1, a: p.a[..g - 1].to_vec(), t: p.t[..g - 1].to_vec() };
        self.inner
            .delete_vertices(&self.inner.vertices_of_colour(g), params)
            .expect("deleting a colour class keeps endpoints in range")
    }

    /// Generality of the system obtained by ignoring colour g.
    pub fn essential_generality(&self, p: Prob) -> Result<Generality> {
        classify_generality(&self.ignoring_top_colour(), p)
    }

    pub fn is_complete(&self) -> Result<bool> {
        is_complete(&self.inner)
    }
}

/// `S_v ⊆ U(G)` for each colour-g vertex `v`, in increasing order of `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    pub sets: Vec<(usize, Vec<usize>)>,
}

impl Extension {
    pub fn set_of(&self, v: usize) -> Option<&[usize]> {
        self.sets.iter().find(|(x, _)| *x == v).map(|(_, s)| s.as_slice())
    }

    pub fn with_member(&self, v: usize, u: usize, present: bool) -> Extension {
        let sets = self
            .sets
            .iter()
            .map(|(x, s)| {
                if *x != v {
                    return (*x, s.clone());
                }
                let mut s: Vec<usize> = s.iter().copied().filter(|&y| y != u).collect();
                if present {
                    s.push(u);
                    s.sort_unstable();
                }
                (*x, s)
            })
            .collect();
        Extension { sets }
    }
}

/// Adds a shade-1 colour-g edge from every colour-g vertex `v` to each member of `S_v`.
pub fn apply_extension(rcs: &RestrictedColourSystem, ext: &Extension) -> Result<ColourSystem> {
    let cs = rcs.system();
    let g = cs.g();
    let top = cs.vertices_of_colour(g);
    if ext.sets.len() != top.len() || ext.sets.iter().zip(&top).any(|((v, _), w)| v != w) {
        return Err(LabError::invalid("extension domain must be exactly the colour-g vertices in order"));
    }
    let mut edges = cs.edges().to_vec();
    for (v, s) in &ext.sets {
        for &u in s {
            if u >= cs.order() || cs.colour_of(u) != VertexColour::Uncoloured {
                return Err(LabError::invalid(format!("extension member {u} is not uncoloured")));
            }
            edges.push(ColouredEdge::new(*v, u, g, 1));
        }
    }
    Ok(ColourSystem::with_parts(cs.params().clone(), cs.colours().to_vec(), edges))
}

pub fn sample_extension_with(rcs: &RestrictedColourSystem, p: Prob, rng: &mut LabRng) -> Extension {
    let cs = rcs.system();
    let u = cs.uncoloured();
    let sets = cs
        .vertices_of_colour(cs.g())
        .into_iter()
        .map(|v| (v, u.iter().copied().filter(|_| coin(p, rng)).collect()))
        .collect();
    Extension { sets }
}

/// Independent `p`-coins over `U(G)` for each colour-g vertex in increasing order.
pub fn extend_restricted(rcs: &RestrictedColourSystem, p: Prob, seed: u64) -> Result<(Extension, ColourSystem)> {
    let ext = sample_extension_with(rcs, p, &mut rng_from_seed(seed));
    let cs = apply_extension(rcs, &ext)?;
    Ok((ext, cs))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersednessQuery {
    pub q: f64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersednessReport {
    pub max_frequency: EstimationResult,
    pub attaining: TableFunction<u64>,
    pub distinct_tables: usize,
    pub dispersed: bool,
    pub warnings: Vec<String>,
}

/// Precondition warnings shared by the probes over restricted systems.
pub fn restricted_warnings(rcs: &RestrictedColourSystem, p: Prob) -> Result<Vec<String>> {
    let mut w = Vec::new();
    if rcs.essential_generality(p)? != Generality::PGeneral {
        w.push("system is not essentially p-general".to_string());
    }
    if !rcs.is_complete()? {
        w.push("system is not complete".to_string());
    }
    Ok(w)
}

/// Samples `trials` extensions (trial `t` seeded by `derive_seed(seed, "extension", t)`),
/// tallies ψ-tables, and reports the most frequent one (ties to the smallest table).
pub fn dispersedness_estimate(
    rcs: &RestrictedColourSystem,
    g0: &Graph,
    h: &PatternGraph,
    p: Prob,
    query: DispersednessQuery,
) -> Result<DispersednessReport> {
    if !(query.q > 0.0 && query.q <= 1.0) {
        return Err(LabError::invalid("dispersedness threshold q must lie in (0, 1]"));
    }
    if query.trials == 0 {
        return Err(LabError::invalid("dispersedness needs trials >= 1"));
    }
    let warnings = restricted_warnings(rcs, p)?;
    // Surface shape and budget errors before sampling.
    psi_table(h, rcs.system(), g0)?;
    let tally: HashMap<Vec<u64>, u64> = (0..query.trials)
        .into_par_iter()
        .map(|t| {
            let ext = sample_extension_with(rcs, p, &mut trial_rng(query.seed, "extension", t));
            let cs = apply_extension(rcs, &ext).expect("sampled extension is well-formed");
            psi_table(h, &cs, g0).expect("checked above").entries().to_vec()
        })
        .fold(HashMap::new, |mut acc, table| {
            *acc.entry(table).or_insert(0) += 1;
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let distinct_tables = tally.len();
    let (best, hits) = tally
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
        .expect("at least one trial");
    let max_frequency = EstimationResult::from_counts(hits, query.trials, query.seed);
    let dispersed = max_frequency.estimate + max_frequency.half_width() <= query.q;
    Ok(DispersednessReport {
        attaining: TableFunction::new(rcs.system().params().t.clone(), best)?,
        max_frequency,
        distinct_tables,
        dispersed,
        warnings,
    })
}
