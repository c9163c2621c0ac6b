//! Seeded generators for colour systems used by tests, benchmarks and the CLI.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::extension::RestrictedColourSystem;
use super::system::{ColourParams, ColourSystem, ColouredEdge, VertexColour};
use crate::error::{LabError, Result};
use crate::graph::coin;
use crate::rational::Prob;
use crate::seed::rng_from_seed;

/// Recipe for a seeded colour system. Coloured vertices come first (colour by colour),
/// followed by `uncoloured` uncoloured vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemRecipe {
    pub a: Vec<usize>,
    pub t: Vec<usize>,
    pub uncoloured: usize,
    /// Probability of each (coloured vertex, shade, uncoloured vertex) edge.
    pub p: Prob,
    pub seed: u64,
    /// Give the `k`-th vertex of each colour the `k mod 2^m`-th pattern towards earlier
    /// colours, which makes the system complete when every `a_i` is large enough.
    #[serde(default)]
    pub complete: bool,
    /// Make the top colour restricted: one shade and no edges to uncoloured vertices.
    #[serde(default)]
    pub restricted: bool,
}

impl SystemRecipe {
    pub fn build(&self) -> Result<ColourSystem> {
        let params = ColourParams::new(self.a.clone(), self.t.clone())?;
        let g = params.g;
        if self.restricted && (g == 0 || params.shades(g) != 1) {
            return Err(LabError::invalid("a restricted recipe needs g >= 1 and t_g = 1"));
        }
        let mut rng = rng_from_seed(self.seed);
        let mut colours = Vec::new();
        for i in 1..=g {
            colours.extend(std::iter::repeat_n(VertexColour::Colour(i), params.count(i)));
        }
        let coloured = colours.len();
        colours.extend(std::iter::repeat_n(VertexColour::Uncoloured, self.uncoloured));
        let mut edges = Vec::new();
        // Between coloured vertices.
        let mut start = 0;
        for i in 1..=g {
            let members: Vec<usize> = (start..start + params.count(i)).collect();
            let earlier: Vec<usize> = (0..start).collect();
            let width: usize = (1..i).map(|j| params.count(j) * params.shades(j)).sum();
            if self.complete && width >= 63 {
                return Err(LabError::capacity("complete recipe", format!("2^{width} patterns"), "2^62"));
            }
            for (k, &w) in members.iter().enumerate() {
                let pattern = if self.complete { (k as u64) % (1u64 << width) } else { rng.gen::<u64>() };
                let mut bit = 0;
                for &x in &earlier {
                    let c = colours[x].colour().expect("coloured");
                    for s in 1..=params.shades(c) {
                        if pattern >> bit & 1 == 1 {
                            edges.push(ColouredEdge::new(x, w, c, s));
                        }
                        bit += 1;
                    }
                }
            }
            for (k, &x) in members.iter().enumerate() {
                for &y in &members[k + 1..] {
                    for s in 1..=params.shades(i) {
                        if rng.gen::<bool>() {
                            edges.push(ColouredEdge::new(x, y, i, s));
                        }
                    }
                }
            }
            start += params.count(i);
        }
        // Coloured to uncoloured.
        for x in 0..coloured {
            let c = colours[x].colour().expect("coloured");
            if self.restricted && c == g {
                continue;
            }
            for s in 1..=params.shades(c) {
                for u in coloured..colours.len() {
                    if coin(self.p, &mut rng) {
                        edges.push(ColouredEdge::new(x, u, c, s));
                    }
                }
            }
        }
        ColourSystem::new_valid(params, colours, edges)
    }

    pub fn build_restricted(&self) -> Result<RestrictedColourSystem> {
        if !self.restricted {
            return Err(LabError::invalid("recipe is not marked restricted"));
        }
        RestrictedColourSystem::new(self.build()?)
    }
}
