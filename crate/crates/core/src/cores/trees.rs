//! Downward trees and the recursive certificates expressing Γ_F through the Γ_e, e ∈ E^g.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::core::Core;
use super::gamma::{gamma_from_placements, placements, GammaVector};
use crate::colour::{ColouredEdge, VertexColour};
use crate::error::{LabError, Result};
use crate::graph::PatternGraph;
use crate::rational::{Prob, Rational};

/// Edges of colours `g-b+1..g`, one each, forming a tree with the uncoloured vertex as a leaf.
/// Stored in increasing colour order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DownwardTree {
    pub edges: Vec<ColouredEdge>,
}

impl DownwardTree {
    /// Checks the tree against the core and sorts its edges by colour.
    pub fn new(core: &Core, mut edges: Vec<ColouredEdge>) -> Result<Self> {
        edges = edges.into_iter().map(|e| ColouredEdge::new(e.u, e.v, e.colour, e.shade)).collect();
        edges.sort_by_key(|e| (e.colour, e.u, e.v, e.shade));
        let t = DownwardTree { edges };
        t.check(core)?;
        Ok(t)
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// The vertex of colour `i` in the tree, if any.
    pub fn vertex_of_colour(&self, core: &Core, i: usize) -> Option<usize> {
        self.vertices()
            .into_iter()
            .find(|&v| core.system().colour_of(v) == VertexColour::Colour(i))
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.edges.iter().flat_map(|e| [e.u, e.v]).collect()
    }

    /// Every structural requirement, including the leaf conditions of the structure lemma.
    pub fn check(&self, core: &Core) -> Result<()> {
        let bad = |why: &str| Err(LabError::invalid(format!("not a downward tree: {why}")));
        let cs = core.system();
        let g = core.g();
        let b = self.size();
        if b == 0 || b > g {
            return bad("size must lie in 1..=g");
        }
        for e in &self.edges {
            if !core.has_edge(e) {
                return bad("edge outside the core");
            }
        }
        let colours: Vec<usize> = self.edges.iter().map(|e| e.colour).collect();
        if colours != ((g - b + 1)..=g).collect::<Vec<_>>() {
            return bad("edge colours must be g-b+1..g, one each");
        }
        let vs = self.vertices();
        if vs.len() != b + 1 || !vs.contains(&core.apex()) {
            return bad("must span b+1 vertices including the uncoloured vertex");
        }
        let mut tags: Vec<VertexColour> = vs.iter().map(|&v| cs.colour_of(v)).collect();
        tags.sort();
        let mut want: Vec<VertexColour> = ((g - b + 1)..=g).map(VertexColour::Colour).collect();
        want.push(VertexColour::Uncoloured);
        if tags != want {
            return bad("needs exactly one vertex of each colour g-b+1..g");
        }
        // Connected with b edges on b+1 vertices means a tree.
        let mut reached: BTreeSet<usize> = [core.apex()].into();
        loop {
            let before = reached.len();
            for e in &self.edges {
                if reached.contains(&e.u) || reached.contains(&e.v) {
                    reached.insert(e.u);
                    reached.insert(e.v);
                }
            }
            if reached.len() == before {
                break;
            }
        }
        if reached.len() != vs.len() {
            return bad("edges do not form a tree");
        }
        let degree = |v: usize| self.edges.iter().filter(|e| e.touches(v)).count();
        if degree(core.apex()) != 1 {
            return bad("uncoloured vertex must be a leaf");
        }
        let low = self.vertex_of_colour(core, g - b + 1).expect("checked above");
        if degree(low) != 1 {
            return bad("lowest-colour vertex must be a leaf");
        }
        Ok(())
    }

    /// The unique edge of the lowest colour `g-b+1`.
    pub fn lowest_edge(&self) -> ColouredEdge {
        self.edges[0]
    }

    pub fn without_lowest(&self) -> DownwardTree {
        DownwardTree { edges: self.edges[1..].to_vec() }
    }
}

/// All downward trees of size `b`, grown leaf by leaf from the top edges.
pub fn enumerate_downward_trees(core: &Core, b: usize) -> Result<Vec<DownwardTree>> {
    let g = core.g();
    if b == 0 || b > g {
        return Err(LabError::invalid(format!("tree size must lie in 1..={g}, got {b}")));
    }
    let cs = core.system();
    let mut level: Vec<DownwardTree> = core.top_edges().into_iter().map(|e| DownwardTree { edges: vec![e] }).collect();
    for size in 2..=b {
        let c = g - size + 1;
        let mut next = Vec::new();
        for t in &level {
            for w in t.vertices() {
                if w == core.apex() {
                    continue;
                }
                for e in cs.edges().iter().filter(|e| e.colour == c && e.touches(w)) {
                    let vstar = e.other(w);
                    if cs.colour_of(vstar) != VertexColour::Colour(c) {
                        continue;
                    }
                    let mut edges = vec![*e];
                    edges.extend_from_slice(&t.edges);
                    next.push(DownwardTree { edges });
                }
            }
        }
        level = next;
    }
    level.sort();
    Ok(level)
}

/// `Γ_F` as an integer combination of `Γ_e`, `e ∈ E^g`, following the recursion
/// `Γ_F = Γ_{F \ e*} - Γ_{F'}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpanCertificate {
    Basis { edge: ColouredEdge },
    Difference {
        tree: DownwardTree,
        removed: ColouredEdge,
        /// Certificate for `F \ {e*}`.
        kept: Box<SpanCertificate>,
        /// Certificate for the shifted tree `F'`.
        shifted: Box<SpanCertificate>,
    },
}

impl SpanCertificate {
    pub fn depth(&self) -> usize {
        match self {
            SpanCertificate::Basis { .. } => 1,
            SpanCertificate::Difference { kept, shifted, .. } => 1 + kept.depth().max(shifted.depth()),
        }
    }

    /// Integer coefficient of each basis edge.
    pub fn coefficients(&self) -> BTreeMap<ColouredEdge, i64> {
        let mut out = BTreeMap::new();
        self.accumulate(1, &mut out);
        out.retain(|_, c| *c != 0);
        out
    }

    fn accumulate(&self, sign: i64, out: &mut BTreeMap<ColouredEdge, i64>) {
        match self {
            SpanCertificate::Basis { edge } => *out.entry(*edge).or_insert(0) += sign,
            SpanCertificate::Difference { kept, shifted, .. } => {
                kept.accumulate(sign, out);
                shifted.accumulate(-sign, out);
            }
        }
    }

    /// `Σ coefficient · Γ_e`.
    pub fn evaluate(&self, core: &Core, h: &PatternGraph, p: Prob) -> Result<GammaVector> {
        let pls = placements(core, h)?;
        let shape = core.system().params().t.clone();
        let mut acc = GammaVector::from_fn(shape, |_| Rational::default());
        for (e, c) in self.coefficients() {
            let ge = gamma_from_placements(core, h, &pls, &[e], p);
            acc = acc.zip_with(&ge, |a, b| a + b * Rational::from_integer(c.into()))?;
        }
        Ok(acc)
    }
}

/// Builds the certificate for `F`. The witnesses `v'_i` are the lowest-index vertices meeting
/// the shade prescriptions, which exist whenever the core is complete.
pub fn express_tree_gamma(core: &Core, h: &PatternGraph, f: &DownwardTree, _p: Prob) -> Result<SpanCertificate> {
    f.check(core)?;
    if h.vertex_count() < core.g() + 1 {
        return Err(LabError::invalid("partial copies need h >= g + 1"));
    }
    certify(core, f)
}

fn certify(core: &Core, f: &DownwardTree) -> Result<SpanCertificate> {
    if f.size() == 1 {
        return Ok(SpanCertificate::Basis { edge: f.edges[0] });
    }
    let cs = core.system();
    let g = core.g();
    let c = g - f.size() + 1;
    let estar = f.lowest_edge();
    let vstar = if cs.colour_of(estar.u) == VertexColour::Colour(c) { estar.u } else { estar.v };
    let w = estar.other(vstar);
    let kept = f.without_lowest();

    let mut image: BTreeMap<usize, usize> = BTreeMap::new();
    image.insert(core.apex(), core.apex());
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    let lower: Vec<usize> = (1..=c).flat_map(|j| cs.vertices_of_colour(j)).collect();
    for i in c + 1..=g {
        let vi = kept.vertex_of_colour(core, i).expect("kept tree has one vertex per colour");
        let found = cs.vertices_of_colour(i).into_iter().find(|&x| {
            chosen.iter().all(|&(vj, vj2)| cs.shades_between(x, vj2) == cs.shades_between(vi, vj))
                && lower.iter().all(|&y| {
                    let mut want = cs.shades_between(vi, y);
                    if vi == w && y == vstar {
                        want &= !(1u64 << (estar.shade - 1));
                    }
                    cs.shades_between(x, y) == want
                })
        });
        let x = found.ok_or_else(|| {
            LabError::WitnessNotFound(format!(
                "no colour-{i} vertex realises the shifted prescription (is the core complete?)"
            ))
        })?;
        chosen.push((vi, x));
        image.insert(vi, x);
    }
    let shifted_edges = kept
        .edges
        .iter()
        .map(|e| ColouredEdge::new(image[&e.u], image[&e.v], e.colour, e.shade))
        .collect();
    let shifted = DownwardTree::new(core, shifted_edges)?;
    Ok(SpanCertificate::Difference {
        tree: f.clone(),
        removed: estar,
        kept: Box::new(certify(core, &kept)?),
        shifted: Box::new(certify(core, &shifted)?),
    })
}
