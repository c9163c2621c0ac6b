//! Exact rank of the Γ_e vectors and constructive positivity witnesses.

use std::collections::VecDeque;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::core::Core;
use super::gamma::{gamma, gamma_from_placements, placements};
use super::trees::DownwardTree;
use crate::colour::ColouredEdge;
use crate::error::{LabError, Result};
use crate::graph::PatternGraph;
use crate::linalg::rational_rank;
use crate::rational::{serde_rational, Prob, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanRank {
    pub rank: usize,
    /// `T = t_1 ... t_{g-1}`.
    pub t: usize,
    /// Top edges whose Γ rows form a basis of the row space.
    pub basis: Vec<ColouredEdge>,
    /// Whether the connectivity and `h >= g + 1` preconditions hold, under which `rank = T`.
    pub preconditions_hold: bool,
}

/// Rank of the matrix with rows `Γ_e`, `e ∈ E^g`, by fraction-free elimination.
pub fn span_rank(core: &Core, h: &PatternGraph, p: Prob) -> Result<SpanRank> {
    if core.g() == 0 {
        return Err(LabError::invalid("span rank needs g >= 1"));
    }
    let pls = placements(core, h)?;
    let top = core.top_edges();
    let rows: Vec<Vec<Rational>> = top
        .iter()
        .map(|e| gamma_from_placements(core, h, &pls, &[*e], p).entries().to_vec())
        .collect();
    let r = rational_rank(&rows);
    Ok(SpanRank {
        rank: r.rank,
        t: core.tuple_count(),
        basis: r.pivot_rows.iter().map(|&i| top[i]).collect(),
        preconditions_hold: h.is_connected() && h.vertex_count() > core.g(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityWitness {
    pub tree: DownwardTree,
    /// Pattern vertex mapped to each tree vertex, as `(pattern vertex, core vertex)`.
    pub embedding: Vec<(usize, usize)>,
    #[serde(with = "serde_rational")]
    pub value: Rational,
}

/// Greedy `v_1..v_g` with every shade to every earlier `v_j`, a `g`-edge BFS subtree of H with
/// its last BFS vertex as the leaf `u`, the remaining vertices placed by decreasing distance
/// from `u` (ties by index), and `F` the image of the subtree.
pub fn positivity_witness(core: &Core, h: &PatternGraph, shades: &[usize], p: Prob) -> Result<PositivityWitness> {
    let g = core.g();
    if g == 0 {
        return Err(LabError::invalid("positivity witness needs g >= 1"));
    }
    if !h.is_connected() || h.vertex_count() < g + 1 {
        return Err(LabError::invalid("positivity witness needs a connected H with h >= g + 1"));
    }
    let cs = core.system();
    let mut vs: Vec<usize> = Vec::with_capacity(g);
    for i in 1..=g {
        let x = cs
            .vertices_of_colour(i)
            .into_iter()
            .find(|&x| {
                vs.iter().enumerate().all(|(j, &vj)| {
                    let full = (1u64 << cs.params().shades(j + 1)) - 1;
                    cs.shades_between(x, vj) == full
                })
            })
            .ok_or_else(|| LabError::WitnessNotFound(format!("no colour-{i} vertex fully joined to earlier choices")))?;
        vs.push(x);
    }

    // BFS prefix of g+1 vertices with parent edges.
    let mut order = vec![0usize];
    let mut parent = vec![usize::MAX; h.vertex_count()];
    let mut seen = 1u32;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for y in 0..h.vertex_count() {
            if order.len() == g + 1 {
                break;
            }
            if h.has_edge(x, y) && seen >> y & 1 == 0 {
                seen |= 1 << y;
                parent[y] = x;
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    let tree_edges: Vec<(usize, usize)> = order[1..].iter().map(|&y| (parent[y], y)).collect();
    let leaf = *order.last().expect("g >= 1");
    let mut dist = vec![usize::MAX; h.vertex_count()];
    dist[leaf] = 0;
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in &tree_edges {
            for (x, y) in [(a, b), (b, a)] {
                if dist[x] != usize::MAX && dist[y] > dist[x] + 1 {
                    dist[y] = dist[x] + 1;
                    changed = true;
                }
            }
        }
    }
    let mut rest: Vec<usize> = order.iter().copied().filter(|&x| x != leaf).collect();
    rest.sort_by_key(|&x| (std::cmp::Reverse(dist[x]), x));
    let mut phi = vec![usize::MAX; h.vertex_count()];
    phi[leaf] = core.apex();
    for (i, &x) in rest.iter().enumerate() {
        phi[x] = vs[i];
    }
    let edges = tree_edges
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (phi[a], phi[b]);
            let c = cs.colour_of(x).min(cs.colour_of(y)).colour().expect("coloured endpoint");
            ColouredEdge::new(x, y, c, shades[c - 1])
        })
        .collect();
    let tree = DownwardTree::new(core, edges)?;
    let value = gamma(core, h, &tree.edges, p)?.get(shades)?.clone();
    debug_assert!(value > Rational::zero());
    let mut embedding: Vec<(usize, usize)> = order.iter().map(|&x| (x, phi[x])).collect();
    embedding.sort();
    Ok(PositivityWitness { tree, embedding, value })
}
