//! Splitting a colour system along one representative vertex per adjacency pattern.

use serde::{Deserialize, Serialize};

use super::extension::{apply_extension, Extension, RestrictedColourSystem};
use super::position::{adjacency_patterns, pattern_width};
use super::realize::psi_table;
use super::system::{ColourParams, ColourSystem, ColouredEdge, VertexColour};
use crate::error::{LabError, Result};
use crate::graph::{Graph, PatternGraph};
use crate::table::TableFunction;

pub const MAX_PATTERN_BITS: usize = 16;

/// For each adjacency pattern towards the coloured vertices, the uncoloured vertices having it.
pub fn pattern_classes(cs: &ColourSystem) -> Result<Vec<Vec<usize>>> {
    cs.require_valid()?;
    let m = pattern_width(cs, usize::MAX);
    if m > MAX_PATTERN_BITS {
        return Err(LabError::capacity(
            "adjacency-pattern enumeration",
            format!("2^{m} patterns"),
            format!("2^{MAX_PATTERN_BITS}"),
        ));
    }
    let u = cs.uncoloured();
    let mut classes = vec![Vec::new(); 1 << m];
    for (w, pat) in u.iter().zip(adjacency_patterns(cs, &u, usize::MAX)) {
        classes[pat as usize].push(*w);
    }
    Ok(classes)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    /// Lowest-index representative of each pattern, in pattern order.
    pub w: Vec<usize>,
    /// `G'`: W coloured g, `G0[W]` painted in the single colour-g shade.
    pub restricted: RestrictedColourSystem,
    /// `G^-`: the input with W deleted.
    pub reduced: ColourSystem,
    /// `S_v = N_{G0}(v) ∩ (U \ W)` for each `v` in W.
    pub extension: Extension,
    /// `G0^- = G0[U \ W]`.
    pub g0_reduced: Graph,
    pub lhs: TableFunction<u64>,
    pub rhs_restricted: TableFunction<u64>,
    pub rhs_reduced: TableFunction<u64>,
    pub identity_holds: bool,
}

/// Builds `W`, `G'`, `G^-`, the extension and `G0^-` for a system with `g-1` colours, then
/// checks `ψ(G, G0, ·) = ψ(G'_S, G0^-, ·, 1) + ψ(G^-, G0^-, ·)` exactly.
pub fn decompose(cs: &ColourSystem, g0: &Graph, h: &PatternGraph) -> Result<Decomposition> {
    let uncoloured = cs.uncoloured();
    if g0.order() != uncoloured.len() {
        return Err(LabError::VertexSetMismatch { expected: uncoloured.len(), got: g0.order() });
    }
    let classes = pattern_classes(cs)?;
    let mut w = Vec::with_capacity(classes.len());
    for (pat, class) in classes.iter().enumerate() {
        match class.first() {
            Some(&v) => w.push(v),
            None => return Err(LabError::PatternNotRepresented { pattern: pat as u64 }),
        }
    }
    let gm1 = cs.g();
    let g = gm1 + 1;
    let in_w = |x: usize| w.contains(&x);
    let pos_in_u: std::collections::HashMap<usize, usize> =
        uncoloured.iter().enumerate().map(|(i, &x)| (x, i)).collect();

    // G': colour W with colour g and paint G0[W].
    let mut a = cs.params().a.clone();
    let mut t = cs.params().t.clone();
    a.push(w.len());
    t.push(1);
    let params = ColourParams::new(a, t)?;
    let mut colours = cs.colours().to_vec();
    for &x in &w {
        colours[x] = VertexColour::Colour(g);
    }
    let mut edges = cs.edges().to_vec();
    for (i, &x) in w.iter().enumerate() {
        for &y in &w[i + 1..] {
            if g0.has_edge(pos_in_u[&x], pos_in_u[&y]) {
                edges.push(ColouredEdge::new(x, y, g, 1));
            }
        }
    }
    let restricted = RestrictedColourSystem::new(ColourSystem::new(params, colours, edges)?)?;

    let rest: Vec<usize> = uncoloured.iter().copied().filter(|&x| !in_w(x)).collect();
    let extension = Extension {
        sets: w
            .iter()
            .map(|&x| {
                let mut s: Vec<usize> = rest.iter().copied().filter(|&y| g0.has_edge(pos_in_u[&x], pos_in_u[&y])).collect();
                s.sort_unstable();
                (x, s)
            })
            .collect(),
    };
    let mut ext_sorted = extension.clone();
    ext_sorted.sets.sort_by_key(|(v, _)| *v);
    let extended = apply_extension(&restricted, &ext_sorted)?;

    let reduced = cs.delete_vertices(&w, cs.params().clone())?;
    let g0_reduced = g0.induced(&rest.iter().map(|x| pos_in_u[x]).collect::<Vec<_>>());

    let lhs = psi_table(h, cs, g0)?;
    let rhs_restricted = psi_table(h, &extended, &g0_reduced)?;
    let rhs_reduced = psi_table(h, &reduced, &g0_reduced)?;
    // ψ(G'_S, ·, 1) has shape (t_1..t_{g-1}, 1), so its entries align with ψ(G, ·).
    let identity_holds = lhs.entries().len() == rhs_restricted.entries().len()
        && lhs
            .entries()
            .iter()
            .zip(rhs_restricted.entries())
            .zip(rhs_reduced.entries())
            .all(|((l, a), b)| *l == a + b);
    Ok(Decomposition {
        w,
        restricted,
        reduced,
        extension: ext_sorted,
        g0_reduced,
        lhs,
        rhs_restricted,
        rhs_reduced,
        identity_holds,
    })
}
