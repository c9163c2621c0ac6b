//! Realised graphs `G(G0, j)` and the copy counts ψ and κ.

use super::system::ColourSystem;
use crate::error::{LabError, Result};
use crate::graph::{check_count_budget, count_meeting_unchecked, count_through_edge_unchecked, Graph, PatternGraph};
use crate::table::TableFunction;

fn check_shades(cs: &ColourSystem, shades: &[usize]) -> Result<()> {
    if shades.len() != cs.g() {
        return Err(LabError::invalid(format!(
            "shade tuple {shades:?} has length {}, expected {}",
            shades.len(),
            cs.g()
        )));
    }
    for (i, &j) in shades.iter().enumerate() {
        if j == 0 || j > cs.params().shades(i + 1) {
            return Err(LabError::invalid(format!("shade {j} of colour {} out of range", i + 1)));
        }
    }
    Ok(())
}

/// All vertices of `cs`, the edges of `g0` (indexed along `U(G)`), and for each colour `i`
/// the colour-`i` edges of shade `shades[i-1]`.
pub fn realize(cs: &ColourSystem, g0: &Graph, shades: &[usize]) -> Result<Graph> {
    check_shades(cs, shades)?;
    let u = cs.uncoloured();
    if g0.order() != u.len() {
        return Err(LabError::VertexSetMismatch { expected: u.len(), got: g0.order() });
    }
    Ok(realize_unchecked(cs, &u, g0, shades))
}

pub(crate) fn realize_unchecked(cs: &ColourSystem, uncoloured: &[usize], g0: &Graph, shades: &[usize]) -> Graph {
    let mut g = Graph::new(cs.order());
    for (a, b) in g0.edges() {
        g.add_edge(uncoloured[a], uncoloured[b]);
    }
    for e in cs.edges() {
        if shades[e.colour - 1] == e.shade {
            g.add_edge(e.u, e.v);
        }
    }
    g
}

/// Entry `j` counts labelled copies of H in `realize(cs, g0, j)` meeting every colour class.
pub fn psi_table(h: &PatternGraph, cs: &ColourSystem, g0: &Graph) -> Result<TableFunction<u64>> {
    cs.require_valid()?;
    let u = cs.uncoloured();
    if g0.order() != u.len() {
        return Err(LabError::VertexSetMismatch { expected: u.len(), got: g0.order() });
    }
    check_count_budget(cs.order(), h.vertex_count())?;
    let classes = cs.colour_classes();
    Ok(TableFunction::from_fn(cs.params().t.clone(), |j| {
        let g = realize_unchecked(cs, &u, g0, j);
        count_meeting_unchecked(h, &g, &classes, &[])
    }))
}

/// Labelled copies in `realize(cs, g0, shades) + uv` that use `uv` and meet every colour class.
pub fn kappa(h: &PatternGraph, cs: &ColourSystem, g0: &Graph, shades: &[usize], u: usize, v: usize) -> Result<u64> {
    if u == v || u >= cs.order() || v >= cs.order() {
        return Err(LabError::invalid(format!("kappa needs two distinct vertices of the system, got ({u},{v})")));
    }
    let mut g = realize(cs, g0, shades)?;
    check_count_budget(cs.order(), h.vertex_count())?;
    g.add_edge(u, v);
    Ok(count_through_edge_unchecked(h, &g, u, v, &cs.colour_classes()))
}

/// κ at every shade tuple.
pub fn kappa_table(h: &PatternGraph, cs: &ColourSystem, g0: &Graph, u: usize, v: usize) -> Result<TableFunction<u64>> {
    cs.require_valid()?;
    TableFunction::try_from_fn(cs.params().t.clone(), |j| kappa(h, cs, g0, j, u, v))
}
