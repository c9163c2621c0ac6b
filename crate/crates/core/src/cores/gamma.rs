//! Partial copies of H in a core and their weighted sums Γ.

use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::core::Core;
use crate::colour::ColouredEdge;
use crate::error::{LabError, Result};
use crate::graph::PatternGraph;
use crate::rational::{Prob, Rational};
use crate::table::{shade_tuples, TableFunction};

pub type GammaVector = TableFunction<Rational>;

/// A partial copy: `map[k]` is the pattern vertex sent to `targets[k]`; the edge map is fixed
/// by a shade tuple (each colour-i edge in shade `j_i`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialCopy {
    pub targets: Vec<usize>,
    pub map: Vec<usize>,
    /// `e(H) - e_H(V')`, the exponent of the weight `p^{e(H) - e_H(V')}`.
    pub missing_edges: usize,
}

/// Placement of `g+1` pattern vertices onto one vertex of each colour plus the apex, with
/// the per-colour shade sets its induced edges require.
pub(crate) struct Placement {
    pub copy: PartialCopy,
    /// For each induced H-edge: (colour, allowed shade mask, core pair).
    pub needs: Vec<(usize, u64, (usize, usize))>,
}

fn pair(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Every injective placement that can be realised by at least one shade tuple.
pub(crate) fn placements(core: &Core, h: &PatternGraph) -> Result<Vec<Placement>> {
    let g = core.g();
    let hv = h.vertex_count();
    if hv < g + 1 {
        return Err(LabError::invalid(format!("partial copies need h >= g + 1, got h = {hv}, g = {g}")));
    }
    let cs = core.system();
    let classes = cs.colour_classes();
    let shades = cs.pair_shades();
    let colour_of_pair = |a: usize, b: usize| cs.colour_of(a).min(cs.colour_of(b)).colour();
    let mut out = Vec::new();
    let mut reps = vec![0usize; g];
    loop {
        let mut targets: Vec<usize> = (0..g).map(|i| classes[i][reps[i]]).collect();
        targets.push(core.apex());
        for_each_injection(hv, g + 1, &mut |map: &[usize]| {
            let mut needs = Vec::new();
            let mut vmask = 0u32;
            for &x in map {
                vmask |= 1 << x;
            }
            for a in 0..=g {
                for b in a + 1..=g {
                    if h.has_edge(map[a], map[b]) {
                        let pr = pair(targets[a], targets[b]);
                        let mask = shades.get(&pr).copied().unwrap_or(0);
                        if mask == 0 {
                            return;
                        }
                        let c = colour_of_pair(pr.0, pr.1).expect("core pairs have a coloured end");
                        needs.push((c, mask, pr));
                    }
                }
            }
            out.push(Placement {
                copy: PartialCopy {
                    targets: targets.clone(),
                    map: map.to_vec(),
                    missing_edges: h.edge_count() - h.induced_edge_count(vmask),
                },
                needs,
            });
        });
        // Next representative tuple.
        let mut i = 0;
        while i < g {
            reps[i] += 1;
            if reps[i] < classes[i].len() {
                break;
            }
            reps[i] = 0;
            i += 1;
        }
        if i == g {
            break;
        }
    }
    Ok(out)
}

/// Calls `f` on every injective sequence of `k` distinct values from `0..n`.
fn for_each_injection(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, used: &mut u64, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for x in 0..n {
            if *used >> x & 1 == 0 {
                *used |= 1 << x;
                cur.push(x);
                rec(n, k, cur, used, f);
                cur.pop();
                *used &= !(1 << x);
            }
        }
    }
    rec(n, k, &mut Vec::with_capacity(k), &mut 0, f);
}

/// Whether a placement is `(j)`-coloured and its image contains every edge of `f`.
fn admits(pl: &Placement, j: &[usize], f: &[ColouredEdge]) -> bool {
    if !pl.needs.iter().all(|&(c, mask, _)| mask >> (j[c - 1] - 1) & 1 == 1) {
        return false;
    }
    f.iter().all(|e| {
        j[e.colour - 1] == e.shade && pl.needs.iter().any(|&(c, _, pr)| c == e.colour && pr == e.pair())
    })
}

fn check_edges(core: &Core, f: &[ColouredEdge]) -> Result<()> {
    for e in f {
        if !core.has_edge(e) {
            return Err(LabError::invalid(format!("edge {e} is not an edge of the core")));
        }
    }
    Ok(())
}

/// `Γ_{C,F}(j)`: total weight of the `(j)`-coloured partial copies whose image contains `F`.
pub fn gamma(core: &Core, h: &PatternGraph, f: &[ColouredEdge], p: Prob) -> Result<GammaVector> {
    check_edges(core, f)?;
    let pls = placements(core, h)?;
    Ok(gamma_from_placements(core, h, &pls, f, p))
}

pub(crate) fn gamma_from_placements(
    core: &Core,
    h: &PatternGraph,
    pls: &[Placement],
    f: &[ColouredEdge],
    p: Prob,
) -> GammaVector {
    let shape = core.system().params().t.clone();
    let powers: Vec<Rational> = (0..=h.edge_count()).map(|k| p.pow(k)).collect();
    let entries = shade_tuples(&shape)
        .iter()
        .map(|j| {
            let mut by_weight: HashMap<usize, u64> = HashMap::new();
            for pl in pls {
                if admits(pl, j, f) {
                    *by_weight.entry(pl.copy.missing_edges).or_insert(0) += 1;
                }
            }
            by_weight
                .into_iter()
                .fold(Rational::zero(), |acc, (k, c)| acc + &powers[k] * Rational::from_integer(c.into()))
        })
        .collect();
    TableFunction::new(shape, entries).expect("shape matches tuple enumeration")
}

/// All `(j)`-coloured partial copies containing `F`, for inspection and testing.
pub fn partial_copies(core: &Core, h: &PatternGraph, f: &[ColouredEdge], shades: &[usize]) -> Result<Vec<PartialCopy>> {
    check_edges(core, f)?;
    let shape = core.system().params().t.clone();
    TableFunction::from_fn(shape.clone(), |_| ()).index_of(shades)?;
    Ok(placements(core, h)?
        .into_iter()
        .filter(|pl| admits(pl, shades, f))
        .map(|pl| pl.copy)
        .collect())
}
