//! Completeness, neighbourhood families, and (p, K)-general position.

use serde::{Deserialize, Serialize};

use super::system::{ColourSystem, VertexColour};
use crate::error::{LabError, Result};
use crate::graph::{iter_bits, mask_of};
use crate::rational::Prob;

pub const MAX_PRESCRIPTIONS_LOG2: usize = 20;
pub const MAX_FAMILY_SIZE: usize = 20;

/// Bit index of each `(coloured vertex, shade)` in the order (colour, vertex index, shade),
/// restricted to colours below `below`.
fn family_slots(cs: &ColourSystem, below: usize) -> Vec<(usize, usize)> {
    let mut slots = Vec::new();
    for v in cs.coloured_order() {
        let c = cs.colour_of(v).colour().expect("coloured");
        if c < below {
            for s in 1..=cs.params().shades(c) {
                slots.push((v, s));
            }
        }
    }
    slots
}

/// Adjacency pattern of `w` to every coloured vertex of colour `< below`: bit `k` is set
/// iff `w` meets the `k`-th `(vertex, shade)` slot.
pub fn adjacency_pattern(cs: &ColourSystem, w: usize, below: usize) -> u64 {
    let slots = family_slots(cs, below);
    let mut pat = 0u64;
    for (k, &(v, s)) in slots.iter().enumerate() {
        if cs.shades_between(v, w) >> (s - 1) & 1 == 1 {
            pat |= 1 << k;
        }
    }
    pat
}

/// Patterns of all given vertices to coloured vertices of colour `< below`, computed in one pass.
pub fn adjacency_patterns(cs: &ColourSystem, targets: &[usize], below: usize) -> Vec<u64> {
    let slots = family_slots(cs, below);
    let mut slot_of = std::collections::HashMap::new();
    for (k, &vs) in slots.iter().enumerate() {
        slot_of.insert(vs, k);
    }
    let mut index = vec![usize::MAX; cs.order()];
    for (i, &t) in targets.iter().enumerate() {
        index[t] = i;
    }
    let mut pats = vec![0u64; targets.len()];
    for e in cs.edges() {
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            if index[b] != usize::MAX {
                if let Some(&k) = slot_of.get(&(a, e.shade)) {
                    if cs.colour_of(a) == VertexColour::Colour(e.colour) {
                        pats[index[b]] |= 1 << k;
                    }
                }
            }
        }
    }
    pats
}

/// Number of bits in patterns towards colours `< below`.
pub fn pattern_width(cs: &ColourSystem, below: usize) -> usize {
    (1..below.min(cs.g() + 1)).map(|j| cs.params().count(j) * cs.params().shades(j)).sum()
}

/// Every prescription of shade sets towards earlier colours has a witness of each colour.
pub fn is_complete(cs: &ColourSystem) -> Result<bool> {
    cs.require_valid()?;
    for i in 1..=cs.g() {
        let m = pattern_width(cs, i);
        if m > MAX_PRESCRIPTIONS_LOG2 {
            return Err(LabError::capacity(
                format!("completeness check for colour {i}"),
                format!("2^{m} prescriptions"),
                format!("2^{MAX_PRESCRIPTIONS_LOG2}"),
            ));
        }
        let mut hit = vec![false; 1 << m];
        for p in adjacency_patterns(cs, &cs.vertices_of_colour(i), i) {
            hit[p as usize] = true;
        }
        if hit.iter().any(|h| !h) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sets `S_1..S_m` over a ground list; `sets[k]` is a bit mask over ground positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetFamily {
    pub ground: Vec<usize>,
    pub sets: Vec<Vec<u64>>,
    /// `(coloured vertex, shade)` behind each set, when built from a colour system.
    pub labels: Vec<(usize, usize)>,
}

impl SetFamily {
    pub fn from_members(ground: Vec<usize>, members: &[Vec<usize>]) -> Result<Self> {
        let pos: std::collections::HashMap<usize, usize> = ground.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut sets = Vec::with_capacity(members.len());
        for m in members {
            let mut idx = Vec::with_capacity(m.len());
            for x in m {
                idx.push(*pos.get(x).ok_or_else(|| LabError::invalid(format!("{x} is not in the ground set")))?);
            }
            sets.push(mask_of(ground.len(), idx));
        }
        Ok(SetFamily { ground, sets, labels: vec![] })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn members(&self, k: usize) -> Vec<usize> {
        iter_bits(&self.sets[k]).map(|i| self.ground[i]).collect()
    }

    /// Drops ground elements, keeping the relative order of the rest.
    pub fn delete_ground(&self, gone: &[usize]) -> SetFamily {
        let gone: std::collections::HashSet<usize> = gone.iter().copied().collect();
        let keep: Vec<usize> = (0..self.ground.len()).filter(|&i| !gone.contains(&self.ground[i])).collect();
        let ground: Vec<usize> = keep.iter().map(|&i| self.ground[i]).collect();
        let sets = self
            .sets
            .iter()
            .map(|s| {
                mask_of(
                    ground.len(),
                    keep.iter().enumerate().filter(|(_, &i)| s[i / 64] >> (i % 64) & 1 == 1).map(|(j, _)| j),
                )
            })
            .collect();
        SetFamily { ground, sets, labels: self.labels.clone() }
    }

    /// Cell sizes `|S_I|` indexed by the membership mask `I`.
    pub fn atom_sizes(&self) -> Result<Vec<u64>> {
        let m = self.len();
        if m > MAX_FAMILY_SIZE {
            return Err(LabError::capacity(
                "general-position check",
                format!("2^{m} cells"),
                format!("2^{MAX_FAMILY_SIZE}"),
            ));
        }
        let mut cells = vec![0u64; 1 << m];
        for r in 0..self.ground.len() {
            let mut sig = 0usize;
            for (k, s) in self.sets.iter().enumerate() {
                if s[r / 64] >> (r % 64) & 1 == 1 {
                    sig |= 1 << k;
                }
            }
            cells[sig] += 1;
        }
        Ok(cells)
    }
}

/// One set per (coloured vertex, shade), ordered by (colour, vertex index, shade), each the
/// shade's neighbourhood inside `U(G)`.
pub fn neighbourhood_family(cs: &ColourSystem) -> Result<SetFamily> {
    cs.require_valid()?;
    let ground = cs.uncoloured();
    let labels = family_slots(cs, usize::MAX);
    let pats = adjacency_patterns(cs, &ground, usize::MAX);
    let sets = (0..labels.len())
        .map(|k| mask_of(ground.len(), (0..ground.len()).filter(|&i| pats[i] >> k & 1 == 1)))
        .collect();
    Ok(SetFamily { ground, sets, labels })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralPositionReport {
    pub m: usize,
    pub ground_size: usize,
    pub k: u64,
    pub threshold: f64,
    pub max_deviation: f64,
    /// 1-based indices of the sets in the worst cell.
    pub worst_cell: Vec<usize>,
    pub slack: f64,
    pub passed: bool,
}

/// `|R|^{1/2} ln |R|`, taken as 0 for `|R| <= 1`.
pub fn position_scale(r: usize) -> f64 {
    if r <= 1 {
        0.0
    } else {
        (r as f64).sqrt() * (r as f64).ln()
    }
}

pub fn general_position_check(family: &SetFamily, p: Prob, k: u64) -> Result<GeneralPositionReport> {
    if k < 1 {
        return Err(LabError::invalid("general position needs K >= 1"));
    }
    let m = family.len();
    let cells = family.atom_sizes()?;
    let r = family.ground.len();
    let pf = p.to_f64();
    let threshold = k as f64 * position_scale(r);
    let mut worst = (0.0f64, 0usize);
    for (mask, &size) in cells.iter().enumerate() {
        let ones = mask.count_ones() as i32;
        let expect = pf.powi(ones) * (1.0 - pf).powi(m as i32 - ones) * r as f64;
        let dev = (size as f64 - expect).abs();
        if dev > worst.0 {
            worst = (dev, mask);
        }
    }
    let worst_cell = (0..m).filter(|&i| worst.1 >> i & 1 == 1).map(|i| i + 1).collect();
    Ok(GeneralPositionReport {
        m,
        ground_size: r,
        k,
        threshold,
        max_deviation: worst.0,
        worst_cell,
        slack: threshold - worst.0,
        passed: worst.0 <= threshold,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generality {
    PGeneral,
    WeaklyPGeneralOnly,
    Neither,
}

impl Generality {
    pub fn is_weakly_general(self) -> bool {
        self != Generality::Neither
    }
}

/// Neighbourhood family at `K = 3^g`, then at `K = 2 * 3^g`.
pub fn classify_generality(cs: &ColourSystem, p: Prob) -> Result<Generality> {
    let fam = neighbourhood_family(cs)?;
    let k = 3u64.pow(cs.g() as u32);
    if general_position_check(&fam, p, k)?.passed {
        Ok(Generality::PGeneral)
    } else if general_position_check(&fam, p, 2 * k)?.passed {
        Ok(Generality::WeaklyPGeneralOnly)
    } else {
        Ok(Generality::Neither)
    }
}
