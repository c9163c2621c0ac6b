//! Exact labelled-copy and homomorphism counting by bitset backtracking.

use super::dense::{full_mask, Graph};
use super::pattern::PatternGraph;
use crate::error::{LabError, Result};

/// Refuses when `n^h >= 2^63`, the bound on any count the kernel can return.
pub fn check_count_budget(n: usize, h: usize) -> Result<()> {
    let mut acc: u128 = 1;
    for _ in 0..h {
        acc = acc.saturating_mul(n as u128);
        if acc >= 1u128 << 63 {
            return Err(LabError::capacity(
                format!("counting a {h}-vertex pattern in a {n}-vertex graph"),
                format!("n^h = {n}^{h}"),
                "2^63",
            ));
        }
    }
    Ok(())
}

/// Placement order: pinned vertices first, then repeatedly the vertex with the most
/// already-placed neighbours (ties: higher degree, then lower index).
fn placement_order(h: &PatternGraph, pinned: &[usize]) -> Vec<usize> {
    let k = h.vertex_count();
    let mut order: Vec<usize> = pinned.to_vec();
    let mut placed: u32 = pinned.iter().fold(0, |m, &v| m | 1 << v);
    while order.len() < k {
        let best = (0..k)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| {
                let back = (h.neighbour_mask(v) & placed).count_ones();
                (back, h.degree(v), std::cmp::Reverse(v))
            })
            .expect("unplaced vertex remains");
        order.push(best);
        placed |= 1 << best;
    }
    order
}

struct Search<'a> {
    g: &'a Graph,
    words: usize,
    injective: bool,
    /// For each level, the earlier levels whose images must be adjacent.
    back: Vec<Vec<usize>>,
    pinned: Vec<usize>,
    base: Vec<u64>,
    images: Vec<usize>,
    used: Vec<u64>,
    cand: Vec<u64>,
}

impl Search<'_> {
    fn run(&mut self, level: usize) -> u64 {
        let levels = self.back.len();
        if level == levels {
            return 1;
        }
        let w = self.words;
        let off = level * w;
        for i in 0..w {
            let mut c = self.base[i];
            for &j in &self.back[level] {
                c &= self.g.row(self.images[j])[i];
            }
            if self.injective {
                c &= !self.used[i];
            }
            self.cand[off + i] = c;
        }
        if level < self.pinned.len() {
            let v = self.pinned[level];
            if self.cand[off + v / 64] >> (v % 64) & 1 == 0 {
                return 0;
            }
            return self.descend(level, v);
        }
        if level + 1 == levels {
            return self.cand[off..off + w].iter().map(|x| x.count_ones() as u64).sum();
        }
        let mut total = 0;
        for i in 0..w {
            let mut word = self.cand[off + i];
            while word != 0 {
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                total += self.descend(level, i * 64 + b);
            }
        }
        total
    }

    fn descend(&mut self, level: usize, v: usize) -> u64 {
        self.images[level] = v;
        self.used[v / 64] |= 1 << (v % 64);
        let r = self.run(level + 1);
        self.used[v / 64] &= !(1 << (v % 64));
        r
    }
}

/// Counts maps `V(H) -> V(G)` sending edges to edges, with images restricted to
/// `allowed` and `pinned` pairs `(pattern vertex, graph vertex)` fixed in advance.
/// Callers must have run [`check_count_budget`].
pub(crate) fn count_maps_unchecked(
    h: &PatternGraph,
    g: &Graph,
    allowed: Option<&[u64]>,
    pinned: &[(usize, usize)],
    injective: bool,
) -> u64 {
    let pinned_h: Vec<usize> = pinned.iter().map(|p| p.0).collect();
    let order = placement_order(h, &pinned_h);
    let mut pos = vec![usize::MAX; h.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let back: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            (0..h.vertex_count())
                .filter(|&u| h.has_edge(u, v) && pos[u] < i)
                .map(|u| pos[u])
                .collect()
        })
        .collect();
    let n = g.order();
    let w = g.words();
    let base = match allowed {
        Some(a) => a.to_vec(),
        None => full_mask(n),
    };
    let mut s = Search {
        g,
        words: w,
        injective,
        back,
        pinned: pinned.iter().map(|p| p.1).collect(),
        base,
        images: vec![0; order.len()],
        used: vec![0; w],
        cand: vec![0; order.len() * w],
    };
    if n == 0 {
        return 0;
    }
    s.run(0)
}

/// Number of injective homomorphisms `H -> G`.
pub fn count_labelled_copies(h: &PatternGraph, g: &Graph) -> Result<u64> {
    check_count_budget(g.order(), h.vertex_count())?;
    Ok(count_maps_unchecked(h, g, None, &[], true))
}

/// Number of homomorphisms `H -> G`, not necessarily injective.
pub fn count_homomorphisms(h: &PatternGraph, g: &Graph) -> Result<u64> {
    check_count_budget(g.order(), h.vertex_count())?;
    Ok(count_maps_unchecked(h, g, None, &[], false))
}

/// Labelled copies whose image lies inside the vertex mask `allowed`.
pub fn count_copies_within(h: &PatternGraph, g: &Graph, allowed: &[u64]) -> Result<u64> {
    check_count_budget(g.order(), h.vertex_count())?;
    Ok(count_maps_unchecked(h, g, Some(allowed), &[], true))
}

/// Labelled copies whose image meets every vertex class, by inclusion–exclusion over
/// the classes that are avoided. `pinned` pairs are honoured in every term.
pub fn count_copies_meeting(
    h: &PatternGraph,
    g: &Graph,
    classes: &[Vec<usize>],
    pinned: &[(usize, usize)],
) -> Result<u64> {
    check_count_budget(g.order(), h.vertex_count())?;
    Ok(count_meeting_unchecked(h, g, classes, pinned))
}

pub(crate) fn count_meeting_unchecked(
    h: &PatternGraph,
    g: &Graph,
    classes: &[Vec<usize>],
    pinned: &[(usize, usize)],
) -> u64 {
    let n = g.order();
    let k = classes.len();
    let mut total: i128 = 0;
    for subset in 0u32..(1u32 << k) {
        let mut allowed = full_mask(n);
        for (i, class) in classes.iter().enumerate() {
            if subset >> i & 1 == 1 {
                for &v in class {
                    allowed[v / 64] &= !(1 << (v % 64));
                }
            }
        }
        let c = count_maps_unchecked(h, g, Some(&allowed), pinned, true) as i128;
        if subset.count_ones() % 2 == 0 {
            total += c;
        } else {
            total -= c;
        }
    }
    debug_assert!(total >= 0);
    total as u64
}

/// Labelled copies in `g` whose image uses the edge `uv` (which must be present) and
/// meets every class.
pub(crate) fn count_through_edge_unchecked(
    h: &PatternGraph,
    g: &Graph,
    u: usize,
    v: usize,
    classes: &[Vec<usize>],
) -> u64 {
    debug_assert!(g.has_edge(u, v));
    let mut total = 0;
    for &(a, b) in h.edges() {
        total += count_meeting_unchecked(h, g, classes, &[(a, u), (b, v)]);
        total += count_meeting_unchecked(h, g, classes, &[(a, v), (b, u)]);
    }
    total
}

/// `X_H(G + uv) - X_H(G - uv)`: the labelled copies in `G + uv` that use `uv`.
pub fn delta_edge(h: &PatternGraph, g: &Graph, u: usize, v: usize) -> Result<u64> {
    if u == v || u >= g.order() || v >= g.order() {
        return Err(LabError::invalid(format!("delta_edge needs distinct vertices, got ({u},{v})")));
    }
    check_count_budget(g.order(), h.vertex_count())?;
    let plus = g.with_edge(u, v);
    Ok(count_through_edge_unchecked(h, &plus, u, v, &[]))
}

pub const MAX_AUTOMORPHISM_VERTICES: usize = 10;

/// `|Aut(H)|`, as the number of labelled copies of H in itself.
pub fn automorphism_count(h: &PatternGraph) -> Result<u64> {
    if h.vertex_count() > MAX_AUTOMORPHISM_VERTICES {
        return Err(LabError::capacity(
            "automorphism count",
            format!("h = {}", h.vertex_count()),
            format!("h <= {MAX_AUTOMORPHISM_VERTICES}"),
        ));
    }
    count_labelled_copies(h, &Graph::from_pattern(h))
}
