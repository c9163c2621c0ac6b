use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};

/// The fixed small graph H whose labelled copies are counted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternGraph {
    name: String,
    h: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<u32>,
}

pub const MAX_PATTERN_VERTICES: usize = 32;

impl PatternGraph {
    /// Edges are normalised to `u < v` and sorted; loops and duplicates are rejected.
    pub fn new(name: impl Into<String>, h: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if h == 0 || h > MAX_PATTERN_VERTICES {
            return Err(LabError::invalid(format!(
                "pattern vertex count must be in 1..={MAX_PATTERN_VERTICES}, got {h}"
            )));
        }
        let mut adj = vec![0u32; h];
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= h || b >= h {
                return Err(LabError::invalid(format!("pattern edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(LabError::invalid(format!("pattern self-loop at {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if adj[u] >> v & 1 == 1 {
                return Err(LabError::invalid(format!("duplicate pattern edge ({u},{v})")));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
            norm.push((u, v));
        }
        norm.sort_unstable();
        Ok(PatternGraph { name: name.into(), h, edges: norm, adj })
    }

    pub fn complete(k: usize) -> Self {
        let mut e = Vec::new();
        for u in 0..k {
            for v in u + 1..k {
                e.push((u, v));
            }
        }
        Self::new(format!("K{k}"), k, &e).expect("valid clique")
    }

    /// Path on `k` vertices.
    pub fn path(k: usize) -> Self {
        let e: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Self::new(format!("P{k}"), k, &e).expect("valid path")
    }

    /// Cycle on `k >= 3` vertices.
    pub fn cycle(k: usize) -> Self {
        assert!(k >= 3);
        let mut e: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        e.push((0, k - 1));
        Self::new(format!("C{k}"), k, &e).expect("valid cycle")
    }

    /// Star with `k` leaves.
    pub fn star(k: usize) -> Self {
        let e: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        Self::new(format!("S{k}"), k + 1, &e).expect("valid star")
    }

    pub fn empty(k: usize) -> Self {
        Self::new(format!("E{k}"), k, &[]).expect("valid empty graph")
    }

    /// Disjoint union, vertices of `other` shifted past those of `self`.
    pub fn disjoint_union(&self, other: &PatternGraph) -> Result<Self> {
        let mut e = self.edges.clone();
        e.extend(other.edges.iter().map(|&(u, v)| (u + self.h, v + self.h)));
        Self::new(format!("{}+{}", self.name, other.name), self.h + other.h, &e)
    }

    /// Parses `K3`, `P3`, `C5`, `S4`, `E2`, and `+`-joined disjoint unions such as `K2+K1`.
    pub fn by_name(name: &str) -> Result<Self> {
        let parts: Vec<&str> = name.split('+').map(str::trim).collect();
        let mut acc: Option<PatternGraph> = None;
        for part in parts {
            let bad = || LabError::invalid(format!("unknown pattern name {part:?}"));
            let mut chars = part.chars();
            let kind = chars.next().ok_or_else(bad)?;
            let k: usize = chars.as_str().parse().map_err(|_| bad())?;
            let g = match kind {
                'K' if k >= 1 => Self::complete(k),
                'P' if k >= 1 => Self::path(k),
                'C' if k >= 3 => Self::cycle(k),
                'S' => Self::star(k),
                'E' if k >= 1 => Self::empty(k),
                _ => return Err(bad()),
            };
            acc = Some(match acc {
                None => g,
                Some(a) => a.disjoint_union(&g)?,
            });
        }
        let mut g = acc.expect("at least one part");
        g.name = name.to_string();
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.h
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbourhood of `v` as a bit mask over pattern vertices.
    pub fn neighbour_mask(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    /// Number of edges with both ends in the vertex mask.
    pub fn induced_edge_count(&self, mask: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        let full = if self.h == 32 { u32::MAX } else { (1u32 << self.h) - 1 };
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == full
    }
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    name: String,
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for PatternGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PatternJson {
            name: self.name.clone(),
            n: self.h,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PatternGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PatternJson::deserialize(d)?;
        let e: Vec<_> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        PatternGraph::new(j.name, j.n, &e).map_err(serde::de::Error::custom)
    }
}
