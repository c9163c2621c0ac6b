use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::pattern::PatternGraph;
use crate::error::{LabError, Result};
use crate::rational::Prob;
use crate::seed::{rng_from_seed, LabRng};

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Iterates the set bit positions of a word slice.
pub fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            }
        })
    })
}

/// Bit mask with the first `n` bits set.
pub fn full_mask(n: usize) -> Vec<u64> {
    let mut m = vec![u64::MAX; words_for(n)];
    if n % 64 != 0 {
        if let Some(last) = m.last_mut() {
            *last = (1u64 << (n % 64)) - 1;
        }
    }
    m
}

pub fn mask_of(n: usize, vertices: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut m = vec![0u64; words_for(n)];
    for v in vertices {
        m[v / 64] |= 1 << (v % 64);
    }
    m
}

/// Simple undirected graph on `0..n` stored as one bit row per vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = words_for(n);
        Graph { n, words, bits: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(LabError::invalid(format!("bad edge ({u},{v}) for n={n}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn from_pattern(h: &PatternGraph) -> Self {
        Graph::from_edges(h.vertex_count(), h.edges()).expect("pattern edges are valid")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Panics on loops or out-of-range endpoints.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "bad edge ({u},{v})");
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n);
        self.bits[u * self.words + v / 64] &= !(1 << (v % 64));
        self.bits[v * self.words + u / 64] &= !(1 << (u % 64));
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        g.add_edge(u, v);
        g
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        g.remove_edge(u, v);
        g
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(v))
    }

    /// Edges with `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            out.extend(self.neighbours(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// Induced subgraph on `vertices`, relabelled `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::new(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }
}

/// G(n, p): each pair `u < v` in lexicographic order decided by one exact `p`-coin.
pub fn sample_gnp(n: usize, p: Prob, seed: u64) -> Graph {
    sample_gnp_with(n, p, &mut rng_from_seed(seed))
}

pub fn sample_gnp_with(n: usize, p: Prob, rng: &mut LabRng) -> Graph {
    let mut g = Graph::new(n);
    if p.is_zero() {
        return g;
    }
    for u in 0..n {
        for v in u + 1..n {
            if coin(p, rng) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// One exact Bernoulli(p) draw.
#[inline]
pub fn coin(p: Prob, rng: &mut LabRng) -> bool {
    if p.is_zero() {
        false
    } else if p.is_one() {
        true
    } else {
        rng.gen_range(0..p.den()) < p.num()
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson { n: self.n, edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        let e: Vec<_> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(j.n, &e).map_err(serde::de::Error::custom)
    }
}
