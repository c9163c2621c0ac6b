//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use lab_core::graph::{Graph, PatternGraph};
use lab_core::rational::Prob;
use lab_core::seed::rng_from_seed;
use rand::Rng;

/// Calls `visit` with every injective map `V(H) -> V(G)` that preserves edges.
pub fn for_each_copy(h: &PatternGraph, g: &Graph, mut visit: impl FnMut(&[usize])) {
    fn go(h: &PatternGraph, g: &Graph, map: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        let x = map.len();
        if x == h.vertex_count() {
            visit(map);
            return;
        }
        for w in 0..g.order() {
            if map.contains(&w) {
                continue;
            }
            if (0..x).all(|y| !h.has_edge(x, y) || g.has_edge(map[y], w)) {
                map.push(w);
                go(h, g, map, visit);
                map.pop();
            }
        }
    }
    go(h, g, &mut Vec::new(), &mut visit);
}

pub fn brute_copies(h: &PatternGraph, g: &Graph) -> u64 {
    let mut c = 0;
    for_each_copy(h, g, |_| c += 1);
    c
}

/// Every map `V(H) -> V(G)`, injective or not, checked edge by edge.
pub fn brute_homomorphisms(h: &PatternGraph, g: &Graph) -> u64 {
    let k = h.vertex_count();
    let n = g.order();
    let total = n.pow(k as u32);
    let mut count = 0;
    for code in 0..total {
        let map: Vec<usize> = (0..k).map(|i| code / n.pow(i as u32) % n).collect();
        if h.edges().iter().all(|&(a, b)| map[a] != map[b] && g.has_edge(map[a], map[b])) {
            count += 1;
        }
    }
    count
}

/// Permutations of `V(H)` mapping the edge set onto itself.
pub fn brute_automorphisms(h: &PatternGraph) -> u64 {
    fn go(h: &PatternGraph, perm: &mut Vec<usize>, count: &mut u64) {
        let k = h.vertex_count();
        if perm.len() == k {
            let mut image: Vec<(usize, usize)> = h
                .edges()
                .iter()
                .map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b])))
                .collect();
            image.sort_unstable();
            let mut edges = h.edges().to_vec();
            edges.sort_unstable();
            *count += u64::from(image == edges);
            return;
        }
        for w in 0..k {
            if !perm.contains(&w) {
                perm.push(w);
                go(h, perm, count);
                perm.pop();
            }
        }
    }
    let mut count = 0;
    go(h, &mut Vec::new(), &mut count);
    count
}

pub fn random_graph(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < density {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// All graphs on `n` vertices with their `G(n, p)` probability.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let mut g = Graph::new(n);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        g
    })
}

pub fn graph_probability(g: &Graph, p: Prob) -> lab_core::Rational {
    let n = g.order();
    let e = g.edge_count();
    p.pow(e) * p.complement().pow(n * (n - 1) / 2 - e)
}

pub fn patterns() -> Vec<PatternGraph> {
    ["K2", "K3", "P3", "C4", "S3", "K2+K1", "K4", "P4"]
        .iter()
        .map(|s| PatternGraph::by_name(s).unwrap())
        .collect()
}

use lab_core::colour::{ColourParams, ColourSystem, ColouredEdge, VertexColour};
use lab_core::table::shade_tuples;

/// Coloured vertices first (colour by colour), then `uncoloured` uncoloured ones; edges are
/// `(u, v, colour, shade)`.
pub fn system(a: &[usize], t: &[usize], uncoloured: usize, edges: &[(usize, usize, usize, usize)]) -> ColourSystem {
    let params = ColourParams::new(a.to_vec(), t.to_vec()).unwrap();
    let mut colours = Vec::new();
    for (i, &ai) in a.iter().enumerate() {
        colours.extend(std::iter::repeat_n(VertexColour::Colour(i + 1), ai));
    }
    colours.extend(std::iter::repeat_n(VertexColour::Uncoloured, uncoloured));
    let edges = edges.iter().map(|&(u, v, c, s)| ColouredEdge::new(u, v, c, s)).collect();
    ColourSystem::new(params, colours, edges).unwrap()
}

/// The realised graph, rebuilt straight from the edge list.
pub fn brute_realize(cs: &ColourSystem, g0: &Graph, shades: &[usize]) -> Graph {
    let u = cs.uncoloured();
    let mut g = Graph::new(cs.order());
    for a in 0..u.len() {
        for b in a + 1..u.len() {
            if g0.has_edge(a, b) {
                g.add_edge(u[a], u[b]);
            }
        }
    }
    for e in cs.edges() {
        if shades[e.colour - 1] == e.shade {
            g.add_edge(e.u, e.v);
        }
    }
    g
}

fn meets_all(cs: &ColourSystem, map: &[usize]) -> bool {
    (1..=cs.g()).all(|c| map.iter().any(|&x| cs.colour_of(x) == VertexColour::Colour(c)))
}

pub fn brute_psi(h: &PatternGraph, cs: &ColourSystem, g0: &Graph) -> Vec<u64> {
    shade_tuples(&cs.params().t)
        .iter()
        .map(|j| {
            let g = brute_realize(cs, g0, j);
            let mut c = 0;
            for_each_copy(h, &g, |m| c += u64::from(meets_all(cs, m)));
            c
        })
        .collect()
}

pub fn brute_kappa(h: &PatternGraph, cs: &ColourSystem, g0: &Graph, shades: &[usize], u: usize, v: usize) -> u64 {
    let mut g = brute_realize(cs, g0, shades);
    g.add_edge(u, v);
    let mut c = 0;
    for_each_copy(h, &g, |m| {
        let uses = h.edges().iter().any(|&(a, b)| (m[a] == u && m[b] == v) || (m[a] == v && m[b] == u));
        c += u64::from(uses && meets_all(cs, m));
    });
    c
}
