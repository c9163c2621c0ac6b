use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};

/// Vertex tag. `Uncoloured` orders above every colour, so the colour of an edge is the
/// minimum of its endpoint tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexColour {
    Colour(usize),
    Uncoloured,
}

impl VertexColour {
    pub fn colour(self) -> Option<usize> {
        match self {
            VertexColour::Colour(c) => Some(c),
            VertexColour::Uncoloured => None,
        }
    }

    pub fn is_coloured(self) -> bool {
        matches!(self, VertexColour::Colour(_))
    }
}

/// Parameters `(g, a_1..a_g, t_1..t_g)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColourParams {
    pub g: usize,
    pub a: Vec<usize>,
    pub t: Vec<usize>,
}

impl ColourParams {
    pub fn new(a: Vec<usize>, t: Vec<usize>) -> Result<Self> {
        if a.len() != t.len() {
            return Err(LabError::invalid("parameter lists a and t must have equal length"));
        }
        if a.contains(&0) || t.contains(&0) {
            return Err(LabError::invalid("every a_i and t_i must be positive"));
        }
        Ok(ColourParams { g: a.len(), a, t })
    }

    pub fn empty() -> Self {
        ColourParams { g: 0, a: vec![], t: vec![] }
    }

    /// Number of shades of colour `i` (1-based).
    pub fn shades(&self, i: usize) -> usize {
        self.t[i - 1]
    }

    pub fn count(&self, i: usize) -> usize {
        self.a[i - 1]
    }

    /// `T = t_1 ... t_g`, the number of shade tuples.
    pub fn tuple_count(&self) -> usize {
        self.t.iter().product()
    }

    /// `sum a_i t_i`, the number of sets in the neighbourhood family.
    pub fn family_size(&self) -> usize {
        self.a.iter().zip(&self.t).map(|(a, t)| a * t).sum()
    }

    pub fn coloured_count(&self) -> usize {
        self.a.iter().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColouredEdge {
    pub u: usize,
    pub v: usize,
    pub colour: usize,
    pub shade: usize,
}

impl ColouredEdge {
    pub fn new(u: usize, v: usize, colour: usize, shade: usize) -> Self {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        ColouredEdge { u, v, colour, shade }
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for ColouredEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{} (colour {}, shade {})", self.u, self.v, self.colour, self.shade)
    }
}

/// One broken colour-system axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// Colour `i` is carried by the wrong number of vertices, or a tag lies outside `1..=g`.
    ColourCount { colour: usize, expected: usize, found: usize },
    /// An edge joins two uncoloured vertices (or is a loop).
    NoColouredEndpoint { edge: ColouredEdge },
    /// The edge colour is not the minimum of its endpoint colours.
    WrongEdgeColour { edge: ColouredEdge, expected: usize },
    ShadeOutOfRange { edge: ColouredEdge, shades: usize },
    DuplicateEdge { edge: ColouredEdge },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ColourCount { colour, expected, found } => {
                write!(f, "colour {colour} carried by {found} vertices, expected {expected}")
            }
            Violation::NoColouredEndpoint { edge } => write!(f, "edge incident to no coloured vertex: {edge}"),
            Violation::WrongEdgeColour { edge, expected } => {
                write!(f, "edge {edge} should have colour {expected}")
            }
            Violation::ShadeOutOfRange { edge, shades } => {
                write!(f, "edge {edge} has a shade outside 1..={shades}")
            }
            Violation::DuplicateEdge { edge } => write!(f, "duplicate edge {edge}"),
        }
    }
}

/// Coloured, shaded multigraph. Vertices are `0..n`; validation problems are reported
/// by [`ColourSystem::validate`] rather than rejected on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourSystem {
    params: ColourParams,
    colours: Vec<VertexColour>,
    edges: Vec<ColouredEdge>,
}

impl ColourSystem {
    /// Only endpoint ranges are enforced here; edges are normalised to `u <= v` and sorted.
    pub fn new(params: ColourParams, colours: Vec<VertexColour>, edges: Vec<ColouredEdge>) -> Result<Self> {
        let n = colours.len();
        let mut edges: Vec<ColouredEdge> = edges.into_iter().map(|e| ColouredEdge::new(e.u, e.v, e.colour, e.shade)).collect();
        if let Some(e) = edges.iter().find(|e| e.v >= n) {
            return Err(LabError::invalid(format!("edge {e} has an endpoint outside 0..{n}")));
        }
        edges.sort();
        Ok(ColourSystem { params, colours, edges })
    }

    /// Like [`ColourSystem::new`] but fails unless the system validates.
    pub fn new_valid(params: ColourParams, colours: Vec<VertexColour>, edges: Vec<ColouredEdge>) -> Result<Self> {
        let cs = Self::new(params, colours, edges)?;
        cs.require_valid()?;
        Ok(cs)
    }

    pub fn params(&self) -> &ColourParams {
        &self.params
    }

    pub fn g(&self) -> usize {
        self.params.g
    }

    pub fn order(&self) -> usize {
        self.colours.len()
    }

    pub fn colour_of(&self, v: usize) -> VertexColour {
        self.colours[v]
    }

    pub fn colours(&self) -> &[VertexColour] {
        &self.colours
    }

    pub fn edges(&self) -> &[ColouredEdge] {
        &self.edges
    }

    /// `U(G)` in increasing vertex order.
    pub fn uncoloured(&self) -> Vec<usize> {
        (0..self.order()).filter(|&v| !self.colours[v].is_coloured()).collect()
    }

    pub fn vertices_of_colour(&self, i: usize) -> Vec<usize> {
        (0..self.order()).filter(|&v| self.colours[v] == VertexColour::Colour(i)).collect()
    }

    /// Coloured vertices sorted by (colour, vertex index).
    pub fn coloured_order(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = (0..self.order()).filter(|&v| self.colours[v].is_coloured()).collect();
        vs.sort_by_key(|&v| (self.colours[v], v));
        vs
    }

    /// The vertex classes of colours `1..=g`.
    pub fn colour_classes(&self) -> Vec<Vec<usize>> {
        (1..=self.g()).map(|i| self.vertices_of_colour(i)).collect()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let g = self.g();
        let mut counts = vec![0usize; g + 1];
        let mut stray = HashMap::new();
        for c in &self.colours {
            if let VertexColour::Colour(i) = *c {
                if (1..=g).contains(&i) {
                    counts[i] += 1;
                } else {
                    *stray.entry(i).or_insert(0usize) += 1;
                }
            }
        }
        for i in 1..=g {
            if counts[i] != self.params.count(i) {
                out.push(Violation::ColourCount { colour: i, expected: self.params.count(i), found: counts[i] });
            }
        }
        let mut stray: Vec<_> = stray.into_iter().collect();
        stray.sort();
        for (i, found) in stray {
            out.push(Violation::ColourCount { colour: i, expected: 0, found });
        }
        let mut seen = std::collections::HashSet::new();
        for e in &self.edges {
            let tag = self.colours[e.u].min(self.colours[e.v]);
            match tag {
                _ if e.u == e.v => out.push(Violation::NoColouredEndpoint { edge: *e }),
                VertexColour::Uncoloured => out.push(Violation::NoColouredEndpoint { edge: *e }),
                VertexColour::Colour(c) => {
                    if e.colour != c {
                        out.push(Violation::WrongEdgeColour { edge: *e, expected: c });
                    } else if (1..=g).contains(&c) && (e.shade == 0 || e.shade > self.params.shades(c)) {
                        out.push(Violation::ShadeOutOfRange { edge: *e, shades: self.params.shades(c) });
                    }
                }
            }
            if !seen.insert(*e) {
                out.push(Violation::DuplicateEdge { edge: *e });
            }
        }
        out
    }

    pub fn require_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            let msgs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            Err(LabError::invalid(format!("colour system fails validation: {}", msgs.join("; "))))
        }
    }

    /// Shade masks (bit `s-1` for shade `s`) of every vertex pair joined by some edge.
    pub fn pair_shades(&self) -> HashMap<(usize, usize), u64> {
        let mut m = HashMap::new();
        for e in &self.edges {
            *m.entry(e.pair()).or_insert(0u64) |= 1 << (e.shade - 1);
        }
        m
    }

    /// Shade mask of the pair `{x, y}`.
    pub fn shades_between(&self, x: usize, y: usize) -> u64 {
        let (u, v) = if x <= y { (x, y) } else { (y, x) };
        self.edges
            .iter()
            .filter(|e| e.u == u && e.v == v)
            .fold(0, |m, e| m | 1 << (e.shade - 1))
    }

    /// Deletes the given vertices, relabelling the survivors in increasing order.
    pub fn delete_vertices(&self, gone: &[usize], params: ColourParams) -> Result<ColourSystem> {
        let mut keep = vec![true; self.order()];
        for &v in gone {
            keep[v] = false;
        }
        let mut relabel = vec![usize::MAX; self.order()];
        let mut colours = Vec::new();
        for v in 0..self.order() {
            if keep[v] {
                relabel[v] = colours.len();
                colours.push(self.colours[v]);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.u] && keep[e.v])
            .map(|e| ColouredEdge::new(relabel[e.u], relabel[e.v], e.colour, e.shade))
            .collect();
        ColourSystem::new(params, colours, edges)
    }

    pub(crate) fn with_parts(params: ColourParams, colours: Vec<VertexColour>, edges: Vec<ColouredEdge>) -> ColourSystem {
        ColourSystem::new(params, colours, edges).expect("endpoints in range by construction")
    }
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: usize,
    colour: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    g: usize,
    a: Vec<usize>,
    t: Vec<usize>,
    vertices: Vec<VertexJson>,
    edges: Vec<ColouredEdge>,
}

impl Serialize for ColourSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SystemJson {
            g: self.params.g,
            a: self.params.a.clone(),
            t: self.params.t.clone(),
            vertices: self
                .colours
                .iter()
                .enumerate()
                .map(|(id, c)| VertexJson { id, colour: c.colour() })
                .collect(),
            edges: self.edges.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColourSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let j = SystemJson::deserialize(d)?;
        if j.g != j.a.len() {
            return Err(D::Error::custom("g must equal the length of a"));
        }
        let params = ColourParams::new(j.a, j.t).map_err(D::Error::custom)?;
        let mut vs = j.vertices;
        vs.sort_by_key(|v| v.id);
        if vs.iter().enumerate().any(|(i, v)| v.id != i) {
            return Err(D::Error::custom("vertex ids must be exactly 0..n"));
        }
        let colours = vs
            .iter()
            .map(|v| match v.colour {
                Some(c) => VertexColour::Colour(c),
                None => VertexColour::Uncoloured,
            })
            .collect();
        ColourSystem::new(params, colours, j.edges).map_err(D::Error::custom)
    }
}
