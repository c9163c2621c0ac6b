use serde::{Deserialize, Serialize};

use crate::colour::{
    adjacency_patterns, pattern_classes, pattern_width, ColourParams, ColourSystem, ColouredEdge,
    RestrictedColourSystem, VertexColour, MAX_PATTERN_BITS,
};
use crate::error::{LabError, Result};

/// A colour system with exactly one uncoloured vertex, joined to every coloured vertex in
/// every shade of that vertex's colour, and `t_g = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ColourSystem", into = "ColourSystem")]
pub struct Core {
    system: ColourSystem,
    apex: usize,
}

impl TryFrom<ColourSystem> for Core {
    type Error = LabError;

    fn try_from(cs: ColourSystem) -> Result<Self> {
        Core::new(cs)
    }
}

impl From<Core> for ColourSystem {
    fn from(c: Core) -> Self {
        c.system
    }
}

impl Core {
    pub fn new(cs: ColourSystem) -> Result<Self> {
        cs.require_valid()?;
        let u = cs.uncoloured();
        if u.len() != 1 {
            return Err(LabError::invalid(format!("a core has exactly one uncoloured vertex, found {}", u.len())));
        }
        let g = cs.g();
        if g >= 1 && cs.params().shades(g) != 1 {
            return Err(LabError::invalid("a core needs t_g = 1"));
        }
        let apex = u[0];
        for v in cs.coloured_order() {
            let c = cs.colour_of(v).colour().expect("coloured");
            let full = (1u64 << cs.params().shades(c)) - 1;
            if cs.shades_between(v, apex) != full {
                return Err(LabError::invalid(format!(
                    "uncoloured vertex {apex} must meet vertex {v} in every shade of colour {c}"
                )));
            }
        }
        Ok(Core { system: cs, apex })
    }

    pub fn system(&self) -> &ColourSystem {
        &self.system
    }

    pub fn g(&self) -> usize {
        self.system.g()
    }

    /// The uncoloured vertex.
    pub fn apex(&self) -> usize {
        self.apex
    }

    /// `T = t_1 ... t_{g-1}` (equal to the full tuple count since `t_g = 1`).
    pub fn tuple_count(&self) -> usize {
        self.system.params().tuple_count()
    }

    /// `E^g`: edges between the uncoloured vertex and the colour-g vertices, by colour-g vertex.
    pub fn top_edges(&self) -> Vec<ColouredEdge> {
        let g = self.g();
        if g == 0 {
            return vec![];
        }
        self.system
            .vertices_of_colour(g)
            .into_iter()
            .map(|v| ColouredEdge::new(v, self.apex, g, 1))
            .collect()
    }

    pub fn has_edge(&self, e: &ColouredEdge) -> bool {
        let e = ColouredEdge::new(e.u, e.v, e.colour, e.shade);
        self.system.edges().binary_search(&e).is_ok()
    }
}

/// Relabels the coloured vertices of `cs` in (colour, index) order, keeping their mutual edges.
fn coloured_part(cs: &ColourSystem) -> (Vec<VertexColour>, Vec<ColouredEdge>) {
    let order = cs.coloured_order();
    let mut relabel = vec![usize::MAX; cs.order()];
    for (i, &v) in order.iter().enumerate() {
        relabel[v] = i;
    }
    let colours = order.iter().map(|&v| cs.colour_of(v)).collect();
    let edges = cs
        .edges()
        .iter()
        .filter(|e| relabel[e.u] != usize::MAX && relabel[e.v] != usize::MAX)
        .map(|e| ColouredEdge::new(relabel[e.u], relabel[e.v], e.colour, e.shade))
        .collect();
    (colours, edges)
}

fn add_apex(params: ColourParams, mut colours: Vec<VertexColour>, mut edges: Vec<ColouredEdge>) -> Result<Core> {
    let apex = colours.len();
    for (v, c) in colours.iter().enumerate() {
        let c = c.colour().expect("coloured");
        for s in 1..=params.shades(c) {
            edges.push(ColouredEdge::new(v, apex, c, s));
        }
    }
    colours.push(VertexColour::Uncoloured);
    Core::new(ColourSystem::new(params, colours, edges)?)
}

/// Keeps the coloured vertices (relabelled in (colour, index) order) with their mutual edges
/// and adds a universal uncoloured vertex.
pub fn core_of_restricted(rcs: &RestrictedColourSystem) -> Result<Core> {
    let cs = rcs.system();
    let (colours, edges) = coloured_part(cs);
    add_apex(cs.params().clone(), colours, edges)
}

pub const MAX_EXTENDED_CORE_LOG2: usize = MAX_PATTERN_BITS;

/// For a system with `g-1` colours: its coloured part, then one colour-g vertex per adjacency
/// prescription (the `k`-th realising pattern `k`), then the universal uncoloured vertex.
pub fn extended_core(cs: &ColourSystem) -> Result<Core> {
    cs.require_valid()?;
    let m = pattern_width(cs, usize::MAX);
    if m > MAX_EXTENDED_CORE_LOG2 {
        return Err(LabError::capacity(
            "extended core",
            format!("2^{m} colour-g vertices"),
            format!("2^{MAX_EXTENDED_CORE_LOG2}"),
        ));
    }
    let (mut colours, mut edges) = coloured_part(cs);
    let g = cs.g() + 1;
    let slots: Vec<(usize, usize)> = (0..colours.len())
        .flat_map(|v| {
            let c = colours[v].colour().expect("coloured");
            (1..=cs.params().shades(c)).map(move |s| (v, s))
        })
        .collect();
    debug_assert_eq!(slots.len(), m);
    for k in 0..(1usize << m) {
        let w = colours.len();
        colours.push(VertexColour::Colour(g));
        for (bit, &(v, s)) in slots.iter().enumerate() {
            if k >> bit & 1 == 1 {
                let c = colours[v].colour().expect("coloured");
                edges.push(ColouredEdge::new(v, w, c, s));
            }
        }
    }
    let mut a = cs.params().a.clone();
    let mut t = cs.params().t.clone();
    a.push(1 << m);
    t.push(1);
    add_apex(ColourParams::new(a, t)?, colours, edges)
}

/// Uncoloured vertices of a system with `g-1` colours, grouped by the top edge of the extended
/// core whose colour-g endpoint has the same adjacency pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UPartition {
    pub core: Core,
    /// `(e, U_e)` for every `e` in `E^g` of the extended core, in pattern order.
    pub classes: Vec<(ColouredEdge, Vec<usize>)>,
    /// Index into `classes` of the all-shades class `U*`.
    pub star: usize,
}

impl UPartition {
    pub fn star_class(&self) -> &[usize] {
        &self.classes[self.star].1
    }
}

pub fn u_partition(cs: &ColourSystem) -> Result<UPartition> {
    let core = extended_core(cs)?;
    let classes = pattern_classes(cs)?;
    let top = core.top_edges();
    debug_assert_eq!(top.len(), classes.len());
    // The colour-g vertex for pattern k is the k-th in id order by construction.
    let star = classes.len() - 1;
    let classes = top.into_iter().zip(classes).collect();
    Ok(UPartition { core, classes, star })
}

/// Adjacency pattern of each colour-g vertex of a core, towards the lower colours.
pub fn top_patterns(core: &Core) -> Vec<u64> {
    let cs = core.system();
    adjacency_patterns(cs, &cs.vertices_of_colour(core.g()), core.g())
}
