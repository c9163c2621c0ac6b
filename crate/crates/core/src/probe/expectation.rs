//! Exact `E_{G0}` of ψ and κ by linearity of expectation.
//!
//! A placement sends some vertices of H onto coloured vertices (or onto a pinned uncoloured
//! vertex) and the rest, the free vertices, injectively into the other uncoloured vertices.
//! Only the adjacency type of an uncoloured vertex towards the coloured ones matters, so
//! free vertices are assigned types and counted with falling factorials.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::colour::{apply_extension, realize, ColourSystem, Extension, RestrictedColourSystem, VertexColour};
use crate::error::{LabError, Result};
use crate::graph::{check_count_budget, Graph, PatternGraph};
use crate::rational::{Prob, Rational};
use crate::table::TableFunction;

pub const EXPECTATION_TERM_BUDGET: u64 = 100_000_000;

const FREE: usize = usize::MAX;

/// Coloured vertices of one shade tuple together with the type histogram of `U`.
struct Arena {
    colour: Vec<usize>,
    adj: Vec<u64>,
    /// Coloured vertices whose edges to uncoloured vertices are `p`-coins.
    random: u64,
    types: Vec<(u64, u64)>,
    pin_type: Option<u64>,
    g: usize,
}

impl Arena {
    fn build(cs: &ColourSystem, shades: &[usize], random_colour: Option<usize>, pin: Option<(usize, usize)>) -> Result<Arena> {
        let coloured = cs.coloured_order();
        if coloured.len() > 64 {
            return Err(LabError::capacity("coloured vertices in exact expectation", coloured.len(), 64));
        }
        let uncoloured = cs.uncoloured();
        let g = realize(cs, &Graph::new(uncoloured.len()), shades)?;
        let mask_over = |w: usize| -> u64 {
            coloured
                .iter()
                .enumerate()
                .filter(|&(_, &c)| g.has_edge(w, c))
                .fold(0u64, |m, (i, _)| m | 1 << i)
        };
        let colour: Vec<usize> =
            coloured.iter().map(|&c| cs.colour_of(c).colour().expect("coloured")).collect();
        let adj = coloured.iter().map(|&c| mask_over(c)).collect();
        let random = match random_colour {
            Some(k) => colour.iter().enumerate().filter(|(_, &c)| c == k).fold(0u64, |m, (i, _)| m | 1 << i),
            None => 0,
        };
        let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
        let mut pin_type = None;
        for &w in &uncoloured {
            let t = mask_over(w);
            match pin {
                Some((u, v)) if u == w => {
                    let vi = coloured.iter().position(|&c| c == v).expect("pinned partner is coloured");
                    pin_type = Some(t | 1 << vi);
                }
                _ => *hist.entry(t).or_default() += 1,
            }
        }
        Ok(Arena { colour, adj, random, types: hist.into_iter().collect(), pin_type, g: cs.g() })
    }

    fn pin_slot(&self) -> usize {
        self.colour.len()
    }
}

struct Enumerator<'a> {
    h: &'a PatternGraph,
    arena: &'a Arena,
    p_pows: Vec<Rational>,
    assign: Vec<usize>,
    terms: u64,
    total: Rational,
}

impl Enumerator<'_> {
    fn tick(&mut self, k: u64) -> Result<()> {
        self.terms += k;
        if self.terms > EXPECTATION_TERM_BUDGET {
            return Err(LabError::capacity("exact expectation terms", self.terms, EXPECTATION_TERM_BUDGET));
        }
        Ok(())
    }

    fn compatible(&self, x: usize, slot: usize) -> bool {
        let pin = self.arena.pin_slot();
        (0..x).filter(|&y| self.h.has_edge(x, y) && self.assign[y] != FREE).all(|y| {
            let other = self.assign[y];
            match (slot == pin, other == pin) {
                (false, false) => self.arena.adj[slot] >> other & 1 == 1,
                (true, false) => self.arena.pin_type.expect("pin") >> other & 1 == 1,
                (false, true) => self.arena.pin_type.expect("pin") >> slot & 1 == 1,
                (true, true) => false,
            }
        })
    }

    fn place(&mut self, x: usize, forced: &[Option<usize>], used: u64) -> Result<()> {
        self.tick(1)?;
        let h = self.h.vertex_count();
        if x == h {
            return self.settle();
        }
        let pin = self.arena.pin_slot();
        let options: Vec<usize> = match forced[x] {
            Some(s) => vec![s],
            None => {
                let mut o: Vec<usize> = (0..self.arena.colour.len()).filter(|&s| used >> s & 1 == 0).collect();
                o.push(FREE);
                o
            }
        };
        for s in options {
            if s != FREE && s != pin && used >> s & 1 == 1 {
                continue;
            }
            if s != FREE && !self.compatible(x, s) {
                continue;
            }
            self.assign[x] = s;
            let next = if s == FREE || s == pin { used } else { used | 1 << s };
            self.place(x + 1, forced, next)?;
        }
        self.assign[x] = FREE;
        Ok(())
    }

    fn settle(&mut self) -> Result<()> {
        let a = self.arena;
        let pin = a.pin_slot();
        let covered = self
            .assign
            .iter()
            .filter(|&&s| s != FREE && s != pin)
            .fold(0u64, |m, &s| m | 1 << a.colour[s]);
        let want = (1..=a.g).fold(0u64, |m, c| m | 1 << c);
        if covered != want {
            return Ok(());
        }
        let mut coins = 0usize;
        for &(x, y) in self.h.edges() {
            let (sx, sy) = (self.assign[x], self.assign[y]);
            coins += match (sx == FREE, sy == FREE) {
                (true, true) => 1,
                (true, false) | (false, true) => {
                    let s = if sx == FREE { sy } else { sx };
                    usize::from(s == pin || a.random >> s & 1 == 1)
                }
                (false, false) => 0,
            };
        }
        let free: Vec<usize> = (0..self.h.vertex_count()).filter(|&x| self.assign[x] == FREE).collect();
        let candidates: Vec<Vec<usize>> = free
            .iter()
            .map(|&x| {
                let need = self
                    .h
                    .edges()
                    .iter()
                    .filter_map(|&(a1, b1)| match (a1 == x, b1 == x) {
                        (true, _) => Some(b1),
                        (_, true) => Some(a1),
                        _ => None,
                    })
                    .map(|y| self.assign[y])
                    .filter(|&s| s != FREE && s != pin && a.random >> s & 1 == 0)
                    .fold(0u64, |m, s| m | 1 << s);
                (0..a.types.len()).filter(|&k| a.types[k].0 & need == need).collect()
            })
            .collect();
        let mut used = vec![0u64; a.types.len()];
        let count = self.typed(&candidates, 0, &mut used)?;
        if count > 0 {
            self.total += Rational::from_integer(BigInt::from(count)) * &self.p_pows[coins];
        }
        Ok(())
    }

    fn typed(&mut self, candidates: &[Vec<usize>], i: usize, used: &mut [u64]) -> Result<u128> {
        if i == candidates.len() {
            return Ok(1);
        }
        self.tick(candidates[i].len() as u64)?;
        let mut sum = 0u128;
        for &k in &candidates[i] {
            let left = self.arena.types[k].1 - used[k];
            if left == 0 {
                continue;
            }
            used[k] += 1;
            sum += u128::from(left) * self.typed(candidates, i + 1, used)?;
            used[k] -= 1;
        }
        Ok(sum)
    }
}

fn expectation(h: &PatternGraph, arena: &Arena, p: Prob, forced: &[Vec<Option<usize>>]) -> Result<Rational> {
    let mut e = Enumerator {
        h,
        arena,
        p_pows: (0..=h.edge_count()).map(|k| p.pow(k)).collect(),
        assign: vec![FREE; h.vertex_count()],
        terms: 0,
        total: Rational::from_integer(0.into()),
    };
    for f in forced {
        e.place(0, f, 0)?;
    }
    Ok(e.total)
}

fn no_forcing(h: &PatternGraph) -> Vec<Vec<Option<usize>>> {
    vec![vec![None; h.vertex_count()]]
}

/// `μ_{G,S}(j) = E_{G0} ψ(G_S, G0, j)`.
pub fn exact_mu(rcs: &RestrictedColourSystem, ext: &Extension, h: &PatternGraph, p: Prob) -> Result<TableFunction<Rational>> {
    let cs = apply_extension(rcs, ext)?;
    check_count_budget(cs.order(), h.vertex_count())?;
    TableFunction::try_from_fn(cs.params().t.clone(), |j| {
        expectation(h, &Arena::build(&cs, j, None, None)?, p, &no_forcing(h))
    })
}

/// `μ_G(j)`: the average of `μ_{G,S}(j)` over the random extension, where each colour-g
/// vertex joins each uncoloured vertex independently with probability `p`.
pub fn mu_average(rcs: &RestrictedColourSystem, h: &PatternGraph, p: Prob) -> Result<TableFunction<Rational>> {
    let cs = rcs.system();
    check_count_budget(cs.order(), h.vertex_count())?;
    TableFunction::try_from_fn(cs.params().t.clone(), |j| {
        expectation(h, &Arena::build(cs, j, Some(rcs.g()), None)?, p, &no_forcing(h))
    })
}

/// `ν_{G,S,u,v}(j) = E_{G0} κ(G_S, G0, j, u, v)`.
pub fn exact_nu(
    rcs: &RestrictedColourSystem,
    ext: &Extension,
    h: &PatternGraph,
    p: Prob,
    u: usize,
    v: usize,
) -> Result<TableFunction<Rational>> {
    let cs = apply_extension(rcs, ext)?;
    if u >= cs.order() || cs.colour_of(u) != VertexColour::Uncoloured {
        return Err(LabError::invalid(format!("u = {u} must be an uncoloured vertex")));
    }
    if v >= cs.order() || cs.colour_of(v) != VertexColour::Colour(cs.g()) {
        return Err(LabError::invalid(format!("v = {v} must have the top colour {}", cs.g())));
    }
    check_count_budget(cs.order(), h.vertex_count())?;
    TableFunction::try_from_fn(cs.params().t.clone(), |j| {
        let arena = Arena::build(&cs, j, None, Some((u, v)))?;
        let vi = cs.coloured_order().iter().position(|&c| c == v).expect("coloured");
        let pin = arena.pin_slot();
        let mut forced = Vec::new();
        for &(a, b) in h.edges() {
            for (x, y) in [(a, b), (b, a)] {
                let mut f = vec![None; h.vertex_count()];
                f[x] = Some(pin);
                f[y] = Some(vi);
                forced.push(f);
            }
        }
        expectation(h, &arena, p, &forced)
    })
}
