//! Functions on the Bernoulli cube and their Monte Carlo small-ball and delta profiles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{coin, count_labelled_copies, delta_edge, Graph, PatternGraph};
use crate::rational::Prob;
use crate::seed::trial_rng;
use crate::stats::EstimationResult;

/// `f: {0,1}^N -> R^d`. Implementations must be deterministic and reentrant.
pub trait CubeFunction: Sync {
    fn dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn eval(&self, xi: &[bool]) -> Vec<f64>;

    /// `f(ξ with ξ_i = 1) - f(ξ with ξ_i = 0)`.
    fn delta(&self, i: usize, xi: &[bool]) -> Vec<f64> {
        let mut x = xi.to_vec();
        x[i] = true;
        let hi = self.eval(&x);
        x[i] = false;
        let lo = self.eval(&x);
        hi.iter().zip(&lo).map(|(a, b)| a - b).collect()
    }
}

/// `f(ξ) = offset + Σ ξ_i a_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearCube {
    pub coefficients: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
}

impl LinearCube {
    /// Coordinates in `classes[j]` carry the vector `directions[j]`; all others carry zero.
    pub fn from_classes(n: usize, directions: &[Vec<f64>], classes: &[Vec<usize>]) -> Self {
        let d = directions.first().map_or(0, Vec::len);
        let mut coefficients = vec![vec![0.0; d]; n];
        for (dir, class) in directions.iter().zip(classes) {
            for &i in class {
                coefficients[i] = dir.clone();
            }
        }
        LinearCube { coefficients, offset: vec![0.0; d] }
    }
}

impl CubeFunction for LinearCube {
    fn dim(&self) -> usize {
        self.coefficients.len()
    }

    fn out_dim(&self) -> usize {
        self.offset.len()
    }

    fn eval(&self, xi: &[bool]) -> Vec<f64> {
        let mut out = self.offset.clone();
        for (a, &on) in self.coefficients.iter().zip(xi) {
            if on {
                for (o, x) in out.iter_mut().zip(a) {
                    *o += x;
                }
            }
        }
        out
    }

    fn delta(&self, i: usize, _xi: &[bool]) -> Vec<f64> {
        self.coefficients[i].clone()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantCube {
    pub n: usize,
    pub value: Vec<f64>,
}

impl CubeFunction for ConstantCube {
    fn dim(&self) -> usize {
        self.n
    }

    fn out_dim(&self) -> usize {
        self.value.len()
    }

    fn eval(&self, _xi: &[bool]) -> Vec<f64> {
        self.value.clone()
    }
}

/// `X_H` of the graph on `n` vertices whose pairs `u < v`, in lexicographic order, are the
/// cube coordinates.
#[derive(Clone, Debug)]
pub struct SubgraphCountCube {
    pub pattern: PatternGraph,
    pub n: usize,
    pairs: Vec<(usize, usize)>,
}

impl SubgraphCountCube {
    pub fn new(pattern: PatternGraph, n: usize) -> Self {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        SubgraphCountCube { pattern, n, pairs }
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn graph(&self, xi: &[bool]) -> Graph {
        let mut g = Graph::new(self.n);
        for (&(u, v), &on) in self.pairs.iter().zip(xi) {
            if on {
                g.add_edge(u, v);
            }
        }
        g
    }
}

impl CubeFunction for SubgraphCountCube {
    fn dim(&self) -> usize {
        self.pairs.len()
    }

    fn out_dim(&self) -> usize {
        1
    }

    fn eval(&self, xi: &[bool]) -> Vec<f64> {
        vec![count_labelled_copies(&self.pattern, &self.graph(xi)).expect("desk-scale count") as f64]
    }

    fn delta(&self, i: usize, xi: &[bool]) -> Vec<f64> {
        let (u, v) = self.pairs[i];
        vec![delta_edge(&self.pattern, &self.graph(xi), u, v).expect("desk-scale count") as f64]
    }
}

pub fn sup_norm_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Trial `t` draws `ξ` from the stream `derive_seed(seed, "cube", t)`.
fn sample_cube(n: usize, p: Prob, seed: u64, t: u64) -> Vec<bool> {
    let mut rng = trial_rng(seed, "cube", t);
    (0..n).map(|_| coin(p, &mut rng)).collect()
}

/// Empirical `Pr(‖f(ξ) - x‖_∞ < radius)`.
pub fn small_ball_estimate<F: CubeFunction + ?Sized>(
    f: &F,
    x: &[f64],
    radius: f64,
    p: Prob,
    trials: u64,
    seed: u64,
) -> EstimationResult {
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let xi = sample_cube(f.dim(), p, seed, t);
            u64::from(sup_norm_distance(&f.eval(&xi), x) < radius)
        })
        .sum();
    EstimationResult::from_counts(hits, trials, seed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaProfile {
    pub coordinate: usize,
    /// Frequency of `‖Δ_i f(ξ) - s v‖_∞ >= r`.
    pub deviation: EstimationResult,
    pub mean_delta: Vec<f64>,
}

/// Samples `Δ_i f(ξ)` and reports how often it strays at least `r` from `s·v`.
#[allow(clippy::too_many_arguments)]
pub fn delta_profile<F: CubeFunction + ?Sized>(
    f: &F,
    i: usize,
    p: Prob,
    trials: u64,
    seed: u64,
    s: f64,
    v: &[f64],
    r: f64,
) -> DeltaProfile {
    let target: Vec<f64> = v.iter().map(|x| s * x).collect();
    let (hits, sums) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let xi = sample_cube(f.dim(), p, seed, t);
            let d = f.delta(i, &xi);
            (u64::from(sup_norm_distance(&d, &target) >= r), d)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0u64, vec![0.0; f.out_dim()]), |(h, mut acc), (x, d)| {
            for (a, b) in acc.iter_mut().zip(&d) {
                *a += b;
            }
            (h + x, acc)
        });
    let mean_delta = sums.iter().map(|x| x / trials.max(1) as f64).collect();
    DeltaProfile { coordinate: i, deviation: EstimationResult::from_counts(hits, trials, seed), mean_delta }
}
