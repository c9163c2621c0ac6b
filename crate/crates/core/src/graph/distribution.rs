//! Exhaustive small-n distributions of `X_H` and Monte Carlo point-probability estimates.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::count::{check_count_budget, count_maps_unchecked};
use super::dense::{sample_gnp_with, Graph};
use super::pattern::PatternGraph;
use crate::error::{LabError, Result};
use crate::rational::{rational_pow, serde_rational, Prob, Rational};
use crate::seed::trial_rng;
use crate::stats::EstimationResult;

/// Default ceiling on `C(n,2)` for exhaustive enumeration (n <= 7).
pub const DEFAULT_EXHAUSTIVE_CUTOFF: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionEntry {
    pub value: u64,
    #[serde(with = "serde_rational")]
    pub probability: Rational,
}

/// Exact law of the labelled-copy count over G(n, p).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactDistribution {
    pub pattern: String,
    pub n: usize,
    pub p: Prob,
    pub support: Vec<DistributionEntry>,
}

impl ExactDistribution {
    pub fn probability_of(&self, value: u64) -> Rational {
        self.support
            .iter()
            .find(|e| e.value == value)
            .map(|e| e.probability.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.support.iter().map(|e| e.probability.clone()).sum()
    }

    pub fn mean(&self) -> Rational {
        self.support
            .iter()
            .map(|e| &e.probability * Rational::from_integer(BigInt::from(e.value)))
            .sum()
    }

    /// Largest point probability; ties resolve to the smallest value.
    pub fn max_point(&self) -> (u64, Rational) {
        let mut best: Option<&DistributionEntry> = None;
        for e in &self.support {
            if best.is_none_or(|b| e.probability > b.probability) {
                best = Some(e);
            }
        }
        let b = best.expect("support is never empty");
        (b.value, b.probability.clone())
    }
}

pub fn exact_distribution(h: &PatternGraph, n: usize, p: Prob) -> Result<ExactDistribution> {
    exact_distribution_with_cutoff(h, n, p, DEFAULT_EXHAUSTIVE_CUTOFF)
}

/// Enumerates all `2^C(n,2)` graphs, tallying `(count, edges)` pairs before weighting.
pub fn exact_distribution_with_cutoff(
    h: &PatternGraph,
    n: usize,
    p: Prob,
    cutoff: usize,
) -> Result<ExactDistribution> {
    if n == 0 {
        return Err(LabError::invalid("exact_distribution needs n >= 1"));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let m = pairs.len();
    if m > cutoff || m >= 63 {
        return Err(LabError::capacity(
            format!("exhaustive distribution at n = {n}"),
            format!("2^{m} graphs"),
            format!("2^{}", cutoff.min(62)),
        ));
    }
    check_count_budget(n, h.vertex_count())?;
    let total: u64 = 1 << m;
    let chunk: u64 = 1 << 12;
    let chunks = total.div_ceil(chunk);
    let tally: HashMap<(u64, u32), u64> = (0..chunks)
        .into_par_iter()
        .fold(HashMap::new, |mut acc, c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(total);
            for mask in lo..hi {
                let mut g = Graph::new(n);
                for (i, &(u, v)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        g.add_edge(u, v);
                    }
                }
                let x = count_maps_unchecked(h, &g, None, &[], true);
                *acc.entry((x, mask.count_ones())).or_insert(0) += 1;
            }
            acc
        })
        .reduce(HashMap::new, merge_counts);
    let pr = p.to_rational();
    let q = p.complement().to_rational();
    let ppow: Vec<Rational> = (0..=m).map(|e| rational_pow(&pr, e)).collect();
    let qpow: Vec<Rational> = (0..=m).map(|e| rational_pow(&q, e)).collect();
    let mut support: BTreeMap<u64, Rational> = BTreeMap::new();
    for ((x, e), count) in tally {
        let e = e as usize;
        let w = &ppow[e] * &qpow[m - e] * Rational::from_integer(BigInt::from(count));
        *support.entry(x).or_insert_with(Rational::zero) += w;
    }
    let support = support
        .into_iter()
        .filter(|(_, pr)| !pr.is_zero())
        .map(|(value, probability)| DistributionEntry { value, probability })
        .collect();
    Ok(ExactDistribution { pattern: h.name().to_string(), n, p, support })
}

fn merge_counts<K: std::hash::Hash + Eq>(mut a: HashMap<K, u64>, b: HashMap<K, u64>) -> HashMap<K, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// `n (n-1) ... (n-h+1) p^{e(H)}`.
pub fn expected_count(h: &PatternGraph, n: usize, p: Prob) -> Rational {
    let k = h.vertex_count();
    let falling: BigInt = if k > n {
        BigInt::zero()
    } else {
        (0..k).map(|i| BigInt::from(n - i)).product()
    };
    Rational::from_integer(falling) * p.pow(h.edge_count())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointProbEstimate {
    pub n: usize,
    pub mode: u64,
    pub estimate: EstimationResult,
    /// Observed value frequencies, ascending by value.
    pub histogram: Vec<(u64, u64)>,
}

/// Samples `trials` graphs (trial `t` seeded by `derive_seed(seed, "gnp", t)`) and
/// reports the most frequent value of `X_H`, ties to the smallest value.
pub fn point_prob_estimate(
    h: &PatternGraph,
    n: usize,
    p: Prob,
    trials: u64,
    seed: u64,
) -> Result<PointProbEstimate> {
    if trials == 0 {
        return Err(LabError::invalid("point_prob_estimate needs trials >= 1"));
    }
    check_count_budget(n, h.vertex_count())?;
    let tally: HashMap<u64, u64> = (0..trials)
        .into_par_iter()
        .fold(HashMap::new, |mut acc, t| {
            let g = sample_gnp_with(n, p, &mut trial_rng(seed, "gnp", t));
            *acc.entry(count_maps_unchecked(h, &g, None, &[], true)).or_insert(0) += 1;
            acc
        })
        .reduce(HashMap::new, merge_counts);
    let histogram: Vec<(u64, u64)> = tally.into_iter().collect::<BTreeMap<_, _>>().into_iter().collect();
    let (mode, hits) = histogram
        .iter()
        .fold((0, 0), |best, &(v, c)| if c > best.1 { (v, c) } else { best });
    Ok(PointProbEstimate {
        n,
        mode,
        estimate: EstimationResult::from_counts(hits, trials, seed),
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn triangle_on_three() {
        let d = exact_distribution(&PatternGraph::complete(3), 3, Prob::HALF).unwrap();
        assert_eq!(d.support.len(), 2);
        assert_eq!(d.probability_of(0), q(7, 8));
        assert_eq!(d.probability_of(6), q(1, 8));
    }

    #[test]
    fn edge_on_two() {
        let d = exact_distribution(&PatternGraph::complete(2), 2, Prob::new(1, 3).unwrap()).unwrap();
        assert_eq!(d.probability_of(0), q(2, 3));
        assert_eq!(d.probability_of(2), q(1, 3));
    }

    #[test]
    fn expected_counts() {
        assert_eq!(expected_count(&PatternGraph::complete(3), 3, Prob::HALF), q(3, 4));
        let p = Prob::new(2, 5).unwrap();
        assert_eq!(expected_count(&PatternGraph::complete(2), 9, p), q(9 * 8 * 2, 5));
    }

    #[test]
    fn cutoff_is_capacity_error() {
        let e = exact_distribution(&PatternGraph::complete(3), 8, Prob::HALF).unwrap_err();
        assert!(e.is_capacity());
    }

    #[test]
    fn point_prob_on_three() {
        let r = point_prob_estimate(&PatternGraph::complete(3), 3, Prob::HALF, 100_000, 5).unwrap();
        assert_eq!(r.mode, 0);
        assert!((0.86..=0.89).contains(&r.estimate.estimate));
    }
}
