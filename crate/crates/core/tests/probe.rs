mod common;

use common::*;
use lab_core::colour::{
    apply_extension, psi_table, ColourSystem, Extension, RestrictedColourSystem, SystemRecipe,
};
use lab_core::graph::{delta_edge, sample_gnp, Graph, PatternGraph};
use lab_core::probe::*;
use lab_core::rational::{int, to_f64, Prob};
use lab_core::seed::rng_from_seed;
use lab_core::table::{shade_tuples, TableFunction};
use lab_core::Rational;
use num_bigint::BigInt;
use num_traits::Signed;
use rand::Rng;

fn k(n: usize) -> PatternGraph {
    PatternGraph::complete(n)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn binomial_pmf(n: u64, j: u64, p: f64) -> f64 {
    let mut ln = 0.0;
    for i in 0..j {
        ln += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
    }
    (ln + j as f64 * p.ln() + (n - j) as f64 * (1.0 - p).ln()).exp()
}

// ---------- lattice ----------

fn brute_lattice(basis: &[Vec<Rational>], x: &[Rational], z: &Rational) -> u64 {
    let d = basis.len();
    let mut count = 0;
    let mut t = vec![-50i64; d];
    loop {
        let inside = (0..d).all(|c| {
            let s: Rational = (0..d).map(|i| &basis[i][c] * Rational::from_integer(t[i].into())).sum();
            (s - &x[c]).abs() < *z
        });
        count += u64::from(inside);
        let mut i = 0;
        while i < d && t[i] == 50 {
            t[i] = -50;
            i += 1;
        }
        if i == d {
            return count;
        }
        t[i] += 1;
    }
}

/// Random bases whose candidate box provably fits in `[-50, 50]^d`, checked with a float inverse.
fn random_lattice_case(rng: &mut impl Rng) -> Option<(Vec<Vec<Rational>>, Vec<Rational>, Rational)> {
    let d = rng.gen_range(1..=3);
    let r = |rng: &mut dyn rand::RngCore| q(rng.gen_range(-6..=6), rng.gen_range(1..=4));
    let basis: Vec<Vec<Rational>> = (0..d).map(|_| (0..d).map(|_| r(rng)).collect()).collect();
    let x: Vec<Rational> = (0..d).map(|_| r(rng) * int(3)).collect();
    let z = q(rng.gen_range(4..=40), 4);
    let m: Vec<Vec<f64>> = (0..d).map(|c| (0..d).map(|i| to_f64(&basis[i][c])).collect()).collect();
    let inv = float_inverse(&m)?;
    let zf = to_f64(&z);
    for row in &inv {
        let c: f64 = row.iter().zip(&x).map(|(a, b)| a * to_f64(b)).sum();
        let w: f64 = zf * row.iter().map(|a| a.abs()).sum::<f64>();
        if c.abs() + w > 49.0 {
            return None;
        }
    }
    Some((basis, x, z))
}

fn float_inverse(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let d = m.len();
    let mut a: Vec<Vec<f64>> = m.iter().enumerate().map(|(i, r)| {
        let mut r = r.clone();
        r.extend((0..d).map(|j| f64::from(u8::from(i == j))));
        r
    }).collect();
    for c in 0..d {
        let piv = (c..d).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c].abs() < 1e-6 {
            return None;
        }
        a.swap(c, piv);
        let f = a[c][c];
        a[c].iter_mut().for_each(|x| *x /= f);
        for i in 0..d {
            if i != c {
                let g = a[i][c];
                let rc = a[c].clone();
                a[i].iter_mut().zip(rc).for_each(|(x, y)| *x -= g * y);
            }
        }
    }
    Some(a.into_iter().map(|r| r[d..].to_vec()).collect())
}

#[test]
fn lattice_examples() {
    assert_eq!(lattice_count(&[vec![int(1)]], &[int(0)], &q(5, 2)).unwrap(), 5);
    let id = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
    assert_eq!(lattice_count(&id, &[int(0), int(0)], &q(3, 2)).unwrap(), 9);
    assert_eq!(lattice_count(&id, &[q(1, 2), q(1, 2)], &int(1)).unwrap(), 4);
    assert!(lattice_count(&id, &[int(0), int(0)], &q(1, 2)).is_err());
}

#[test]
fn lattice_matches_brute_force() {
    let mut rng = rng_from_seed(2024);
    let mut done = 0;
    while done < 50 {
        let Some((basis, x, z)) = random_lattice_case(&mut rng) else { continue };
        let want = if basis.len() == 3 { brute_lattice_fast(&basis, &x, &z) } else { brute_lattice(&basis, &x, &z) };
        assert_eq!(lattice_count(&basis, &x, &z).unwrap(), want, "{basis:?} {x:?} {z}");
        done += 1;
    }
}

/// The same enumeration with every quantity scaled to integers, for the 101^3 boxes.
fn brute_lattice_fast(basis: &[Vec<Rational>], x: &[Rational], z: &Rational) -> u64 {
    let den = basis.iter().flatten().chain(x).chain([z]).fold(BigInt::from(1), |acc, r| {
        num_integer::Integer::lcm(&acc, r.denom())
    });
    let sc = |r: &Rational| -> i128 {
        let v = r * Rational::from_integer(den.clone());
        i128::try_from(v.to_integer()).unwrap()
    };
    let d = basis.len();
    let b: Vec<Vec<i128>> = basis.iter().map(|v| v.iter().map(sc).collect()).collect();
    let xs: Vec<i128> = x.iter().map(sc).collect();
    let zs = sc(z);
    let mut count = 0;
    for t0 in -50i128..=50 {
        for t1 in -50i128..=50 {
            for t2 in -50i128..=50 {
                let t = [t0, t1, t2];
                if (0..d).all(|c| ((0..d).map(|i| t[i] * b[i][c]).sum::<i128>() - xs[c]).abs() < zs) {
                    count += 1;
                }
            }
        }
    }
    count
}

// ---------- cube functions ----------

#[test]
fn small_ball_of_a_binomial() {
    let f = LinearCube { coefficients: vec![vec![1.0]; 20], offset: vec![0.0] };
    let r = small_ball_estimate(&f, &[10.0], 0.5, Prob::HALF, 20_000, 4);
    let pmf = binomial_pmf(20, 10, 0.5);
    assert!((pmf - 0.1762).abs() < 1e-4);
    assert!(r.contains(pmf), "{r:?}");

    let c = ConstantCube { n: 5, value: vec![1.5, -2.0] };
    assert_eq!(small_ball_estimate(&c, &[1.5, -2.0], 1e-9, Prob::HALF, 100, 1).estimate, 1.0);
    assert_eq!(small_ball_estimate(&f, &[10.0], 0.0, Prob::HALF, 1000, 1).estimate, 0.0);
}

#[test]
fn wilson_intervals_cover_exact_small_ball_values() {
    let one = LinearCube { coefficients: vec![vec![1.0]; 30], offset: vec![0.0] };
    let halves = LinearCube::from_classes(40, &[vec![1.0, 0.0], vec![0.0, 1.0]], &[(0..20).collect(), (20..40).collect()]);
    let p = Prob::new(1, 3).unwrap();
    let truth_one = binomial_pmf(30, 10, 1.0 / 3.0);
    let truth_two = binomial_pmf(20, 7, 1.0 / 3.0).powi(2);
    let mut covered = [0, 0];
    for seed in 0..100 {
        covered[0] += usize::from(small_ball_estimate(&one, &[10.0], 0.5, p, 2000, seed).contains(truth_one));
        covered[1] += usize::from(small_ball_estimate(&halves, &[7.0, 7.0], 0.5, p, 2000, seed).contains(truth_two));
    }
    assert!(covered.iter().all(|&c| c >= 93), "{covered:?}");
}

#[test]
fn delta_profiles() {
    let f = LinearCube { coefficients: (0..10).map(|i| vec![i as f64, 1.0]).collect(), offset: vec![0.0, 0.0] };
    let d = delta_profile(&f, 7, Prob::HALF, 500, 3, 2.0, &[3.5, 0.5], 1e-9);
    assert_eq!(d.deviation.estimate, 0.0);
    assert_eq!(d.mean_delta, vec![7.0, 1.0]);

    let c = ConstantCube { n: 6, value: vec![4.0] };
    let d = delta_profile(&c, 2, Prob::HALF, 200, 3, 1.0, &[1.0], 0.5);
    assert_eq!(d.deviation.estimate, 1.0);
}

#[test]
fn triangle_delta_has_the_expected_mean() {
    // exact mean over every graph on 5 vertices equals 6(n-2)p^2
    let p = Prob::new(1, 3).unwrap();
    let mut mean = int(0);
    for g in all_graphs(5) {
        mean += graph_probability(&g, p) * int(delta_edge(&k(3), &g, 0, 1).unwrap() as i64);
    }
    assert_eq!(mean, int(6 * 3) * p.pow(2));

    let cube = SubgraphCountCube::new(k(3), 60);
    let d = delta_profile(&cube, 0, Prob::HALF, 4000, 7, 1.0, &[87.0], 40.0);
    assert!((d.mean_delta[0] - 87.0).abs() < 1.5, "{:?}", d.mean_delta);
    assert!(d.deviation.estimate < 0.1);
}

#[test]
fn estimators_are_seed_deterministic() {
    let cube = SubgraphCountCube::new(k(3), 12);
    let a = small_ball_estimate(&cube, &[30.0], 7.0, Prob::HALF, 3000, 99);
    let b = small_ball_estimate(&cube, &[30.0], 7.0, Prob::HALF, 3000, 99);
    assert_eq!(a, b);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let c = pool.install(|| small_ball_estimate(&cube, &[30.0], 7.0, Prob::HALF, 3000, 99));
    assert_eq!(a, c);
}

// ---------- Halász harness ----------

fn halves_config(n: usize, trials: u64) -> (LinearCube, HalaszConfig) {
    let dirs = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    let classes: Vec<Vec<usize>> = vec![(0..n / 2).collect(), (n / 2..n).collect()];
    let f = LinearCube::from_classes(n, &dirs, &classes);
    let cfg = HalaszConfig {
        directions: vec![vec![int(1), int(0)], vec![int(0), int(1)]],
        classes,
        epsilon: 0.25,
        s: 1.0,
        r: NoiseRadius::ScaleMultiple { scale_multiple: 1.0 },
        x: vec![(n / 4) as f64, (n / 4) as f64],
        p: Prob::HALF,
        trials,
        seed: 31,
        hypothesis_threshold: DEFAULT_HYPOTHESIS_THRESHOLD,
        hypothesis_coordinates: 4,
        hypothesis_trials: 100,
    };
    (f, cfg)
}

#[test]
fn halasz_hypothesis_is_exact_for_linear_functions() {
    let (f, cfg) = halves_config(100, 2000);
    let r = halasz_report(&f, &cfg).unwrap();
    assert_eq!(r.max_violation_frequency, 0.0);
    assert!(r.hypothesis_ok && r.warnings.is_empty());
    assert_eq!(r.radius, 1.0);
    assert!((r.bound_shape - 0.01).abs() < 1e-12);
    let truth = binomial_pmf(50, 25, 0.5).powi(2);
    assert!(r.small_ball.contains(truth), "{:?} vs {truth}", r.small_ball);
}

#[test]
fn halasz_flags_functions_that_ignore_their_classes() {
    let (_, cfg) = halves_config(100, 100);
    let blind = ConstantCube { n: 100, value: vec![0.0, 0.0] };
    let r = halasz_report(&blind, &cfg).unwrap();
    assert!(!r.hypothesis_ok);
    assert!(r.warnings.iter().any(|w| w.contains("hypothesis violation")));
}

#[test]
fn halasz_one_dimensional_rate() {
    // d = 1: the bound shape is N^{-1/2} and the fitted constant approaches √(2/π)
    for n in [100usize, 400] {
        let f = LinearCube { coefficients: vec![vec![1.0]; n], offset: vec![0.0] };
        let cfg = HalaszConfig {
            directions: vec![vec![int(1)]],
            classes: vec![(0..n).collect()],
            epsilon: 0.5,
            s: 1.0,
            r: NoiseRadius::ScaleMultiple { scale_multiple: 1.0 },
            x: vec![(n / 2) as f64],
            p: Prob::HALF,
            trials: 20_000,
            seed: 5,
            hypothesis_threshold: DEFAULT_HYPOTHESIS_THRESHOLD,
            hypothesis_coordinates: 2,
            hypothesis_trials: 50,
        };
        let r = halasz_report(&f, &cfg).unwrap();
        assert!((r.bound_shape - 1.0 / (n as f64).sqrt()).abs() < 1e-12);
        let exact = binomial_pmf(n as u64, n as u64 / 2, 0.5);
        assert!(r.small_ball.contains(exact));
        assert!((r.fitted_c - (2.0 / std::f64::consts::PI).sqrt()).abs() < 0.1, "{}", r.fitted_c);
    }
}

#[test]
fn halasz_preconditions() {
    let (f, cfg) = halves_config(100, 10);
    let mut overlap = cfg.clone();
    overlap.classes[1].push(0);
    assert!(halasz_report(&f, &overlap).is_err());
    let mut small = cfg.clone();
    small.epsilon = 0.6;
    assert!(halasz_report(&f, &small).is_err());
    let mut tight = cfg.clone();
    tight.r = NoiseRadius::ScaleMultiple { scale_multiple: 0.5 };
    assert!(halasz_report(&f, &tight).is_err());
    let mut flat = cfg.clone();
    flat.directions = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
    assert!(halasz_report(&f, &flat).is_err());
    let mut absolute = cfg;
    absolute.r = NoiseRadius::Absolute(1.0);
    assert!(halasz_report(&f, &absolute).is_ok());
}

#[test]
fn scaling_verdicts() {
    let reports: Vec<HalaszReport> = [100, 400]
        .iter()
        .map(|&n| {
            let (f, cfg) = halves_config(n, 20_000);
            halasz_report(&f, &cfg).unwrap()
        })
        .collect();
    let v = scaling_verdict(&reports, 3.0);
    assert!(v.bounded, "{v:?}");
}

// ---------- exact expectations ----------

fn restricted(a: &[usize], t: &[usize], uncoloured: usize, seed: u64) -> RestrictedColourSystem {
    SystemRecipe { a: a.to_vec(), t: t.to_vec(), uncoloured, p: Prob::HALF, seed, complete: false, restricted: true }
        .build_restricted()
        .unwrap()
}

fn random_extension(rcs: &RestrictedColourSystem, seed: u64) -> Extension {
    let mut rng = rng_from_seed(seed);
    let u = rcs.system().uncoloured();
    Extension {
        sets: rcs
            .system()
            .vertices_of_colour(rcs.g())
            .into_iter()
            .map(|v| (v, u.iter().copied().filter(|_| rng.gen::<bool>()).collect()))
            .collect(),
    }
}

fn exhaustive_mean(cs: &ColourSystem, p: Prob, f: impl Fn(&Graph) -> Vec<u64>) -> Vec<Rational> {
    let shape = shade_tuples(&cs.params().t).len();
    let mut acc = vec![int(0); shape];
    for g0 in all_graphs(cs.uncoloured().len()) {
        let w = graph_probability(&g0, p);
        for (a, v) in acc.iter_mut().zip(f(&g0)) {
            *a += &w * int(v as i64);
        }
    }
    acc
}

fn tiny_fixtures() -> Vec<(RestrictedColourSystem, Extension)> {
    let mut out = Vec::new();
    for (i, (a, t, n)) in [
        (vec![1], vec![1], 5),
        (vec![2], vec![1], 4),
        (vec![1, 1], vec![2, 1], 4),
        (vec![2, 1], vec![1, 1], 5),
        (vec![1, 2], vec![3, 1], 3),
    ]
    .into_iter()
    .enumerate()
    {
        for s in 0..3 {
            let seed = 10 * i as u64 + s;
            let rcs = restricted(&a, &t, n, seed);
            let ext = random_extension(&rcs, seed);
            out.push((rcs, ext));
        }
    }
    out
}

fn tiny_patterns() -> Vec<PatternGraph> {
    ["K2", "K3", "P3", "C4", "K4", "S3", "K2+K1"].iter().map(|s| PatternGraph::by_name(s).unwrap()).collect()
}

#[test]
fn exact_mu_examples() {
    let p = Prob::new(1, 3).unwrap();
    let rcs = restricted(&[1], &[1], 9, 0);
    let ext = random_extension(&rcs, 3);
    let s = ext.sets[0].1.len() as i64;
    assert_eq!(exact_mu(&rcs, &ext, &k(2), p).unwrap().entries(), &[int(2 * s)]);
    assert_eq!(exact_mu(&rcs, &ext, &k(3), p).unwrap().entries(), &[int(3 * s * (s - 1)) * p.to_rational()]);
}

#[test]
fn exact_mu_matches_exhaustive_enumeration() {
    for p in [Prob::HALF, Prob::new(1, 3).unwrap()] {
        for (rcs, ext) in tiny_fixtures() {
            let cs = apply_extension(&rcs, &ext).unwrap();
            for h in tiny_patterns() {
                let want = exhaustive_mean(&cs, p, |g0| brute_psi(&h, &cs, g0));
                assert_eq!(exact_mu(&rcs, &ext, &h, p).unwrap().entries(), want.as_slice(), "{}", h.name());
            }
        }
    }
}

#[test]
fn exact_nu_matches_enumeration_and_difference_identity() {
    let p = Prob::new(2, 5).unwrap();
    for (rcs, ext) in tiny_fixtures() {
        let cs = apply_extension(&rcs, &ext).unwrap();
        let top = cs.vertices_of_colour(cs.g());
        for h in tiny_patterns() {
            for &u in &cs.uncoloured()[..2] {
                let v = top[0];
                let nu = exact_nu(&rcs, &ext, &h, p, u, v).unwrap();
                let want = exhaustive_mean(&cs, p, |g0| {
                    shade_tuples(&cs.params().t).iter().map(|j| brute_kappa(&h, &cs, g0, j, u, v)).collect()
                });
                assert_eq!(nu.entries(), want.as_slice(), "{}", h.name());
                let with = exact_mu(&rcs, &ext.with_member(v, u, true), &h, p).unwrap();
                let without = exact_mu(&rcs, &ext.with_member(v, u, false), &h, p).unwrap();
                let diff = with.zip_with(&without, |a, b| a - b).unwrap();
                assert_eq!(nu, diff, "{}", h.name());
            }
        }
    }
}

#[test]
fn edge_nu_is_two() {
    let rcs = restricted(&[1], &[1], 6, 2);
    let ext = random_extension(&rcs, 2);
    let nu = exact_nu(&rcs, &ext, &k(2), Prob::HALF, 3, 0).unwrap();
    assert_eq!(nu.entries(), &[int(2)]);
}

#[test]
fn mu_average_matches_average_over_extensions() {
    let p = Prob::new(1, 3).unwrap();
    for (a, t, n) in [(vec![1], vec![1], 4), (vec![1, 1], vec![2, 1], 3), (vec![1, 2], vec![1, 1], 2)] {
        let rcs = restricted(&a, &t, n, 7);
        let cs = rcs.system();
        let top = cs.vertices_of_colour(cs.g());
        let u = cs.uncoloured();
        let bits = top.len() * u.len();
        for h in tiny_patterns() {
            let mut acc = TableFunction::from_fn(cs.params().t.clone(), |_| int(0));
            for mask in 0u64..1 << bits {
                let sets = top
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (v, (0..u.len()).filter(|&j| mask >> (i * u.len() + j) & 1 == 1).map(|j| u[j]).collect::<Vec<_>>()))
                    .collect::<Vec<_>>();
                let size = mask.count_ones() as usize;
                let w = p.pow(size) * p.complement().pow(bits - size);
                let mu = exact_mu(&rcs, &Extension { sets }, &h, p).unwrap();
                acc = acc.zip_with(&mu, |x, y| x + &w * y).unwrap();
            }
            assert_eq!(mu_average(&rcs, &h, p).unwrap(), acc, "{}", h.name());
        }
    }
}

#[test]
fn exact_mu_matches_monte_carlo_at_n_100() {
    let rcs = restricted(&[1, 1], &[2, 1], 98, 5);
    let ext = random_extension(&rcs, 5);
    let cs = apply_extension(&rcs, &ext).unwrap();
    let mu = exact_mu(&rcs, &ext, &k(3), Prob::HALF).unwrap();
    let trials = 10_000;
    let samples: Vec<Vec<u64>> = (0..trials)
        .map(|t| psi_table(&k(3), &cs, &sample_gnp(98, Prob::HALF, t)).unwrap().entries().to_vec())
        .collect();
    for (i, m) in mu.entries().iter().enumerate() {
        let xs: Vec<f64> = samples.iter().map(|s| s[i] as f64).collect();
        let mean = xs.iter().sum::<f64>() / trials as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let half = 3.0 * (var / trials as f64).sqrt();
        assert!((mean - to_f64(m)).abs() <= half, "entry {i}: {mean} vs {} ± {half}", to_f64(m));
    }
}

#[test]
fn expectation_budget_guard() {
    // thousands of distinct uncoloured types and four free pattern vertices
    let rcs = restricted(&[30, 1], &[1, 1], 3000, 0);
    let ext = random_extension(&rcs, 0);
    assert!(exact_mu(&rcs, &ext, &PatternGraph::complete(6), Prob::HALF).unwrap_err().is_capacity());
}

// ---------- scale probes ----------

fn single_colour(n: usize, seed: u64) -> (RestrictedColourSystem, Extension) {
    let rcs = restricted(&[1], &[1], n - 1, seed);
    let ext = random_extension(&rcs, seed + 1000);
    (rcs, ext)
}

#[test]
fn nu_gamma_ratio_is_bounded() {
    let max_ratio = |n: usize| {
        (0..10)
            .map(|s| {
                let (rcs, ext) = single_colour(n, s);
                let r = nu_gamma_check(&rcs, &ext, &k(3), Prob::HALF, n - 1, 0).unwrap();
                assert!(r.warnings.is_empty(), "{:?}", r.warnings);
                r.ratio
            })
            .fold(0.0, f64::max)
    };
    let c = max_ratio(100);
    assert!(c > 0.0);
    for n in [200, 400] {
        let m = max_ratio(n);
        assert!(m <= 2.0 * c, "n={n}: {m} vs {c}");
    }
}

#[test]
fn nu_gamma_closed_forms() {
    // p = 1: S_v = U, so ν = 6(|U| - 1) and n Γ = 6n
    let (rcs, _) = single_colour(50, 0);
    let full = Extension { sets: vec![(0, rcs.system().uncoloured())] };
    let r = nu_gamma_check(&rcs, &full, &k(3), Prob::ONE, 1, 0).unwrap();
    assert_eq!(r.nu.entries(), &[int(6 * 48)]);
    assert_eq!(r.gamma.entries(), &[int(6)]);
    assert_eq!(r.deviation, int(12));
    assert!(r.ratio.is_finite());
}

#[test]
fn kappa_gamma_examples() {
    let plain = |n: usize| SystemRecipe { a: vec![], t: vec![], uncoloured: n, p: Prob::HALF, seed: 0, complete: false, restricted: false }.build().unwrap();
    let r = kappa_gamma_check(&plain(400), &k(3), Prob::HALF, 0, 1, 100, 3).unwrap();
    assert!(r.max < 2.0, "{r:?}");
    assert!(r.gamma.entries() == [int(6) * Prob::HALF.pow(2)]);
    for p in [Prob::ZERO, Prob::ONE] {
        let r = kappa_gamma_check(&plain(60), &k(3), p, 0, 1, 20, 3).unwrap();
        assert!(r.ratios.windows(2).all(|w| w[0] == w[1]));
    }
    let small = kappa_gamma_check(&plain(200), &k(3), Prob::HALF, 0, 1, 100, 9).unwrap();
    let large = kappa_gamma_check(&plain(800), &k(3), Prob::HALF, 0, 1, 100, 9).unwrap();
    assert!(large.median <= small.median, "{} vs {}", large.median, small.median);
}

#[test]
fn kappa_gamma_with_a_lower_colour() {
    let cs = SystemRecipe { a: vec![1], t: vec![2], uncoloured: 150, p: Prob::HALF, seed: 4, complete: false, restricted: false }
        .build()
        .unwrap();
    let part = lab_core::cores::u_partition(&cs).unwrap();
    let u = part.star_class()[0];
    let v = part.classes[0].1[0];
    let r = kappa_gamma_check(&cs, &k(4), Prob::HALF, u, v, 20, 1).unwrap();
    assert_eq!(r.gamma.shape(), &[2]);
    assert!(r.warnings.is_empty());
    assert!(r.max.is_finite());
}

#[test]
fn concentration_examples() {
    let rcs = restricted(&[1], &[1], 199, 0);
    for scale in [ProbeScale::Medium, ProbeScale::Rough] {
        let r = concentration_probe(&rcs, &k(3), Prob::HALF, scale, 1000, 17).unwrap();
        assert!(r.violations.estimate <= 0.01, "{scale:?}: {r:?}");
        for p in [Prob::ZERO, Prob::ONE] {
            assert_eq!(concentration_probe(&rcs, &k(3), p, scale, 50, 17).unwrap().violations.estimate, 0.0);
        }
    }
    let small = concentration_probe(&restricted(&[1], &[1], 99, 0), &k(3), Prob::HALF, ProbeScale::Medium, 500, 1).unwrap();
    let large = concentration_probe(&restricted(&[1], &[1], 399, 0), &k(3), Prob::HALF, ProbeScale::Medium, 500, 1).unwrap();
    assert!(large.violations.estimate <= small.violations.estimate);
}

#[test]
fn scale_probe_examples() {
    let rcs = restricted(&[1], &[1], 99, 0);
    let far = TableFunction::new(vec![1], vec![int(10_i64.pow(9))]).unwrap();
    let sys = ScaleProbeSystem::Medium(rcs.clone());
    assert_eq!(scale_probe(&sys, &k(3), Prob::HALF, &far, 200, 1).unwrap().estimate, 0.0);

    let scaled: Vec<f64> = [100usize, 400]
        .iter()
        .map(|&n| {
            let rcs = restricted(&[1], &[1], n - 1, 0);
            let lambda = mu_average(&rcs, &k(3), Prob::HALF).unwrap().map(|x| x.round());
            let r = scale_probe(&ScaleProbeSystem::Medium(rcs), &k(3), Prob::HALF, &lambda, 4000, 2).unwrap();
            r.estimate * (n as f64).sqrt()
        })
        .collect();
    assert!(scaled.iter().all(|&x| x > 0.0));
    assert!(scaled[0] / scaled[1] < 3.0 && scaled[1] / scaled[0] < 3.0, "{scaled:?}");
}

#[test]
fn rough_probe_without_colours_is_a_window_probability() {
    // no lower colours: the target is X_H itself and the window is n^{3/2} ln n
    let n = 6;
    let cs = SystemRecipe { a: vec![], t: vec![], uncoloured: n, p: Prob::HALF, seed: 0, complete: false, restricted: false }.build().unwrap();
    let lambda = TableFunction::new(vec![], vec![int(60)]).unwrap();
    let r = scale_probe(&ScaleProbeSystem::Rough(cs), &k(3), Prob::HALF, &lambda, 20_000, 6).unwrap();
    let window = (n as f64).powf(1.5) * (n as f64).ln();
    let dist = lab_core::graph::exact_distribution(&k(3), n, Prob::HALF).unwrap();
    let mass: Rational = dist.support.iter().filter(|e| (e.value as f64 - 60.0).abs() <= window).map(|e| e.probability.clone()).sum();
    assert!(r.contains(to_f64(&mass)), "{r:?} vs {}", to_f64(&mass));
}
