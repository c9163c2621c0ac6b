mod common;

use common::*;
use lab_core::colour::*;
use lab_core::cores::{enumerate_downward_trees, gamma, u_partition, Core};
use lab_core::graph::{
    automorphism_count, count_labelled_copies, delta_edge, exact_distribution, sample_gnp, Graph, PatternGraph,
};
use lab_core::probe::{exact_mu, exact_nu, lattice_count, small_ball_estimate, CubeFunction, SubgraphCountCube};
use lab_core::rational::{int, Prob};
use lab_core::seed::rng_from_seed;
use lab_core::table::shade_tuples;
use lab_core::Rational;
use num_traits::Signed;
use proptest::prelude::*;
use rand::Rng;

fn pattern() -> impl Strategy<Value = PatternGraph> {
    (0..patterns().len()).prop_map(|i| patterns()[i].clone())
}

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0..=1.0f64, any::<u64>()).prop_map(|(n, d, s)| random_graph(n, d, s))
}

fn prob() -> impl Strategy<Value = Prob> {
    (0u64..=6, 1u64..=6).prop_filter_map("p <= 1", |(a, b)| Prob::new(a, b).ok())
}

fn recipe(a: Vec<usize>, t: Vec<usize>, uncoloured: usize, seed: u64, restricted: bool) -> SystemRecipe {
    SystemRecipe { a, t, uncoloured, p: Prob::HALF, seed, complete: false, restricted }
}

/// Systems with up to two colours and at most eight vertices, small enough for brute force.
fn tiny_system() -> impl Strategy<Value = ColourSystem> {
    (0usize..=2, any::<u64>()).prop_flat_map(|(g, seed)| {
        (proptest::collection::vec(1usize..=2, g), proptest::collection::vec(1usize..=2, g), 1usize..=4)
            .prop_map(move |(a, t, u)| recipe(a, t, u, seed, false).build().unwrap())
    })
}

fn tiny_restricted() -> impl Strategy<Value = RestrictedColourSystem> {
    (1usize..=2, any::<u64>(), 1usize..=4).prop_map(|(g, seed, u)| {
        let a = if g == 1 { vec![2] } else { vec![1, 1] };
        let mut t = vec![2; g];
        t[g - 1] = 1;
        recipe(a, t, u, seed, true).build_restricted().unwrap()
    })
}

fn random_extension(rcs: &RestrictedColourSystem, seed: u64) -> Extension {
    let mut rng = rng_from_seed(seed);
    let u = rcs.system().uncoloured();
    let sets = rcs
        .system()
        .vertices_of_colour(rcs.g())
        .into_iter()
        .map(|v| (v, u.iter().copied().filter(|_| rng.gen::<bool>()).collect()))
        .collect();
    Extension { sets }
}

/// Unlabelled copies: `(V', E')` with `E' ⊆ E(G[V'])` isomorphic to H, found by set enumeration.
fn unlabelled_copies(h: &PatternGraph, g: &Graph) -> u64 {
    let k = h.vertex_count();
    let mut count = 0;
    let mut perm: Vec<usize> = (0..k).collect();
    let mut perms = Vec::new();
    permutations(&mut perm, 0, &mut perms);
    for vs in 0u32..1 << g.order() {
        if vs.count_ones() as usize != k {
            continue;
        }
        let verts: Vec<usize> = (0..g.order()).filter(|&x| vs >> x & 1 == 1).collect();
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
            .filter(|&(a, b)| g.has_edge(verts[a], verts[b]))
            .collect();
        for es in 0u32..1 << pairs.len() {
            if es.count_ones() as usize != h.edge_count() {
                continue;
            }
            let chosen = |a: usize, b: usize| {
                let (a, b) = (a.min(b), a.max(b));
                pairs.iter().position(|&e| e == (a, b)).is_some_and(|i| es >> i & 1 == 1)
            };
            let iso = perms.iter().any(|p| h.edges().iter().all(|&(x, y)| chosen(p[x], p[y])));
            count += u64::from(iso);
        }
    }
    count
}

fn permutations(p: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == p.len() {
        out.push(p.clone());
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permutations(p, i + 1, out);
        p.swap(i, j);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn copies_equal_injection_count(h in pattern(), g in small_graph(8)) {
        prop_assert_eq!(count_labelled_copies(&h, &g).unwrap(), brute_copies(&h, &g));
    }

    #[test]
    fn copies_are_automorphisms_times_subgraphs(h in pattern(), g in small_graph(7)) {
        let labelled = count_labelled_copies(&h, &g).unwrap();
        prop_assert_eq!(labelled, automorphism_count(&h).unwrap() * unlabelled_copies(&h, &g));
    }

    #[test]
    fn delta_is_the_toggle_difference(h in pattern(), g in small_graph(8)) {
        for u in 0..g.order() {
            for v in u + 1..g.order() {
                let hi = count_labelled_copies(&h, &g.with_edge(u, v)).unwrap();
                let lo = count_labelled_copies(&h, &g.without_edge(u, v)).unwrap();
                prop_assert_eq!(hi - lo, delta_edge(&h, &g, u, v).unwrap());
            }
        }
    }

    #[test]
    fn sampler_is_deterministic(n in 0usize..40, p in prob(), seed in any::<u64>()) {
        let a = sample_gnp(n, p, seed);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
        prop_assert_eq!(&a, &pool.install(|| sample_gnp(n, p, seed)));
        prop_assert_eq!(a, sample_gnp(n, p, seed));
    }

    #[test]
    fn valid_systems_round_trip(cs in tiny_system()) {
        prop_assert!(cs.validate().is_empty());
        let back: ColourSystem = serde_json::from_str(&serde_json::to_string(&cs).unwrap()).unwrap();
        prop_assert_eq!(back, cs);
    }

    #[test]
    fn psi_entries_are_bounded(h in pattern(), cs in tiny_system(), seed in any::<u64>()) {
        let g0 = sample_gnp(cs.uncoloured().len(), Prob::HALF, seed);
        let bound = (cs.order() as u64).pow(h.vertex_count() as u32);
        prop_assert!(psi_table(&h, &cs, &g0).unwrap().entries().iter().all(|&x| x <= bound));
    }

    #[test]
    fn edge_toggle_identity(h in pattern(), cs in tiny_system(), seed in any::<u64>()) {
        let u = cs.uncoloured();
        prop_assume!(u.len() >= 2);
        let g0 = sample_gnp(u.len(), Prob::HALF, seed);
        let hi = psi_table(&h, &cs, &g0.with_edge(0, 1)).unwrap();
        let lo = psi_table(&h, &cs, &g0.without_edge(0, 1)).unwrap();
        let kap = kappa_table(&h, &cs, &g0, u[0], u[1]).unwrap();
        prop_assert_eq!(hi.zip_with(&lo, |a, b| a - b).unwrap(), kap);
    }

    #[test]
    fn extension_toggle_identity(h in pattern(), rcs in tiny_restricted(), seed in any::<u64>()) {
        let cs = rcs.system();
        let u = cs.uncoloured()[0];
        let v = cs.vertices_of_colour(rcs.g())[0];
        let base = random_extension(&rcs, seed);
        let g0 = sample_gnp(cs.uncoloured().len(), Prob::HALF, seed);
        let without = apply_extension(&rcs, &base.with_member(v, u, false)).unwrap();
        let with = apply_extension(&rcs, &base.with_member(v, u, true)).unwrap();
        let diff = psi_table(&h, &with, &g0).unwrap().zip_with(&psi_table(&h, &without, &g0).unwrap(), |a, b| a - b).unwrap();
        prop_assert_eq!(diff, kappa_table(&h, &without, &g0, u, v).unwrap());
    }

    #[test]
    fn decomposition_identity(n in 4usize..14, seed in any::<u64>(), h in pattern()) {
        let cs = recipe(vec![1], vec![1], n, seed, false).build().unwrap();
        let g0 = sample_gnp(n, Prob::HALF, seed);
        match decompose(&cs, &g0, &h) {
            Ok(d) => prop_assert!(d.identity_holds),
            Err(lab_core::LabError::PatternNotRepresented { .. }) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn u_partition_covers_u(a in 1usize..=2, t in 1usize..=2, n in 1usize..60, seed in any::<u64>()) {
        let cs = recipe(vec![a], vec![t], n, seed, false).build().unwrap();
        let part = u_partition(&cs).unwrap();
        let mut all: Vec<usize> = part.classes.iter().flat_map(|(_, c)| c.iter().copied()).collect();
        all.sort_unstable();
        prop_assert_eq!(all, cs.uncoloured());
    }

    #[test]
    fn gamma_is_nonnegative(h in pattern(), a in 1usize..=2, t in 1usize..=2, p in prob()) {
        let cs = SystemRecipe { complete: true, ..recipe(vec![a], vec![t], 1, 0, false) }.build().unwrap();
        let core: Core = lab_core::cores::extended_core(&cs).unwrap();
        prop_assume!(h.vertex_count() > core.g());
        for b in 1..=core.g() {
            for tree in enumerate_downward_trees(&core, b).unwrap() {
                let gv = gamma(&core, &h, &tree.edges, p).unwrap();
                prop_assert!(gv.entries().iter().all(|x| !x.is_negative()));
            }
        }
    }

    #[test]
    fn exact_nu_is_a_difference_of_exact_mu(h in pattern(), rcs in tiny_restricted(), seed in any::<u64>(), p in prob()) {
        let cs = rcs.system();
        let u = cs.uncoloured()[0];
        let v = cs.vertices_of_colour(rcs.g())[0];
        let ext = random_extension(&rcs, seed);
        let with = exact_mu(&rcs, &ext.with_member(v, u, true), &h, p).unwrap();
        let without = exact_mu(&rcs, &ext.with_member(v, u, false), &h, p).unwrap();
        prop_assert_eq!(exact_nu(&rcs, &ext, &h, p, u, v).unwrap(), with.zip_with(&without, |a, b| a - b).unwrap());
    }

    #[test]
    fn cube_deltas_ignore_their_own_coordinate(n in 3usize..9, i in 0usize..36, bits in any::<u64>()) {
        let cube = SubgraphCountCube::new(PatternGraph::complete(3), n);
        let i = i % cube.dim();
        let mut xi: Vec<bool> = (0..cube.dim()).map(|k| bits >> k & 1 == 1).collect();
        xi[i] = false;
        let lo = cube.delta(i, &xi);
        xi[i] = true;
        prop_assert_eq!(lo, cube.delta(i, &xi));
    }

    #[test]
    fn estimates_sit_inside_their_intervals(n in 3usize..8, x in 0.0..60.0f64, r in 0.0..20.0f64, trials in 1u64..300, seed in any::<u64>()) {
        let cube = SubgraphCountCube::new(PatternGraph::complete(3), n);
        let e = small_ball_estimate(&cube, &[x], r, Prob::HALF, trials, seed);
        prop_assert!((0.0..=1.0).contains(&e.estimate));
        prop_assert!(e.lower <= e.estimate && e.estimate <= e.upper);
    }

    #[test]
    fn one_dimensional_lattice_counts(num in -40i64..40, den in 1i64..8, xn in -100i64..100, zn in 4i64..40) {
        prop_assume!(num != 0);
        let v = Rational::new(num.into(), den.into());
        let x = Rational::new(xn.into(), 3.into());
        let z = Rational::new(zn.into(), 4.into());
        let brute = (-1000i64..=1000).filter(|&t| (&v * int(t) - &x).abs() < z).count() as u64;
        prop_assert_eq!(lattice_count(&[vec![v]], &[x], &z).unwrap(), brute);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn exact_distributions_are_normalised(h in pattern(), n in 1usize..=6, p in prob()) {
        let d = exact_distribution(&h, n, p).unwrap();
        prop_assert_eq!(d.total(), int(1));
        let aut = automorphism_count(&h).unwrap();
        prop_assert!(d.support.iter().all(|e| e.value % aut == 0));
    }

    #[test]
    fn general_position_survives_deletion(n in 500usize..900, seed in any::<u64>(), cut in any::<u64>()) {
        let cs = recipe(vec![1, 1], vec![2, 1], n, seed, false).build().unwrap();
        let fam = neighbourhood_family(&cs).unwrap();
        let k = 3u64.pow(cs.g() as u32);
        prop_assume!(general_position_check(&fam, Prob::HALF, k).unwrap().passed);
        let budget = 1usize << (cs.params().a.iter().zip(&cs.params().t).map(|(a, t)| a * t).sum::<usize>());
        let mut rng = rng_from_seed(cut);
        let ell = rng.gen_range(0..=budget);
        let mut gone = fam.ground.clone();
        for i in 0..ell {
            let j = rng.gen_range(i..gone.len());
            gone.swap(i, j);
        }
        gone.truncate(ell);
        prop_assert!(general_position_check(&fam.delete_ground(&gone), Prob::HALF, 2 * k).unwrap().passed);
    }

    #[test]
    fn intersections_of_a_general_family(n in 200usize..2000, m in 1usize..=10, seed in any::<u64>(), p in prob()) {
        prop_assume!(!p.is_zero() && !p.is_one());
        let mut rng = rng_from_seed(seed);
        let ground: Vec<usize> = (0..n).collect();
        let members: Vec<Vec<usize>> =
            (0..m).map(|_| ground.iter().copied().filter(|_| rng.gen::<f64>() < p.to_f64()).collect()).collect();
        let fam = SetFamily::from_members(ground, &members).unwrap();
        let k = 3;
        let report = general_position_check(&fam, p, k).unwrap();
        prop_assume!(report.passed);
        let bound = (1u64 << m) as f64 * report.threshold;
        for set in 1u32..1 << m {
            let inside = (0..n).filter(|r| (0..m).all(|i| set >> i & 1 == 0 || members[i].binary_search(r).is_ok())).count();
            let expect = p.to_f64().powi(set.count_ones() as i32) * n as f64;
            prop_assert!((inside as f64 - expect).abs() <= bound);
        }
    }

    #[test]
    fn psi_matches_brute_force(h in pattern(), cs in tiny_system(), seed in any::<u64>()) {
        let g0 = sample_gnp(cs.uncoloured().len(), Prob::HALF, seed);
        let psi = psi_table(&h, &cs, &g0).unwrap();
        let brute = brute_psi(&h, &cs, &g0);
        prop_assert_eq!(psi.entries(), brute.as_slice());
        let tuples = shade_tuples(&cs.params().t);
        prop_assert_eq!(tuples.len(), cs.params().tuple_count());
    }
}
