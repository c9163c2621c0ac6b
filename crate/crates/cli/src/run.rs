//! Dispatch from an [`ExperimentConfig`] to the laboratory operations.
//!
//! Every runner builds and validates all of its inputs before the first sample is drawn.

use lab_core::colour::{
    classify_generality, decompose, dispersedness_estimate, extend_restricted, general_position_check, is_complete,
    neighbourhood_family, ColourSystem, ColouredEdge, DispersednessQuery, RestrictedColourSystem, SystemRecipe,
    VertexColour,
};
use lab_core::cores::{
    enumerate_downward_trees, express_tree_gamma, extended_core, gamma, span_rank, u_partition, Core,
};
use lab_core::graph::{
    exact_distribution_with_cutoff, expected_count, point_prob_estimate, sample_gnp, DEFAULT_EXHAUSTIVE_CUTOFF,
};
use lab_core::probe::{
    concentration_probe, halasz_report, kappa_gamma_check, mu_average, nu_gamma_check, scale_probe, scaling_verdict,
    ConstantCube, CubeFunction, HalaszConfig, LinearCube, ProbeScale, ScaleProbeSystem, SubgraphCountCube,
    HYPOTHESIS_NOTE,
};
use lab_core::rational::{to_f64, Prob};
use lab_core::seed::derive_seed;
use lab_core::{LabError, PatternGraph, Rational};
use serde_json::json;

use crate::config::*;
use crate::error::{CliError, CliResult};
use crate::record::{now_ms, Cell, ResultRecord, SeedStream, Table};

/// Kind-specific output before it is wrapped into a record.
struct Output {
    table: Table,
    summary: serde_json::Value,
    warnings: Vec<String>,
    seeds: Vec<(&'static str, u64)>,
}

impl Output {
    fn new(table: Table) -> Self {
        Output { table, summary: serde_json::Value::Null, warnings: Vec::new(), seeds: Vec::new() }
    }
}

/// Runs on the current rayon pool.
pub fn run_experiment(config: &ExperimentConfig) -> CliResult<ResultRecord> {
    let started_ms = now_ms();
    let out = dispatch(config)?;
    let seeds = out
        .seeds
        .iter()
        .map(|&(label, count)| SeedStream { label: label.to_string(), count, first: derive_seed(config.seed, label, 0) })
        .collect();
    Ok(ResultRecord {
        version: crate::VERSION.to_string(),
        config: config.clone(),
        started_ms,
        finished_ms: now_ms(),
        workers: rayon::current_num_threads(),
        seeds,
        table: out.table,
        summary: out.summary,
        warnings: out.warnings,
    })
}

/// Runs on a dedicated pool of `workers` threads.
pub fn run_with_workers(config: &ExperimentConfig, workers: usize) -> CliResult<ResultRecord> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::config(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| run_experiment(config))
}

/// `LAB_WORKERS` when set to a positive integer, else the available parallelism.
pub fn workers_from_env() -> CliResult<usize> {
    match std::env::var("LAB_WORKERS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(w),
            _ => Err(CliError::config(format!("LAB_WORKERS must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn dispatch(cfg: &ExperimentConfig) -> CliResult<Output> {
    let trials = cfg.trials();
    if trials == 0 {
        return Err(CliError::config("trials must be positive"));
    }
    match &cfg.experiment {
        Experiment::Distribution(p) => distribution(p),
        Experiment::Pointprob(p) => pointprob(p, trials, cfg.seed),
        Experiment::SpanCheck(p) => span_check(p),
        Experiment::Gamma(p) => gamma_table(p),
        Experiment::Decompose(p) => decomposition(p, cfg.seed),
        Experiment::Dispersedness(p) => dispersedness(p, trials, cfg.seed),
        Experiment::GeneralPosition(p) => general_position(p),
        Experiment::Halasz(p) => halasz(p, trials, cfg.seed),
        Experiment::NuGamma(p) => nu_gamma(p, cfg.seed),
        Experiment::KappaGamma(p) => kappa_gamma(p, trials, cfg.seed),
        Experiment::ScaleProbe(p) => scale(p, trials, cfg.seed),
        Experiment::Concentration(p) => concentration(p, trials, cfg.seed),
    }
}

fn exact(r: &Rational) -> String {
    r.to_string()
}

fn distribution(p: &DistributionParams) -> CliResult<Output> {
    let h = p.pattern.build()?;
    let d = exact_distribution_with_cutoff(&h, p.n, p.p, p.cutoff.unwrap_or(DEFAULT_EXHAUSTIVE_CUTOFF))?;
    let mut table = Table::new(&["value", "probability"]);
    for e in &d.support {
        table.push(vec![e.value.into(), e.probability.clone().into()]);
    }
    let (mode, top) = d.max_point();
    let mut out = Output::new(table);
    out.summary = json!({
        "total": exact(&d.total()),
        "mean": exact(&d.mean()),
        "expected_count": exact(&expected_count(&h, p.n, p.p)),
        "mode": mode,
        "max_point_probability": exact(&top),
    });
    Ok(out)
}

fn pointprob(p: &PointProbParams, trials: u64, seed: u64) -> CliResult<Output> {
    let h = p.pattern.build()?;
    if p.ns.is_empty() {
        return Err(CliError::config("pointprob needs at least one n"));
    }
    for &n in &p.ns {
        lab_core::graph::check_count_budget(n, h.vertex_count())?;
    }
    let mut table = Table::new(&["n", "mode", "successes", "trials", "estimate", "lower", "upper", "ratio"]);
    let mut previous: Option<f64> = None;
    for &n in &p.ns {
        let e = point_prob_estimate(&h, n, p.p, trials, seed)?;
        let est = e.estimate;
        table.push(vec![
            n.into(),
            e.mode.into(),
            est.successes.into(),
            est.trials.into(),
            est.estimate.into(),
            est.lower.into(),
            est.upper.into(),
            previous.map(|q| est.estimate / q).into(),
        ]);
        previous = Some(est.estimate);
    }
    let mut out = Output::new(table);
    out.seeds.push(("gnp", trials));
    Ok(out)
}

/// Adds the uncoloured apex, joined to every coloured vertex in every shade of its colour.
fn core_from_coloured(a: &[usize], t: &[usize], edges: &[(usize, usize, usize, usize)]) -> CliResult<Core> {
    let cs = coloured_system(a, t, edges)?;
    let apex = cs.order();
    let mut colours = cs.colours().to_vec();
    let mut all = cs.edges().to_vec();
    for (v, c) in colours.iter().enumerate() {
        let c = c.colour().expect("coloured");
        for s in 1..=cs.params().shades(c) {
            all.push(ColouredEdge::new(v, apex, c, s));
        }
    }
    colours.push(VertexColour::Uncoloured);
    Ok(Core::new(ColourSystem::new_valid(cs.params().clone(), colours, all)?)?)
}

/// Every edge set inside a single colour-1 class of `a1` vertices with `t1` shades.
fn intra_edge_sets(a1: usize, t1: usize) -> Vec<Vec<(usize, usize, usize, usize)>> {
    let slots: Vec<(usize, usize, usize, usize)> =
        (0..a1).flat_map(|u| (u + 1..a1).flat_map(move |v| (1..=t1).map(move |s| (u, v, 1, s)))).collect();
    (0u32..1 << slots.len())
        .map(|mask| slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect())
        .collect()
}

/// Expands sweeps into concrete specs.
pub fn expand_cores(specs: &[CoreSpec]) -> CliResult<Vec<CoreSpec>> {
    let mut out = Vec::new();
    for spec in specs {
        match *spec {
            CoreSpec::Sweep { g_max, a1_max, t1_max } => {
                if g_max > 2 {
                    return Err(CliError::config("core sweeps cover g <= 2"));
                }
                if g_max >= 1 {
                    // a core's top colour has one shade
                    for a1 in 1..=a1_max {
                        for edges in intra_edge_sets(a1, 1) {
                            out.push(CoreSpec::Coloured { a: vec![a1], t: vec![1], edges });
                        }
                    }
                }
                if g_max >= 2 {
                    for a1 in 1..=a1_max {
                        for t1 in 1..=t1_max {
                            for edges in intra_edge_sets(a1, t1) {
                                out.push(CoreSpec::Extended { a: vec![a1], t: vec![t1], edges });
                            }
                        }
                    }
                }
            }
            _ => out.push(spec.clone()),
        }
    }
    Ok(out)
}

pub fn build_core(spec: &CoreSpec) -> CliResult<Core> {
    match spec {
        CoreSpec::Coloured { a, t, edges } => core_from_coloured(a, t, edges),
        CoreSpec::Extended { a, t, edges } => Ok(extended_core(&coloured_system(a, t, edges)?)?),
        CoreSpec::Explicit(core) => Ok(core.clone()),
        CoreSpec::Sweep { .. } => Err(CliError::config("a sweep stands for many cores; expand it first")),
    }
}

pub fn core_label(spec: &CoreSpec) -> String {
    let edges = |e: &[(usize, usize, usize, usize)]| {
        e.iter().map(|&(u, v, c, s)| format!("{u}-{v}:{c}.{s}")).collect::<Vec<_>>().join(" ")
    };
    match spec {
        CoreSpec::Coloured { a, t, edges: e } => format!("coloured a={a:?} t={t:?} [{}]", edges(e)),
        CoreSpec::Extended { a, t, edges: e } => format!("extended a={a:?} t={t:?} [{}]", edges(e)),
        CoreSpec::Explicit(c) => format!("explicit order={}", c.system().order()),
        CoreSpec::Sweep { g_max, a1_max, t1_max } => format!("sweep g<={g_max} a1<={a1_max} t1<={t1_max}"),
    }
}

fn span_check(p: &SpanCheckParams) -> CliResult<Output> {
    let specs = expand_cores(&p.cores)?;
    let cores: Vec<Core> = specs.iter().map(build_core).collect::<CliResult<_>>()?;
    let patterns: Vec<PatternGraph> = p.patterns.iter().map(PatternSpec::build).collect::<CliResult<_>>()?;
    let mut table = Table::new(&[
        "core",
        "pattern",
        "g",
        "complete",
        "tuple_count",
        "rank",
        "full_rank",
        "preconditions",
        "trees",
        "certificates_ok",
    ]);
    let mut warnings = Vec::new();
    for (spec, core) in specs.iter().zip(&cores) {
        let complete = is_complete(core.system())?;
        for h in &patterns {
            if h.vertex_count() < core.g() + 1 {
                warnings.push(format!("skipped {} on {}: needs h >= g + 1", h.name(), core_label(spec)));
                continue;
            }
            let r = span_rank(core, h, p.p)?;
            let (trees, ok) = if p.certificates { certificate_check(core, h, p.p)? } else { (0, 0) };
            table.push(vec![
                core_label(spec).into(),
                h.name().into(),
                core.g().into(),
                complete.into(),
                r.t.into(),
                r.rank.into(),
                (r.rank == r.t).into(),
                r.preconditions_hold.into(),
                if p.certificates { Cell::from(trees) } else { Cell::Empty },
                if p.certificates { Cell::from(ok) } else { Cell::Empty },
            ]);
        }
    }
    let mut out = Output::new(table);
    out.warnings = warnings;
    Ok(out)
}

/// Downward trees of every size and how many certificates evaluate exactly to Γ.
fn certificate_check(core: &Core, h: &PatternGraph, p: Prob) -> CliResult<(usize, usize)> {
    let mut total = 0;
    let mut ok = 0;
    for b in 1..=core.g() {
        for tree in enumerate_downward_trees(core, b)? {
            let cert = express_tree_gamma(core, h, &tree, p)?;
            total += 1;
            ok += usize::from(cert.evaluate(core, h, p)? == gamma(core, h, &tree.edges, p)?);
        }
    }
    Ok((total, ok))
}

fn gamma_table(p: &GammaParams) -> CliResult<Output> {
    let core = build_core(&p.core)?;
    let h = p.pattern.build()?;
    let g = gamma(&core, &h, &p.edges, p.p)?;
    let mut table = Table::new(&["tuple", "value"]);
    for (j, v) in g.tuples().iter().zip(g.entries()) {
        let tuple = j.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        table.push(vec![tuple.into(), v.clone().into()]);
    }
    let mut out = Output::new(table);
    out.summary = serde_json::to_value(&g).expect("tables serialise");
    Ok(out)
}

fn fixture_recipe(sweep: &FixtureSweep, seed: u64, i: u64) -> CliResult<SystemRecipe> {
    if sweep.n_min > sweep.n_max {
        return Err(CliError::config("fixture sweep needs n_min <= n_max"));
    }
    let span = (sweep.n_max - sweep.n_min + 1) as u64;
    Ok(SystemRecipe {
        seed: derive_seed(seed, "fixture", i),
        uncoloured: sweep.n_min + (i % span) as usize,
        ..sweep.system.clone()
    })
}

/// Attempts allowed per requested fixture before giving up on unrepresented patterns.
const DECOMPOSE_ATTEMPTS: usize = 20;

fn decomposition(p: &DecomposeParams, seed: u64) -> CliResult<Output> {
    let h = p.pattern.build()?;
    fixture_recipe(&p.fixtures, seed, 0)?.build()?;
    let mut table = Table::new(&["fixture", "n", "representatives", "status", "identity_holds"]);
    let mut verified = 0;
    let mut attempts = 0;
    while verified < p.count && attempts < p.count * DECOMPOSE_ATTEMPTS {
        let i = attempts as u64;
        attempts += 1;
        let recipe = fixture_recipe(&p.fixtures, seed, i)?;
        let cs = recipe.build()?;
        let g0 = sample_gnp(recipe.uncoloured, p.p, derive_seed(seed, "g0", i));
        match decompose(&cs, &g0, &h) {
            Ok(d) => {
                verified += 1;
                table.push(vec![i.into(), recipe.uncoloured.into(), d.w.len().into(), "checked".into(), d.identity_holds.into()]);
            }
            Err(LabError::PatternNotRepresented { .. }) => {
                table.push(vec![i.into(), recipe.uncoloured.into(), Cell::Empty, "skipped".into(), Cell::Empty]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let holds = table.rows.iter().filter(|r| r[4] == Cell::Bool(true)).count();
    let mut out = Output::new(table);
    if verified < p.count {
        out.warnings.push(format!("only {verified} of {} fixtures represent every pattern", p.count));
    }
    out.summary = json!({ "checked": verified, "identity_holds": holds, "attempts": attempts });
    out.seeds = vec![("fixture", attempts as u64), ("g0", attempts as u64)];
    Ok(out)
}

fn dispersedness(p: &DispersednessParams, trials: u64, seed: u64) -> CliResult<Output> {
    let rcs = p.system.build_restricted()?;
    let h = p.pattern.build()?;
    let g0 = sample_gnp(rcs.system().uncoloured().len(), p.p, derive_seed(seed, "g0", 0));
    let r = dispersedness_estimate(&rcs, &g0, &h, p.p, DispersednessQuery { q: p.q, trials, seed })?;
    let est = &r.max_frequency;
    let mut table =
        Table::new(&["distinct_tables", "successes", "trials", "estimate", "lower", "upper", "dispersed"]);
    table.push(vec![
        r.distinct_tables.into(),
        est.successes.into(),
        est.trials.into(),
        est.estimate.into(),
        est.lower.into(),
        est.upper.into(),
        r.dispersed.into(),
    ]);
    let mut out = Output::new(table);
    out.summary = json!({ "attaining": r.attaining });
    out.warnings = r.warnings;
    out.seeds = vec![("g0", 1), ("extension", trials)];
    Ok(out)
}

fn general_position(p: &GeneralPositionParams) -> CliResult<Output> {
    let cs = p.system.build()?;
    let fam = neighbourhood_family(&cs)?;
    let k = p.k.unwrap_or_else(|| 3u64.pow(cs.g() as u32));
    let r = general_position_check(&fam, p.p, k)?;
    let class = classify_generality(&cs, p.p)?;
    let mut table = Table::new(&[
        "m",
        "ground_size",
        "k",
        "threshold",
        "max_deviation",
        "worst_cell",
        "slack",
        "passed",
        "generality",
    ]);
    let worst = r.worst_cell.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    table.push(vec![
        r.m.into(),
        r.ground_size.into(),
        r.k.into(),
        r.threshold.into(),
        r.max_deviation.into(),
        worst.into(),
        r.slack.into(),
        r.passed.into(),
        serde_json::to_value(class).expect("enum").as_str().unwrap_or_default().to_string().into(),
    ]);
    Ok(Output::new(table))
}

fn build_cube(spec: &CubeSpec, directions: &[Vec<f64>], classes: &[Vec<usize>]) -> CliResult<Box<dyn CubeFunction>> {
    Ok(match spec {
        CubeSpec::Blocks { n } => Box::new(LinearCube::from_classes(*n, directions, classes)),
        CubeSpec::Linear { coefficients, offset } => {
            if coefficients.iter().any(|c| c.len() != offset.len()) {
                return Err(CliError::config("linear cube coefficients must match the offset dimension"));
            }
            Box::new(LinearCube { coefficients: coefficients.clone(), offset: offset.clone() })
        }
        CubeSpec::Constant { n, value } => Box::new(ConstantCube { n: *n, value: value.clone() }),
        CubeSpec::Subgraph { pattern, n } => Box::new(SubgraphCountCube::new(pattern.build()?, *n)),
    })
}

fn cube_dim(spec: &CubeSpec) -> usize {
    match spec {
        CubeSpec::Blocks { n } | CubeSpec::Constant { n, .. } => *n,
        CubeSpec::Linear { coefficients, .. } => coefficients.len(),
        CubeSpec::Subgraph { n, .. } => n * n.saturating_sub(1) / 2,
    }
}

/// `d` contiguous blocks of `0..n`, the last absorbing the remainder.
fn default_classes(n: usize, d: usize) -> Vec<Vec<usize>> {
    (0..d).map(|j| (j * n / d..(j + 1) * n / d).collect()).collect()
}

fn halasz(p: &HalaszParams, trials: u64, seed: u64) -> CliResult<Output> {
    if p.cases.is_empty() {
        return Err(CliError::config("halasz needs at least one case"));
    }
    let mut prepared = Vec::new();
    for (i, case) in p.cases.iter().enumerate() {
        let n = cube_dim(&case.function);
        let d = case.directions.len();
        let classes = case.classes.clone().unwrap_or_else(|| default_classes(n, d));
        let dirs: Vec<Vec<f64>> = case.directions.iter().map(|v| v.iter().map(to_f64).collect()).collect();
        let cube = build_cube(&case.function, &dirs, &classes)?;
        let cfg = HalaszConfig {
            directions: case.directions.clone(),
            classes,
            epsilon: case.epsilon,
            s: case.s,
            r: case.r,
            x: case.x.clone(),
            p: case.p,
            trials,
            seed: derive_seed(seed, "case", i as u64),
            hypothesis_threshold: case.hypothesis_threshold,
            hypothesis_coordinates: case.hypothesis_coordinates,
            hypothesis_trials: case.hypothesis_trials,
        };
        cfg.validate(cube.dim(), cube.out_dim())?;
        prepared.push((cube, cfg));
    }
    let mut table = Table::new(&[
        "case",
        "n",
        "d",
        "r",
        "radius",
        "successes",
        "trials",
        "estimate",
        "lower",
        "upper",
        "bound_shape",
        "fitted_c",
        "max_violation_frequency",
        "hypothesis_ok",
    ]);
    let mut reports = Vec::new();
    let mut warnings = Vec::new();
    for (i, (cube, cfg)) in prepared.iter().enumerate() {
        let r = halasz_report(cube.as_ref(), cfg)?;
        let sb = &r.small_ball;
        table.push(vec![
            i.into(),
            r.n.into(),
            r.d.into(),
            r.r.into(),
            r.radius.into(),
            sb.successes.into(),
            sb.trials.into(),
            sb.estimate.into(),
            sb.lower.into(),
            sb.upper.into(),
            r.bound_shape.into(),
            r.fitted_c.into(),
            r.max_violation_frequency.into(),
            r.hypothesis_ok.into(),
        ]);
        warnings.extend(r.warnings.iter().map(|w| format!("case {i}: {w}")));
        reports.push(r);
    }
    let verdict = scaling_verdict(&reports, p.scaling_factor);
    let mut out = Output::new(table);
    out.summary = json!({ "verdict": verdict, "note": HYPOTHESIS_NOTE });
    out.warnings = warnings;
    out.seeds = vec![("case", p.cases.len() as u64)];
    Ok(out)
}

/// Lowest uncoloured vertex meeting every lower-colour vertex in every shade of its colour.
fn lowest_star_vertex(cs: &ColourSystem, top: usize) -> Option<usize> {
    let lower: Vec<(usize, u64)> = cs
        .coloured_order()
        .into_iter()
        .filter_map(|v| {
            let c = cs.colour_of(v).colour().expect("coloured");
            (c < top).then(|| (v, (1u64 << cs.params().shades(c)) - 1))
        })
        .collect();
    cs.uncoloured().into_iter().find(|&u| lower.iter().all(|&(v, full)| cs.shades_between(v, u) == full))
}

fn nu_gamma(p: &NuGammaParams, seed: u64) -> CliResult<Output> {
    let h = p.pattern.build()?;
    if p.ns.is_empty() || p.fixtures == 0 {
        return Err(CliError::config("nu-gamma needs at least one n and one fixture"));
    }
    let coloured: usize = p.system.a.iter().sum();
    let mut systems = Vec::new();
    for &n in &p.ns {
        if n <= coloured {
            return Err(CliError::config(format!("n = {n} leaves no uncoloured vertices")));
        }
        for i in 0..p.fixtures as u64 {
            let recipe = SystemRecipe { seed: derive_seed(seed, "fixture", i), uncoloured: n - coloured, ..p.system.clone() };
            let rcs = recipe.build_restricted()?;
            let (ext, _) = extend_restricted(&rcs, p.p, derive_seed(seed, "extension", i))?;
            let u = lowest_star_vertex(rcs.system(), rcs.g())
                .ok_or_else(|| CliError::config(format!("fixture {i} at n = {n} has an empty U*")))?;
            let v = rcs.system().vertices_of_colour(rcs.g())[0];
            systems.push((n, i, rcs, ext, u, v));
        }
    }
    let mut table = Table::new(&["n", "fixture", "u", "v", "deviation", "scale", "ratio", "general"]);
    let mut warnings = Vec::new();
    let mut max_by_n: Vec<(usize, f64)> = p.ns.iter().map(|&n| (n, 0.0)).collect();
    for (n, i, rcs, ext, u, v) in &systems {
        let r = nu_gamma_check(rcs, ext, &h, p.p, *u, *v)?;
        let general = r.warnings.is_empty();
        if general {
            let slot = max_by_n.iter_mut().find(|(m, _)| m == n).expect("listed n");
            slot.1 = slot.1.max(r.ratio);
        }
        warnings.extend(r.warnings.iter().map(|w| format!("n = {n}, fixture {i}: {w}")));
        table.push(vec![
            (*n).into(),
            (*i).into(),
            (*u).into(),
            (*v).into(),
            r.deviation.into(),
            r.scale.into(),
            r.ratio.into(),
            general.into(),
        ]);
    }
    let fitted = max_by_n[0].1;
    let bounded = max_by_n[1..].iter().all(|&(_, m)| m <= p.slack * fitted);
    let mut out = Output::new(table);
    out.summary = json!({
        "fitted_constant": fitted,
        "max_ratio": max_by_n.iter().map(|&(n, m)| json!({"n": n, "max_ratio": m})).collect::<Vec<_>>(),
        "slack": p.slack,
        "bounded": bounded,
    });
    out.warnings = warnings;
    out.seeds = vec![("fixture", p.fixtures as u64), ("extension", p.fixtures as u64)];
    Ok(out)
}

fn kappa_gamma(p: &KappaGammaParams, trials: u64, seed: u64) -> CliResult<Output> {
    let cs = p.system.build()?;
    let h = p.pattern.build()?;
    let u = match p.u {
        Some(u) => u,
        None => *u_partition(&cs)?
            .star_class()
            .first()
            .ok_or_else(|| CliError::config("U* is empty; give u explicitly"))?,
    };
    let v = match p.v {
        Some(v) => v,
        None => cs
            .uncoloured()
            .into_iter()
            .find(|&w| w != u)
            .ok_or_else(|| CliError::config("need a second uncoloured vertex"))?,
    };
    let r = kappa_gamma_check(&cs, &h, p.p, u, v, trials, seed)?;
    let mut table = Table::new(&["trial", "ratio"]);
    for (t, ratio) in r.ratios.iter().enumerate() {
        table.push(vec![t.into(), (*ratio).into()]);
    }
    let mut out = Output::new(table);
    out.summary = json!({
        "n": r.n, "u": u, "v": v, "edge": r.edge, "gamma": r.gamma, "scale": r.scale,
        "median": r.median, "mean": r.mean, "max": r.max,
    });
    out.warnings = r.warnings;
    out.seeds = vec![("g0", trials)];
    Ok(out)
}

fn scale(p: &ScaleProbeParams, trials: u64, seed: u64) -> CliResult<Output> {
    let h = p.pattern.build()?;
    let system = match p.scale {
        ProbeScale::Medium => ScaleProbeSystem::Medium(p.system.build_restricted()?),
        ProbeScale::Rough => ScaleProbeSystem::Rough(p.system.build()?),
    };
    let lambda = match (&p.lambda, &system) {
        (LambdaSpec::Table(t), _) => t.clone(),
        (LambdaSpec::MuAverage, ScaleProbeSystem::Medium(rcs)) => mu_average(rcs, &h, p.p)?.map(Rational::round),
        (LambdaSpec::MuAverage, ScaleProbeSystem::Rough(_)) => {
            return Err(CliError::config("mu-average is only defined for the medium scale"))
        }
    };
    let est = scale_probe(&system, &h, p.p, &lambda, trials, seed)?;
    let mut table = Table::new(&["successes", "trials", "estimate", "lower", "upper"]);
    table.push(vec![est.successes.into(), est.trials.into(), est.estimate.into(), est.lower.into(), est.upper.into()]);
    let mut out = Output::new(table);
    out.summary = json!({ "lambda": lambda });
    out.seeds = match p.scale {
        ProbeScale::Medium => vec![("extension", trials)],
        ProbeScale::Rough => vec![("g0", trials)],
    };
    Ok(out)
}

fn concentration(p: &ConcentrationParams, trials: u64, seed: u64) -> CliResult<Output> {
    let rcs: RestrictedColourSystem = p.system.build_restricted()?;
    let h = p.pattern.build()?;
    if h.vertex_count() < rcs.g() + 1 {
        return Err(CliError::config("H needs at least g + 1 vertices"));
    }
    let mut table =
        Table::new(&["scale", "n", "threshold", "violations", "trials", "estimate", "lower", "upper", "max_ratio"]);
    for &s in &p.scales {
        let r = concentration_probe(&rcs, &h, p.p, s, trials, seed)?;
        let v = &r.violations;
        let name = match s {
            ProbeScale::Medium => "medium",
            ProbeScale::Rough => "rough",
        };
        table.push(vec![
            name.into(),
            r.n.into(),
            r.threshold.into(),
            v.successes.into(),
            v.trials.into(),
            v.estimate.into(),
            v.lower.into(),
            v.upper.into(),
            r.max_ratio.into(),
        ]);
    }
    let mut out = Output::new(table);
    out.seeds = vec![("extension", trials), ("g0", trials)];
    Ok(out)
}
