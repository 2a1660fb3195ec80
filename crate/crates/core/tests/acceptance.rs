//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::path::Path as FsPath;
use std::time::Instant;

use meshqos::cli::run_cli;
use meshqos::genetic::{
    common_nodes, crossover, crossover_at, evolve, mutate, mutate_through, random_paths, GaConfig, SelectionMethod,
    SelectionParams, Selector,
};
use meshqos::oracle::{enumerate_paths, exact_pareto_front, exact_weighted_optimum, DEFAULT_MAX_NODES};
use meshqos::pareto::{
    default_reference, dominates, hypervolume, nondominated_sort, nsga_evolve, weighted_sum_sweep, NsgaParams,
    ObjectiveVector,
};
use meshqos::qos::path_qos;
use meshqos::topology::{NodeId, RouteQuery, Topology, TopologyParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

const INSTANCES: u64 = 20;
const SEEDS: u64 = 10;
const ORACLE_RADIUS: f64 = 400.0;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// 10-node instance over the default area; regenerates until 1 and 10 connect.
fn oracle_instance(index: u64) -> (Topology, RouteQuery) {
    let params = TopologyParams {
        node_count: 10,
        coverage_radius: ORACLE_RADIUS,
        ..TopologyParams::default()
    };
    let mut seed = 1000 + index * 7919;
    loop {
        let t = Topology::generate(&params, seed).unwrap();
        let q = RouteQuery::default_for(&t).unwrap();
        if t.is_connected(q.source, q.destination) {
            return (t, q);
        }
        seed += 1;
    }
}

fn default_instance(seed: u64) -> (Topology, RouteQuery) {
    let mut s = seed;
    loop {
        let t = Topology::generate(&TopologyParams::default(), s).unwrap();
        let q = RouteQuery::default_for(&t).unwrap();
        if t.is_connected(q.source, q.destination) {
            return (t, q);
        }
        s += 1;
    }
}

fn criterion_1() -> Outcome {
    let (mut hits, mut total, mut slowest) = (0, 0, 0.0f64);
    for i in 0..INSTANCES {
        let (t, q) = oracle_instance(i);
        let base = GaConfig::default();
        let (_, opt) = exact_weighted_optimum(&t, &q, &base.weights, &base.constraints, base.bandwidth_rule)
            .unwrap()
            .expect("feasible route");
        for seed in 0..SEEDS {
            let cfg = GaConfig { seed, ..base };
            let start = Instant::now();
            let r = evolve(&t, &q, &cfg).unwrap();
            slowest = slowest.max(start.elapsed().as_secs_f64());
            total += 1;
            if (r.best.cost - opt).abs() <= 1e-9 * opt.abs().max(1.0) {
                hits += 1;
            }
        }
    }
    let rate = hits as f64 / total as f64;
    outcome(
        rate >= 0.9 && slowest < 2.0,
        format!(
            "{hits}/{total} runs hit the exact optimum ({:.1}%), slowest run {slowest:.3} s",
            rate * 100.0
        ),
    )
}

fn criterion_2() -> Outcome {
    let (mut hits, mut total, mut slowest) = (0, 0, 0.0f64);
    let params = NsgaParams {
        generations: 200,
        ..NsgaParams::default()
    };
    for i in 0..INSTANCES {
        let (t, q) = oracle_instance(i);
        let base = GaConfig::default();
        let exact = exact_pareto_front(&t, &q, &base.constraints, base.bandwidth_rule).unwrap();
        for seed in 0..SEEDS {
            let cfg = GaConfig { seed, ..base };
            let start = Instant::now();
            let r = nsga_evolve(&t, &q, &cfg, &params, &[]).unwrap();
            slowest = slowest.max(start.elapsed().as_secs_f64());
            total += 1;
            if r.archive.front() == exact.front() {
                hits += 1;
            }
        }
    }
    let rate = hits as f64 / total as f64;
    outcome(
        rate >= 0.9 && slowest < 5.0,
        format!(
            "{hits}/{total} archives equal the exact front ({:.1}%), slowest run {slowest:.3} s",
            rate * 100.0
        ),
    )
}

fn criterion_3() -> Outcome {
    let (mut checked, mut dominated) = (0, 0);
    for i in 0..INSTANCES {
        let (t, q) = oracle_instance(i);
        let cfg = GaConfig {
            seed: i,
            ..GaConfig::default()
        };
        let all: Vec<ObjectiveVector> = enumerate_paths(&t, &q, DEFAULT_MAX_NODES)
            .unwrap()
            .iter()
            .map(|p| ObjectiveVector::from(&path_qos(&t, p, cfg.bandwidth_rule).unwrap()))
            .collect();
        for point in weighted_sum_sweep(&t, &q, &cfg, 20, 1).unwrap() {
            if !point.weights.all_positive() {
                continue;
            }
            checked += 1;
            if all.iter().any(|v| dominates(v, &point.objectives).unwrap()) {
                dominated += 1;
            }
        }
    }
    outcome(
        dominated == 0 && checked > 0,
        format!("{checked} positive-weight winners, {dominated} dominated"),
    )
}

/// Front rank by repeated peeling: each pass takes every remaining vector
/// that no other remaining vector dominates.
fn brute_fronts(v: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let dom = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y);
    let mut remaining: Vec<usize> = (0..v.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| dom(&v[j], &v[i])))
            .collect();
        remaining.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mismatches = 0;
    for k in 0..1000 {
        let n = rng.gen_range(0..=64);
        // coarse grid on half the populations so ties and duplicates occur
        let coarse = k % 2 == 0;
        let raw: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..3)
                    .map(|_| {
                        if coarse {
                            rng.gen_range(0..5) as f64
                        } else {
                            rng.gen::<f64>()
                        }
                    })
                    .collect()
            })
            .collect();
        let vectors: Vec<ObjectiveVector> = raw.iter().cloned().map(ObjectiveVector).collect();
        if nondominated_sort(&vectors) != brute_fronts(&raw) {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("1000 populations, {mismatches} mismatches"))
}

fn criterion_5() -> Outcome {
    let (t, q) = default_instance(5);
    let mut cost_violations = 0;
    for seed in 0..100 {
        let r = evolve(
            &t,
            &q,
            &GaConfig {
                seed,
                ..GaConfig::default()
            },
        )
        .unwrap();
        let mut prev = r.initial_best_cost;
        for g in &r.trace {
            if g.population_best_cost > prev {
                cost_violations += 1;
            }
            prev = g.population_best_cost;
        }
    }
    let params = NsgaParams {
        generations: 100,
        ..NsgaParams::default()
    };
    let checkpoints: Vec<u32> = (0..=100).step_by(10).collect();
    let reference = default_reference(&GaConfig::default().constraints);
    let mut hv_violations = 0;
    for seed in 0..100 {
        let r = nsga_evolve(
            &t,
            &q,
            &GaConfig {
                seed,
                ..GaConfig::default()
            },
            &params,
            &checkpoints,
        )
        .unwrap();
        let mut prev = 0.0;
        for s in &r.snapshots {
            let hv = hypervolume(&s.front(), &reference).unwrap();
            if hv < prev {
                hv_violations += 1;
            }
            prev = hv;
        }
    }
    outcome(
        cost_violations == 0 && hv_violations == 0,
        format!("best-cost increases: {cost_violations}, hypervolume decreases: {hv_violations}"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut invocations, mut violations, mut topologies) = (0u64, 0u64, 0u64);
    while invocations < 100_000 {
        let params = TopologyParams {
            node_count: rng.gen_range(5..=40),
            coverage_radius: rng.gen_range(200.0..500.0),
            ..TopologyParams::default()
        };
        let t = Topology::generate(&params, rng.gen()).unwrap();
        let n = t.node_count() as u32;
        let s = NodeId(rng.gen_range(1..=n));
        let d = NodeId(rng.gen_range(1..=n));
        if s == d || !t.is_connected(s, d) {
            continue;
        }
        topologies += 1;
        let q = RouteQuery::new(&t, s, d).unwrap();
        let pool = random_paths(&t, &q, 20, &mut rng).unwrap();
        for _ in 0..500 {
            let a = &pool[rng.gen_range(0..pool.len())];
            let b = &pool[rng.gen_range(0..pool.len())];
            let outputs = match rng.gen_range(0..4) {
                0 => {
                    let (c1, c2) = crossover(&t, &q, a, b, &mut rng);
                    vec![c1, c2]
                }
                1 => {
                    let common = common_nodes(a, b);
                    if common.is_empty() {
                        continue;
                    }
                    let (c1, c2) = crossover_at(&t, &q, a, b, common[rng.gen_range(0..common.len())]);
                    vec![c1, c2]
                }
                2 => vec![mutate(&t, &q, a, &mut rng)],
                _ => vec![mutate_through(&t, &q, a, NodeId(rng.gen_range(1..=n)))],
            };
            invocations += 1;
            violations += outputs.iter().filter(|p| !t.validate_path(&q, p)).count() as u64;
        }
    }
    outcome(
        violations == 0,
        format!("{invocations} invocations on {topologies} topologies, {violations} invalid outputs"),
    )
}

fn frequencies(method: SelectionMethod, fitness: &[f64], generation: u32, params: &SelectionParams) -> Vec<f64> {
    let sel = Selector::new(method, fitness, generation, params).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7 + method.index() as u64);
    let draws = 100_000;
    let mut counts = vec![0usize; fitness.len()];
    for _ in 0..draws {
        counts[sel.pick(&mut rng)] += 1;
    }
    counts.iter().map(|&c| c as f64 / draws as f64).collect()
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn normalized(w: &[f64]) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

fn criterion_7() -> Outcome {
    let params = SelectionParams::default();
    let mut parts = Vec::new();
    let mut pass = true;
    let mut check = |name: &str, got: Vec<f64>, want: Vec<f64>| {
        let gap = max_gap(&got, &want);
        pass &= gap <= 0.01;
        parts.push(format!("{name} {gap:.4}"));
    };

    // costs {1, 3}
    let fitness = [1.0 / 2.0, 1.0 / 4.0];
    check(
        "RWS",
        frequencies(SelectionMethod::RouletteWheel, &fitness, 0, &params),
        vec![2.0 / 3.0, 1.0 / 3.0],
    );

    let flat = [0.3; 5];
    check(
        "SigSS",
        frequencies(SelectionMethod::SigmaScaling, &flat, 0, &params),
        vec![0.2; 5],
    );

    let fitness = [0.2, 0.9, 0.5, 0.1];
    let n = fitness.len() as f64;
    let s = params.rank_pressure;
    // rank 0 is the worst
    let ranks = [1.0, 3.0, 2.0, 0.0];
    let want: Vec<f64> = ranks
        .iter()
        .map(|r| (2.0 - s) / n + 2.0 * r * (s - 1.0) / (n * (n - 1.0)))
        .collect();
    check("RS", frequencies(SelectionMethod::Rank, &fitness, 0, &params), want);

    let bparams = SelectionParams {
        boltzmann_t0: 0.5,
        boltzmann_decay: 0.9,
        ..params
    };
    let generation = 3;
    let temp = 0.5 * 0.9f64.powi(3);
    let want = normalized(&fitness.iter().map(|f| (f / temp).exp()).collect::<Vec<_>>());
    check(
        "BS",
        frequencies(SelectionMethod::Boltzmann, &fitness, generation, &bparams),
        want,
    );

    outcome(pass, format!("max frequency gaps: {}", parts.join(", ")))
}

fn run_ok(args: &[&str]) -> bool {
    let mut argv = vec!["meshqos"];
    argv.extend_from_slice(args);
    run_cli(argv) == 0
}

fn read(dir: &FsPath, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_default()
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let start = Instant::now();
    let ok = run_ok(&["run", "--seed", "1", "--out", out]);
    let elapsed = start.elapsed().as_secs_f64();
    let manifest: serde_json::Value = serde_json::from_str(&read(dir.path(), "manifest.json")).unwrap_or_default();
    let topo = &manifest["topology"]["params"];
    let ga = &manifest["ga"];
    let defaults_ok = topo["node_count"] == 50
        && topo["area"]["width"] == 1000.0
        && topo["area"]["height"] == 1000.0
        && topo["coverage_radius"] == 200.0
        && ga["population_size"] == 50
        && ga["generations"] == 100
        && ga["crossover_prob"] == 0.75
        && ga["mutation_prob"] == 0.01
        && ga["weights"]["alpha1"] == 0.5
        && ga["weights"]["alpha2"] == 0.15
        && ga["weights"]["alpha3"] == 0.35
        && manifest["query"]["source"] == 1
        && manifest["query"]["destination"] == 50;
    let methods = read(dir.path(), "methods.csv");
    let method_rows = methods.lines().skip(1).count();
    let all_named = SelectionMethod::ALL
        .iter()
        .all(|m| methods.contains(&format!(",{},", m.name())));
    let trace_rows = read(dir.path(), "trace.csv")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .count();
    outcome(
        ok && defaults_ok && elapsed < 5.0 && method_rows == 6 && all_named && trace_rows == 100,
        format!("defaults {defaults_ok}, {elapsed:.3} s, {method_rows} method rows, {trace_rows} trace rows"),
    )
}

fn bundle_hash(dir: &FsPath) -> String {
    fn walk(root: &FsPath, dir: &FsPath, files: &mut BTreeMap<String, Vec<u8>>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, files);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                files.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    let mut files = BTreeMap::new();
    walk(dir, dir, &mut files);
    let mut h = Sha256::new();
    for (name, bytes) in files {
        h.update(name.as_bytes());
        h.update([0]);
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn criterion_9() -> Outcome {
    let work = tempfile::tempdir().unwrap();
    let small = work.path().join("small");
    let small_topo = small.join("topology.json");
    if !run_ok(&[
        "gen",
        "--seed",
        "9",
        "--nodes",
        "10",
        "--radius",
        "400",
        "--require-route",
        "1,10",
        "--out",
        small.to_str().unwrap(),
    ]) {
        return outcome(false, "could not generate the small topology");
    }
    let paths_file = work.path().join("paths.txt");
    std::fs::write(&paths_file, "P1: 1 10\nP2: 1 2 10\n").unwrap();
    let topo = small_topo.to_str().unwrap();
    let pf = paths_file.to_str().unwrap();
    let commands: Vec<(&str, Vec<&str>)> = vec![
        ("gen", vec!["gen", "--seed", "3", "--require-route", "1,50"]),
        ("run", vec!["run", "--seed", "3"]),
        (
            "run-small",
            vec![
                "run",
                "--seed",
                "3",
                "--topology",
                topo,
                "--paths",
                pf,
                "--oracle-check",
            ],
        ),
        (
            "pareto",
            vec![
                "pareto",
                "--seed",
                "3",
                "--topology",
                topo,
                "--checkpoints",
                "0,50,100",
                "--oracle-check",
            ],
        ),
        (
            "sweep",
            vec![
                "sweep",
                "--seed",
                "3",
                "--topology",
                topo,
                "--samples",
                "8",
                "--nsga-gens",
                "50",
                "--jobs",
                "4",
                "--oracle-check",
            ],
        ),
        ("oracle", vec!["oracle", "--topology", topo]),
    ];
    let mut mismatched = Vec::new();
    for (label, args) in &commands {
        let mut hashes = Vec::new();
        for rep in 0..2 {
            let out = work.path().join(format!("{label}-{rep}"));
            let mut argv = args.clone();
            argv.extend_from_slice(&["--out", out.to_str().unwrap()]);
            if !run_ok(&argv) {
                return outcome(false, format!("`{label}` failed"));
            }
            hashes.push(bundle_hash(&out));
        }
        if hashes[0] != hashes[1] {
            mismatched.push(*label);
        }
    }
    outcome(
        mismatched.is_empty(),
        format!(
            "{} commands run twice, differing bundles: {:?}",
            commands.len(),
            mismatched
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut mismatches = 0;
    for _ in 0..100 {
        let params = TopologyParams {
            node_count: rng.gen_range(2..=80),
            coverage_radius: rng.gen_range(50.0..400.0),
            ..TopologyParams::default()
        };
        let t = Topology::generate(&params, rng.gen()).unwrap();
        let nodes = t.nodes();
        let mut expected = Vec::new();
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                let (dx, dy) = (nodes[i].x - nodes[j].x, nodes[i].y - nodes[j].y);
                if (dx * dx + dy * dy).sqrt() <= params.coverage_radius {
                    expected.push((NodeId::from_index(i), NodeId::from_index(j)));
                }
            }
        }
        if t.edges() != expected.as_slice() {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("100 topologies, {mismatches} edge-set mismatches"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("weighted-sum oracle equivalence", criterion_1),
        ("Pareto oracle equivalence", criterion_2),
        ("scalarization winners non-dominated", criterion_3),
        ("non-dominated sort vs brute force", criterion_4),
        ("elitist cost and hypervolume monotonicity", criterion_5),
        ("operator closure", criterion_6),
        ("selection distributions", criterion_7),
        ("default configuration run", criterion_8),
        ("byte-identical bundles", criterion_9),
        ("geometric edge predicate", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|a| a == &id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {verdict}  {name}: {} [{:.1} s]",
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
