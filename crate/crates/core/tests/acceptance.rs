//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lcamatch_core::oracles::{
    abstract_distributed_mm, max_matching_bruteforce, shortest_augmenting_path_len, verify_matching,
};
use lcamatch_core::paths::{
    conflict_degree_bound, edge_path_bound, intersecting_paths, paths_through_edge,
};
use lcamatch_core::querytree::{linear_fit, tail_ccdf};
use lcamatch_core::{Edge, Engine, EngineConfig, Graph, MemoMode, PathKey, SeedSet};

use common::{brute_paths, corpus, seeds, small_graph};

struct Outcome {
    pass: bool,
    detail: String,
}

/// Every materialized matching, checked again for criterion 5.
#[derive(Default)]
struct Validity {
    checked: usize,
    valid: usize,
}

impl Validity {
    fn record(&mut self, g: &Graph, m: &[Edge]) -> bool {
        let ok = verify_matching(g, m).unwrap_or(false);
        self.checked += 1;
        self.valid += ok as usize;
        ok
    }
}

fn engine(g: &Graph, k: usize, seeds: SeedSet, memo: MemoMode) -> Engine<'_> {
    let config = EngineConfig {
        memo,
        budget: None,
        ..Default::default()
    };
    Engine::with_phases(g, k, seeds, config).unwrap()
}

fn approximation(v: &mut Validity) -> Outcome {
    let mut runs = 0;
    let mut ok = 0;
    let mut worst = f64::INFINITY;
    for i in 0..50 {
        let g = small_graph(i);
        let (opt, _) = max_matching_bruteforce(&g).unwrap();
        for k in 1..=3 {
            for s in 0..5 {
                let m = engine(&g, k, seeds(k, &g, 100 * i + s), MemoMode::Shared)
                    .materialize()
                    .unwrap();
                v.record(&g, &m);
                let need = ((1.0 - 1.0 / k as f64) * opt as f64 - 1e-9).ceil() as usize;
                runs += 1;
                ok += (m.len() >= need) as usize;
                if opt > 0 {
                    worst = worst.min(m.len() as f64 / opt as f64);
                }
            }
        }
    }
    Outcome {
        pass: ok == runs,
        detail: format!("{ok}/{runs} runs meet the bound, worst |M|/|M*| = {worst:.3}"),
    }
}

fn certificate(v: &mut Validity) -> Outcome {
    let sizes = [50usize, 200, 1000];
    let degrees = [3usize, 4, 5];
    let mut runs = 0;
    let mut ok = 0;
    for i in 0..20u64 {
        let n = sizes[i as usize % 3];
        let d = degrees[(i as usize / 3) % 3];
        let g = Graph::random_bounded(n, d, 500 + i);
        for k in 1..=3 {
            let m = engine(&g, k, seeds(k, &g, i), MemoMode::Shared)
                .materialize()
                .unwrap();
            let valid = v.record(&g, &m);
            let none = shortest_augmenting_path_len(&g, &m, 2 * k - 1)
                .unwrap()
                .is_none();
            runs += 1;
            ok += (valid && none) as usize;
        }
    }
    Outcome {
        pass: ok == runs,
        detail: format!("{ok}/{runs} matchings have no augmenting path of length <= 2k-1"),
    }
}

fn equivalence(v: &mut Validity) -> Outcome {
    let graphs = corpus();
    let mut runs = 0;
    let mut ok = 0;
    let mut edges = 0;
    for (i, (_, g)) in graphs.iter().enumerate() {
        for k in 1..=3 {
            for s in 0..10u64 {
                let set = seeds(k, g, 31 * i as u64 + s);
                let global: BTreeSet<Edge> = abstract_distributed_mm(g, k, &set)
                    .unwrap()
                    .into_iter()
                    .collect();
                let e = engine(g, k, set, MemoMode::Shared);
                let local: Vec<Edge> = g
                    .edges()
                    .iter()
                    .copied()
                    .filter(|&x| e.query(x).unwrap())
                    .collect();
                v.record(g, &local);
                let agree = g
                    .edges()
                    .iter()
                    .all(|x| local.contains(x) == global.contains(x));
                edges += g.edge_count();
                runs += 1;
                ok += agree as usize;
            }
        }
    }
    Outcome {
        pass: ok == runs && graphs.len() >= 100,
        detail: format!(
            "{ok}/{runs} runs agree edge by edge ({} graphs, {edges} edge queries)",
            graphs.len()
        ),
    }
}

fn consistency(v: &mut Validity) -> Outcome {
    let mut ok = 0;
    let pairs = 100;
    for i in 0..pairs as u64 {
        let k = 1 + (i % 3) as usize;
        // Without memoization the recursion is exponential in k, so the k = 3
        // instances are kept smaller.
        let g = if k == 3 {
            Graph::random_bounded_capped(10, 2 + (i / 3 % 2) as usize, 12, 2000 + i)
        } else {
            Graph::random_bounded_capped(8 + (i % 4) as usize, 3, 16, 2000 + i)
        };
        let set = seeds(k, &g, 7 * i);
        let reference: Vec<bool> = {
            let e = engine(&g, k, set.clone(), MemoMode::Off);
            g.edges().iter().map(|&x| e.query(x).unwrap()).collect()
        };
        let mut consistent = true;
        let mut rng = ChaCha8Rng::seed_from_u64(i);
        for _ in 0..5 {
            let mut order: Vec<usize> = (0..g.edge_count()).collect();
            order.shuffle(&mut rng);
            for memo in [MemoMode::Off, MemoMode::PerQuery, MemoMode::Shared] {
                let e = engine(&g, k, set.clone(), memo);
                let mut answers = vec![false; g.edge_count()];
                for &j in &order {
                    answers[j] = e.query(g.edges()[j]).unwrap();
                }
                consistent &= answers == reference;
            }
        }
        let m: Vec<Edge> = g
            .edges()
            .iter()
            .zip(&reference)
            .filter(|(_, &b)| b)
            .map(|(&x, _)| x)
            .collect();
        consistent &= v.record(&g, &m);
        ok += consistent as usize;
    }
    Outcome {
        pass: ok == pairs,
        detail: format!("{ok}/{pairs} pairs identical across 5 orders x memo off/per-query/shared"),
    }
}

fn validity(v: &Validity) -> Outcome {
    Outcome {
        pass: v.checked > 0 && v.valid == v.checked,
        detail: format!("{}/{} materialized matchings valid", v.valid, v.checked),
    }
}

fn bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut triples = 0;
    let mut ok = 0;
    let mut brute_checked = 0;
    let mut brute_ok = 0;
    while triples < 1000 {
        let n = rng.gen_range(2..=30);
        let d = rng.gen_range(1..=5);
        let len = [1usize, 3, 5][rng.gen_range(0..3)];
        let g = Graph::random_bounded(n, d, rng.gen());
        if g.edge_count() == 0 {
            continue;
        }
        let e = g.edges()[rng.gen_range(0..g.edge_count())];
        triples += 1;
        let through = paths_through_edge(&g, e, len).unwrap();
        let mut good = through.len() as u128 <= edge_path_bound(d, len);
        if let Some(p) = through.get(rng.gen_range(0..through.len().max(1))) {
            good &= intersecting_paths(&g, p).len() as u128 <= conflict_degree_bound(d, len);
        }
        ok += good as usize;
        if n <= 10 {
            let want: Vec<PathKey> = brute_paths(&g, len)
                .into_iter()
                .filter(|p| p.contains_edge(e))
                .collect();
            brute_checked += 1;
            brute_ok += (want == through) as usize;
        }
    }
    Outcome {
        pass: ok == triples && brute_ok == brute_checked && brute_checked > 0,
        detail: format!(
            "{ok}/{triples} triples within both bounds, enumeration matches brute force on {brute_ok}/{brute_checked}"
        ),
    }
}

fn tail() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for d in [2usize, 3, 4] {
        let r = tail_ccdf(d, 100_000, 500, 40 + d as u64);
        pass &= r.slope < 0.0 && r.r_squared >= 0.9 && r.truncated_fraction < 0.01;
        parts.push(format!(
            "d={d} slope={:.4} r2={:.4} truncated={:.5}",
            r.slope, r.r_squared, r.truncated_fraction
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn scaling() -> Outcome {
    let sizes = [1usize << 8, 1 << 10, 1 << 12, 1 << 14];
    let mut max_f = Vec::new();
    for &n in &sizes {
        let g = Graph::random_bounded(n, 3, 800 + n as u64);
        let e = engine(&g, 2, seeds(2, &g, n as u64), MemoMode::PerQuery);
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let picks = rand::seq::index::sample(&mut rng, g.edge_count(), 200);
        let worst = picks
            .into_iter()
            .map(|j| e.query_with_stats(g.edges()[j]).unwrap().stats.f())
            .max()
            .unwrap();
        max_f.push(worst);
    }
    let ratio = max_f[3] as f64 / max_f[0] as f64;
    let limit = (sizes[3] / sizes[0]) as f64 * 0.1;
    let points: Vec<(f64, f64)> = sizes
        .iter()
        .zip(&max_f)
        .map(|(&n, &f)| ((n as f64).ln().ln(), (f as f64).ln()))
        .collect();
    let (b, ln_a, r2) = linear_fit(&points);
    Outcome {
        pass: ratio < limit,
        detail: format!(
            "max f = {max_f:?}, ratio {ratio:.2} < {limit:.1}; fit max f ~ {:.2}*(ln n)^{b:.2} (r2={r2:.3})",
            ln_a.exp()
        ),
    }
}

fn ordering() -> Outcome {
    use lcamatch_core::ordering::PolySeed;
    use lcamatch_core::Seed;

    let seeds: Vec<PolySeed> = (0..49)
        .map(|i| PolySeed::from_parts(2, 7, 7, false, vec![i / 7, i % 7]).unwrap())
        .collect();
    let mut uniform = true;
    for x in 0..7 {
        for y in (0..7).filter(|&y| y != x) {
            let pairs: BTreeSet<(u64, u64)> = seeds
                .iter()
                .map(|s| (s.evaluate(0, x), s.evaluate(0, y)))
                .collect();
            uniform &= pairs.len() == 49;
        }
    }

    let g = Graph::random_bounded(50, 3, 4);
    let mut paths: Vec<PathKey> = g
        .edges()
        .iter()
        .flat_map(|&e| paths_through_edge(&g, e, 3).unwrap())
        .collect();
    paths.sort();
    paths.dedup();
    let trials = 1000u64;
    let collided = (0..trials)
        .filter(|&t| {
            let set = SeedSet::init(2, 50, 70_000 + t).unwrap();
            let Seed::Poly(seed) = set.for_phase(3).unwrap() else {
                return false;
            };
            let mut ranks: Vec<_> = paths.iter().map(|p| seed.rank(p)).collect();
            ranks.sort();
            ranks.windows(2).any(|w| w[0] == w[1])
        })
        .count();
    let fraction = collided as f64 / trials as f64;
    Outcome {
        pass: uniform && fraction <= 0.05,
        detail: format!(
            "mod-7 pairwise uniform over 49 seeds: {uniform}; collision fraction {fraction:.4} over {trials} seeds, {} paths",
            paths.len()
        ),
    }
}

fn main() -> ExitCode {
    let mut validity_log = Validity::default();
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let run = |id: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id} [{tag}] {name}: {} ({secs:.1}s)",
            outcome.detail
        );
        (id, name, outcome, secs)
    };
    results.push(run(1, "approximation", &mut || {
        approximation(&mut validity_log)
    }));
    results.push(run(2, "no short augmenting path", &mut || {
        certificate(&mut validity_log)
    }));
    results.push(run(3, "local/global equivalence", &mut || {
        equivalence(&mut validity_log)
    }));
    results.push(run(4, "consistency", &mut || {
        consistency(&mut validity_log)
    }));
    results.push(run(5, "matching validity", &mut || validity(&validity_log)));
    results.push(run(6, "combinatorial bounds", &mut bounds));
    results.push(run(7, "query-tree tail", &mut tail));
    results.push(run(8, "query-cost scaling", &mut scaling));
    results.push(run(9, "ordering sanity", &mut ordering));
    let failed = results.iter().filter(|r| !r.2.pass).count();
    println!(
        "acceptance: {}/{} criteria pass",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
