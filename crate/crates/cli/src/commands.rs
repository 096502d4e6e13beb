use std::fs;
use std::io::{BufReader, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use lcamatch_core::lca::phases_for_epsilon;
use lcamatch_core::oracles::{shortest_augmenting_path_len, verify_matching};
use lcamatch_core::querytree::{linear_fit, tail_ccdf};
use lcamatch_core::{
    Edge, Engine, EngineConfig, Graph, MemoMode, OrderingMode, SeedConfig, SeedSet, Stats,
};

use crate::records::{
    to_json, to_text, BenchRecord, EdgeRecord, FitRecord, MaterializeSummary, QueryRecord,
};
use crate::{
    BenchArgs, EngineArgs, Format, GenArgs, MaterializeArgs, MemoArg, OrderingArg, QueryArgs,
    QuerytreeArgs, SeedArgs, SeedSpec,
};

fn load_graph(path: &Path) -> Result<Graph> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Graph::load(BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))
}

fn seed_config(ordering: OrderingArg, kappa_factor: u32) -> SeedConfig {
    SeedConfig {
        mode: match ordering {
            OrderingArg::Kwise => OrderingMode::KWise,
            OrderingArg::FullRandom => OrderingMode::FullRandom,
        },
        kappa_factor,
    }
}

fn memo_mode(m: MemoArg) -> MemoMode {
    match m {
        MemoArg::Off => MemoMode::Off,
        MemoArg::PerQuery => MemoMode::PerQuery,
        MemoArg::Shared => MemoMode::Shared,
    }
}

fn budget(b: u64) -> Option<u64> {
    (b > 0).then_some(b)
}

fn require_rng(seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| anyhow!("no seed given: pass --rng-seed or set LCAMATCH_RNG_SEED"))
}

/// Seeds from a blob when one is given, else generated from the rng seed.
fn resolve_seeds(spec: &SeedSpec, n: usize, k: usize) -> Result<SeedSet> {
    if let Some(blob) = &spec.seed_blob {
        let text = match blob.strip_prefix('@') {
            Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
            None => blob.clone(),
        };
        let seeds = SeedSet::from_hex(&text).context("decoding --seed-blob")?;
        if seeds.vertex_count() != n || seeds.k() < k {
            bail!(
                "seed blob covers {} phases over {} vertices; need {k} phases over {n}",
                seeds.k(),
                seeds.vertex_count()
            );
        }
        return Ok(seeds);
    }
    let rng = require_rng(spec.rng_seed)?;
    Ok(SeedSet::generate(
        k,
        n,
        rng,
        seed_config(spec.ordering, spec.kappa_factor),
    )?)
}

fn build_engine<'g>(args: &EngineArgs, graph: &'g Graph, memo: MemoArg) -> Result<Engine<'g>> {
    let k = phases_for_epsilon(args.eps)?;
    let seeds = resolve_seeds(&args.seed, graph.vertex_count().max(2), k)?;
    let config = EngineConfig {
        memo: memo_mode(memo),
        budget: budget(args.budget),
        ..Default::default()
    };
    Ok(Engine::with_phases(graph, k, seeds, config)?)
}

fn parse_edge(text: &str, graph: &Graph) -> Result<Edge> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    let [u, v] = parts.as_slice() else {
        bail!("--edge expects \"u v\", got {text:?}");
    };
    let u: u32 = u.parse().with_context(|| format!("bad vertex {u:?}"))?;
    let v: u32 = v.parse().with_context(|| format!("bad vertex {v:?}"))?;
    Ok(graph.edge(u, v)?)
}

pub fn query(args: &QueryArgs, out: &mut impl Write) -> Result<()> {
    let graph = load_graph(&args.engine.graph)?;
    let edge = parse_edge(&args.edge, &graph)?;
    let engine = build_engine(&args.engine, &graph, args.memo)?;
    let outcome = engine.query_with_stats(edge)?;
    let record = QueryRecord {
        u: edge.lo(),
        v: edge.hi(),
        answer: outcome.answer,
        k: engine.k(),
        f: outcome.stats.f(),
        f_per_phase: outcome.stats.augmenting_checks.clone(),
        calls: outcome.stats.calls,
        max_relevant: outcome.stats.max_relevant(),
        elapsed_us: outcome.stats.elapsed.as_micros(),
    };
    match args.format {
        Format::Records => writeln!(out, "{}", to_json(&record))?,
        _ => {
            writeln!(out, "{}", outcome.answer)?;
            if args.verbose {
                writeln!(out, "k={}", record.k)?;
                writeln!(out, "f={}", record.f)?;
                for (i, f) in record.f_per_phase.iter().enumerate() {
                    writeln!(out, "f_{}={f}", 2 * i + 1)?;
                }
                writeln!(out, "calls={}", record.calls)?;
                writeln!(out, "max_relevant={}", record.max_relevant)?;
                writeln!(out, "elapsed_us={}", record.elapsed_us)?;
            }
        }
    }
    Ok(())
}

pub fn materialize(args: &MaterializeArgs, out: &mut impl Write) -> Result<()> {
    let graph = load_graph(&args.engine.graph)?;
    let engine = build_engine(&args.engine, &graph, args.memo)?;
    let (matching, stats) = engine.materialize_with_stats()?;
    let certificate_len = engine.last_phase();
    let shortest = shortest_augmenting_path_len(&graph, &matching, certificate_len)
        .map_err(|e| anyhow!("certifying matching: {e}"))?;
    let summary = MaterializeSummary {
        n: graph.vertex_count(),
        m: graph.edge_count(),
        k: engine.k(),
        size: matching.len(),
        valid: verify_matching(&graph, &matching).map_err(|e| anyhow!("{e}"))?,
        certificate_len,
        no_short_augmenting_path: shortest.is_none(),
        shortest_augmenting_path: shortest,
        max_f: stats.iter().map(Stats::f).max().unwrap_or(0),
    };
    for e in &matching {
        let r = EdgeRecord {
            u: e.lo(),
            v: e.hi(),
        };
        match args.format {
            Format::Records => writeln!(out, "{}", to_json(&r))?,
            _ => writeln!(out, "{} {}", e.lo(), e.hi())?,
        }
    }
    match args.format {
        Format::Records => writeln!(out, "{}", to_json(&summary))?,
        _ => {
            for pair in to_text(&summary).split(' ') {
                writeln!(out, "{pair}")?;
            }
        }
    }
    Ok(())
}

fn run_trial(
    args: &BenchArgs,
    k: usize,
    n: usize,
    trial: usize,
    rng_seed: u64,
) -> Result<BenchRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(((n as u64) << 20) ^ trial as u64);
    let graph = Graph::random_bounded(n, args.d, rng.gen());
    let seeds = SeedSet::generate(k, n.max(2), rng.gen(), seed_config(args.ordering, 4))?;
    let edges = graph.edge_count();
    let picks: Vec<Edge> = sample(&mut rng, edges, args.queries.min(edges))
        .into_iter()
        .map(|i| graph.edges()[i])
        .collect();

    let per_query = Engine::with_phases(
        &graph,
        k,
        seeds.clone(),
        EngineConfig {
            memo: MemoMode::PerQuery,
            budget: budget(args.budget),
            ..Default::default()
        },
    )?;
    let stats: Vec<Stats> = picks
        .iter()
        .map(|&e| per_query.query_with_stats(e).map(|o| o.stats))
        .collect::<Result<_, _>>()?;
    let fs: Vec<u64> = stats.iter().map(Stats::f).collect();
    let sizes: Vec<usize> = stats
        .iter()
        .flat_map(|s| s.relevant_sizes.iter().map(|&(_, x)| x))
        .collect();

    let (valid, matching_size, certified) = if args.no_verify {
        (None, None, None)
    } else {
        let shared = Engine::with_phases(
            &graph,
            k,
            seeds,
            EngineConfig {
                memo: MemoMode::Shared,
                budget: budget(args.budget),
                ..Default::default()
            },
        )?;
        let m = shared.materialize()?;
        let valid = verify_matching(&graph, &m).map_err(|e| anyhow!("{e}"))?;
        let short =
            shortest_augmenting_path_len(&graph, &m, 2 * k - 1).map_err(|e| anyhow!("{e}"))?;
        (Some(valid), Some(m.len()), Some(short.is_none()))
    };

    Ok(BenchRecord {
        trial,
        n,
        d: args.d,
        k,
        edges,
        queries: picks.len(),
        mean_f: mean(fs.iter().map(|&f| f as f64)),
        max_f: fs.iter().copied().max().unwrap_or(0),
        mean_relevant: mean(sizes.iter().map(|&s| s as f64)),
        max_relevant: sizes.iter().copied().max().unwrap_or(0),
        valid,
        matching_size,
        no_short_augmenting_path: certified,
    })
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Fit of `ln max_f` against `ln ln n`, taking the worst trial per size.
pub fn polylog_fit(records: &[BenchRecord]) -> Option<FitRecord> {
    let mut sizes: Vec<usize> = records.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let points: Vec<(f64, f64)> = sizes
        .iter()
        .filter(|&&n| n >= 3)
        .filter_map(|&n| {
            let worst = records.iter().filter(|r| r.n == n).map(|r| r.max_f).max()?;
            (worst > 0).then(|| ((n as f64).ln().ln(), (worst as f64).ln()))
        })
        .collect();
    if points.len() < 2 {
        return None;
    }
    let (slope, intercept, r2) = linear_fit(&points);
    Some(FitRecord {
        polylog_exponent: slope,
        polylog_scale: intercept.exp(),
        r_squared: r2,
    })
}

pub fn bench(args: &BenchArgs, out: &mut impl Write) -> Result<()> {
    let k = phases_for_epsilon(args.eps)?;
    let rng_seed = require_rng(args.rng_seed)?;
    if args.d == 0 {
        bail!("--d must be positive");
    }
    let jobs: Vec<(usize, usize)> = args
        .sizes
        .iter()
        .flat_map(|&n| (0..args.trials).map(move |t| (n, t)))
        .collect();
    // Collected in job order regardless of completion order.
    let records: Vec<BenchRecord> = jobs
        .par_iter()
        .map(|&(n, t)| run_trial(args, k, n, t, rng_seed))
        .collect::<Result<_>>()?;
    for r in &records {
        match args.format {
            Format::Text => writeln!(out, "{}", to_text(r))?,
            _ => writeln!(out, "{}", to_json(r))?,
        }
    }
    if let Some(fit) = polylog_fit(&records) {
        match args.format {
            Format::Text => writeln!(out, "# {}", to_text(&fit))?,
            _ => writeln!(out, "{}", to_json(&fit))?,
        }
    }
    Ok(())
}

pub fn querytree(args: &QuerytreeArgs, out: &mut impl Write) -> Result<()> {
    if args.d == 0 || args.cap == 0 {
        bail!("--d and --cap must be positive");
    }
    if args.samples < 1000 {
        bail!("--samples must be at least 1000");
    }
    let rng_seed = require_rng(args.rng_seed)?;
    let report = tail_ccdf(args.d, args.samples, args.cap, rng_seed);
    match args.format {
        Format::Text => {
            let csv = report.to_csv();
            let summary = csv.lines().last().unwrap_or_default();
            writeln!(out, "{}", summary.trim_start_matches("# "))?;
        }
        _ => write!(out, "{}", report.to_csv())?,
    }
    Ok(())
}

pub fn gen(args: &GenArgs, out: &mut impl Write) -> Result<()> {
    let rng_seed = require_rng(args.rng_seed)?;
    if args.d == 0 {
        bail!("--d must be positive");
    }
    let g = match args.max_edges {
        Some(cap) => Graph::random_bounded_capped(args.n, args.d, cap, rng_seed),
        None => Graph::random_bounded(args.n, args.d, rng_seed),
    };
    write!(out, "{}", g.to_edge_list())?;
    Ok(())
}

pub fn seed(args: &SeedArgs, out: &mut impl Write) -> Result<()> {
    let n = match (&args.graph, args.n) {
        (Some(path), _) => load_graph(path)?.vertex_count(),
        (None, Some(n)) => n,
        (None, None) => bail!("pass --graph or --n"),
    };
    let k = phases_for_epsilon(args.eps)?;
    let seeds = resolve_seeds(&args.seed, n.max(2), k)?;
    writeln!(out, "{}", seeds.to_hex())?;
    Ok(())
}
