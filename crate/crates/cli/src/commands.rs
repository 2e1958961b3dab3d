use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;

use dismantle::dismantler::{dismantle_timed, SolutionMetadata};
use dismantle::ensemble::{
    gcc_difference_histogram, shared_cost_grid, DifferenceHistogram, MemberResult,
};
use dismantle::graph::GraphStats;
use dismantle::io::{
    write_member_trajectories_csv, write_trajectory_csv, EnsembleRecord, SolutionRecord,
};
use dismantle::{
    components, cost_of, parse_edge_list, reinsert, run_ensemble, CostVector, DismantleParams,
    Graph, NodeMask, PhaseTimings,
};

use crate::config::RunConfig;

pub fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    parse_edge_list(BufReader::new(file))
        .with_context(|| format!("cannot parse {}", path.display()))
}

fn create(dir: &Path, name: &str) -> anyhow::Result<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> anyhow::Result<()> {
    let mut out = create(dir, name)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn prepare_out(cfg: &RunConfig) -> anyhow::Result<()> {
    fs::create_dir_all(&cfg.out)
        .with_context(|| format!("cannot create output directory {}", cfg.out.display()))
}

#[derive(Serialize)]
struct DatasetInfo {
    path: String,
    #[serde(flatten)]
    stats: GraphStats,
    components: usize,
    gcc_size: usize,
}

impl DatasetInfo {
    fn new(path: &Path, graph: &Graph) -> Self {
        let comps = components(graph, &NodeMask::full(graph.node_count()));
        Self {
            path: path.display().to_string(),
            stats: graph.stats(),
            components: comps.count(),
            gcc_size: comps.gcc_size(),
        }
    }
}

#[derive(Serialize)]
struct MemberTiming {
    index: usize,
    seed: u64,
    cost: f64,
    wall_clock_secs: f64,
}

impl From<&MemberResult> for MemberTiming {
    fn from(m: &MemberResult) -> Self {
        Self {
            index: m.index,
            seed: m.seed,
            cost: m.cost,
            wall_clock_secs: m.elapsed.as_secs_f64(),
        }
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    version: &'static str,
    config: &'a RunConfig,
    dataset: DatasetInfo,
    prng: &'static str,
    target_size: usize,
    reported_cost: f64,
    best_index: usize,
    best_seed: u64,
    wall_clock_secs: f64,
    members: Vec<MemberTiming>,
}

pub fn dismantle(cfg: &RunConfig) -> anyhow::Result<()> {
    let graph = load_graph(&cfg.input)?;
    let costs = CostVector::for_mode(&graph, cfg.cost.into())?;
    let target = cfg.target.resolve(&graph)?;
    prepare_out(cfg)?;

    let clock = Instant::now();
    let report = run_ensemble(&graph, &costs, &target, &cfg.ensemble_config())?;
    let elapsed = clock.elapsed();
    let best = report.best();

    write_json(
        &cfg.out,
        "solution.json",
        &SolutionRecord::new(&graph, &costs, &best.solution),
    )?;
    write_json(
        &cfg.out,
        "ensemble.json",
        &EnsembleRecord::new(&costs, &report),
    )?;
    let mut traj = create(&cfg.out, "trajectory.csv")?;
    write_trajectory_csv(&mut traj, &best.solution.trajectory)?;
    traj.flush()?;
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        dataset: DatasetInfo::new(&cfg.input, &graph),
        prng: dismantle::rng::PRNG_NAME,
        target_size: target.max_gcc(),
        reported_cost: best.cost,
        best_index: best.index,
        best_seed: best.seed,
        wall_clock_secs: elapsed.as_secs_f64(),
        members: report.members.iter().map(MemberTiming::from).collect(),
    };
    write_json(&cfg.out, "manifest.json", &manifest)?;

    println!(
        "best cost {} (member {}, seed {}, final gcc {}, {} removed) in {:.3}s",
        best.cost,
        best.index,
        best.seed,
        best.final_gcc(),
        best.solution.removed_count(),
        elapsed.as_secs_f64()
    );
    Ok(())
}

#[derive(Serialize)]
struct SignBalance {
    multiplier: usize,
    points: usize,
    positive: f64,
    zero: f64,
    negative: f64,
}

#[derive(Serialize)]
struct VariabilitySummary<'a> {
    version: &'static str,
    config: &'a RunConfig,
    multipliers: &'a [usize],
    baseline_multiplier: usize,
    balance: Vec<SignBalance>,
}

/// Runs `K` members for every multiplier and compares each member against the
/// baseline member with the same seed.
pub fn variability(cfg: &RunConfig, multipliers: &[usize]) -> anyhow::Result<()> {
    let graph = load_graph(&cfg.input)?;
    let costs = CostVector::for_mode(&graph, cfg.cost.into())?;
    let target = cfg.target.resolve(&graph)?;
    prepare_out(cfg)?;
    if multipliers.contains(&0) {
        anyhow::bail!("iteration multipliers must be at least 1");
    }
    let baseline_multiplier = 1;

    let mut reports = Vec::with_capacity(multipliers.len());
    for &d in multipliers {
        reports.push((
            d,
            run_ensemble(
                &graph,
                &costs,
                &target,
                &cfg.ensemble_config_with(cfg.ensemble, d),
            )?,
        ));
    }
    let extra;
    let baseline = match reports.iter().find(|(d, _)| *d == baseline_multiplier) {
        Some((_, r)) => r,
        None => {
            extra = run_ensemble(
                &graph,
                &costs,
                &target,
                &cfg.ensemble_config_with(cfg.ensemble, baseline_multiplier),
            )?;
            &extra
        }
    };

    let mut curves = create(&cfg.out, "curves.csv")?;
    writeln!(curves, "multiplier,member,seed,cumulative_cost,gcc_size")?;
    let mut hist_out = create(&cfg.out, "histogram.csv")?;
    writeln!(hist_out, "multiplier,difference,count")?;
    let mut balance = Vec::new();
    for (d, report) in &reports {
        let mut buf = Vec::new();
        write_member_trajectories_csv(&mut buf, report)?;
        for line in String::from_utf8(buf)?.lines().skip(1) {
            writeln!(curves, "{d},{line}")?;
        }
        let mut hist = DifferenceHistogram::default();
        for (a, b) in report.members.iter().zip(&baseline.members) {
            let (ta, tb) = (&a.solution.trajectory, &b.solution.trajectory);
            hist.merge(&gcc_difference_histogram(
                ta,
                tb,
                &shared_cost_grid(ta, tb),
            )?);
        }
        for (diff, count) in &hist.bins {
            writeln!(hist_out, "{d},{diff},{count}")?;
        }
        balance.push(SignBalance {
            multiplier: *d,
            points: hist.total(),
            positive: hist.positive_share(),
            zero: hist.zero_share(),
            negative: hist.negative_share(),
        });
    }
    curves.flush()?;
    hist_out.flush()?;

    for b in &balance {
        println!(
            "D={:<6} vs D={baseline_multiplier}: {} points, positive {:.3}, zero {:.3}, negative {:.3}",
            b.multiplier, b.points, b.positive, b.zero, b.negative
        );
    }
    write_json(
        &cfg.out,
        "variability.json",
        &VariabilitySummary {
            version: env!("CARGO_PKG_VERSION"),
            config: cfg,
            multipliers,
            baseline_multiplier,
            balance,
        },
    )
}

#[derive(Serialize)]
struct PhaseSeconds {
    spectral: f64,
    cover: f64,
    reinsert: f64,
    bookkeeping: f64,
    total: f64,
}

impl From<&PhaseTimings> for PhaseSeconds {
    fn from(t: &PhaseTimings) -> Self {
        Self {
            spectral: t.spectral.as_secs_f64(),
            cover: t.cover.as_secs_f64(),
            reinsert: t.reinsert.as_secs_f64(),
            bookkeeping: t.bookkeeping.as_secs_f64(),
            total: t.total().as_secs_f64(),
        }
    }
}

#[derive(Serialize)]
struct BenchReport {
    dataset: DatasetInfo,
    metadata: SolutionMetadata,
    reported_cost: f64,
    seconds: PhaseSeconds,
    reference_secs: Option<f64>,
}

/// Published single-round timings for datasets recognized by file name.
fn reference_secs(path: &Path) -> Option<f64> {
    let name = path.file_name()?.to_string_lossy().to_lowercase();
    if name.contains("crime") {
        Some(0.147)
    } else if name.contains("hamster") {
        Some(1.200)
    } else {
        None
    }
}

pub fn bench(cfg: &RunConfig) -> anyhow::Result<()> {
    let graph = load_graph(&cfg.input)?;
    let costs = CostVector::for_mode(&graph, cfg.cost.into())?;
    let target = cfg.target.resolve(&graph)?;
    prepare_out(cfg)?;

    let params = DismantleParams {
        seed: cfg.seed,
        multiplier: cfg.iter_multiplier,
        fine_tuning: cfg.fine_tune,
    };
    let mut timings = PhaseTimings::default();
    let mut solution = dismantle_timed(&graph, &costs, &target, &params, &mut timings)?;
    if cfg.reinsert {
        let clock = Instant::now();
        solution = reinsert(&graph, &costs, &target, &solution)?;
        timings.reinsert = clock.elapsed();
    }
    let report = BenchReport {
        dataset: DatasetInfo::new(&cfg.input, &graph),
        reported_cost: cost_of(&solution, &costs),
        metadata: solution.metadata,
        seconds: PhaseSeconds::from(&timings),
        reference_secs: reference_secs(&cfg.input),
    };
    let s = &report.seconds;
    print!(
        "one round: spectral {:.3}s, cover {:.3}s, reinsert {:.3}s, bookkeeping {:.3}s, total {:.3}s",
        s.spectral, s.cover, s.reinsert, s.bookkeeping, s.total
    );
    match report.reference_secs {
        Some(r) => println!(" (reference {r:.3}s, ratio {:.2})", s.total / r),
        None => println!(),
    }
    write_json(&cfg.out, "bench.json", &report)
}

pub fn stats(path: &Path) -> anyhow::Result<()> {
    let graph = load_graph(path)?;
    let info = DatasetInfo::new(path, &graph);
    println!("{}", serde_json::to_string_pretty(&info)?);
    Ok(())
}
