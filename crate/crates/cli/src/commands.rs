use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use dagorder_core::acyclic::{acyclic_fix_detailed, npl, AcyclicFixConfig};
use dagorder_core::bipartition::{partition_metrics, spectral_bipartition};
use dagorder_core::ingest::{
    acyclic_convert_partition_rule, acyclic_convert_toporder_rule, parse_matrix_market,
    read_edge_list, to_digraph, write_edge_list,
};
use dagorder_core::locality::{
    access_pattern, edge_cut_distribution, edge_length_distribution, locality_summary,
    reuse_distance_distribution,
};
use dagorder_core::report::{
    performance_profile, read_order, read_partition, read_records, spy_plot, write_order,
    write_partition, write_records, RunRecord,
};
use dagorder_core::spectral::default_incentive;
use dagorder_core::synthgen::{generate, Family, PlantedSidecar, SynthConfig};
use dagorder_core::toporder::{
    bfs_min_outdeg_order, cuthill_mckee_acyclic, dfs_order, gorder_acyclic, spectral_toporder,
};
use dagorder_core::{BiPartition, DiGraph, Error, Side, SpectralConfig, TopologicalOrder};

use crate::{
    AcyclicArgs, Cli, Command, ConvertArgs, FamilyArg, GenArgs, MetricsArgs, OrderAlgo,
    PartitionAlgo, PartitionArgs, ProfileArgs, RuleArg, SpyplotArgs, SweepArgs, ToporderArgs,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Validation(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Validation(_) => 3,
        }
    }

    pub fn report(&self) -> ExitCode {
        let (kind, message) = match self {
            CliError::Usage(m) => ("usage", m),
            CliError::Io(m) => ("io", m),
            CliError::Validation(m) => ("validation", m),
        };
        let body = serde_json::json!({
            "error": kind,
            "message": message.trim_end(),
            "exit_code": self.code(),
        });
        eprintln!("{body}");
        ExitCode::from(self.code())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Csv(_) | Error::Parse { .. } | Error::UnsupportedFormat(_) => {
                CliError::Io(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Edge-list dump, or Matrix Market when the extension is `.mtx` (every
/// off-diagonal entry becomes an edge).
fn load_graph(path: &Path) -> CliResult<DiGraph> {
    if path.extension().is_some_and(|e| e == "mtx") {
        let pattern = parse_matrix_market(open(path)?)?;
        Ok(to_digraph(&pattern)?.0)
    } else {
        Ok(read_edge_list(open(path)?)?)
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s.into_bytes()
}

pub fn run(cli: Cli) -> CliResult<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Convert(a) => cmd_convert(a),
        Command::Partition(a) => cmd_partition(a),
        Command::Acyclic(a) => cmd_acyclic(a),
        Command::Toporder(a) => cmd_toporder(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Spyplot(a) => cmd_spyplot(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn cmd_gen(a: GenArgs) -> CliResult<()> {
    let seed = a.seed.seed;
    let mut cfg = match a.family {
        FamilyArg::Er => SynthConfig::er(a.alpha, seed),
        FamilyArg::Ws => SynthConfig::ws(a.alpha, seed),
        FamilyArg::Sbm => SynthConfig::sbm(a.alpha, seed),
    };
    cfg.n = a.n;
    cfg.family = match cfg.family {
        Family::Er { p } => Family::Er { p: a.p.unwrap_or(p) },
        Family::Ws { k, p } => Family::Ws {
            k: a.k.unwrap_or(k),
            p: a.p.unwrap_or(p),
        },
        Family::Sbm { p_int, p_ext } => Family::Sbm {
            p_int: a.p_int.unwrap_or(p_int),
            p_ext: a.p_ext.unwrap_or(p_ext),
        },
    };
    let (g, planted) = generate(&cfg)?;
    let mut buf = Vec::new();
    write_edge_list(&g, &mut buf)?;
    emit(a.out.as_deref(), &buf)?;
    let sidecar = a.labels.or_else(|| {
        a.out.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".planted.json");
            PathBuf::from(s)
        })
    });
    if let Some(path) = sidecar {
        emit(Some(&path), &json_bytes(&PlantedSidecar::new(cfg, &planted)))?;
    }
    Ok(())
}

fn cmd_convert(a: ConvertArgs) -> CliResult<()> {
    let pattern = parse_matrix_market(open(&a.input)?)?;
    let g = match a.rule {
        RuleArg::Digraph => to_digraph(&pattern)?.0,
        RuleArg::Toporder => acyclic_convert_toporder_rule(&pattern)?,
        RuleArg::Partition => acyclic_convert_partition_rule(&pattern)?,
        RuleArg::Upper => pattern.upper_graph()?,
        RuleArg::Lower => pattern.lower_graph()?,
    };
    let mut buf = Vec::new();
    write_edge_list(&g, &mut buf)?;
    emit(a.out.as_deref(), &buf)
}

/// Spectral split of the largest weakly connected component; every other
/// component joins the currently smaller side as a whole.
fn partition_graph(g: &DiGraph, algo: PartitionAlgo, c: Option<f64>, seed: u64) -> CliResult<BiPartition> {
    let comps = g.weakly_connected_components();
    let largest = comps
        .iter()
        .enumerate()
        .max_by_key(|(i, c)| (c.len(), std::cmp::Reverse(*i)))
        .map(|(i, _)| i)
        .ok_or(Error::EmptyGraph)?;
    let (sub, ids) = g.induced_subgraph(&comps[largest]);
    let default_c = match algo {
        PartitionAlgo::SpectralDir => default_incentive(&sub),
        PartitionAlgo::SpectralClassic => 0.0,
    };
    let cfg = SpectralConfig::classic().with_c(c.unwrap_or(default_c));
    let part = spectral_bipartition(&sub, &cfg.with_seed(seed))?;
    let mut labels = vec![Side::T; g.n()];
    for (i, &v) in ids.iter().enumerate() {
        labels[v] = part.side(i);
    }
    let (mut s, mut t) = (part.size_s(), part.size_t());
    for (i, comp) in comps.iter().enumerate() {
        if i == largest {
            continue;
        }
        let side = if s <= t { Side::S } else { Side::T };
        for &v in comp {
            labels[v] = side;
        }
        if side == Side::S {
            s += comp.len();
        } else {
            t += comp.len();
        }
    }
    Ok(BiPartition::from_labels(labels).oriented_forward(g))
}

fn cmd_partition(a: PartitionArgs) -> CliResult<()> {
    let g = load_graph(&a.input)?;
    let p = partition_graph(&g, a.algo, a.c, a.seed.seed)?;
    if p.n() != g.n() {
        return Err(CliError::Validation("partition size does not match the graph".into()));
    }
    let mut buf = Vec::new();
    write_partition(&p, &mut buf)?;
    emit(a.out.as_deref(), &buf)?;
    if let Some(path) = a.metrics {
        emit(Some(&path), &json_bytes(&partition_metrics(&g, &p)?))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct AcyclicReport {
    cut: usize,
    s_bound: usize,
    t_bound: usize,
    size_s: usize,
    size_t: usize,
    npl: f64,
}

fn cmd_acyclic(a: AcyclicArgs) -> CliResult<()> {
    let g = load_graph(&a.input)?;
    let p = read_partition(open(&a.partition)?)?;
    let out = acyclic_fix_detailed(&g, &p, &AcyclicFixConfig { beta: a.beta })?;
    if out.partition.cut_counts(&g).backward != 0 {
        return Err(CliError::Validation("repaired partition still has backward edges".into()));
    }
    let mut buf = Vec::new();
    write_partition(&out.partition, &mut buf)?;
    emit(a.out.as_deref(), &buf)?;
    if let Some(path) = a.report {
        let report = AcyclicReport {
            cut: out.cut,
            s_bound: out.s_bound,
            t_bound: out.t_bound,
            size_s: out.partition.size_s(),
            size_t: out.partition.size_t(),
            npl: npl(&p, &out.partition)?,
        };
        emit(Some(&path), &json_bytes(&report))?;
    }
    Ok(())
}

pub fn compute_order(g: &DiGraph, algo: OrderAlgo, window: usize, seed: u64) -> CliResult<TopologicalOrder> {
    let ord = match algo {
        OrderAlgo::SpectralDir => {
            spectral_toporder(g, &SpectralConfig::direction_incentivised(g).with_seed(seed))?
        }
        OrderAlgo::SpectralClassic => spectral_toporder(g, &SpectralConfig::classic().with_seed(seed))?,
        OrderAlgo::Dfs => dfs_order(g)?,
        OrderAlgo::Bfs => bfs_min_outdeg_order(g)?,
        OrderAlgo::Cm => cuthill_mckee_acyclic(g)?,
        OrderAlgo::Gorder => gorder_acyclic(g, window)?,
    };
    if !g.validate_toporder(&ord) {
        return Err(CliError::Validation(format!(
            "{} produced an invalid topological order",
            algo.name()
        )));
    }
    Ok(ord)
}

fn cmd_toporder(a: ToporderArgs) -> CliResult<()> {
    let g = load_graph(&a.input)?;
    let ord = compute_order(&g, a.algo, a.window, a.seed.seed)?;
    let mut buf = Vec::new();
    write_order(&ord, &mut buf)?;
    emit(a.out.as_deref(), &buf)
}

fn cmd_metrics(a: MetricsArgs) -> CliResult<()> {
    let g = load_graph(&a.graph)?;
    if a.order.is_none() && a.partition.is_none() {
        return Err(CliError::Usage("give --order, --partition, or both".into()));
    }
    let mut summary = serde_json::Map::new();
    if let Some(path) = &a.order {
        let ord = read_order(open(path)?)?;
        let s = locality_summary(&g, &ord)?;
        if let serde_json::Value::Object(m) = serde_json::to_value(s).expect("serialisable") {
            summary.extend(m);
        }
        if let Some(dpath) = &a.distributions {
            let mut buf = Vec::new();
            writeln!(buf, "metric,value")?;
            let reuse = reuse_distance_distribution(&access_pattern(&g, &ord)?);
            for (name, dist) in [
                ("edge_length", edge_length_distribution(&g, &ord)?),
                ("edge_cut", edge_cut_distribution(&g, &ord)?),
                ("reuse_distance", reuse),
            ] {
                for v in dist.values() {
                    writeln!(buf, "{name},{v}")?;
                }
            }
            emit(Some(dpath), &buf)?;
        }
    }
    if let Some(path) = &a.partition {
        let p = read_partition(open(path)?)?;
        let m = partition_metrics(&g, &p)?;
        if let serde_json::Value::Object(m) = serde_json::to_value(m).expect("serialisable") {
            summary.extend(m);
        }
    }
    emit(a.out.as_deref(), &json_bytes(&summary))
}

fn cmd_profile(a: ProfileArgs) -> CliResult<()> {
    let records = read_records(open(&a.records)?)?;
    let profile = performance_profile(&records, &a.metric, a.points)?;
    let mut buf = Vec::new();
    profile.write_csv(&mut buf)?;
    emit(a.out.as_deref(), &buf)
}

fn cmd_spyplot(a: SpyplotArgs) -> CliResult<()> {
    let g = load_graph(&a.graph)?;
    let ord = read_order(open(&a.order)?)?;
    let plot = spy_plot(&g, &ord, a.size)?;
    emit(a.out.as_deref(), &plot.to_ppm())
}

fn graph_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cmd_sweep(a: SweepArgs) -> CliResult<()> {
    let graphs: Vec<(String, DiGraph)> = a
        .graphs
        .iter()
        .map(|p| Ok((graph_id(p), load_graph(p)?)))
        .collect::<CliResult<_>>()?;
    let mut tasks = Vec::new();
    for gi in 0..graphs.len() {
        for &algo in &a.algos {
            for &seed in &a.seeds {
                tasks.push((gi, algo, seed));
            }
        }
    }
    // Tasks are independent; `collect` keeps them in task order, so the
    // written table does not depend on the thread count.
    let results: Vec<CliResult<(RunRecord, TopologicalOrder)>> = tasks
        .par_iter()
        .map(|&(gi, algo, seed)| {
            let (id, g) = &graphs[gi];
            let start = Instant::now();
            let ord = compute_order(g, algo, a.window, seed)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let s = locality_summary(g, &ord)?;
            let metrics = [
                ("bandwidth", s.bandwidth),
                ("mla", s.mla),
                ("cutwidth", s.cutwidth),
                ("median_edge_length", s.median_edge_length),
                ("median_edge_cut", s.median_edge_cut),
                ("total_reuse", s.total_reuse),
                ("max_reuse", s.max_reuse),
                ("median_reuse", s.median_reuse),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v as f64))
            .collect();
            Ok((
                RunRecord {
                    graph: id.clone(),
                    algo: algo.name().to_string(),
                    seed,
                    wall_ms: a.timings.then_some(wall_ms),
                    metrics,
                },
                ord,
            ))
        })
        .collect();
    let mut records = Vec::with_capacity(results.len());
    for r in results {
        let (record, ord) = r?;
        if let Some(dir) = &a.orders_dir {
            std::fs::create_dir_all(dir)?;
            let mut buf = Vec::new();
            write_order(&ord, &mut buf)?;
            let name = format!("{}.{}.{}.ord", record.graph, record.algo, record.seed);
            emit(Some(&dir.join(name)), &buf)?;
        }
        records.push(record);
    }
    let mut buf = Vec::new();
    write_records(&records, &mut buf)?;
    emit(a.out.as_deref(), &buf)
}
