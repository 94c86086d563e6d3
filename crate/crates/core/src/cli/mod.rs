//! The `pcf` command-line driver.
//!
//! Every subcommand writes CSV or JSON. JSON output is one object with
//! `manifest` and `results`; CSV written to a file gets a sibling
//! `<file>.manifest.json`. A manifest (or any `key = value` file) can be fed
//! back with `--config`, and flags given on the command line win.

mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::engine::{write_trace, ClockSet, Simulation, Variant};
use crate::error::{PcfError, Result};
use crate::graph::{Graph, PriorityOrder};
use crate::oracle;
use crate::stats::{self, AlphaSearch, ReplicaPlan, SizeCensus, SizeHistogram, Weighting};
use crate::tree;

use output::{Artifacts, Rendered};

#[derive(Debug, Parser)]
#[command(name = "pcf", version, about = "Percolation with constant freezing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Run PCF replicas on a grid, tree or edge-list graph.
    Simulate(SimulateArgs),
    /// Left-right crossing probability against the freeze rate.
    CrossingCurve(CrossingArgs),
    /// Bisection for the rate where the crossing probability is 1/2.
    EstimateAlphaC(AlphaCArgs),
    /// Exact root-cluster size distribution on the d-ary tree.
    TreePmf(TreePmfArgs),
    /// Closed-form critical values and time rescalings on the d-ary tree.
    TreeAnalytic(TreeAnalyticArgs),
    /// Compare engine final states with the exact distribution on a tiny graph.
    OracleCheck(OracleArgs),
    /// Star-open bound and the rate where it meets a site threshold.
    StarBound(StarArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
struct Common {
    /// Base seed; required by every stochastic command.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (default: standard output).
    #[arg(long, short)]
    #[serde(skip)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads, or `auto`.
    #[arg(long, default_value = "auto")]
    threads: String,
    /// `key = value` file or JSON manifest with default flag values.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Also write a gnuplot script next to the output file.
    #[arg(long)]
    gnuplot: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
struct GraphArgs {
    /// Square grid `WxH`.
    #[arg(long, group = "topology")]
    grid: Option<String>,
    /// Rooted tree `D,DEPTH`.
    #[arg(long, group = "topology")]
    tree: Option<String>,
    /// Edge-list file (`V E B` header, then edges, then boundary vertices).
    #[arg(long, group = "topology")]
    graph_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SimVariant {
    Pcf,
    Warm,
    Percolation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum WeightingArg {
    Clusters,
    Vertices,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    replicas: u64,
    #[arg(long, value_enum, default_value = "pcf")]
    variant: SimVariant,
    /// Stop time (required for percolation; PCF runs to absorption by default).
    #[arg(long)]
    t: Option<f64>,
    /// Write the event trace of replica 0 to this file.
    #[arg(long)]
    #[serde(skip)]
    trace: Option<PathBuf>,
    /// Write the cluster-size histogram CSV to this file.
    #[arg(long)]
    #[serde(skip)]
    histogram: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    min_per_bin: u64,
    #[arg(long, value_enum, default_value = "vertices")]
    weighting: WeightingArg,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
struct CrossingArgs {
    /// Rates as `lo:hi:step` or a comma list.
    #[arg(long)]
    alphas: String,
    /// Grid sizes `n` (grid is `(n+1) x n`), comma separated.
    #[arg(long)]
    sizes: String,
    #[arg(long, default_value_t = 2500)]
    replicas: u64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
struct AlphaCArgs {
    #[arg(long, default_value_t = 128)]
    n: u32,
    /// `lo,hi`
    #[arg(long, default_value = "0.45,0.65")]
    bracket: String,
    #[arg(long, default_value_t = 0.02)]
    target_width: f64,
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
struct TreePmfArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1000)]
    k_max: u64,
    /// Tail fit range `lo,hi` (default `100,k_max` when `k_max > 100`).
    #[arg(long)]
    fit: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
struct TreeAnalyticArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    alpha: f64,
    /// Also evaluate the time-dependent quantities at this time.
    #[arg(long)]
    t: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
struct OracleArgs {
    /// single-edge (default), p3, p4, c3, c4 or s3
    #[arg(long, group = "small")]
    graph: Option<String>,
    #[arg(long, group = "small")]
    graph_file: Option<PathBuf>,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 100_000)]
    replicas: u64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
struct StarArgs {
    /// Lattice dimension; the vertex degree is `2d`.
    #[arg(long, default_value_t = 2)]
    d: u32,
    /// Rates as `lo:hi:step` or a comma list.
    #[arg(long, default_value = "0.5,1,2,5,10,20,50")]
    alphas: String,
    /// Site threshold for the crossover rate.
    #[arg(long)]
    p_site: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Simulate(a) => &a.common,
            Command::CrossingCurve(a) => &a.common,
            Command::EstimateAlphaC(a) => &a.common,
            Command::TreePmf(a) => &a.common,
            Command::TreeAnalytic(a) => &a.common,
            Command::OracleCheck(a) => &a.common,
            Command::StarBound(a) => &a.common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::CrossingCurve(_) => "crossing-curve",
            Command::EstimateAlphaC(_) => "estimate-alpha-c",
            Command::TreePmf(_) => "tree-pmf",
            Command::TreeAnalytic(_) => "tree-analytic",
            Command::OracleCheck(_) => "oracle-check",
            Command::StarBound(_) => "star-bound",
        }
    }

    fn is_stochastic(&self) -> bool {
        matches!(
            self,
            Command::Simulate(_)
                | Command::CrossingCurve(_)
                | Command::EstimateAlphaC(_)
                | Command::OracleCheck(_)
        )
    }

    /// Effective flag values, minus output locations, as written to the manifest.
    fn config_map(&self) -> Value {
        let mut v = serde_json::to_value(self).unwrap_or(Value::Null);
        let inner = v
            .as_object_mut()
            .and_then(|m| m.remove(self.name()))
            .unwrap_or(Value::Null);
        let mut map = serde_json::Map::new();
        map.insert("command".into(), Value::String(self.name().into()));
        if let Value::Object(fields) = inner {
            for (k, val) in fields {
                if !val.is_null() {
                    map.insert(k, val);
                }
            }
        }
        Value::Object(map)
    }
}

/// Parse `argv` (program name first), run, and return the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match config::expand(argv) {
        Ok(a) => a,
        Err(e) => return report(&e),
    };
    let matches = match Cli::command()
        .mut_subcommands(|s| s.args_override_self(true))
        .try_get_matches_from(argv)
    {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => report(&e),
    }
}

fn report(e: &PcfError) -> i32 {
    eprintln!("pcf: {e}");
    e.exit_code()
}

fn execute(cmd: &Command) -> Result<()> {
    let common = cmd.common();
    if cmd.is_stochastic() && common.seed.is_none() {
        return Err(PcfError::Parameter(format!(
            "{} needs --seed; runs are only reproducible with an explicit seed",
            cmd.name()
        )));
    }
    let threads = parse_threads(&common.threads)?;
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            b = b.num_threads(n);
        }
        b.build()
            .map_err(|e| PcfError::Parameter(format!("thread pool: {e}")))?
    };
    let start = Instant::now();
    let mut artifacts = Artifacts::default();
    let outcome = pool.install(|| -> Result<()> {
        let rendered = match cmd {
            Command::Simulate(a) => simulate(a, &mut artifacts)?,
            Command::CrossingCurve(a) => crossing_curve(a)?,
            Command::EstimateAlphaC(a) => estimate_alpha_c(a)?,
            Command::TreePmf(a) => tree_pmf(a)?,
            Command::TreeAnalytic(a) => tree_analytic(a)?,
            Command::OracleCheck(a) => oracle_check(a)?,
            Command::StarBound(a) => star_bound(a)?,
        };
        let manifest = json!({
            "command": cmd.name(),
            "config": cmd.config_map(),
            "version": env!("CARGO_PKG_VERSION"),
            "elapsed_seconds": start.elapsed().as_secs_f64(),
            "threads": pool.current_num_threads(),
        });
        artifacts.emit(common, rendered, manifest)
    });
    if outcome.is_err() {
        artifacts.discard();
    }
    outcome
}

fn parse_threads(s: &str) -> Result<Option<usize>> {
    if s == "auto" {
        return Ok(None);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(Some(n)),
        _ => Err(PcfError::Parameter(format!("--threads takes a positive integer or auto, got {s:?}"))),
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| PcfError::Parameter(format!("{what}: not a number: {s:?}")))
}

/// `lo:hi:step` (inclusive) or `a,b,c`.
fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let (lo, hi, step) = (
            parse_f64(parts[0], what)?,
            parse_f64(parts[1], what)?,
            parse_f64(parts[2], what)?,
        );
        if !(step > 0.0 && hi >= lo) {
            return Err(PcfError::Parameter(format!("{what}: bad range {s:?}")));
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        // round to the step's decimal precision so 0.45 + 10 * 0.01 prints as 0.55
        let scale = 1e12;
        return Ok((0..=n)
            .map(|i| ((lo + step * i as f64) * scale).round() / scale)
            .collect());
    }
    s.split(',').map(|x| parse_f64(x, what)).collect()
}

fn parse_pair(s: &str, sep: char, what: &str) -> Result<(String, String)> {
    let mut it = s.splitn(2, sep);
    match (it.next(), it.next()) {
        (Some(a), Some(b)) => Ok((a.trim().to_string(), b.trim().to_string())),
        _ => Err(PcfError::Parameter(format!("{what}: expected two values separated by {sep:?}, got {s:?}"))),
    }
}

fn parse_u32(s: &str, what: &str) -> Result<u32> {
    s.parse()
        .map_err(|_| PcfError::Parameter(format!("{what}: not a non-negative integer: {s:?}")))
}

fn build_graph(g: &GraphArgs) -> Result<Graph> {
    if let Some(spec) = &g.grid {
        let (w, h) = parse_pair(&spec.to_lowercase(), 'x', "--grid")?;
        return Graph::grid(parse_u32(&w, "--grid")?, parse_u32(&h, "--grid")?);
    }
    if let Some(spec) = &g.tree {
        let (d, depth) = parse_pair(spec, ',', "--tree")?;
        return Graph::rooted_tree(parse_u32(&d, "--tree")?, parse_u32(&depth, "--tree")?);
    }
    if let Some(path) = &g.graph_file {
        return Graph::read_edge_list(path);
    }
    Err(PcfError::Parameter("give one of --grid, --tree or --graph-file".into()))
}

fn simulate(a: &SimulateArgs, artifacts: &mut Artifacts) -> Result<Rendered> {
    let graph = build_graph(&a.graph)?;
    let seed = a.common.seed.unwrap_or_default();
    let variant = match a.variant {
        SimVariant::Pcf => stats::ReplicaVariant::Pcf,
        SimVariant::Warm => stats::ReplicaVariant::Warm,
        SimVariant::Percolation => stats::ReplicaVariant::Percolation {
            t: a.t.ok_or_else(|| PcfError::Parameter("percolation needs --t".into()))?,
        },
    };
    let t_max = match a.variant {
        SimVariant::Percolation => f64::INFINITY,
        _ => a.t.unwrap_or(f64::INFINITY),
    };
    let priority = PriorityOrder::for_graph(&graph);
    let plan = ReplicaPlan::new(&graph, a.alpha, a.replicas, seed)
        .variant(variant)
        .t_max(t_max);
    let rows = stats::map_replicas(&plan, |i, r| {
        let row = json!({
            "replica": i,
            "open_edges": r.final_config.open_count(),
            "frozen_vertices": r.final_config.frozen_count(),
            "clusters": r.cluster_sizes.len(),
            "largest_cluster": r.largest_cluster(),
            "root_cluster_size": r.root_cluster_size,
            "root_touched_boundary": r.root_touched_boundary,
            "events": r.event_count,
        });
        (row, SizeCensus::from_sizes(r.cluster_sizes))
    })?;
    if let Some(path) = &a.trace {
        let clocks = ClockSet::sample(&graph, a.alpha, seed, 0)?;
        let v = match a.variant {
            SimVariant::Pcf => Variant::Pcf,
            SimVariant::Warm => Variant::Warm,
            SimVariant::Percolation => Variant::Percolation,
        };
        let t = if a.variant == SimVariant::Percolation { a.t.unwrap_or(f64::INFINITY) } else { t_max };
        let r = Simulation::new(&graph, &priority, &clocks)
            .variant(v)
            .t_max(t)
            .record_trace(true)
            .run()?;
        let mut buf = Vec::new();
        write_trace(&mut buf, r.trace.as_deref().unwrap_or(&[]))?;
        artifacts.write_side_file(path, &buf)?;
    }
    let mut census = SizeCensus::new();
    let mut table = Vec::with_capacity(rows.len());
    for (row, c) in rows {
        census.merge(&c);
        table.push(row);
    }
    let hist = SizeHistogram::from_census(&census, a.min_per_bin)?;
    let weighting = match a.weighting {
        WeightingArg::Clusters => Weighting::Clusters,
        WeightingArg::Vertices => Weighting::Vertices,
    };
    if let Some(path) = &a.histogram {
        let mut buf = Vec::new();
        hist.write_csv(weighting, &mut buf)?;
        artifacts.write_side_file(path, &buf)?;
    }
    let slope = hist.loglog_slope(weighting, 1.0, f64::INFINITY).ok();
    if let Some(x) = slope {
        eprintln!("histogram log-log slope {x:.4} over {} full bins", hist.full_bins().count());
    }
    let bins: Vec<Value> = hist
        .bins
        .iter()
        .enumerate()
        .map(|(i, b)| {
            json!({
                "k_center": b.center(), "k_lo": b.k_lo, "k_hi": b.k_hi,
                "count": b.count, "density": hist.density(i, weighting),
            })
        })
        .collect();
    let columns = [
        "replica",
        "open_edges",
        "frozen_vertices",
        "clusters",
        "largest_cluster",
        "root_cluster_size",
        "root_touched_boundary",
        "events",
    ];
    Ok(Rendered {
        csv: output::table_csv(&columns, &table)?,
        json: json!({
            "replicas": table,
            "histogram": {"weighting": a.weighting, "bins": bins, "loglog_slope": slope},
        }),
        gnuplot: Some(output::gnuplot_columns("largest_cluster", 1, 5)),
    })
}

fn crossing_curve(a: &CrossingArgs) -> Result<Rendered> {
    let alphas = parse_list(&a.alphas, "--alphas")?;
    let sizes = a
        .sizes
        .split(',')
        .map(|s| parse_u32(s.trim(), "--sizes"))
        .collect::<Result<Vec<u32>>>()?;
    let seed = a.common.seed.unwrap_or_default();
    let points = stats::crossing_curve(&alphas, &sizes, a.replicas, seed, None)?;
    let mut buf = Vec::new();
    stats::write_crossing_csv(&points, &mut buf)?;
    Ok(Rendered {
        csv: String::from_utf8(buf).expect("csv is utf-8"),
        json: serde_json::to_value(&points).expect("serializable"),
        gnuplot: Some(output::gnuplot_crossing(&sizes)),
    })
}

fn estimate_alpha_c(a: &AlphaCArgs) -> Result<Rendered> {
    let (lo, hi) = parse_pair(&a.bracket, ',', "--bracket")?;
    let cfg = AlphaSearch {
        n: a.n,
        bracket: (parse_f64(&lo, "--bracket")?, parse_f64(&hi, "--bracket")?),
        target_width: a.target_width,
        replica_budget: a.budget,
        base_seed: a.common.seed.unwrap_or_default(),
        threads: None,
    };
    let r = stats::estimate_alpha_c(&cfg)?;
    eprintln!(
        "alpha_c in [{:.5}, {:.5}] after {} replicas{}",
        r.interval.0,
        r.interval.1,
        r.replicas_used,
        if r.budget_exhausted { " (target width not reached)" } else { "" }
    );
    for (x, y) in &r.monotone_violations {
        eprintln!("note: crossing estimate rises between alpha {x} and {y}");
    }
    let rows: Vec<Value> = r
        .points
        .iter()
        .map(|p| {
            json!({
                "alpha": p.alpha, "trials": p.estimate.trials, "successes": p.estimate.successes,
                "p_hat": p.estimate.p_hat, "ci_low": p.estimate.ci_low, "ci_high": p.estimate.ci_high,
                "side": match p.above { Some(true) => "above", Some(false) => "below", None => "undecided" },
            })
        })
        .collect();
    let columns = ["alpha", "trials", "successes", "p_hat", "ci_low", "ci_high", "side"];
    Ok(Rendered {
        csv: output::table_csv(&columns, &rows)?,
        json: serde_json::to_value(&r).expect("serializable"),
        gnuplot: None,
    })
}

fn tree_pmf(a: &TreePmfArgs) -> Result<Rendered> {
    let params = tree::TreeParams::new(a.d, a.alpha)?;
    let pmf = tree::root_cluster_size_pmf(params, a.k_max)?;
    let range = match &a.fit {
        Some(s) => {
            let (lo, hi) = parse_pair(s, ',', "--fit")?;
            let lo = lo.parse().map_err(|_| PcfError::Parameter(format!("--fit: {s:?}")))?;
            let hi = hi.parse().map_err(|_| PcfError::Parameter(format!("--fit: {s:?}")))?;
            Some((lo, hi))
        }
        None if a.k_max > 100 => Some((100, a.k_max)),
        None => None,
    };
    let fit = match range {
        Some((lo, hi)) => Some(tree::fit_tail_exponent(&pmf, lo, hi)?),
        None => None,
    };
    if let Some(f) = &fit {
        eprintln!("tail exponent {:.4} over k in [{}, {}]", f.exponent, f.k_range.0, f.k_range.1);
    }
    eprintln!(
        "1 - sum of p_k {:.3e}, extrapolated total {:.6}",
        pmf.mass_deficit,
        pmf.extrapolated_total()
    );
    let mut buf = Vec::new();
    pmf.write_csv(&mut buf)?;
    let rows: Vec<Value> = pmf
        .ln_p
        .iter()
        .enumerate()
        .map(|(i, l)| json!({"k": i + 1, "p_k": l.exp(), "log_p_k": l}))
        .collect();
    Ok(Rendered {
        csv: String::from_utf8(buf).expect("csv is utf-8"),
        json: json!({
            "d": a.d, "alpha": a.alpha, "k_max": a.k_max,
            "mass_deficit": pmf.mass_deficit,
            "extrapolated_total": pmf.extrapolated_total(),
            "tail_fit": fit,
            "pmf": rows,
        }),
        gnuplot: Some(output::gnuplot_loglog(1, 2)),
    })
}

fn tree_analytic(a: &TreeAnalyticArgs) -> Result<Rendered> {
    tree::TreeParams::new(a.d, a.alpha)?;
    let t_c = match tree::critical_time(a.d, a.alpha) {
        Ok(t) => Some(t),
        Err(PcfError::Domain(_)) => None,
        Err(e) => return Err(e),
    };
    let mut rows = vec![
        ("alpha_c", Some(tree::critical_alpha(a.d))),
        ("t_c", t_c),
        ("open_prob_inf", Some(tree::open_prob(a.alpha, f64::INFINITY))),
        ("percolation_time_inf", Some(tree::percolation_time(a.alpha, f64::INFINITY))),
    ];
    if let Some(t) = a.t {
        if !(t >= 0.0) {
            return Err(PcfError::Parameter(format!("--t must be >= 0, got {t}")));
        }
        rows.push(("open_prob_t", Some(tree::open_prob(a.alpha, t))));
        rows.push(("percolation_time_t", Some(tree::percolation_time(a.alpha, t))));
        rows.push(("meanfield_time_t", Some(tree::meanfield_time(a.alpha, t))));
    }
    let mut csv = String::from("quantity,value\n");
    let mut obj = serde_json::Map::new();
    obj.insert("d".into(), json!(a.d));
    obj.insert("alpha".into(), json!(a.alpha));
    for (name, v) in &rows {
        csv.push_str(&format!("{name},{}\n", v.map_or(String::new(), |x| x.to_string())));
        obj.insert((*name).into(), json!(v));
    }
    Ok(Rendered {
        csv,
        json: Value::Object(obj),
        gnuplot: None,
    })
}

fn oracle_check(a: &OracleArgs) -> Result<Rendered> {
    let graph = match &a.graph_file {
        Some(p) => Graph::read_edge_list(p)?,
        None => oracle::named_graph(a.graph.as_deref().unwrap_or("single-edge"))?,
    };
    let seed = a.common.seed.unwrap_or_default();
    let rows = oracle::compare_with_engine(&graph, a.alpha, a.replicas, seed)?;
    let bits = |mask: u16, n: usize| (0..n).map(|i| if mask >> i & 1 == 1 { '1' } else { '0' }).collect::<String>();
    let (n, m) = (graph.vertex_count(), graph.edge_count());
    let table: Vec<Value> = rows
        .iter()
        .map(|c| {
            json!({
                "frozen": bits(c.frozen, n), "open": bits(c.open, m), "exact": c.exact,
                "engine": c.estimate.p_hat, "ci_low": c.estimate.ci_low,
                "ci_high": c.estimate.ci_high, "z": c.z,
            })
        })
        .collect();
    let max_z = rows.iter().map(|c| c.z.abs()).fold(0.0, f64::max);
    let columns = ["frozen", "open", "exact", "engine", "ci_low", "ci_high", "z"];
    Ok(Rendered {
        csv: output::table_csv(&columns, &table)?,
        json: json!({
            "alpha": a.alpha, "replicas": a.replicas, "states": table,
            "max_abs_z": max_z, "within_3_sigma": max_z <= 3.0,
        }),
        gnuplot: None,
    })
}

fn star_bound(a: &StarArgs) -> Result<Rendered> {
    let alphas = parse_list(&a.alphas, "--alphas")?;
    let degree = 2 * a.d;
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in &alphas {
        rows.push(json!({"degree": degree, "alpha": alpha, "f": tree::star_open_bound(degree, alpha)?}));
    }
    let alpha_star = match a.p_site {
        Some(p) => Some(tree::alpha_star(a.d, p)?),
        None => None,
    };
    if let (Some(p), Some(x)) = (a.p_site, alpha_star) {
        eprintln!("alpha* = {x:.6} (bound meets p = {p})");
    }
    Ok(Rendered {
        csv: output::table_csv(&["degree", "alpha", "f"], &rows)?,
        json: json!({"rows": rows, "p_site": a.p_site, "alpha_star": alpha_star}),
        gnuplot: Some(output::gnuplot_columns("f", 2, 3)),
    })
}
