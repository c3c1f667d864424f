//! Sweep-running command line for the network-coding toolkit. Every command
//! is deterministic given (flags, config, seed); output files open with a
//! header comment carrying the invocation and resolved seed.
//!
//! Exit codes: 0 success, 2 usage/config error, 3 infeasible problem.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geonc::config::ScenarioConfig;
use geonc::geo::GeoStore;
use geonc::AppError;
use geonc_core::analytics::{
    reliability_nc, reliability_uncoded, residual_snc, CodeOperatingPoint, PathProfile,
};
use geonc_core::lifecycle::{lifecycle_step, LifecycleEvent, LifecycleState};
use geonc_core::optimizer::{connectivity, operative_range, ComplexityBudget};
use geonc_core::rate_region::{
    area_ratio, linspace, region_grid, square_diagnostic, AreaRatio, RateGrid, Scheme,
};
use geonc_core::sim::monte_carlo;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "geonc", version, about = "Network-coding reliability toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form reliability curves over a block-length range.
    Analyze(AnalyzeArgs),
    /// Monte Carlo simulation from a JSON scenario config.
    Simulate(SimulateArgs),
    /// Two-hop achievable-rate-region grids and diagnostics.
    RateRegion(RateRegionArgs),
    /// Constrained coding-rate optimization and operative range.
    Optimize(OptimizeArgs),
    /// Connectivity horizons with and without coding.
    Connectivity(ConnectivityArgs),
    /// Geo-tagged link-statistics store operations.
    Geo(GeoArgs),
    /// Replay a lifecycle event script and print the transition log.
    Lifecycle(LifecycleArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    q: u8,
    #[arg(long)]
    m: usize,
    /// Comma-separated per-hop erasure probabilities.
    #[arg(long)]
    eps: String,
    /// Block-length range lo:hi (inclusive).
    #[arg(long = "n-range")]
    n_range: String,
    #[arg(long, default_value_t = 0.8)]
    rho0: f64,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: String,
    /// Overrides the config's output path.
    #[arg(long)]
    output: Option<String>,
    /// Overrides the config's seed (falls back to NCF_SEED, then 0).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RateRegionArgs {
    #[arg(long, default_value_t = 50)]
    k: usize,
    #[arg(long, default_value_t = 8)]
    q: u8,
    #[arg(long)]
    eta0: f64,
    #[arg(long = "r-min")]
    r_min: f64,
    #[arg(long = "r-max")]
    r_max: f64,
    /// Grid points per erasure axis.
    #[arg(long, default_value_t = 61)]
    grid: usize,
    #[arg(long = "eps-max", default_value_t = 0.6)]
    eps_max: f64,
    /// Emit the square-shape diagnostic at this eps1 instead of the grids.
    #[arg(long)]
    diagnostic: Option<f64>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    q: u8,
    #[arg(long)]
    eps: String,
    #[arg(long)]
    rho0: f64,
    #[arg(long)]
    beta0: u64,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct ConnectivityArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    q: u8,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    rho0: f64,
    #[arg(long)]
    beta0: u64,
    #[arg(long = "h-max", default_value_t = 64)]
    h_max: usize,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct GeoArgs {
    #[command(subcommand)]
    command: GeoCommand,
}

#[derive(Subcommand)]
enum GeoCommand {
    /// Merge a CSV of link reports into the store file.
    Ingest {
        #[arg(long)]
        store: String,
        #[arg(long)]
        input: String,
    },
    /// Print the erasure vector along a node sequence.
    Path {
        #[arg(long)]
        store: String,
        /// Comma-separated node ids.
        #[arg(long)]
        nodes: String,
        #[arg(long)]
        output: Option<String>,
    },
}

#[derive(Args)]
struct LifecycleArgs {
    /// Event script: one event per line (request_activate, instantiation_ack,
    /// monitor_tick, stats_update <max_delta>, request_terminate,
    /// termination_ack); '#' comments allowed.
    #[arg(long)]
    script: String,
    #[arg(long)]
    output: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("geonc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::RateRegion(a) => cmd_rate_region(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Connectivity(a) => cmd_connectivity(a),
        Command::Geo(a) => match a.command {
            GeoCommand::Ingest { store, input } => cmd_geo_ingest(&store, &input),
            GeoCommand::Path { store, nodes, output } => cmd_geo_path(&store, &nodes, output),
        },
        Command::Lifecycle(a) => cmd_lifecycle(a),
    }
}

/// Seed precedence: explicit value, then NCF_SEED, then 0.
fn resolve_seed(explicit: Option<u64>) -> Result<u64, AppError> {
    if let Some(s) = explicit {
        return Ok(s);
    }
    match std::env::var("NCF_SEED") {
        Ok(v) => v.parse().map_err(|_| AppError::Config(format!("NCF_SEED \"{v}\" not a u64"))),
        Err(_) => Ok(0),
    }
}

fn open_output(path: Option<&str>) -> Result<Box<dyn Write>, AppError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

/// Deterministic provenance header for every output file.
fn write_header(w: &mut dyn Write, seed: Option<u64>) -> Result<(), AppError> {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    write!(w, "# geonc {}", argv.join(" "))?;
    if let Some(s) = seed {
        write!(w, " seed={s}")?;
    }
    writeln!(w)?;
    writeln!(w, "# schema_version={SCHEMA_VERSION}")?;
    Ok(())
}

fn parse_eps_list(s: &str) -> Result<Vec<f64>, AppError> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| AppError::Config(format!("bad eps \"{t}\""))))
        .collect()
}

fn parse_range(s: &str) -> Result<(usize, usize), AppError> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| AppError::Config(format!("range \"{s}\" must be lo:hi")))?;
    let lo = lo.parse().map_err(|_| AppError::Config(format!("bad range bound \"{lo}\"")))?;
    let hi = hi.parse().map_err(|_| AppError::Config(format!("bad range bound \"{hi}\"")))?;
    if lo > hi {
        return Err(AppError::Config(format!("empty range \"{s}\"")));
    }
    Ok((lo, hi))
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<(), AppError> {
    let eps = parse_eps_list(&a.eps)?;
    let (n_lo, n_hi) = parse_range(&a.n_range)?;
    if n_lo < a.k {
        return Err(AppError::Config(format!("n range starts below k={}", a.k)));
    }
    let mut w = open_output(a.output.as_deref())?;
    write_header(&mut *w, None)?;
    writeln!(w, "h,n,eta,rho_nc,rho_unc")?;
    for h in 1..=eps.len() {
        let prefix = PathProfile::new(eps[..h].to_vec())?;
        let rho_unc = reliability_uncoded(&prefix);
        for n in n_lo..=n_hi {
            let eta = residual_snc(&CodeOperatingPoint::new(a.k, n, a.q, eps[h - 1])?);
            let rho_nc = reliability_nc(a.k, n, a.q, &prefix)?;
            writeln!(w, "{h},{n},{eta},{rho_nc},{rho_unc}")?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> Result<(), AppError> {
    let mut file = File::open(&a.config)?;
    let mut text = String::new();
    file.read_to_string(&mut text)?;
    let mut cfg = ScenarioConfig::from_reader(text.as_bytes())?;
    if a.seed.is_some() {
        cfg.seed = a.seed;
    }
    let seed = resolve_seed(cfg.seed)?;
    let scn = cfg.to_scenario(seed)?;
    let est = monte_carlo(&scn, cfg.trials)?;
    let out_path = a.output.clone().or(cfg.output.clone());
    let mut w = open_output(out_path.as_deref())?;
    write_header(&mut *w, Some(seed))?;
    writeln!(
        w,
        "k,n,m,q,hops,codec,relay_mode,trials,failure_mean,failure_stderr,residual,residual_stderr"
    )?;
    writeln!(
        w,
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        cfg.k,
        cfg.n,
        cfg.m,
        cfg.q,
        scn.hops(),
        cfg.codec,
        cfg.relay_mode,
        est.trials,
        est.mean,
        est.stderr,
        est.residual,
        est.residual_stderr
    )?;
    w.flush()?;
    Ok(())
}

fn cmd_rate_region(a: RateRegionArgs) -> Result<(), AppError> {
    if a.r_min >= a.r_max {
        return Err(AppError::Config("--r-min must be below --r-max".into()));
    }
    if a.grid == 0 {
        return Err(AppError::Config("--grid must be at least 1".into()));
    }
    let grid = RateGrid::new(a.k, a.r_min, a.r_max)?;
    let mut w = open_output(a.output.as_deref())?;
    write_header(&mut *w, None)?;
    if let Some(eps1) = a.diagnostic {
        let samples = linspace(0.0, (2.0 * eps1).min(1.0), a.grid);
        let d = square_diagnostic(eps1, a.eta0, &grid, a.q, &samples)?;
        writeln!(w, "# r0={} n0={} eta1={}", d.r0, d.n0, d.eta1)?;
        match d.breakpoint {
            Some(bp) => writeln!(w, "# breakpoint={bp}")?,
            None => writeln!(w, "# breakpoint=none")?,
        }
        writeln!(w, "eps2,eta2,eta_nc,rate,over_target")?;
        for row in &d.rows {
            writeln!(w, "{},{},{},{},{}", row.eps2, row.eta2, row.eta_nc, row.rate, row.over_target)?;
        }
        w.flush()?;
        return Ok(());
    }
    let axis = linspace(0.0, a.eps_max, a.grid);
    let nc = region_grid(&axis, &axis, a.eta0, &grid, a.q, Scheme::NetworkCoding)?;
    let e2e = region_grid(&axis, &axis, a.eta0, &grid, a.q, Scheme::EndToEnd)?;
    match area_ratio(&nc, &e2e)? {
        AreaRatio::Ratio(r) => writeln!(w, "# area_ratio={r}")?,
        AreaRatio::Undefined => writeln!(w, "# area_ratio=undefined")?,
    }
    writeln!(w, "eps1,eps2,scheme,r_star,eta,R,feasible")?;
    for (scheme, g) in [("nc", &nc), ("e2e", &e2e)] {
        for (i, &e1) in g.eps1_axis.iter().enumerate() {
            for (j, &e2) in g.eps2_axis.iter().enumerate() {
                match g.cell(i, j) {
                    Some(pt) => writeln!(
                        w,
                        "{e1},{e2},{scheme},{},{},{},true",
                        pt.r_star, pt.eta, pt.rate
                    )?,
                    None => writeln!(w, "{e1},{e2},{scheme},,,,false")?,
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_optimize(a: OptimizeArgs) -> Result<(), AppError> {
    let path = PathProfile::new(parse_eps_list(&a.eps)?)?;
    let budget = ComplexityBudget::new(a.beta0)?;
    let range = operative_range(a.k, a.m, a.q, &path, a.rho0, budget)?;
    let pt = range.point;
    let doc = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "n": pt.n,
        "r": pt.r,
        "rho_pred": pt.rho_pred,
        "utility": pt.utility,
        "beta_s": pt.beta_s,
        "beta_r": pt.beta_r,
        "beta_d": pt.beta_d,
        "feasible": pt.feasible,
        "target_met": pt.target_met,
        "u_max": range.u_max,
        "u_min": range.u_min,
        "acceptable": range.acceptable,
        "activate": range.activate(None),
    });
    let mut w = open_output(a.output.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| AppError::Config(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn cmd_connectivity(a: ConnectivityArgs) -> Result<(), AppError> {
    let budget = ComplexityBudget::new(a.beta0)?;
    let r = connectivity(a.k, a.m, a.q, a.eps, a.rho0, budget, a.h_max)?;
    let mut w = open_output(a.output.as_deref())?;
    write_header(&mut *w, None)?;
    writeln!(w, "beta0,rho0,eps,h_nc,h_unc,gamma,undefined_flag")?;
    let gamma = if r.undefined_flag { String::from("nan") } else { format!("{}", r.gamma) };
    writeln!(
        w,
        "{},{},{},{},{},{},{}",
        a.beta0, a.rho0, a.eps, r.h_nc, r.h_unc, gamma, r.undefined_flag
    )?;
    w.flush()?;
    Ok(())
}

fn cmd_geo_ingest(store_path: &str, input_path: &str) -> Result<(), AppError> {
    let mut store = match File::open(store_path) {
        Ok(f) => GeoStore::load(f)?.0,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => GeoStore::new(),
        Err(e) => return Err(e.into()),
    };
    let report = store.ingest(File::open(input_path)?)?;
    store.save(BufWriter::new(File::create(store_path)?))?;
    println!("accepted={} rejected={}", report.accepted, report.rejected.len());
    for (row, reason) in &report.rejected {
        eprintln!("row {row}: {reason}");
    }
    Ok(())
}

fn cmd_geo_path(store_path: &str, nodes: &str, output: Option<String>) -> Result<(), AppError> {
    let store = GeoStore::load(File::open(store_path)?)?.0;
    let names: Vec<&str> = nodes.split(',').map(str::trim).collect();
    let profile = store.query_path(&names)?;
    let mut w = open_output(output.as_deref())?;
    write_header(&mut *w, None)?;
    writeln!(w, "hop,from,to,eps")?;
    for (i, pair) in names.windows(2).enumerate() {
        writeln!(w, "{},{},{},{}", i + 1, pair[0], pair[1], profile.eps()[i])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_event(line: &str) -> Result<LifecycleEvent, AppError> {
    let mut parts = line.split_whitespace();
    let name = parts.next().unwrap_or("");
    let event = match name {
        "request_activate" => LifecycleEvent::RequestActivate,
        "instantiation_ack" => LifecycleEvent::InstantiationAck,
        "monitor_tick" => LifecycleEvent::MonitorTick,
        "stats_update" => {
            let delta = parts
                .next()
                .ok_or_else(|| AppError::Config("stats_update needs a max_delta".into()))?
                .parse()
                .map_err(|_| AppError::Config("stats_update max_delta not a number".into()))?;
            LifecycleEvent::StatsUpdate { max_delta: delta }
        }
        "request_terminate" => LifecycleEvent::RequestTerminate,
        "termination_ack" => LifecycleEvent::TerminationAck,
        other => return Err(AppError::Config(format!("unknown event \"{other}\""))),
    };
    Ok(event)
}

fn cmd_lifecycle(a: LifecycleArgs) -> Result<(), AppError> {
    let script = std::fs::read_to_string(&a.script)?;
    let mut w = open_output(a.output.as_deref())?;
    write_header(&mut *w, None)?;
    let mut state = LifecycleState::Inactive;
    for line in script.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let event = parse_event(line)?;
        match lifecycle_step(state, event) {
            Ok((next, actions)) => {
                writeln!(w, "{state:?} --{line}--> {next:?} actions={actions:?}")?;
                state = next;
            }
            Err(_) => {
                writeln!(w, "{state:?} --{line}--> rejected (invalid transition)")?;
            }
        }
    }
    writeln!(w, "final={state:?}")?;
    w.flush()?;
    Ok(())
}
