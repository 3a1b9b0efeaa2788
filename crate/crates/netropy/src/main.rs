use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use netropy::depnet::DistanceKind;
use netropy::export;
use netropy::ingest::{self, PanelConfig};
use netropy::pipeline::{self, AnalyzeOptions};
use netropy::synth::SynthSpec;
use netropy::{entropy, returns};

/// Environment variable holding the default config path for `analyze`.
const CONFIG_ENV: &str = "NETROPY_CONFIG";

#[derive(Parser)]
#[command(
    name = "netropy",
    version,
    about = "Dependency networks, Markov centrality and entropy analytics for daily price panels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full per-year pipeline over a price panel.
    Analyze(AnalyzeArgs),
    /// Generate a synthetic price panel from a TOML spec.
    Synth(SynthArgs),
    /// Per-series entropy-rate estimates from a price CSV.
    Entropy(EntropyArgs),
    /// Minimal spanning tree of a correlation matrix CSV, as DOT.
    Mst(MstArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Price panel CSV with header ticker,date,close.
    #[arg(long)]
    prices: PathBuf,
    /// Sector classification CSV with header ticker,sector.
    #[arg(long)]
    sectors: Option<PathBuf>,
    /// Output directory for all artifacts.
    #[arg(long)]
    out: PathBuf,
    /// TOML config file; $NETROPY_CONFIG is used when the flag is absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Inclusive year span A:B.
    #[arg(long)]
    years: Option<String>,
    /// Number of discretization states.
    #[arg(long)]
    states: Option<usize>,
    /// Minimum consecutive trading days for a series to qualify.
    #[arg(long = "min-days")]
    min_days: Option<usize>,
    /// Stock-year points kept in the top-centrality correlation.
    #[arg(long = "top-k", default_value_t = 100)]
    top_k: usize,
    /// Use the distance sqrt(2(1-rho)) instead of 1 - rho^2.
    #[arg(long = "alt-distance")]
    alt_distance: bool,
    /// Worker threads for per-year computation.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Also write per-year correlation and distance matrix CSVs.
    #[arg(long = "write-matrices")]
    write_matrices: bool,
}

#[derive(Args)]
struct SynthArgs {
    /// Synthetic dataset spec (TOML).
    #[arg(long)]
    spec: PathBuf,
    /// Output prices CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Also write the matching sector map CSV here.
    #[arg(long = "sectors-out")]
    sectors_out: Option<PathBuf>,
}

#[derive(Args)]
struct EntropyArgs {
    /// Price panel CSV with header ticker,date,close.
    #[arg(long)]
    prices: PathBuf,
    /// Number of discretization states.
    #[arg(long, default_value_t = 4)]
    states: usize,
}

#[derive(Args)]
struct MstArgs {
    /// Correlation matrix CSV with ticker header row and column.
    #[arg(long)]
    matrix: PathBuf,
    /// Output DOT path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the distance sqrt(2(1-rho)) instead of 1 - rho^2.
    #[arg(long = "alt-distance")]
    alt_distance: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Entropy(args) => cmd_entropy(args),
        Command::Mst(args) => cmd_mst(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_config(flag: Option<PathBuf>) -> anyhow::Result<PanelConfig> {
    let path = flag.or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .with_context(|| format!("reading config {}", p.display()))?;
            Ok(PanelConfig::from_toml_str(&text)
                .with_context(|| format!("parsing config {}", p.display()))?)
        }
        None => Ok(PanelConfig::default()),
    }
}

fn distance_kind(alt: bool) -> DistanceKind {
    if alt {
        DistanceKind::SqrtTwoOneMinusRho
    } else {
        DistanceKind::OneMinusRhoSquared
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> anyhow::Result<()> {
    let mut config = load_config(args.config)?;
    if let Some(years) = &args.years {
        config.year_range = Some(ingest::parse_year_range(years)?);
    }
    if let Some(states) = args.states {
        config.state_count = states;
    }
    if let Some(min_days) = args.min_days {
        config.min_consecutive_days = min_days;
    }
    config.validate()?;

    let sectors_path = args
        .sectors
        .or_else(|| config.sector_map_path.clone().map(PathBuf::from));

    let opts = AnalyzeOptions {
        config,
        distance: distance_kind(args.alt_distance),
        top_k: args.top_k,
        write_matrices: args.write_matrices,
        jobs: args.jobs,
    };
    let report = pipeline::run_analyze(&opts, &args.prices, sectors_path.as_deref(), &args.out)?;

    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for outcome in &report.years {
        println!(
            "year {}: {} stocks, tree weight {:.6}",
            outcome.year,
            outcome.metrics.len(),
            outcome.tree.total_weight()
        );
    }
    let fmt_opt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.4}"));
    println!(
        "pooled entropy/sd correlation: all={} top{}={}",
        fmt_opt(report.corr_all),
        opts.top_k,
        fmt_opt(report.corr_top)
    );
    println!("artifacts written to {}", args.out.display());
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.spec)
        .with_context(|| format!("reading spec {}", args.spec.display()))?;
    let spec = SynthSpec::from_toml_str(&text)
        .with_context(|| format!("parsing spec {}", args.spec.display()))?;
    let (panel, sectors) = netropy::synth::materialize(&spec)?;

    let out = File::create(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    export::write_prices_csv(BufWriter::new(out), &panel)?;
    if let Some(sp) = &args.sectors_out {
        let f = File::create(sp).with_context(|| format!("creating {}", sp.display()))?;
        export::write_sectors_csv(BufWriter::new(f), &sectors)?;
    }
    let days = panel.first().map_or(0, |p| p.observations().len());
    println!(
        "wrote {} series x {} days to {}",
        panel.len(),
        days,
        args.out.display()
    );
    Ok(())
}

fn cmd_entropy(args: EntropyArgs) -> anyhow::Result<()> {
    let file = File::open(&args.prices)
        .with_context(|| format!("opening {}", args.prices.display()))?;
    let series = ingest::load_prices(BufReader::new(file))?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "ticker,n,entropy_rate_bits")?;
    let mut ok = 0usize;
    for s in &series {
        let estimate = returns::log_returns(s)
            .and_then(|r| returns::discretize_quartiles(&r, args.states))
            .and_then(|d| entropy::entropy_rate_lz(&d));
        match estimate {
            Ok(est) => {
                writeln!(out, "{},{},{}", s.ticker(), est.n, export::fmt_g12(est.value))?;
                ok += 1;
            }
            Err(e) => eprintln!("warning: {}: {e}", s.ticker()),
        }
    }
    anyhow::ensure!(ok > 0, "no series produced an estimate");
    Ok(())
}

fn cmd_mst(args: MstArgs) -> anyhow::Result<()> {
    let file = File::open(&args.matrix)
        .with_context(|| format!("opening {}", args.matrix.display()))?;
    let corr = export::read_correlation_csv(BufReader::new(file))?;
    let (_, tree) = netropy::depnet::correlation_mst(&corr, distance_kind(args.alt_distance))?;

    let name = args
        .matrix
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("mst")
        .to_owned();
    match &args.out {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            export::write_tree_dot(BufWriter::new(f), &name, &tree, None)?;
            println!("wrote {} edges to {}", tree.edges.len(), path.display());
        }
        None => {
            let stdout = io::stdout();
            export::write_tree_dot(stdout.lock(), &name, &tree, None)?;
        }
    }
    Ok(())
}
