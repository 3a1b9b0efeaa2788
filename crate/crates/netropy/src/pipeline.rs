//! End-to-end `analyze` orchestration: ingest, per-year computation
//! (parallel across years), aggregation, and deterministic output writing.
//!
//! Every analytic output is byte-stable across reruns with the same inputs
//! and options; `manifest.json` is the one exception since it records wall
//! times alongside the config snapshot and input digests.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analytics::{self, MarketSummary, SectorSummary, Selector, StockMetrics};
use crate::centrality;
use crate::depnet::{self, CorrelationMatrix, DistanceKind, DistanceMatrix, SpanningTree};
use crate::entropy;
use crate::error::{Error, Result};
use crate::export::{self, NodeAttrs};
use crate::ingest::{self, PanelConfig, SectorMap, YearPanel};
use crate::returns;

/// Minimum panel width for a year to be analyzed rather than skipped.
pub const MIN_SERIES_PER_YEAR: usize = 3;

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub config: PanelConfig,
    pub distance: DistanceKind,
    pub top_k: usize,
    pub write_matrices: bool,
    pub jobs: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            config: PanelConfig::default(),
            distance: DistanceKind::default(),
            top_k: 100,
            write_matrices: false,
            jobs: 1,
        }
    }
}

/// Everything computed for one analyzable year.
#[derive(Debug, Clone)]
pub struct YearOutcome {
    pub year: i32,
    pub corr: CorrelationMatrix,
    pub dist: DistanceMatrix,
    pub tree: SpanningTree,
    pub metrics: Vec<StockMetrics>,
    pub sectors: Vec<SectorSummary>,
    pub market: MarketSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedYear {
    pub year: i32,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigSnapshot {
    pub prices: String,
    pub sector_map: Option<String>,
    pub out_dir: String,
    pub years: Option<(i32, i32)>,
    pub min_consecutive_days: usize,
    pub state_count: usize,
    pub top_k: usize,
    pub distance: String,
    pub jobs: usize,
    pub write_matrices: bool,
}

/// Provenance record emitted for every run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config: ConfigSnapshot,
    /// Input path -> SHA-256 of the raw bytes.
    pub inputs: BTreeMap<String, String>,
    pub years_analyzed: Vec<i32>,
    pub years_skipped: Vec<SkippedYear>,
    pub timings_ms: BTreeMap<&'static str, u64>,
}

pub struct AnalyzeReport {
    pub years: Vec<YearOutcome>,
    pub skipped: Vec<SkippedYear>,
    pub warnings: Vec<String>,
    pub corr_all: Option<f64>,
    pub corr_top: Option<f64>,
    pub manifest: RunManifest,
}

enum YearStatus {
    Done(Box<YearOutcome>),
    Skipped(String),
}

/// Computes returns, network, centrality, entropy, and aggregates for one
/// complete year panel.
pub fn analyze_year(
    panel: &YearPanel,
    state_count: usize,
    kind: DistanceKind,
) -> Result<YearOutcome> {
    let year = panel.year;

    let rets: Vec<returns::ReturnSeries> = panel
        .series
        .iter()
        .map(returns::log_returns)
        .collect::<Result<_>>()
        .map_err(|e| Error::stage("returns", year, e))?;

    let corr = depnet::pearson_matrix(&rets).map_err(|e| Error::stage("correlation", year, e))?;
    let (dist, tree) =
        depnet::correlation_mst(&corr, kind).map_err(|e| Error::stage("mst", year, e))?;

    let scores =
        centrality::tree_centrality(&tree).map_err(|e| Error::stage("centrality", year, e))?;

    let mut metrics = Vec::with_capacity(panel.series.len());
    for (series, ret) in panel.series.iter().zip(&rets) {
        let build = || -> Result<StockMetrics> {
            let discrete = returns::discretize_quartiles(ret, state_count)?;
            let est = entropy::entropy_rate_lz(&discrete)?;
            let centrality_score =
                scores
                    .score_of(series.ticker())
                    .ok_or_else(|| Error::TickerMismatch {
                        msg: format!("no centrality score for {}", series.ticker()),
                    })?;
            Ok(StockMetrics {
                year,
                ticker: series.ticker().to_owned(),
                sector: series.sector().to_owned(),
                mean_return: returns::mean(ret)?,
                sd_return: returns::stddev(ret)?,
                entropy_bits: est.value,
                centrality: centrality_score,
            })
        };
        metrics.push(build().map_err(|e| {
            Error::stage("metrics", year, Error::InvalidSeries {
                ticker: series.ticker().to_owned(),
                msg: e.to_string(),
            })
        })?);
    }

    let sectors = analytics::sector_summaries(&metrics, year)
        .map_err(|e| Error::stage("aggregation", year, e))?;
    let market =
        analytics::market_summary(&metrics, year).map_err(|e| Error::stage("aggregation", year, e))?;

    Ok(YearOutcome {
        year,
        corr,
        dist,
        tree,
        metrics,
        sectors,
        market,
    })
}

fn digest_file(path: &Path) -> Result<String> {
    let mut file =
        File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 65536];
    loop {
        let n = file
            .read(&mut buf)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    let digest = hasher.finalize();
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| {
        Error::io(path.display().to_string(), e)
    })?))
}

fn distance_label(kind: DistanceKind) -> &'static str {
    match kind {
        DistanceKind::OneMinusRhoSquared => "one_minus_rho_squared",
        DistanceKind::SqrtTwoOneMinusRho => "sqrt_two_one_minus_rho",
    }
}

/// Runs the full pipeline and writes all artifacts under `out_dir`.
pub fn run_analyze(
    opts: &AnalyzeOptions,
    prices_path: &Path,
    sectors_path: Option<&Path>,
    out_dir: &Path,
) -> Result<AnalyzeReport> {
    opts.config.validate()?;
    let total_start = Instant::now();
    let mut warnings = Vec::new();
    let mut timings: BTreeMap<&'static str, u64> = BTreeMap::new();
    let mut inputs = BTreeMap::new();

    // Ingest.
    let stage_start = Instant::now();
    let prices_file =
        File::open(prices_path).map_err(|e| Error::io(prices_path.display().to_string(), e))?;
    let mut series = ingest::load_prices(BufReader::new(prices_file))?;
    inputs.insert(prices_path.display().to_string(), digest_file(prices_path)?);

    let sectors: SectorMap = match sectors_path {
        Some(p) => match File::open(p) {
            Ok(f) => {
                let map = ingest::load_sector_map(BufReader::new(f))?;
                inputs.insert(p.display().to_string(), digest_file(p)?);
                map
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {
                warnings.push(format!(
                    "sector file {} not found; all tickers labeled {}",
                    p.display(),
                    ingest::UNCLASSIFIED
                ));
                SectorMap::new()
            }
            Err(e) => return Err(Error::io(p.display().to_string(), e)),
        },
        None => {
            warnings.push(format!(
                "no sector file supplied; all tickers labeled {}",
                ingest::UNCLASSIFIED
            ));
            SectorMap::new()
        }
    };
    ingest::assign_sectors(&mut series, &sectors);
    timings.insert("load", stage_start.elapsed().as_millis() as u64);

    // Eligibility.
    let stage_start = Instant::now();
    let loaded_count = series.len();
    let eligible = ingest::filter_eligible(series, &opts.config);
    if eligible.is_empty() {
        warnings.push(format!(
            "none of the {loaded_count} loaded series has {} consecutive trading days",
            opts.config.min_consecutive_days
        ));
    }
    let years: Vec<i32> = match opts.config.year_range {
        Some((a, b)) => (a..=b).collect(),
        None => ingest::observed_years(&eligible),
    };
    timings.insert("eligibility", stage_start.elapsed().as_millis() as u64);

    // Per-year computation, parallel across years, deterministic order out.
    let stage_start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Inconsistent {
            msg: format!("thread pool construction failed: {e}"),
        })?;
    let state_count = opts.config.state_count;
    let kind = opts.distance;
    let statuses: Vec<(i32, Result<YearStatus>)> = pool.install(|| {
        years
            .par_iter()
            .map(|&year| {
                let status = match ingest::slice_year(&eligible, year) {
                    Err(Error::EmptyYear { .. }) => {
                        Ok(YearStatus::Skipped("no trading days".into()))
                    }
                    Err(e) => Err(e),
                    Ok(panel) if panel.len() < MIN_SERIES_PER_YEAR => Ok(YearStatus::Skipped(
                        format!(
                            "{} complete series, need {MIN_SERIES_PER_YEAR}",
                            panel.len()
                        ),
                    )),
                    Ok(panel) => analyze_year(&panel, state_count, kind)
                        .map(|o| YearStatus::Done(Box::new(o))),
                };
                (year, status)
            })
            .collect()
    });
    drop(pool);

    let mut outcomes = Vec::new();
    let mut skipped = Vec::new();
    for (year, status) in statuses {
        match status? {
            YearStatus::Done(outcome) => outcomes.push(*outcome),
            YearStatus::Skipped(reason) => {
                warnings.push(format!("skipping year {year}: {reason}"));
                skipped.push(SkippedYear { year, reason });
            }
        }
    }
    timings.insert("years", stage_start.elapsed().as_millis() as u64);

    // Pooled cross-year correlations.
    let stage_start = Instant::now();
    let all_metrics: Vec<StockMetrics> = outcomes
        .iter()
        .flat_map(|o| o.metrics.iter().cloned())
        .collect();
    let mut soften = |label: &str, r: Result<f64>| match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ (Error::NotEnoughData { .. } | Error::ConstantMetric { .. })) => {
            warnings.push(format!("{label} correlation unavailable: {e}"));
            Ok(None)
        }
        Err(e) => Err(e),
    };
    let corr_all = soften("pooled", analytics::metric_correlation(&all_metrics, Selector::All))?;
    let corr_top = soften(
        "top-k",
        analytics::metric_correlation(&all_metrics, Selector::TopKByCentrality(opts.top_k)),
    )?;
    timings.insert("analytics", stage_start.elapsed().as_millis() as u64);

    // Writes: one writer, ascending year order, fixed file set.
    let stage_start = Instant::now();
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir.display().to_string(), e))?;
    for outcome in &outcomes {
        let attrs: BTreeMap<String, NodeAttrs> = outcome
            .metrics
            .iter()
            .map(|m| {
                (
                    m.ticker.clone(),
                    NodeAttrs {
                        sector: m.sector.clone(),
                        mean_return: m.mean_return,
                    },
                )
            })
            .collect();
        let dot_path = out_dir.join(format!("tree_{}.dot", outcome.year));
        export::write_tree_dot(
            create(&dot_path)?,
            &format!("year_{}", outcome.year),
            &outcome.tree,
            Some(&attrs),
        )?;
        if opts.write_matrices {
            let corr_path = out_dir.join(format!("corr_{}.csv", outcome.year));
            export::write_matrix_csv(create(&corr_path)?, &outcome.corr.tickers, |i, j| {
                outcome.corr.get(i, j)
            })?;
            let dist_path = out_dir.join(format!("dist_{}.csv", outcome.year));
            export::write_matrix_csv(create(&dist_path)?, &outcome.dist.tickers, |i, j| {
                outcome.dist.get(i, j)
            })?;
        }
    }
    export::write_stock_metrics_csv(create(&out_dir.join("stock_metrics.csv"))?, &all_metrics)?;
    export::write_centrality_csv(create(&out_dir.join("centrality.csv"))?, &all_metrics)?;
    export::write_entropy_csv(create(&out_dir.join("entropy.csv"))?, &all_metrics)?;
    let all_sectors: Vec<SectorSummary> = outcomes
        .iter()
        .flat_map(|o| o.sectors.iter().cloned())
        .collect();
    export::write_sector_summaries_csv(create(&out_dir.join("sector_summaries.csv"))?, &all_sectors)?;
    let all_markets: Vec<MarketSummary> = outcomes.iter().map(|o| o.market.clone()).collect();
    export::write_market_summaries_csv(create(&out_dir.join("market_summaries.csv"))?, &all_markets)?;
    export::write_correlations_json(
        create(&out_dir.join("correlations.json"))?,
        corr_all,
        corr_top,
        opts.top_k,
    )?;
    timings.insert("write", stage_start.elapsed().as_millis() as u64);
    timings.insert("total", total_start.elapsed().as_millis() as u64);

    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        config: ConfigSnapshot {
            prices: prices_path.display().to_string(),
            sector_map: sectors_path.map(|p| p.display().to_string()),
            out_dir: out_dir.display().to_string(),
            years: opts.config.year_range,
            min_consecutive_days: opts.config.min_consecutive_days,
            state_count: opts.config.state_count,
            top_k: opts.top_k,
            distance: distance_label(opts.distance).to_owned(),
            jobs: opts.jobs,
            write_matrices: opts.write_matrices,
        },
        inputs,
        years_analyzed: outcomes.iter().map(|o| o.year).collect(),
        years_skipped: skipped.clone(),
        timings_ms: timings,
    };
    let manifest_path = out_dir.join("manifest.json");
    let mut mw = create(&manifest_path)?;
    serde_json::to_writer_pretty(&mut mw, &manifest).map_err(|e| Error::Inconsistent {
        msg: format!("manifest serialization failed: {e}"),
    })?;
    writeln!(mw)?;

    Ok(AnalyzeReport {
        years: outcomes,
        skipped,
        warnings,
        corr_all,
        corr_top,
        manifest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{materialize, BlockSpec, SynthSpec};

    fn write_synth_inputs(dir: &Path) -> (std::path::PathBuf, std::path::PathBuf) {
        let spec = SynthSpec::BlockCorrelatedGaussian {
            n: 520,
            seed: 11,
            blocks: vec![BlockSpec { size: 4, rho: 0.6 }, BlockSpec { size: 3, rho: 0.2 }],
        };
        let (panel, sectors) = materialize(&spec).unwrap();
        let prices = dir.join("prices.csv");
        let sector_path = dir.join("sectors.csv");
        export::write_prices_csv(File::create(&prices).unwrap(), &panel).unwrap();
        export::write_sectors_csv(File::create(&sector_path).unwrap(), &sectors).unwrap();
        (prices, sector_path)
    }

    fn small_opts() -> AnalyzeOptions {
        AnalyzeOptions {
            config: PanelConfig {
                min_consecutive_days: 100,
                year_range: None,
                state_count: 4,
                sector_map_path: None,
            },
            distance: DistanceKind::OneMinusRhoSquared,
            top_k: 5,
            write_matrices: true,
            jobs: 2,
        }
    }

    #[test]
    fn analyze_writes_the_full_artifact_set() {
        let tmp = tempfile::tempdir().unwrap();
        let (prices, sectors) = write_synth_inputs(tmp.path());
        let out = tmp.path().join("out");
        let report =
            run_analyze(&small_opts(), &prices, Some(&sectors), &out).unwrap();

        // 520 weekday closes starting 2000-01-03 span into 2001.
        assert!(!report.years.is_empty());
        for outcome in &report.years {
            assert_eq!(outcome.tree.edges.len(), outcome.tree.nodes.len() - 1);
            assert!(out.join(format!("tree_{}.dot", outcome.year)).exists());
            assert!(out.join(format!("corr_{}.csv", outcome.year)).exists());
            assert!(out.join(format!("dist_{}.csv", outcome.year)).exists());
        }
        for name in [
            "stock_metrics.csv",
            "centrality.csv",
            "entropy.csv",
            "sector_summaries.csv",
            "market_summaries.csv",
            "correlations.json",
            "manifest.json",
        ] {
            assert!(out.join(name).exists(), "missing {name}");
        }
        assert_eq!(
            report.manifest.years_analyzed,
            report.years.iter().map(|o| o.year).collect::<Vec<_>>()
        );
        assert_eq!(report.manifest.inputs.len(), 2);
    }

    #[test]
    fn rerun_is_byte_identical_outside_the_manifest() {
        let tmp = tempfile::tempdir().unwrap();
        let (prices, sectors) = write_synth_inputs(tmp.path());
        let out1 = tmp.path().join("a");
        let out2 = tmp.path().join("b");
        run_analyze(&small_opts(), &prices, Some(&sectors), &out1).unwrap();
        run_analyze(&small_opts(), &prices, Some(&sectors), &out2).unwrap();

        let mut names: Vec<String> = std::fs::read_dir(&out1)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert!(names.len() >= 7);
        for name in names {
            if name == "manifest.json" {
                continue;
            }
            let a = std::fs::read(out1.join(&name)).unwrap();
            let b = std::fs::read(out2.join(&name)).unwrap();
            assert_eq!(a, b, "{name} differs between reruns");
        }
    }

    #[test]
    fn serial_and_parallel_runs_agree() {
        let tmp = tempfile::tempdir().unwrap();
        let (prices, sectors) = write_synth_inputs(tmp.path());
        let mut serial = small_opts();
        serial.jobs = 1;
        let mut parallel = small_opts();
        parallel.jobs = 4;
        let out1 = tmp.path().join("serial");
        let out2 = tmp.path().join("parallel");
        run_analyze(&serial, &prices, Some(&sectors), &out1).unwrap();
        run_analyze(&parallel, &prices, Some(&sectors), &out2).unwrap();
        let a = std::fs::read(out1.join("stock_metrics.csv")).unwrap();
        let b = std::fs::read(out2.join("stock_metrics.csv")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn missing_sector_file_warns_and_defaults() {
        let tmp = tempfile::tempdir().unwrap();
        let (prices, _) = write_synth_inputs(tmp.path());
        let missing = tmp.path().join("nope.csv");
        let out = tmp.path().join("out");
        let report = run_analyze(&small_opts(), &prices, Some(&missing), &out).unwrap();
        assert!(report
            .warnings
            .iter()
            .any(|w| w.contains("not found") && w.contains("UNCLASSIFIED")));
        assert!(report.years.iter().all(|o| o
            .metrics
            .iter()
            .all(|m| m.sector == ingest::UNCLASSIFIED)));
    }

    #[test]
    fn thin_years_are_skipped_with_reasons() {
        let tmp = tempfile::tempdir().unwrap();
        let (prices, sectors) = write_synth_inputs(tmp.path());
        let mut opts = small_opts();
        // 520 weekdays never reach 2003.
        opts.config.year_range = Some((2000, 2003));
        let out = tmp.path().join("out");
        let report = run_analyze(&opts, &prices, Some(&sectors), &out).unwrap();
        assert!(report.skipped.iter().any(|s| s.year == 2003));
        assert!(report
            .warnings
            .iter()
            .any(|w| w.contains("skipping year 2003")));
    }
}
