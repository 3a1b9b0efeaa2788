//! Serialization of pipeline artifacts: DOT trees, matrix/metric CSVs,
//! the correlations JSON, and ingest-compatible synthetic panels.
//!
//! Analytic floats are written with 12 significant digits so that repeated
//! runs digest identically; synthetic prices use shortest round-trip
//! formatting so reloading reproduces the exact f64 values.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::Serialize;

use crate::analytics::{MarketSummary, SectorSummary, StockMetrics};
use crate::depnet::{CorrelationMatrix, SpanningTree};
use crate::error::{Error, Result};
use crate::ingest::{PriceSeries, SectorMap};

/// 12-significant-digit scientific form; negative zero is normalized away.
pub fn fmt_g12(v: f64) -> String {
    debug_assert!(v.is_finite(), "non-finite value reached serialization");
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.11e}")
}

fn quote_dot(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Node annotations for tree exports.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeAttrs {
    pub sector: String,
    pub mean_return: f64,
}

/// Writes a tree as an undirected DOT graph. Nodes carry `sector` and
/// `mean_return` when attributes are supplied; edges always carry `weight`
/// and, where known, `rho`.
pub fn write_tree_dot<W: Write>(
    mut w: W,
    graph_name: &str,
    tree: &SpanningTree,
    attrs: Option<&BTreeMap<String, NodeAttrs>>,
) -> Result<()> {
    writeln!(w, "graph {} {{", quote_dot(graph_name))?;
    for node in &tree.nodes {
        match attrs.and_then(|a| a.get(node)) {
            Some(na) => writeln!(
                w,
                "  {} [sector={}, mean_return={}];",
                quote_dot(node),
                quote_dot(&na.sector),
                fmt_g12(na.mean_return)
            )?,
            None => writeln!(w, "  {};", quote_dot(node))?,
        }
    }
    for e in &tree.edges {
        let ends = format!("{} -- {}", quote_dot(&tree.nodes[e.a]), quote_dot(&tree.nodes[e.b]));
        match e.rho {
            Some(rho) => writeln!(
                w,
                "  {ends} [weight={}, rho={}];",
                fmt_g12(e.weight),
                fmt_g12(rho)
            )?,
            None => writeln!(w, "  {ends} [weight={}];", fmt_g12(e.weight))?,
        }
    }
    writeln!(w, "}}")?;
    Ok(())
}

/// Square matrix CSV with the ticker list as both header row and first
/// column.
pub fn write_matrix_csv<W: Write>(
    w: W,
    tickers: &[String],
    entry: impl Fn(usize, usize) -> f64,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec![String::new()];
    header.extend(tickers.iter().cloned());
    wtr.write_record(&header)?;
    for (i, t) in tickers.iter().enumerate() {
        let mut row = vec![t.clone()];
        row.extend((0..tickers.len()).map(|j| fmt_g12(entry(i, j))));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a correlation matrix written by [`write_matrix_csv`]: validates
/// labels, symmetry, and the [-1, 1] range, and re-pins the exact unit
/// diagonal lost to rounding.
pub fn read_correlation_csv<R: Read>(r: R) -> Result<CorrelationMatrix> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header = rdr.headers()?.clone();
    if header.len() < 3 || !header[0].is_empty() {
        return Err(Error::Inconsistent {
            msg: "correlation CSV must start with an empty cell and at least 2 tickers".into(),
        });
    }
    let tickers: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let n = tickers.len();

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != n + 1 {
            return Err(Error::MalformedRow {
                row: i as u64 + 2,
                msg: format!("expected {} fields, got {}", n + 1, record.len()),
            });
        }
        if record[0] != *tickers[i] {
            return Err(Error::MalformedRow {
                row: i as u64 + 2,
                msg: format!("row label {} does not match header order ({})", &record[0], tickers[i]),
            });
        }
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let v: f64 = record[j + 1].parse().map_err(|_| Error::MalformedRow {
                row: i as u64 + 2,
                msg: format!("unparseable value `{}`", &record[j + 1]),
            })?;
            if !v.is_finite() || v.abs() > 1.0 + 1e-9 {
                return Err(Error::MalformedRow {
                    row: i as u64 + 2,
                    msg: format!("correlation {v} outside [-1, 1]"),
                });
            }
            row.push(v.clamp(-1.0, 1.0));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Inconsistent {
            msg: format!("correlation CSV has {} rows for {n} tickers", rows.len()),
        });
    }
    for i in 0..n {
        if (rows[i][i] - 1.0).abs() > 1e-9 {
            return Err(Error::Inconsistent {
                msg: format!("diagonal entry for {} is {}, expected 1", tickers[i], rows[i][i]),
            });
        }
        rows[i][i] = 1.0;
        for j in 0..i {
            if (rows[i][j] - rows[j][i]).abs() > 1e-9 {
                return Err(Error::Inconsistent {
                    msg: format!("asymmetric entries for ({}, {})", tickers[j], tickers[i]),
                });
            }
            rows[i][j] = rows[j][i];
        }
    }
    CorrelationMatrix::from_rows(tickers, &rows)
}

/// Header `ticker,date,close`; closes keep full f64 fidelity.
pub fn write_prices_csv<W: Write>(w: W, series: &[PriceSeries]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["ticker", "date", "close"])?;
    for s in series {
        for obs in s.observations() {
            wtr.write_record([s.ticker(), &obs.date.to_string(), &obs.close.to_string()])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Header `ticker,sector`, rows sorted by ticker.
pub fn write_sectors_csv<W: Write>(w: W, sectors: &SectorMap) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["ticker", "sector"])?;
    for (ticker, sector) in sectors {
        wtr.write_record([ticker, sector])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_stock_metrics_csv<W: Write>(w: W, metrics: &[StockMetrics]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "year",
        "ticker",
        "sector",
        "mean_return",
        "sd_return",
        "entropy_rate_bits",
        "markov_centrality",
    ])?;
    for m in metrics {
        wtr.write_record([
            &m.year.to_string(),
            &m.ticker,
            &m.sector,
            &fmt_g12(m.mean_return),
            &fmt_g12(m.sd_return),
            &fmt_g12(m.entropy_bits),
            &fmt_g12(m.centrality),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_centrality_csv<W: Write>(w: W, metrics: &[StockMetrics]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["year", "ticker", "sector", "markov_centrality"])?;
    for m in metrics {
        wtr.write_record([&m.year.to_string(), &m.ticker, &m.sector, &fmt_g12(m.centrality)])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_entropy_csv<W: Write>(w: W, metrics: &[StockMetrics]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["year", "ticker", "sector", "entropy_rate_bits"])?;
    for m in metrics {
        wtr.write_record([&m.year.to_string(), &m.ticker, &m.sector, &fmt_g12(m.entropy_bits)])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_sector_summaries_csv<W: Write>(w: W, rows: &[SectorSummary]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "year",
        "sector",
        "member_count",
        "avg_centrality",
        "agg_centrality",
        "avg_mean_return",
        "avg_sd_return",
        "avg_entropy",
    ])?;
    for r in rows {
        wtr.write_record([
            &r.year.to_string(),
            &r.sector,
            &r.member_count.to_string(),
            &fmt_g12(r.avg_centrality),
            &fmt_g12(r.agg_centrality),
            &fmt_g12(r.avg_mean_return),
            &fmt_g12(r.avg_sd_return),
            &fmt_g12(r.avg_entropy),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_market_summaries_csv<W: Write>(w: W, rows: &[MarketSummary]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "year",
        "avg_mean_return",
        "w_mean_return",
        "avg_sd",
        "w_sd",
        "avg_entropy",
        "w_entropy",
    ])?;
    for r in rows {
        wtr.write_record([
            &r.year.to_string(),
            &fmt_g12(r.avg_mean_return),
            &fmt_g12(r.w_mean_return),
            &fmt_g12(r.avg_sd),
            &fmt_g12(r.w_sd),
            &fmt_g12(r.avg_entropy),
            &fmt_g12(r.w_entropy),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CorrelationsOut {
    all: Option<f64>,
    top100: Option<f64>,
    k: usize,
}

/// `{"all": ..., "top100": ..., "k": ...}`; either correlation may be null
/// when too few points survive selection.
pub fn write_correlations_json<W: Write>(
    mut w: W,
    all: Option<f64>,
    top_k: Option<f64>,
    k: usize,
) -> Result<()> {
    let out = CorrelationsOut { all, top100: top_k, k };
    serde_json::to_writer(&mut w, &out).map_err(|e| Error::Inconsistent {
        msg: format!("correlations serialization failed: {e}"),
    })?;
    writeln!(w)?;
    Ok(())
}
