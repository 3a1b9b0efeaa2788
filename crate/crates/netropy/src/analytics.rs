//! Sector and market aggregation over per-stock metrics, plus the pooled
//! entropy-vs-volatility correlation.

use std::collections::BTreeMap;

use crate::centrality::CentralityVector;
use crate::error::{Error, Result};

/// One stock-year observation with all derived metrics attached.
#[derive(Debug, Clone, PartialEq)]
pub struct StockMetrics {
    pub year: i32,
    pub ticker: String,
    pub sector: String,
    pub mean_return: f64,
    pub sd_return: f64,
    pub entropy_bits: f64,
    pub centrality: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorSummary {
    pub year: i32,
    pub sector: String,
    pub avg_centrality: f64,
    pub agg_centrality: f64,
    pub avg_mean_return: f64,
    pub avg_sd_return: f64,
    pub avg_entropy: f64,
    pub member_count: usize,
}

/// Market-wide yearly summary; `w_*` fields are centrality-weighted.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketSummary {
    pub year: i32,
    pub avg_mean_return: f64,
    pub w_mean_return: f64,
    pub avg_sd: f64,
    pub w_sd: f64,
    pub avg_entropy: f64,
    pub w_entropy: f64,
}

/// Point selector for [`metric_correlation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    All,
    /// The k stock-year points with the highest centrality, ties broken by
    /// (year, ticker).
    TopKByCentrality(usize),
}

fn mean_of(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Groups the given year's metrics by sector; averages are arithmetic means
/// and aggregate centrality is the member sum. Sectors come out sorted.
pub fn sector_summaries(metrics: &[StockMetrics], year: i32) -> Result<Vec<SectorSummary>> {
    let mut groups: BTreeMap<&str, Vec<&StockMetrics>> = BTreeMap::new();
    for m in metrics.iter().filter(|m| m.year == year) {
        groups.entry(&m.sector).or_default().push(m);
    }
    if groups.is_empty() {
        return Err(Error::NotEnoughData {
            what: format!("stock metrics for year {year}"),
            min: 1,
            got: 0,
        });
    }
    Ok(groups
        .into_iter()
        .map(|(sector, members)| {
            let n = members.len();
            let cents: Vec<f64> = members.iter().map(|m| m.centrality).collect();
            SectorSummary {
                year,
                sector: sector.to_owned(),
                avg_centrality: mean_of(&cents),
                agg_centrality: cents.iter().sum(),
                avg_mean_return: mean_of(&members.iter().map(|m| m.mean_return).collect::<Vec<_>>()),
                avg_sd_return: mean_of(&members.iter().map(|m| m.sd_return).collect::<Vec<_>>()),
                avg_entropy: mean_of(&members.iter().map(|m| m.entropy_bits).collect::<Vec<_>>()),
                member_count: n,
            }
        })
        .collect())
}

/// Centrality-weighted mean Σ w_i x_i / Σ w_i over matching ticker sets.
pub fn weighted_market_mean(
    values: &BTreeMap<String, f64>,
    weights: &CentralityVector,
) -> Result<f64> {
    if values.len() != weights.scores.len() {
        return Err(Error::TickerMismatch {
            msg: format!(
                "{} values vs {} weights",
                values.len(),
                weights.scores.len()
            ),
        });
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (ticker, &x) in values {
        let w = weights.score_of(ticker).ok_or_else(|| Error::TickerMismatch {
            msg: format!("no weight for ticker {ticker}"),
        })?;
        num += w * x;
        den += w;
    }
    if den <= 0.0 {
        return Err(Error::Inconsistent {
            msg: "non-positive total weight".into(),
        });
    }
    Ok(num / den)
}

/// Plain and centrality-weighted market means for one year.
pub fn market_summary(metrics: &[StockMetrics], year: i32) -> Result<MarketSummary> {
    let members: Vec<&StockMetrics> = metrics.iter().filter(|m| m.year == year).collect();
    if members.is_empty() {
        return Err(Error::NotEnoughData {
            what: format!("stock metrics for year {year}"),
            min: 1,
            got: 0,
        });
    }
    let weights = CentralityVector {
        scores: members
            .iter()
            .map(|m| (m.ticker.clone(), m.centrality))
            .collect(),
    };
    let column = |f: fn(&StockMetrics) -> f64| -> BTreeMap<String, f64> {
        members.iter().map(|m| (m.ticker.clone(), f(m))).collect()
    };
    let means = column(|m| m.mean_return);
    let sds = column(|m| m.sd_return);
    let ents = column(|m| m.entropy_bits);
    Ok(MarketSummary {
        year,
        avg_mean_return: mean_of(&means.values().copied().collect::<Vec<_>>()),
        w_mean_return: weighted_market_mean(&means, &weights)?,
        avg_sd: mean_of(&sds.values().copied().collect::<Vec<_>>()),
        w_sd: weighted_market_mean(&sds, &weights)?,
        avg_entropy: mean_of(&ents.values().copied().collect::<Vec<_>>()),
        w_entropy: weighted_market_mean(&ents, &weights)?,
    })
}

fn pearson_scalar(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Pearson correlation between entropy and return standard deviation over
/// the selected stock-year points. Points are pooled across years; the
/// accumulation order is canonical so input ordering never matters.
pub fn metric_correlation(metrics: &[StockMetrics], selector: Selector) -> Result<f64> {
    let mut points: Vec<&StockMetrics> = metrics.iter().collect();
    match selector {
        Selector::All => {
            points.sort_by(|a, b| (a.year, &a.ticker).cmp(&(b.year, &b.ticker)));
        }
        Selector::TopKByCentrality(k) => {
            points.sort_by(|a, b| {
                b.centrality
                    .total_cmp(&a.centrality)
                    .then_with(|| (a.year, &a.ticker).cmp(&(b.year, &b.ticker)))
            });
            points.truncate(k);
        }
    }
    if points.len() < 3 {
        return Err(Error::NotEnoughData {
            what: "stock-year points for correlation".into(),
            min: 3,
            got: points.len(),
        });
    }
    let ent: Vec<f64> = points.iter().map(|m| m.entropy_bits).collect();
    let sd: Vec<f64> = points.iter().map(|m| m.sd_return).collect();
    if ent.iter().all(|&v| v == ent[0]) {
        return Err(Error::ConstantMetric {
            metric: "entropy_bits".into(),
        });
    }
    if sd.iter().all(|&v| v == sd[0]) {
        return Err(Error::ConstantMetric {
            metric: "sd_return".into(),
        });
    }
    pearson_scalar(&ent, &sd).ok_or(Error::ConstantMetric {
        metric: "entropy_bits/sd_return".into(),
    })
}
