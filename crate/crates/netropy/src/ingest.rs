//! Loading and slicing of daily price panels.
//!
//! Input is a headered CSV of `ticker,date,close` rows plus an optional
//! `ticker,sector` classification file. Eligibility keeps only series with a
//! long enough run of consecutive trading days, and yearly slicing keeps only
//! the series that are complete over that year's trading calendar.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use chrono::{Datelike, NaiveDate};
use serde::Deserialize;

use crate::error::{Error, Result};

/// Sector label used for tickers missing from the classification file.
pub const UNCLASSIFIED: &str = "UNCLASSIFIED";

/// A single dated closing price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub date: NaiveDate,
    pub close: f64,
}

/// One instrument's closing-price history plus its sector label.
///
/// Invariants: dates strictly increasing, every close > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    ticker: String,
    sector: String,
    observations: Vec<Observation>,
}

impl PriceSeries {
    pub fn new(
        ticker: impl Into<String>,
        sector: impl Into<String>,
        observations: Vec<Observation>,
    ) -> Result<Self> {
        let ticker = ticker.into();
        for pair in observations.windows(2) {
            if pair[1].date <= pair[0].date {
                return Err(Error::InvalidSeries {
                    ticker,
                    msg: format!(
                        "dates not strictly increasing at {} -> {}",
                        pair[0].date, pair[1].date
                    ),
                });
            }
        }
        if let Some(bad) = observations.iter().find(|o| !(o.close > 0.0)) {
            return Err(Error::InvalidSeries {
                ticker,
                msg: format!("non-positive close {} on {}", bad.close, bad.date),
            });
        }
        Ok(PriceSeries {
            ticker,
            sector: sector.into(),
            observations,
        })
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn sector(&self) -> &str {
        &self.sector
    }

    pub fn set_sector(&mut self, sector: impl Into<String>) {
        self.sector = sector.into();
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn closes(&self) -> impl Iterator<Item = f64> + '_ {
        self.observations.iter().map(|o| o.close)
    }

    /// Restricts the series to observations within `[keep_from, keep_to]`
    /// index range, used by eligibility truncation.
    fn truncated(&self, range: std::ops::Range<usize>) -> PriceSeries {
        PriceSeries {
            ticker: self.ticker.clone(),
            sector: self.sector.clone(),
            observations: self.observations[range].to_vec(),
        }
    }
}

/// Panel selection parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelConfig {
    /// Minimum length of the longest consecutive-trading-day run.
    pub min_consecutive_days: usize,
    /// Inclusive year span to analyze; `None` means every year present.
    pub year_range: Option<(i32, i32)>,
    /// Number of discretization states.
    pub state_count: usize,
    /// Path of the `ticker,sector` classification CSV.
    pub sector_map_path: Option<String>,
}

impl Default for PanelConfig {
    fn default() -> Self {
        PanelConfig {
            min_consecutive_days: 1000,
            year_range: None,
            state_count: 4,
            sector_map_path: None,
        }
    }
}

impl PanelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_consecutive_days < 2 {
            return Err(Error::InvalidConfig {
                msg: format!(
                    "min_consecutive_days must be >= 2, got {}",
                    self.min_consecutive_days
                ),
            });
        }
        if self.state_count < 2 {
            return Err(Error::InvalidConfig {
                msg: format!("state_count must be >= 2, got {}", self.state_count),
            });
        }
        if let Some((a, b)) = self.year_range {
            if a > b {
                return Err(Error::InvalidConfig {
                    msg: format!("year range {a}:{b} is inverted"),
                });
            }
        }
        Ok(())
    }

    /// Parses a TOML config document. Recognized keys: `min_consecutive_days`,
    /// `years` (either `"A:B"` or `[A, B]`), `state_count`, `sector_map`.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            min_consecutive_days: Option<usize>,
            years: Option<toml::Value>,
            state_count: Option<usize>,
            sector_map: Option<String>,
        }
        let raw: Raw = toml::from_str(text).map_err(|e| Error::InvalidConfig {
            msg: e.to_string(),
        })?;
        let mut cfg = PanelConfig::default();
        if let Some(v) = raw.min_consecutive_days {
            cfg.min_consecutive_days = v;
        }
        if let Some(v) = raw.state_count {
            cfg.state_count = v;
        }
        cfg.sector_map_path = raw.sector_map;
        if let Some(years) = raw.years {
            cfg.year_range = Some(parse_year_range_value(&years)?);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_year_range_value(value: &toml::Value) -> Result<(i32, i32)> {
    match value {
        toml::Value::String(s) => parse_year_range(s),
        toml::Value::Array(items) if items.len() == 2 => {
            let get = |v: &toml::Value| {
                v.as_integer().ok_or_else(|| Error::InvalidConfig {
                    msg: format!("years entry {v} is not an integer"),
                })
            };
            Ok((get(&items[0])? as i32, get(&items[1])? as i32))
        }
        other => Err(Error::InvalidConfig {
            msg: format!("years must be \"A:B\" or [A, B], got {other}"),
        }),
    }
}

/// Parses `"A:B"` (or a bare `"A"`, meaning a single year) into a span.
pub fn parse_year_range(text: &str) -> Result<(i32, i32)> {
    let bad = || Error::InvalidConfig {
        msg: format!("cannot parse year range `{text}` (expected A:B)"),
    };
    let (a, b) = match text.split_once(':') {
        Some((a, b)) => (a, b),
        None => (text, text),
    };
    let a: i32 = a.trim().parse().map_err(|_| bad())?;
    let b: i32 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(Error::InvalidConfig {
            msg: format!("year range {a}:{b} is inverted"),
        });
    }
    Ok((a, b))
}

/// One year's complete panel: every member series has a close on every
/// trading day of that year.
#[derive(Debug, Clone)]
pub struct YearPanel {
    pub year: i32,
    pub series: Vec<PriceSeries>,
    pub trading_days: Vec<NaiveDate>,
}

impl YearPanel {
    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn tickers(&self) -> Vec<String> {
        self.series.iter().map(|s| s.ticker().to_string()).collect()
    }
}

/// Ticker -> sector mapping loaded from the classification CSV.
pub type SectorMap = BTreeMap<String, String>;

/// Looks a ticker up, falling back to [`UNCLASSIFIED`].
pub fn sector_of<'a>(map: &'a SectorMap, ticker: &str) -> &'a str {
    map.get(ticker).map(String::as_str).unwrap_or(UNCLASSIFIED)
}

/// Loads `ticker,date,close` rows into one sorted series per ticker.
///
/// Rows with an unparseable date or a close that is not a positive decimal
/// are rejected with the offending line number; duplicate `(ticker, date)`
/// pairs are a hard error.
pub fn load_prices<R: Read>(source: R) -> Result<Vec<PriceSeries>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    {
        let headers = reader.headers()?;
        let expected = ["ticker", "date", "close"];
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(Error::MalformedRow {
                row: 1,
                msg: format!("expected header ticker,date,close, got {}", got.join(",")),
            });
        }
    }

    let mut by_ticker: BTreeMap<String, Vec<Observation>> = BTreeMap::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 3 {
            return Err(Error::MalformedRow {
                row: line,
                msg: format!("expected 3 fields, got {}", record.len()),
            });
        }
        let ticker = record[0].to_string();
        if ticker.is_empty() {
            return Err(Error::MalformedRow {
                row: line,
                msg: "empty ticker".into(),
            });
        }
        let date = NaiveDate::parse_from_str(&record[1], "%Y-%m-%d").map_err(|_| {
            Error::MalformedRow {
                row: line,
                msg: format!("cannot parse date `{}` as YYYY-MM-DD", &record[1]),
            }
        })?;
        let close: f64 = record[2].parse().map_err(|_| Error::MalformedRow {
            row: line,
            msg: format!("cannot parse close `{}`", &record[2]),
        })?;
        if !close.is_finite() || close <= 0.0 {
            return Err(Error::MalformedRow {
                row: line,
                msg: format!("close must be a positive decimal, got `{}`", &record[2]),
            });
        }
        by_ticker
            .entry(ticker)
            .or_default()
            .push(Observation { date, close });
    }

    let mut out = Vec::with_capacity(by_ticker.len());
    for (ticker, mut obs) in by_ticker {
        obs.sort_by_key(|o| o.date);
        if let Some(dup) = obs.windows(2).find(|p| p[0].date == p[1].date) {
            return Err(Error::DuplicateObservation {
                ticker,
                date: dup[0].date.to_string(),
            });
        }
        out.push(PriceSeries::new(ticker, UNCLASSIFIED, obs)?);
    }
    Ok(out)
}

/// Loads `ticker,sector` rows. Repeated identical rows are tolerated;
/// rows that assign two different sectors to one ticker are an error.
pub fn load_sector_map<R: Read>(source: R) -> Result<SectorMap> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    {
        let headers = reader.headers()?;
        let got: Vec<&str> = headers.iter().collect();
        if got != ["ticker", "sector"] {
            return Err(Error::MalformedRow {
                row: 1,
                msg: format!("expected header ticker,sector, got {}", got.join(",")),
            });
        }
    }

    let mut map = SectorMap::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 2 || record[0].is_empty() || record[1].is_empty() {
            return Err(Error::MalformedRow {
                row: line,
                msg: "expected non-empty ticker,sector".into(),
            });
        }
        let ticker = record[0].to_string();
        let sector = record[1].to_string();
        match map.get(&ticker) {
            Some(existing) if *existing != sector => {
                return Err(Error::ConflictingSector {
                    ticker,
                    first: existing.clone(),
                    second: sector,
                });
            }
            _ => {
                map.insert(ticker, sector);
            }
        }
    }
    Ok(map)
}

/// Applies the sector map to every series, defaulting to [`UNCLASSIFIED`].
pub fn assign_sectors(series: &mut [PriceSeries], map: &SectorMap) {
    for s in series {
        let sector = sector_of(map, s.ticker()).to_string();
        s.set_sector(sector);
    }
}

/// Keeps the series whose longest run of consecutive trading days (in the
/// calendar formed by the union of all observed dates) is at least
/// `cfg.min_consecutive_days`, truncated to that run. Ties between equally
/// long runs keep the earliest.
pub fn filter_eligible(series: Vec<PriceSeries>, cfg: &PanelConfig) -> Vec<PriceSeries> {
    let calendar: BTreeSet<NaiveDate> = series
        .iter()
        .flat_map(|s| s.observations().iter().map(|o| o.date))
        .collect();
    let index: BTreeMap<NaiveDate, usize> =
        calendar.iter().enumerate().map(|(i, d)| (*d, i)).collect();

    let mut out = Vec::new();
    for s in series {
        if s.is_empty() {
            continue;
        }
        let ordinals: Vec<usize> = s.observations().iter().map(|o| index[&o.date]).collect();

        let mut best: std::ops::Range<usize> = 0..1;
        let mut run_start = 0usize;
        for k in 1..=ordinals.len() {
            let broken = k == ordinals.len() || ordinals[k] != ordinals[k - 1] + 1;
            if broken {
                if k - run_start > best.len() {
                    best = run_start..k;
                }
                run_start = k;
            }
        }

        if best.len() >= cfg.min_consecutive_days {
            out.push(s.truncated(best));
        }
    }
    out
}

/// Builds the complete panel for one calendar year.
///
/// The year's trading calendar is the union of dates observed in that year
/// across all series; a series is a member iff it has a close on every one
/// of those days.
pub fn slice_year(series: &[PriceSeries], year: i32) -> Result<YearPanel> {
    let trading_days: BTreeSet<NaiveDate> = series
        .iter()
        .flat_map(|s| s.observations().iter().map(|o| o.date))
        .filter(|d| d.year() == year)
        .collect();
    if trading_days.is_empty() {
        return Err(Error::EmptyYear { year });
    }
    let trading_days: Vec<NaiveDate> = trading_days.into_iter().collect();

    let mut members = Vec::new();
    let mut seen = BTreeSet::new();
    for s in series {
        let in_year: Vec<Observation> = s
            .observations()
            .iter()
            .copied()
            .filter(|o| o.date.year() == year)
            .collect();
        // Per-series dates are unique and a subset of the union, so count
        // equality is completeness.
        if in_year.len() == trading_days.len() {
            if !seen.insert(s.ticker().to_string()) {
                return Err(Error::InvalidSeries {
                    ticker: s.ticker().to_string(),
                    msg: "duplicate ticker in panel input".into(),
                });
            }
            members.push(PriceSeries {
                ticker: s.ticker().to_string(),
                sector: s.sector().to_string(),
                observations: in_year,
            });
        }
    }
    members.sort_by(|a, b| a.ticker.cmp(&b.ticker));

    Ok(YearPanel {
        year,
        series: members,
        trading_days,
    })
}

/// Years observed across all series, ascending.
pub fn observed_years(series: &[PriceSeries]) -> Vec<i32> {
    let years: BTreeSet<i32> = series
        .iter()
        .flat_map(|s| s.observations().iter().map(|o| o.date.year()))
        .collect();
    years.into_iter().collect()
}
