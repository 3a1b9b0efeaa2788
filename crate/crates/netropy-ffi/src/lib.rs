//! C ABI for the netropy analytics library.
//!
//! Conventions:
//!
//! * every fallible function returns [`NtpStatus`]; `NTP_OK` means success
//! * handles created through out-parameters are owned by the caller and
//!   must be released with the matching `*_free` function
//! * [`ntp_last_error`] returns a thread-local message describing the most
//!   recent failure on the calling thread
//! * `char*` strings returned through out-parameters are owned by the
//!   caller and released with [`ntp_string_free`]; `const char*` values
//!   returned from accessors borrow from the handle and stay valid until
//!   that handle is freed
//!
//! The generated header lives in `include/netropy.h`.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use netropy::centrality;
use netropy::depnet::{DistanceKind, SpanningTree, TreeEdge};
use netropy::entropy;
use netropy::export::{self, NodeAttrs};
use netropy::ingest::{self, Observation, PanelConfig, PriceSeries};
use netropy::pipeline::{analyze_year, YearOutcome};
use netropy::returns::{self, DiscreteSeries, ReturnSeries};
use netropy::synth;

/// Result code returned by every fallible function in this library.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NtpStatus {
    /// The call succeeded.
    NtpOk = 0,
    /// A required pointer argument was null.
    NtpErrNullPointer = 1,
    /// An argument value was rejected before any computation started.
    NtpErrInvalidArgument = 2,
    /// Input bytes could not be parsed.
    NtpErrParse = 3,
    /// Inputs were well formed but too small for the computation.
    NtpErrNotEnoughData = 4,
    /// The computation failed on degenerate or inconsistent data.
    NtpErrCompute = 5,
}

/// Per-stock metric selector for [`ntp_year_metric`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NtpMetric {
    /// Mean daily log return.
    NtpMetricMeanReturn = 0,
    /// Sample standard deviation of daily log returns.
    NtpMetricSdReturn = 1,
    /// Lempel-Ziv entropy rate of the discretized returns, bits/symbol.
    NtpMetricEntropyBits = 2,
    /// Random-walk centrality in the year's minimum spanning tree.
    NtpMetricCentrality = 3,
}

/// An eligible price panel: parsed, sector-labelled, filtered series.
pub struct NtpPanel {
    series: Vec<PriceSeries>,
}

/// The completed analysis of one calendar year.
pub struct NtpYear {
    outcome: YearOutcome,
    tickers: Vec<CString>,
    sectors: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl AsRef<str>) {
    let clean = msg.as_ref().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(clean).expect("nul bytes stripped above");
    });
}

fn fail(err: netropy::Error) -> NtpStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

fn status_of(err: &netropy::Error) -> NtpStatus {
    use netropy::Error::*;
    match err {
        MalformedRow { .. } | DuplicateObservation { .. } | ConflictingSector { .. } | Csv(_) => {
            NtpStatus::NtpErrParse
        }
        InvalidSeries { .. } | InvalidSpec { .. } | InvalidConfig { .. } => {
            NtpStatus::NtpErrInvalidArgument
        }
        EmptyYear { .. } | NotEnoughData { .. } => NtpStatus::NtpErrNotEnoughData,
        ZeroVariance { .. }
        | TickerMismatch { .. }
        | ConstantMetric { .. }
        | Inconsistent { .. }
        | Io { .. }
        | Write(_) => NtpStatus::NtpErrCompute,
        Stage { source, .. } => {
            // classify by the root cause, report the staged message
            status_of(source)
        }
    }
}

fn invalid(msg: impl AsRef<str>) -> NtpStatus {
    set_error(msg);
    NtpStatus::NtpErrInvalidArgument
}

fn null_arg(name: &str) -> NtpStatus {
    set_error(format!("{name} must not be null"));
    NtpStatus::NtpErrNullPointer
}

/// Converts a panic into an error code instead of unwinding across the ABI.
fn guard(f: impl FnOnce() -> NtpStatus) -> NtpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            NtpStatus::NtpErrCompute
        }
    }
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn ntp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on the calling thread.
///
/// Returns an empty string when nothing has failed yet. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ntp_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses price CSV bytes (`ticker,date,close`) plus optional sector CSV
/// bytes (`ticker,sector`) and keeps the series whose longest run of
/// consecutive union-calendar trading days reaches `min_consecutive_days`.
///
/// `sectors` may be null (with `sectors_len` 0) when no sector table is
/// available; series then carry the "unclassified" label. On success `*out`
/// owns the panel and must be released with [`ntp_panel_free`].
///
/// # Safety
///
/// `prices` must point to `prices_len` readable bytes, `sectors` to
/// `sectors_len` readable bytes when non-null, and `out` to a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn ntp_panel_load(
    prices: *const u8,
    prices_len: usize,
    sectors: *const u8,
    sectors_len: usize,
    min_consecutive_days: usize,
    out: *mut *mut NtpPanel,
) -> NtpStatus {
    guard(|| {
        if prices.is_null() {
            return null_arg("prices");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let bytes = unsafe { std::slice::from_raw_parts(prices, prices_len) };
        let mut series = match ingest::load_prices(bytes) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        if !sectors.is_null() && sectors_len > 0 {
            let sector_bytes = unsafe { std::slice::from_raw_parts(sectors, sectors_len) };
            let map = match ingest::load_sector_map(sector_bytes) {
                Ok(m) => m,
                Err(e) => return fail(e),
            };
            ingest::assign_sectors(&mut series, &map);
        }
        let cfg = PanelConfig {
            min_consecutive_days,
            ..PanelConfig::default()
        };
        if let Err(e) = cfg.validate() {
            return fail(e);
        }
        let eligible = ingest::filter_eligible(series, &cfg);
        unsafe {
            *out = Box::into_raw(Box::new(NtpPanel { series: eligible }));
        }
        NtpStatus::NtpOk
    })
}

/// Releases a panel handle. Null is ignored.
///
/// # Safety
///
/// `panel` must be null or a pointer obtained from [`ntp_panel_load`] that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn ntp_panel_free(panel: *mut NtpPanel) {
    if !panel.is_null() {
        drop(unsafe { Box::from_raw(panel) });
    }
}

/// Number of eligible series held by the panel. Null yields 0.
///
/// # Safety
///
/// `panel` must be null or a live panel handle.
#[no_mangle]
pub unsafe extern "C" fn ntp_panel_series_count(panel: *const NtpPanel) -> usize {
    if panel.is_null() {
        return 0;
    }
    unsafe { &*panel }.series.len()
}

/// Writes the calendar years observed in the panel into `out` (at most
/// `cap` entries, ascending) and the total year count into `n_out`. Call
/// with `cap` 0 to size the buffer first.
///
/// # Safety
///
/// `panel` must be a live panel handle, `out` must point to `cap` writable
/// `int32_t` slots (may be null when `cap` is 0), and `n_out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ntp_panel_years(
    panel: *const NtpPanel,
    out: *mut i32,
    cap: usize,
    n_out: *mut usize,
) -> NtpStatus {
    guard(|| {
        if panel.is_null() {
            return null_arg("panel");
        }
        if n_out.is_null() {
            return null_arg("n_out");
        }
        if cap > 0 && out.is_null() {
            return null_arg("out");
        }
        let years = ingest::observed_years(unsafe { &(*panel).series });
        unsafe {
            *n_out = years.len();
        }
        for (i, year) in years.iter().take(cap).enumerate() {
            unsafe {
                *out.add(i) = *year;
            }
        }
        NtpStatus::NtpOk
    })
}

/// Runs the yearly analysis — log returns, Pearson correlations, minimum
/// spanning tree, random-walk centrality, entropy rates, aggregates — over
/// the panel stocks with a complete observation set for `year`.
///
/// `state_count` is the alphabet size for return discretization (the usual
/// choice is 4). `alt_distance` selects `sqrt(2(1-rho))` edge weights
/// instead of the default `1 - rho^2`. On success `*out` owns the result
/// and must be released with [`ntp_year_free`].
///
/// # Safety
///
/// `panel` must be a live panel handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn ntp_panel_analyze_year(
    panel: *const NtpPanel,
    year: i32,
    state_count: usize,
    alt_distance: bool,
    out: *mut *mut NtpYear,
) -> NtpStatus {
    guard(|| {
        if panel.is_null() {
            return null_arg("panel");
        }
        if out.is_null() {
            return null_arg("out");
        }
        if !(2..=usize::from(u16::MAX)).contains(&state_count) {
            return invalid(format!("state_count {state_count} out of range [2, 65535]"));
        }
        let series = unsafe { &(*panel).series };
        let panel_year = match ingest::slice_year(series, year) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        if panel_year.len() < 3 {
            set_error(format!(
                "year {year}: {} complete series, need 3",
                panel_year.len()
            ));
            return NtpStatus::NtpErrNotEnoughData;
        }
        let kind = if alt_distance {
            DistanceKind::SqrtTwoOneMinusRho
        } else {
            DistanceKind::OneMinusRhoSquared
        };
        let outcome = match analyze_year(&panel_year, state_count, kind) {
            Ok(o) => o,
            Err(e) => return fail(e),
        };
        // Edge endpoints index tree.nodes; the accessors promise that this
        // indexing matches the metrics order.
        let aligned = outcome.tree.nodes.len() == outcome.metrics.len()
            && outcome
                .tree
                .nodes
                .iter()
                .zip(&outcome.metrics)
                .all(|(node, m)| *node == m.ticker);
        if !aligned {
            set_error("tree node order does not match metric order");
            return NtpStatus::NtpErrCompute;
        }
        let tickers = outcome
            .metrics
            .iter()
            .map(|m| CString::new(m.ticker.as_str()).expect("tickers never contain nul"))
            .collect();
        let sectors = outcome
            .metrics
            .iter()
            .map(|m| CString::new(m.sector.as_str()).expect("sectors never contain nul"))
            .collect();
        unsafe {
            *out = Box::into_raw(Box::new(NtpYear {
                outcome,
                tickers,
                sectors,
            }));
        }
        NtpStatus::NtpOk
    })
}

/// Releases a year handle. Null is ignored.
///
/// # Safety
///
/// `year` must be null or a pointer obtained from [`ntp_panel_analyze_year`]
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn ntp_year_free(year: *mut NtpYear) {
    if !year.is_null() {
        drop(unsafe { Box::from_raw(year) });
    }
}

/// The calendar year the handle describes. Null yields 0.
///
/// # Safety
///
/// `year` must be null or a live year handle.
#[no_mangle]
pub unsafe extern "C" fn ntp_year_number(year: *const NtpYear) -> i32 {
    if year.is_null() {
        return 0;
    }
    unsafe { &*year }.outcome.year
}

/// Number of stocks analyzed for the year. Null yields 0.
///
/// # Safety
///
/// `year` must be null or a live year handle.
#[no_mangle]
pub unsafe extern "C" fn ntp_year_stock_count(year: *const NtpYear) -> usize {
    if year.is_null() {
        return 0;
    }
    unsafe { &*year }.outcome.metrics.len()
}

/// Borrowed pointer to the ticker at `idx`, valid until the handle is freed.
///
/// # Safety
///
/// `year` must be a live year handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn ntp_year_ticker(
    year: *const NtpYear,
    idx: usize,
    out: *mut *const c_char,
) -> NtpStatus {
    guard(|| {
        if year.is_null() {
            return null_arg("year");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let handle = unsafe { &*year };
        let Some(ticker) = handle.tickers.get(idx) else {
            return invalid(format!("index {idx} out of range"));
        };
        unsafe {
            *out = ticker.as_ptr();
        }
        NtpStatus::NtpOk
    })
}

/// Borrowed pointer to the sector label at `idx`, valid until the handle is
/// freed.
///
/// # Safety
///
/// `year` must be a live year handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn ntp_year_sector(
    year: *const NtpYear,
    idx: usize,
    out: *mut *const c_char,
) -> NtpStatus {
    guard(|| {
        if year.is_null() {
            return null_arg("year");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let handle = unsafe { &*year };
        let Some(sector) = handle.sectors.get(idx) else {
            return invalid(format!("index {idx} out of range"));
        };
        unsafe {
            *out = sector.as_ptr();
        }
        NtpStatus::NtpOk
    })
}

/// One per-stock metric value, indexed consistently with
/// [`ntp_year_ticker`].
///
/// # Safety
///
/// `year` must be a live year handle and `out` a writable double slot.
#[no_mangle]
pub unsafe extern "C" fn ntp_year_metric(
    year: *const NtpYear,
    idx: usize,
    metric: NtpMetric,
    out: *mut f64,
) -> NtpStatus {
    guard(|| {
        if year.is_null() {
            return null_arg("year");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let handle = unsafe { &*year };
        let Some(m) = handle.outcome.metrics.get(idx) else {
            return invalid(format!("index {idx} out of range"));
        };
        let value = match metric {
            NtpMetric::NtpMetricMeanReturn => m.mean_return,
            NtpMetric::NtpMetricSdReturn => m.sd_return,
            NtpMetric::NtpMetricEntropyBits => m.entropy_bits,
            NtpMetric::NtpMetricCentrality => m.centrality,
        };
        unsafe {
            *out = value;
        }
        NtpStatus::NtpOk
    })
}

/// Number of edges in the year's minimum spanning tree (stock count minus
/// one). Null yields 0.
///
/// # Safety
///
/// `year` must be null or a live year handle.
#[no_mangle]
pub unsafe extern "C" fn ntp_year_edge_count(year: *const NtpYear) -> usize {
    if year.is_null() {
        return 0;
    }
    unsafe { &*year }.outcome.tree.edges.len()
}

/// One tree edge: endpoint indices into the stock indexing shared with
/// [`ntp_year_ticker`], the distance weight, and the underlying Pearson
/// correlation.
///
/// # Safety
///
/// `year` must be a live year handle; `a`, `b`, `weight`, and `rho` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ntp_year_edge(
    year: *const NtpYear,
    idx: usize,
    a: *mut usize,
    b: *mut usize,
    weight: *mut f64,
    rho: *mut f64,
) -> NtpStatus {
    guard(|| {
        if year.is_null() {
            return null_arg("year");
        }
        if a.is_null() || b.is_null() || weight.is_null() || rho.is_null() {
            return null_arg("a/b/weight/rho");
        }
        let handle = unsafe { &*year };
        let Some(edge) = handle.outcome.tree.edges.get(idx) else {
            return invalid(format!("index {idx} out of range"));
        };
        unsafe {
            *a = edge.a;
            *b = edge.b;
            *weight = edge.weight;
            *rho = edge.rho.unwrap_or(f64::NAN);
        }
        NtpStatus::NtpOk
    })
}

/// Renders the year's tree as Graphviz DOT with sector and mean-return node
/// attributes. On success `*out` is a caller-owned string; release it with
/// [`ntp_string_free`].
///
/// # Safety
///
/// `year` must be a live year handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn ntp_year_dot(year: *const NtpYear, out: *mut *mut c_char) -> NtpStatus {
    guard(|| {
        if year.is_null() {
            return null_arg("year");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let handle = unsafe { &*year };
        let attrs: BTreeMap<String, NodeAttrs> = handle
            .outcome
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
        let name = format!("year_{}", handle.outcome.year);
        let mut buf = Vec::new();
        if let Err(e) = export::write_tree_dot(&mut buf, &name, &handle.outcome.tree, Some(&attrs))
        {
            return fail(e);
        }
        match CString::new(buf) {
            Ok(s) => {
                unsafe {
                    *out = s.into_raw();
                }
                NtpStatus::NtpOk
            }
            Err(_) => {
                set_error("DOT output contained a nul byte");
                NtpStatus::NtpErrCompute
            }
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
///
/// `s` must be null or a string obtained from a `char**` out-parameter of
/// this library that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn ntp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Computes daily log returns, `out[i] = ln(closes[i+1] / closes[i])`.
///
/// Closes must be positive and finite and `n` at least 2; `out` must hold
/// `n - 1` doubles.
///
/// # Safety
///
/// `closes` must point to `n` readable doubles and `out` to `n - 1`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ntp_log_returns(
    closes: *const f64,
    n: usize,
    out: *mut f64,
) -> NtpStatus {
    guard(|| {
        if closes.is_null() {
            return null_arg("closes");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let closes = unsafe { std::slice::from_raw_parts(closes, n) };
        if let Some(bad) = closes.iter().find(|c| !c.is_finite()) {
            return invalid(format!("non-finite close {bad}"));
        }
        let observations: Vec<Observation> = synth::weekday_calendar(n)
            .into_iter()
            .zip(closes)
            .map(|(date, &close)| Observation { date, close })
            .collect();
        let series = match PriceSeries::new("series", ingest::UNCLASSIFIED, observations) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let rets = match returns::log_returns(&series) {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        unsafe {
            std::ptr::copy_nonoverlapping(rets.values.as_ptr(), out, rets.values.len());
        }
        NtpStatus::NtpOk
    })
}

/// Rank-discretizes `values` into `states` symbols with equal populations;
/// earlier indices take the lower state on ties. `out` must hold `n`
/// entries.
///
/// # Safety
///
/// `values` must point to `n` readable doubles and `out` to `n` writable
/// `uint16_t` slots.
#[no_mangle]
pub unsafe extern "C" fn ntp_discretize(
    values: *const f64,
    n: usize,
    states: usize,
    out: *mut u16,
) -> NtpStatus {
    guard(|| {
        if values.is_null() {
            return null_arg("values");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let values = unsafe { std::slice::from_raw_parts(values, n) };
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return invalid(format!("non-finite value {bad}"));
        }
        let series = ReturnSeries {
            ticker: "series".into(),
            values: values.to_vec(),
        };
        let discrete = match returns::discretize_quartiles(&series, states) {
            Ok(d) => d,
            Err(e) => return fail(e),
        };
        unsafe {
            std::ptr::copy_nonoverlapping(discrete.symbols.as_ptr(), out, discrete.symbols.len());
        }
        NtpStatus::NtpOk
    })
}

/// Estimates the entropy rate of a discrete sequence in bits per symbol
/// using the Lempel-Ziv match-length estimator.
///
/// # Safety
///
/// `symbols` must point to `n` readable `uint16_t` values and `out` to a
/// writable double.
#[no_mangle]
pub unsafe extern "C" fn ntp_entropy_rate(
    symbols: *const u16,
    n: usize,
    out: *mut f64,
) -> NtpStatus {
    guard(|| {
        if symbols.is_null() {
            return null_arg("symbols");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let symbols = unsafe { std::slice::from_raw_parts(symbols, n) };
        let series = DiscreteSeries {
            ticker: "series".into(),
            symbols: symbols.to_vec(),
        };
        let estimate = match entropy::entropy_rate_lz(&series) {
            Ok(e) => e,
            Err(e) => return fail(e),
        };
        unsafe {
            *out = estimate.value;
        }
        NtpStatus::NtpOk
    })
}

/// Random-walk centrality of every node of an undirected tree given as an
/// edge list over node indices `0..n_nodes`. Requires exactly
/// `n_nodes - 1` edges forming a connected graph; `out` must hold
/// `n_nodes` doubles.
///
/// # Safety
///
/// `edge_a` and `edge_b` must point to `n_edges` readable `size_t` values
/// and `out` to `n_nodes` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ntp_tree_centrality(
    n_nodes: usize,
    edge_a: *const usize,
    edge_b: *const usize,
    n_edges: usize,
    out: *mut f64,
) -> NtpStatus {
    guard(|| {
        if edge_a.is_null() || edge_b.is_null() {
            return null_arg("edge_a/edge_b");
        }
        if out.is_null() {
            return null_arg("out");
        }
        if n_nodes < 2 {
            return invalid(format!("need at least 2 nodes, got {n_nodes}"));
        }
        if n_edges != n_nodes - 1 {
            return invalid(format!(
                "a tree on {n_nodes} nodes has {} edges, got {n_edges}",
                n_nodes - 1
            ));
        }
        let ea = unsafe { std::slice::from_raw_parts(edge_a, n_edges) };
        let eb = unsafe { std::slice::from_raw_parts(edge_b, n_edges) };
        let mut adjacency = vec![Vec::new(); n_nodes];
        for (&a, &b) in ea.iter().zip(eb) {
            if a >= n_nodes || b >= n_nodes {
                return invalid(format!("edge ({a}, {b}) out of range for {n_nodes} nodes"));
            }
            if a == b {
                return invalid(format!("self-loop on node {a}"));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut seen = vec![false; n_nodes];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1usize;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached != n_nodes {
            return invalid("edge list does not connect all nodes");
        }
        let tree = SpanningTree {
            nodes: (0..n_nodes).map(|i| i.to_string()).collect(),
            edges: ea
                .iter()
                .zip(eb)
                .map(|(&a, &b)| TreeEdge {
                    a,
                    b,
                    weight: 1.0,
                    rho: None,
                })
                .collect(),
        };
        let scores = match centrality::tree_centrality(&tree) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        for (i, node) in tree.nodes.iter().enumerate() {
            let Some(score) = scores.score_of(node) else {
                set_error(format!("missing centrality score for node {i}"));
                return NtpStatus::NtpErrCompute;
            };
            unsafe {
                *out.add(i) = score;
            }
        }
        NtpStatus::NtpOk
    })
}
