//! Dependency-network analytics for daily price panels.
//!
//! The pipeline: load and validate price/sector CSVs, select series listed
//! over enough consecutive trading days, slice complete per-year panels,
//! compute log returns and their Pearson correlations, convert to the
//! distance d = 1 − ρ², extract the minimal spanning tree, score nodes with
//! random-walk Markov centrality (fundamental matrix → mean first-passage
//! times), estimate per-series entropy rates with the Lempel-Ziv
//! match-length estimator on rank-discretized returns, and aggregate
//! everything into sector and market summaries.

pub mod analytics;
pub mod centrality;
pub mod depnet;
pub mod entropy;
pub mod error;
pub mod export;
pub mod ingest;
pub mod pipeline;
pub mod returns;
pub mod synth;

pub use error::{Error, Result};
