//! Seeded synthetic data with analytically known properties.
//!
//! Everything here is part of the reproducibility contract: generation uses
//! ChaCha8 seeded via `seed_from_u64`, integer draws go through explicit
//! rejection sampling on the raw word stream, and identical (spec, seed)
//! pairs produce identical bytes on every platform.

use chrono::{Datelike, Duration, NaiveDate, Weekday};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ingest::{Observation, PriceSeries, SectorMap};
use crate::returns::{DiscreteSeries, ReturnSeries};

/// One correlated block: `size` series sharing pairwise correlation `rho`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub size: usize,
    pub rho: f64,
}

/// Declarative description of a synthetic dataset, read from TOML.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SynthSpec {
    IidUniform { n: usize, states: u16, seed: u64 },
    MarkovChain {
        n: usize,
        seed: u64,
        transition: Vec<Vec<f64>>,
    },
    BlockCorrelatedGaussian {
        n: usize,
        seed: u64,
        blocks: Vec<BlockSpec>,
    },
}

impl SynthSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: SynthSpec = toml::from_str(text).map_err(|e| Error::InvalidSpec {
            field: "kind".into(),
            msg: e.to_string(),
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |field: &str, msg: String| Error::InvalidSpec {
            field: field.into(),
            msg,
        };
        match self {
            SynthSpec::IidUniform { n, states, .. } => {
                if *n < 1 {
                    return Err(invalid("n", "must be at least 1".into()));
                }
                if *states < 2 {
                    return Err(invalid("states", "must be at least 2".into()));
                }
            }
            SynthSpec::MarkovChain { n, transition, .. } => {
                if *n < 1 {
                    return Err(invalid("n", "must be at least 1".into()));
                }
                let k = transition.len();
                if k < 2 {
                    return Err(invalid("transition", "need at least 2 states".into()));
                }
                for (i, row) in transition.iter().enumerate() {
                    if row.len() != k {
                        return Err(invalid(
                            "transition",
                            format!("row {i} has {} entries, expected {k}", row.len()),
                        ));
                    }
                    if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
                        return Err(invalid(
                            "transition",
                            format!("row {i} has probabilities outside [0, 1]"),
                        ));
                    }
                    let sum: f64 = row.iter().sum();
                    if (sum - 1.0).abs() > 1e-12 {
                        return Err(invalid(
                            "transition",
                            format!("row {i} sums to {sum}, expected 1"),
                        ));
                    }
                }
                if !irreducible(transition) {
                    return Err(invalid("transition", "chain is reducible".into()));
                }
            }
            SynthSpec::BlockCorrelatedGaussian { n, blocks, .. } => {
                if *n < 2 {
                    return Err(invalid("n", "must be at least 2".into()));
                }
                if blocks.is_empty() {
                    return Err(invalid("blocks", "need at least one block".into()));
                }
                for (i, b) in blocks.iter().enumerate() {
                    if b.size < 1 {
                        return Err(invalid("blocks", format!("block {i} has size 0")));
                    }
                    if !(0.0..1.0).contains(&b.rho) {
                        return Err(invalid(
                            "blocks",
                            format!(
                                "block {i} rho {} outside [0, 1): correlation matrix \
                                 would not be positive semi-definite",
                                b.rho
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Exact-uniform integer in [0, bound) by rejection on the raw u32 stream.
fn uniform_u32(rng: &mut ChaCha8Rng, bound: u32) -> u32 {
    debug_assert!(bound >= 1);
    let limit = (1u64 << 32) / bound as u64 * bound as u64;
    loop {
        let v = rng.next_u32() as u64;
        if v < limit {
            return (v % bound as u64) as u32;
        }
    }
}

/// iid uniform symbols over k states.
pub fn gen_iid(n: usize, k: u16, seed: u64) -> DiscreteSeries {
    assert!(n >= 1 && k >= 2, "validated by SynthSpec");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbols = (0..n).map(|_| uniform_u32(&mut rng, k as u32) as u16).collect();
    DiscreteSeries {
        ticker: "SYNTH".into(),
        symbols,
    }
}

fn irreducible(p: &[Vec<f64>]) -> bool {
    let k = p.len();
    let reaches_all = |forward: bool| {
        let mut seen = vec![false; k];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..k {
                let w = if forward { p[i][j] } else { p[j][i] };
                if w > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reaches_all(true) && reaches_all(false)
}

fn stationary_of(p: &[Vec<f64>]) -> Result<Vec<f64>> {
    let k = p.len();
    let mut a = DMatrix::from_fn(k, k, |i, j| p[j][i]) - DMatrix::identity(k, k);
    for j in 0..k {
        a[(k - 1, j)] = 1.0;
    }
    let mut b = DVector::zeros(k);
    b[k - 1] = 1.0;
    let pi = a.lu().solve(&b).ok_or_else(|| Error::Inconsistent {
        msg: "stationary system of the synthetic chain is singular".into(),
    })?;
    if pi.iter().any(|&x| x <= 0.0) {
        return Err(Error::Inconsistent {
            msg: "synthetic chain stationary distribution not strictly positive".into(),
        });
    }
    Ok(pi.iter().copied().collect())
}

fn sample_cdf(rng: &mut ChaCha8Rng, weights: &[f64]) -> u16 {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i as u16;
        }
    }
    (weights.len() - 1) as u16
}

/// Markov chain sampled from its stationary distribution, with the chain's
/// exact entropy rate −Σ_i π_i Σ_j P_ij log₂ P_ij.
pub fn gen_markov(transition: &[Vec<f64>], n: usize, seed: u64) -> Result<(DiscreteSeries, f64)> {
    if !irreducible(transition) {
        return Err(Error::InvalidSpec {
            field: "transition".into(),
            msg: "chain is reducible".into(),
        });
    }
    let pi = stationary_of(transition)?;
    let true_entropy = pi
        .iter()
        .zip(transition)
        .map(|(&pi_i, row)| {
            -pi_i
                * row
                    .iter()
                    .filter(|&&p| p > 0.0)
                    .map(|&p| p * p.log2())
                    .sum::<f64>()
        })
        .sum();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symbols = Vec::with_capacity(n);
    let mut state = sample_cdf(&mut rng, &pi);
    symbols.push(state);
    for _ in 1..n {
        state = sample_cdf(&mut rng, &transition[state as usize]);
        symbols.push(state);
    }
    Ok((
        DiscreteSeries {
            ticker: "SYNTH".into(),
            symbols,
        },
        true_entropy,
    ))
}

/// Equicorrelated Gaussian blocks: within a block,
/// x = √ρ·f_block + √(1−ρ)·ε, so every intra-block pair has correlation ρ
/// and cross-block pairs are independent. Tickers are B{block}S{index}.
pub fn gen_correlated_returns(blocks: &[BlockSpec], n: usize, seed: u64) -> Result<Vec<ReturnSeries>> {
    for (i, b) in blocks.iter().enumerate() {
        if !(0.0..1.0).contains(&b.rho) || b.size < 1 {
            return Err(Error::InvalidSpec {
                field: "blocks".into(),
                msg: format!("block {i} is invalid (size {}, rho {})", b.size, b.rho),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut series: Vec<ReturnSeries> = blocks
        .iter()
        .enumerate()
        .flat_map(|(b, spec)| {
            (0..spec.size).map(move |s| ReturnSeries {
                ticker: format!("B{b:02}S{s:02}"),
                values: Vec::with_capacity(n),
            })
        })
        .collect();

    // Day-major draw order: one factor per block, then one noise term per
    // series, so adding a block never perturbs earlier blocks' streams
    // within a day.
    for _ in 0..n {
        let mut idx = 0;
        for spec in blocks {
            let f: f64 = rng.sample(StandardNormal);
            for _ in 0..spec.size {
                let eps: f64 = rng.sample(StandardNormal);
                let x = spec.rho.sqrt() * f + (1.0 - spec.rho).sqrt() * eps;
                series[idx].values.push(x);
                idx += 1;
            }
        }
    }
    Ok(series)
}

/// Weekday calendar of `count` days starting 2000-01-03 (a Monday).
pub fn weekday_calendar(count: usize) -> Vec<NaiveDate> {
    let mut days = Vec::with_capacity(count);
    let mut d = NaiveDate::from_ymd_opt(2000, 1, 3).expect("fixed valid date");
    while days.len() < count {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            days.push(d);
        }
        d += Duration::days(1);
    }
    days
}

/// Compounds returns into a price path starting at 100.
pub fn prices_from_returns(ticker: &str, sector: &str, returns: &[f64]) -> Result<PriceSeries> {
    let days = weekday_calendar(returns.len() + 1);
    let mut close = 100.0;
    let mut obs = Vec::with_capacity(returns.len() + 1);
    obs.push(Observation {
        date: days[0],
        close,
    });
    for (i, &r) in returns.iter().enumerate() {
        close *= r.exp();
        obs.push(Observation {
            date: days[i + 1],
            close,
        });
    }
    PriceSeries::new(ticker.to_owned(), sector.to_owned(), obs)
}

/// Maps a symbol stream onto a price path: symbol s becomes the return
/// (s − (k−1)/2)·0.01 so the path is ingest-compatible and recovers the
/// original symbols under k-state rank discretization only when populations
/// allow; the path is for round-trip plumbing, not metric fidelity.
pub fn discrete_to_prices(series: &DiscreteSeries, states: u16) -> Result<PriceSeries> {
    let center = (states as f64 - 1.0) / 2.0;
    let returns: Vec<f64> = series
        .symbols
        .iter()
        .map(|&s| (s as f64 - center) * 0.01)
        .collect();
    prices_from_returns(&series.ticker, "synthetic", &returns)
}

/// Fully materialized synthetic dataset: price panel plus sector labels
/// (block index for block specs, "synthetic" otherwise).
pub fn materialize(spec: &SynthSpec) -> Result<(Vec<PriceSeries>, SectorMap)> {
    spec.validate()?;
    let mut sectors = SectorMap::new();
    let panel = match spec {
        SynthSpec::IidUniform { n, states, seed } => {
            let s = gen_iid(*n, *states, *seed);
            sectors.insert(s.ticker.clone(), "synthetic".into());
            vec![discrete_to_prices(&s, *states)?]
        }
        SynthSpec::MarkovChain { n, seed, transition } => {
            let (s, _) = gen_markov(transition, *n, *seed)?;
            sectors.insert(s.ticker.clone(), "synthetic".into());
            vec![discrete_to_prices(&s, transition.len() as u16)?]
        }
        SynthSpec::BlockCorrelatedGaussian { n, seed, blocks } => {
            let mut out = Vec::new();
            for rs in gen_correlated_returns(blocks, *n, *seed)? {
                let block_label = rs.ticker[..3].to_lowercase(); // B00, B01, ...
                let scaled: Vec<f64> = rs.values.iter().map(|v| v * 0.02).collect();
                sectors.insert(rs.ticker.clone(), block_label.clone());
                out.push(prices_from_returns(&rs.ticker, &block_label, &scaled)?);
            }
            out
        }
    };
    Ok((panel, sectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::returns::log_returns;

    #[test]
    fn iid_is_reproducible_and_seed_sensitive() {
        let a = gen_iid(4096, 4, 99);
        let b = gen_iid(4096, 4, 99);
        let c = gen_iid(4096, 4, 100);
        assert_eq!(a.symbols, b.symbols);
        assert_ne!(a.symbols, c.symbols);
    }

    #[test]
    fn iid_frequencies_concentrate() {
        let s = gen_iid(1_000_000, 4, 7);
        let mut counts = [0usize; 4];
        for &sym in &s.symbols {
            counts[sym as usize] += 1;
        }
        for &c in &counts {
            let freq = c as f64 / 1_000_000.0;
            assert!((freq - 0.25).abs() < 0.005, "freq {freq}");
        }
    }

    #[test]
    fn uniform_rejection_covers_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut seen = [false; 5];
        for _ in 0..200 {
            seen[uniform_u32(&mut rng, 5) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn markov_identity_chain_is_rejected() {
        let p = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(gen_markov(&p, 100, 1).is_err());
    }

    #[test]
    fn markov_true_entropy_matches_closed_forms() {
        let p = vec![vec![0.9, 0.1], vec![0.1, 0.9]];
        let (_, h) = gen_markov(&p, 2, 1).unwrap();
        let want = -(0.9f64 * 0.9f64.log2() + 0.1 * 0.1f64.log2());
        assert!((h - want).abs() < 1e-12);

        // Uniform rows reduce to iid: entropy log2 k.
        let u = vec![vec![0.25; 4]; 4];
        let (_, h) = gen_markov(&u, 2, 1).unwrap();
        assert!((h - 2.0).abs() < 1e-12);
    }

    #[test]
    fn markov_empirical_transitions_converge() {
        let p = vec![vec![0.7, 0.3], vec![0.2, 0.8]];
        let (s, _) = gen_markov(&p, 1_000_000, 11).unwrap();
        let mut counts = [[0usize; 2]; 2];
        for w in s.symbols.windows(2) {
            counts[w[0] as usize][w[1] as usize] += 1;
        }
        for i in 0..2 {
            let row: usize = counts[i].iter().sum();
            for j in 0..2 {
                let freq = counts[i][j] as f64 / row as f64;
                assert!((freq - p[i][j]).abs() <= 0.01, "p[{i}][{j}] ~ {freq}");
            }
        }
    }

    #[test]
    fn markov_stationary_start_matches_marginals() {
        // Asymmetric chain: pi = (1/3, 2/3); symbol frequencies must match
        // it without burn-in.
        let p = vec![vec![0.8, 0.2], vec![0.1, 0.9]];
        let (s, _) = gen_markov(&p, 500_000, 5).unwrap();
        let ones = s.symbols.iter().filter(|&&x| x == 1).count() as f64;
        assert!((ones / 500_000.0 - 2.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn single_block_zero_rho_is_near_independent() {
        let blocks = [BlockSpec { size: 4, rho: 0.0 }];
        let rs = gen_correlated_returns(&blocks, 5000, 17).unwrap();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let r = pearson_pair(&rs[i].values, &rs[j].values);
                assert!(r.abs() < 0.05, "pair ({i},{j}) rho {r}");
            }
        }
    }

    #[test]
    fn intra_block_correlation_hits_target() {
        let blocks = [BlockSpec { size: 3, rho: 0.7 }, BlockSpec { size: 2, rho: 0.0 }];
        let rs = gen_correlated_returns(&blocks, 20000, 23).unwrap();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let r = pearson_pair(&rs[i].values, &rs[j].values);
                assert!((r - 0.7).abs() < 0.05, "pair ({i},{j}) rho {r}");
            }
        }
        // Cross-block pairs stay near zero.
        for i in 0..3 {
            for j in 3..5 {
                let r = pearson_pair(&rs[i].values, &rs[j].values);
                assert!(r.abs() < 0.05, "cross pair ({i},{j}) rho {r}");
            }
        }
    }

    #[test]
    fn size_one_block_is_a_single_series() {
        let rs = gen_correlated_returns(&[BlockSpec { size: 1, rho: 0.5 }], 100, 3).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].values.len(), 100);
    }

    #[test]
    fn out_of_range_rho_is_rejected() {
        for rho in [-0.1, 1.0, 1.5] {
            assert!(gen_correlated_returns(&[BlockSpec { size: 2, rho }], 10, 1).is_err());
        }
    }

    #[test]
    fn toml_specs_parse_and_validate() {
        let iid = SynthSpec::from_toml_str("kind = \"iid_uniform\"\nn = 10\nstates = 4\nseed = 1\n")
            .unwrap();
        assert_eq!(
            iid,
            SynthSpec::IidUniform {
                n: 10,
                states: 4,
                seed: 1
            }
        );

        let markov = "kind = \"markov_chain\"\nn = 5\nseed = 2\ntransition = [[0.9, 0.1], [0.1, 0.9]]\n";
        assert!(SynthSpec::from_toml_str(markov).is_ok());

        let blocks = "kind = \"block_correlated_gaussian\"\nn = 50\nseed = 3\n\n[[blocks]]\nsize = 10\nrho = 0.7\n\n[[blocks]]\nsize = 10\nrho = 0.7\n";
        assert!(SynthSpec::from_toml_str(blocks).is_ok());

        let bad_row = "kind = \"markov_chain\"\nn = 5\nseed = 2\ntransition = [[0.9, 0.2], [0.1, 0.9]]\n";
        assert!(SynthSpec::from_toml_str(bad_row).is_err());

        let unknown = "kind = \"iid_uniform\"\nn = 10\nstates = 4\nseed = 1\nbogus = 9\n";
        assert!(SynthSpec::from_toml_str(unknown).is_err());
    }

    #[test]
    fn weekday_calendar_skips_weekends() {
        let days = weekday_calendar(10);
        assert_eq!(days[0], NaiveDate::from_ymd_opt(2000, 1, 3).unwrap());
        assert!(days.windows(2).all(|w| w[0] < w[1]));
        assert!(days
            .iter()
            .all(|d| !matches!(d.weekday(), Weekday::Sat | Weekday::Sun)));
        // First full week is Jan 3-7; the next Monday is Jan 10.
        assert_eq!(days[5], NaiveDate::from_ymd_opt(2000, 1, 10).unwrap());
    }

    #[test]
    fn price_materialization_round_trips_returns() {
        let returns = [0.01, -0.02, 0.005];
        let ps = prices_from_returns("T", "synthetic", &returns).unwrap();
        let rt = log_returns(&ps).unwrap();
        for (a, b) in rt.values.iter().zip(returns) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn materialize_block_spec_labels_sectors_by_block() {
        let spec = SynthSpec::BlockCorrelatedGaussian {
            n: 30,
            seed: 9,
            blocks: vec![BlockSpec { size: 2, rho: 0.5 }, BlockSpec { size: 1, rho: 0.0 }],
        };
        let (panel, sectors) = materialize(&spec).unwrap();
        assert_eq!(panel.len(), 3);
        assert_eq!(sectors["B00S00"], "b00");
        assert_eq!(sectors["B00S01"], "b00");
        assert_eq!(sectors["B01S00"], "b01");
        assert!(panel.iter().all(|p| p.observations().len() == 31));
    }

    fn pearson_pair(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
        let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
        sxy / (sxx * syy).sqrt()
    }
}
