//! Log returns, their moments, and equal-population discretization.

use crate::error::{Error, Result};
use crate::ingest::PriceSeries;

/// Daily log returns of one instrument.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    pub ticker: String,
    pub values: Vec<f64>,
}

/// A return series discretized into `state_count` equal-population symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteSeries {
    pub ticker: String,
    pub symbols: Vec<u16>,
}

/// `values[t] = ln(close[t+1] / close[t])`.
pub fn log_returns(prices: &PriceSeries) -> Result<ReturnSeries> {
    if prices.len() < 2 {
        return Err(Error::NotEnoughData {
            what: "log_returns".into(),
            min: 2,
            got: prices.len(),
        });
    }
    let closes: Vec<f64> = prices.closes().collect();
    let values = closes.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    Ok(ReturnSeries {
        ticker: prices.ticker().to_string(),
        values,
    })
}

/// Arithmetic mean.
pub fn mean(returns: &ReturnSeries) -> Result<f64> {
    mean_of(&returns.values)
}

pub(crate) fn mean_of(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::NotEnoughData {
            what: "mean".into(),
            min: 1,
            got: 0,
        });
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Sample standard deviation (n-1 divisor).
pub fn stddev(returns: &ReturnSeries) -> Result<f64> {
    stddev_of(&returns.values)
}

pub(crate) fn stddev_of(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::NotEnoughData {
            what: "stddev".into(),
            min: 2,
            got: values.len(),
        });
    }
    let m = mean_of(values)?;
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    Ok((ss / (values.len() - 1) as f64).sqrt())
}

/// Discretizes by empirical quantiles with rank tie-breaking: values are
/// stably ranked (ties keep input order), and rank `r` of `n` maps to symbol
/// `r * state_count / n`. State populations therefore differ by at most one
/// even when values repeat.
pub fn discretize_quartiles(returns: &ReturnSeries, state_count: usize) -> Result<DiscreteSeries> {
    let n = returns.values.len();
    if state_count < 2 {
        return Err(Error::InvalidConfig {
            msg: format!("state_count must be >= 2, got {state_count}"),
        });
    }
    if state_count > u16::MAX as usize + 1 {
        return Err(Error::InvalidConfig {
            msg: format!("state_count must be <= 65536, got {state_count}"),
        });
    }
    if n < state_count {
        return Err(Error::NotEnoughData {
            what: "discretize_quartiles".into(),
            min: state_count,
            got: n,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort: equal values stay in index order, so earlier-indexed ties
    // fill the lower state first.
    order.sort_by(|&a, &b| returns.values[a].partial_cmp(&returns.values[b]).unwrap());

    let mut symbols = vec![0u16; n];
    for (rank, &idx) in order.iter().enumerate() {
        symbols[idx] = (rank * state_count / n) as u16;
    }
    Ok(DiscreteSeries {
        ticker: returns.ticker.clone(),
        symbols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{Observation, PriceSeries, UNCLASSIFIED};
    use chrono::NaiveDate;
    use proptest::prelude::*;

    fn prices(closes: &[f64]) -> PriceSeries {
        let start = NaiveDate::from_ymd_opt(2001, 1, 1).unwrap();
        PriceSeries::new(
            "T",
            UNCLASSIFIED,
            closes
                .iter()
                .enumerate()
                .map(|(i, &c)| Observation {
                    date: start + chrono::Duration::days(i as i64),
                    close: c,
                })
                .collect(),
        )
        .unwrap()
    }

    fn rets(values: &[f64]) -> ReturnSeries {
        ReturnSeries {
            ticker: "T".into(),
            values: values.to_vec(),
        }
    }

    /// Kahan-compensated mean, kept independent of the implementation path.
    fn compensated_mean(values: &[f64]) -> f64 {
        let mut sum = 0.0f64;
        let mut c = 0.0f64;
        for &v in values {
            let y = v - c;
            let t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
        sum / values.len() as f64
    }

    #[test]
    fn log_return_of_flat_prices_is_zero() {
        let r = log_returns(&prices(&[100.0, 100.0])).unwrap();
        assert_eq!(r.values, vec![0.0]);
    }

    #[test]
    fn log_return_matches_direct_evaluation() {
        let r = log_returns(&prices(&[100.0, 110.0])).unwrap();
        assert!((r.values[0] - 1.1f64.ln()).abs() < 1e-15);
        assert!((r.values[0] - 0.09531017980432486).abs() < 1e-12);
    }

    #[test]
    fn log_returns_telescope() {
        let r = log_returns(&prices(&[100.0, 110.0, 100.0])).unwrap();
        let sum: f64 = r.values.iter().sum();
        assert!(sum.abs() < 1e-15);
    }

    #[test]
    fn log_returns_need_two_observations() {
        assert!(log_returns(&prices(&[100.0])).is_err());
    }

    #[test]
    fn mean_basics() {
        assert_eq!(mean(&rets(&[1.0, 2.0, 3.0])).unwrap(), 2.0);
        assert_eq!(mean(&rets(&[0.0, 0.0])).unwrap(), 0.0);
        assert!(mean(&rets(&[])).is_err());
    }

    #[test]
    fn mean_matches_compensated_oracle_on_large_vector() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let values: Vec<f64> = (0..1000)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 0.1
            })
            .collect();
        let got = mean(&rets(&values)).unwrap();
        let want = compensated_mean(&values);
        assert!((got - want).abs() <= 1e-12 * want.abs().max(1e-30));
    }

    #[test]
    fn stddev_basics() {
        assert_eq!(stddev(&rets(&[1.0, 1.0, 1.0])).unwrap(), 0.0);
        // (0, 2): mean 1, squared deviations 1+1, n-1 = 1 -> sqrt(2)
        assert!((stddev(&rets(&[0.0, 2.0])).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(stddev(&rets(&[1.0])).is_err());
    }

    #[test]
    fn discretize_sorted_equal_split() {
        let d = discretize_quartiles(&rets(&[1., 2., 3., 4., 5., 6., 7., 8.]), 4).unwrap();
        assert_eq!(d.symbols, vec![0, 0, 1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn discretize_all_identical_balances_by_rank() {
        let d = discretize_quartiles(&rets(&[5.0; 8]), 4).unwrap();
        assert_eq!(d.symbols, vec![0, 0, 1, 1, 2, 2, 3, 3]);
        let mut pops = [0usize; 4];
        for &s in &d.symbols {
            pops[s as usize] += 1;
        }
        assert_eq!(pops, [2, 2, 2, 2]);
    }

    #[test]
    fn discretize_needs_enough_values() {
        assert!(discretize_quartiles(&rets(&[1.0, 2.0, 3.0]), 4).is_err());
    }

    proptest! {
        #[test]
        fn log_returns_invariant_under_price_scaling(
            closes in proptest::collection::vec(0.01f64..1000.0, 2..40),
            scale in 0.001f64..1000.0,
        ) {
            let base = log_returns(&prices(&closes)).unwrap();
            let scaled_closes: Vec<f64> = closes.iter().map(|c| c * scale).collect();
            let scaled = log_returns(&prices(&scaled_closes)).unwrap();
            for (a, b) in base.values.iter().zip(scaled.values.iter()) {
                // Ratios cancel the scale before the log, so this is exact up
                // to the rounding of the division itself.
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn stddev_is_absolutely_homogeneous(
            values in proptest::collection::vec(-1.0f64..1.0, 2..50),
            c in -8.0f64..8.0,
        ) {
            let base = stddev(&rets(&values)).unwrap();
            let scaled: Vec<f64> = values.iter().map(|v| v * c).collect();
            let got = stddev(&rets(&scaled)).unwrap();
            let want = c.abs() * base;
            prop_assert!((got - want).abs() <= 1e-12 * want.max(1.0));
        }

        #[test]
        fn discretize_invariant_under_increasing_transform(
            values in proptest::collection::vec(-5.0f64..5.0, 8..120),
        ) {
            let k = 4;
            let base = discretize_quartiles(&rets(&values), k).unwrap();
            // exp is strictly increasing; ranks (and stable tie order) are
            // preserved exactly.
            let mapped: Vec<f64> = values.iter().map(|v| v.exp()).collect();
            let transformed = discretize_quartiles(&rets(&mapped), k).unwrap();
            prop_assert_eq!(base.symbols, transformed.symbols);
        }

        #[test]
        fn discretize_populations_differ_by_at_most_one(
            values in proptest::collection::vec(-5.0f64..5.0, 5..200),
            k in 2usize..9,
        ) {
            prop_assume!(values.len() >= k);
            let d = discretize_quartiles(&rets(&values), k).unwrap();
            let mut pops = vec![0usize; k];
            for &s in &d.symbols {
                pops[s as usize] += 1;
            }
            let max = pops.iter().max().unwrap();
            let min = pops.iter().min().unwrap();
            prop_assert!(max - min <= 1);
        }
    }
}
