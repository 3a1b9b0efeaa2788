//! Lempel-Ziv match-length entropy-rate estimation for discretized series.
//!
//! For each position i the estimator needs the length of the shortest
//! substring starting at i that never occurred in the preceding history
//! (positions 1..i-1). Equivalently one plus the longest prefix of the
//! suffix at i that does occur; when even the full suffix has been seen,
//! the length is suffix length + 1. The estimate is n*log2(n) / sum(lambda),
//! in bits per symbol.
//!
//! Matching is done against a suffix automaton grown one symbol at a time,
//! so the whole pass is near-linear; a brute-force substring search remains
//! the reference the tests compare against.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::returns::DiscreteSeries;

/// Per-position match lengths Λ_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchLengths {
    pub lambdas: Vec<u64>,
}

/// Entropy-rate estimate in bits per symbol, with the sample size that
/// produced it so short-series estimates can be filtered downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate {
    pub value: f64,
    pub n: usize,
}

struct SamState {
    len: u32,
    link: i32,
    // (symbol, target); alphabets here are tiny, linear scan wins.
    trans: Vec<(u16, u32)>,
}

/// Suffix automaton over u16 symbols, built incrementally.
struct SuffixAutomaton {
    states: Vec<SamState>,
    last: usize,
}

impl SuffixAutomaton {
    fn with_capacity(n: usize) -> Self {
        let mut states = Vec::with_capacity(2 * n + 2);
        states.push(SamState {
            len: 0,
            link: -1,
            trans: Vec::new(),
        });
        SuffixAutomaton { states, last: 0 }
    }

    fn get(&self, s: usize, c: u16) -> Option<usize> {
        self.states[s]
            .trans
            .iter()
            .find(|&&(sym, _)| sym == c)
            .map(|&(_, t)| t as usize)
    }

    fn set(&mut self, s: usize, c: u16, t: usize) {
        match self.states[s].trans.iter_mut().find(|(sym, _)| *sym == c) {
            Some(slot) => slot.1 = t as u32,
            None => self.states[s].trans.push((c, t as u32)),
        }
    }

    fn extend(&mut self, c: u16) {
        let cur = self.states.len();
        let cur_len = self.states[self.last].len + 1;
        self.states.push(SamState {
            len: cur_len,
            link: 0,
            trans: Vec::new(),
        });

        let mut p = self.last as i32;
        while p >= 0 && self.get(p as usize, c).is_none() {
            self.set(p as usize, c, cur);
            p = self.states[p as usize].link;
        }

        if p >= 0 {
            let q = self.get(p as usize, c).expect("loop exit implies transition");
            if self.states[q].len == self.states[p as usize].len + 1 {
                self.states[cur].link = q as i32;
            } else {
                let clone = self.states.len();
                let clone_len = self.states[p as usize].len + 1;
                let q_link = self.states[q].link;
                let q_trans = self.states[q].trans.clone();
                self.states.push(SamState {
                    len: clone_len,
                    link: q_link,
                    trans: q_trans,
                });
                while p >= 0 && self.get(p as usize, c) == Some(q) {
                    self.set(p as usize, c, clone);
                    p = self.states[p as usize].link;
                }
                self.states[q].link = clone as i32;
                self.states[cur].link = clone as i32;
            }
        }
        self.last = cur;
    }

    /// Length of the longest prefix of `pattern` that is a substring of the
    /// indexed text.
    fn longest_match(&self, pattern: &[u16]) -> usize {
        let mut s = 0;
        let mut matched = 0;
        for &c in pattern {
            match self.get(s, c) {
                Some(t) => {
                    s = t;
                    matched += 1;
                }
                None => break,
            }
        }
        matched
    }
}

/// Λ_i = 1 + longest prefix of the suffix at i occurring within the first
/// i-1 symbols; Λ_1 = 1. Empty input gives an empty vector.
pub fn lambda_lengths(series: &DiscreteSeries) -> MatchLengths {
    let s = &series.symbols;
    let mut sam = SuffixAutomaton::with_capacity(s.len());
    let mut lambdas = Vec::with_capacity(s.len());
    for i in 0..s.len() {
        lambdas.push(sam.longest_match(&s[i..]) as u64 + 1);
        sam.extend(s[i]);
    }
    MatchLengths { lambdas }
}

/// Ĥ = n·log₂(n) / ΣΛ_i, in bits per symbol.
pub fn entropy_rate_lz(series: &DiscreteSeries) -> Result<EntropyEstimate> {
    let n = series.symbols.len();
    if n < 2 {
        return Err(Error::NotEnoughData {
            what: "entropy-rate estimate".into(),
            min: 2,
            got: n,
        });
    }
    let lambdas = lambda_lengths(series).lambdas;
    let total: u64 = lambdas.iter().sum();
    let value = n as f64 * (n as f64).log2() / total as f64;

    // Plausibility gate for long series: the estimate cannot meaningfully
    // exceed the log of the observed alphabet size.
    if n >= 1000 {
        let alphabet = series.symbols.iter().collect::<BTreeSet<_>>().len();
        let bound = (alphabet as f64).log2() + 0.1;
        if !(value >= 0.0 && value <= bound) {
            return Err(Error::Inconsistent {
                msg: format!(
                    "entropy estimate {value:.4} outside [0, {bound:.4}] for {} ({} symbols, n={n})",
                    series.ticker, alphabet
                ),
            });
        }
    }
    Ok(EntropyEstimate { value, n })
}
