//! Independent oracles shared by the integration suites.
//!
//! Everything here is deliberately implemented with different algorithms
//! from the library under test: spanning trees come from Prüfer sequences
//! instead of Kruskal, first-passage times from per-target linear systems
//! and Monte Carlo episodes instead of the fundamental matrix, and match
//! lengths from quadratic substring search instead of a suffix automaton.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Decodes a Prüfer sequence over labels `0..n` into the edge list of the
/// corresponding labeled tree.
pub fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    assert!(n >= 2 && seq.len() == n - 2);
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut used = vec![false; n];
    for &x in seq {
        let leaf = (0..n).find(|&u| !used[u] && degree[u] == 1).unwrap();
        edges.push((leaf, x));
        used[leaf] = true;
        degree[x] -= 1;
    }
    let mut last = (0..n).filter(|&u| !used[u] && degree[u] == 1);
    let (a, b) = (last.next().unwrap(), last.next().unwrap());
    edges.push((a, b));
    edges
}

/// Sums weights in ascending order so both sides of a comparison use the
/// identical floating-point reduction.
pub fn sorted_sum(mut weights: Vec<f64>) -> f64 {
    weights.sort_by(f64::total_cmp);
    weights.iter().sum()
}

/// Minimum spanning-tree weight of the complete graph on `n` nodes by
/// exhaustive enumeration of all `n^(n-2)` labeled trees.
pub fn exhaustive_min_tree_weight(n: usize, weight: impl Fn(usize, usize) -> f64) -> f64 {
    assert!((2..=8).contains(&n), "enumeration only sane for tiny n");
    let tree_weight = |edges: &[(usize, usize)]| {
        sorted_sum(edges.iter().map(|&(a, b)| weight(a, b)).collect())
    };
    if n == 2 {
        return tree_weight(&[(0, 1)]);
    }
    let mut seq = vec![0usize; n - 2];
    let mut best = f64::INFINITY;
    loop {
        let w = tree_weight(&prufer_decode(&seq, n));
        if w < best {
            best = w;
        }
        // odometer over the n^(n-2) sequences
        let mut pos = 0;
        loop {
            if pos == seq.len() {
                return best;
            }
            seq[pos] += 1;
            if seq[pos] < n {
                break;
            }
            seq[pos] = 0;
            pos += 1;
        }
    }
}

/// Uniform random labeled tree on `n` nodes drawn via a random Prüfer
/// sequence.
pub fn random_tree(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    if n == 2 {
        return vec![(0, 1)];
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    prufer_decode(&seq, n)
}

/// Adjacency lists of an edge list over `0..n`.
pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// Mean first-passage times of the uniform walk solved one target at a
/// time from the defining equations
/// `m(s,v) = 1 + sum_u P(s,u) m(u,v)` over `s != v`,
/// with the diagonal filled from the return-time identity
/// `m(v,v) = 1 + sum_u P(v,u) m(u,v)`.
pub fn mfpt_by_linear_solve(n: usize, edges: &[(usize, usize)]) -> DMatrix<f64> {
    let adj = adjacency(n, edges);
    let mut out = DMatrix::zeros(n, n);
    for v in 0..n {
        let others: Vec<usize> = (0..n).filter(|&s| s != v).collect();
        let index_of = |s: usize| others.iter().position(|&o| o == s).unwrap();
        let mut a = DMatrix::identity(n - 1, n - 1);
        let b = DVector::from_element(n - 1, 1.0);
        for (row, &s) in others.iter().enumerate() {
            let p = 1.0 / adj[s].len() as f64;
            for &u in &adj[s] {
                if u != v {
                    a[(row, index_of(u))] -= p;
                }
            }
        }
        let m = a.lu().solve(&b).expect("first-passage system is regular");
        for (row, &s) in others.iter().enumerate() {
            out[(s, v)] = m[row];
        }
        let p = 1.0 / adj[v].len() as f64;
        out[(v, v)] = 1.0 + adj[v].iter().map(|&u| p * out[(u, v)]).sum::<f64>();
    }
    out
}

/// Monte Carlo estimate of the mean first-passage time from `s` to `v`
/// (the mean return time when `s == v`) over `episodes` simulated walks.
pub fn mc_mfpt(
    adj: &[Vec<usize>],
    s: usize,
    v: usize,
    episodes: usize,
    rng: &mut impl Rng,
) -> f64 {
    let mut total_steps = 0u64;
    for _ in 0..episodes {
        let mut at = s;
        let mut steps = 0u64;
        loop {
            at = adj[at][rng.random_range(0..adj[at].len())];
            steps += 1;
            if at == v {
                break;
            }
        }
        total_steps += steps;
    }
    total_steps as f64 / episodes as f64
}

/// Brute-force match lengths: `lambda[i]` is one plus the length of the
/// longest prefix of `seq[i..]` that occurs (at any offset, overlaps
/// allowed) strictly before position `i`; a full-suffix match yields
/// suffix length plus one.
pub fn lambda_oracle(seq: &[u16]) -> Vec<u64> {
    let n = seq.len();
    let mut lambdas = Vec::with_capacity(n);
    for i in 0..n {
        let mut longest = 0usize;
        for start in 0..i {
            let mut len = 0usize;
            while start + len < i && i + len < n && seq[start + len] == seq[i + len] {
                len += 1;
            }
            longest = longest.max(len);
        }
        lambdas.push(longest as u64 + 1);
    }
    lambdas
}
