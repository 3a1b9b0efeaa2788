//! Markov centrality of tree nodes via the random-walk chain.
//!
//! The chain is the uniform unweighted walk on the tree: from a node, each
//! neighbor is chosen with probability 1/degree. Centrality of a node is the
//! node count divided by the column sum of the mean-first-passage-time
//! matrix, so nodes a walk reaches quickly from anywhere score high.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::depnet::SpanningTree;
use crate::error::{Error, Result};

const STATIONARY_RESIDUAL_TOL: f64 = 1e-10;
const FUNDAMENTAL_RESIDUAL_TOL: f64 = 1e-9;

/// Row-stochastic transition matrix of the walk on a tree.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    pub nodes: Vec<String>,
    pub matrix: DMatrix<f64>,
}

/// Stationary distribution of the walk; strictly positive on a tree.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    pub probabilities: DVector<f64>,
}

/// Mean first-passage times; entry `(s, v)` is the expected number of steps
/// for a walk started at `s` to first reach `v`. The diagonal holds mean
/// recurrence times `1/pi(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MfptMatrix {
    pub nodes: Vec<String>,
    pub entries: DMatrix<f64>,
}

/// Markov centrality scores per ticker, all positive.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub scores: BTreeMap<String, f64>,
}

impl CentralityVector {
    pub fn score_of(&self, ticker: &str) -> Option<f64> {
        self.scores.get(ticker).copied()
    }
}

/// Uniform walk over tree neighbors: `P[i][j] = 1/deg(i)` iff `(i,j)` is an
/// edge, else 0.
pub fn walk_transition(tree: &SpanningTree) -> TransitionMatrix {
    let n = tree.n();
    let deg = tree.degrees();
    let mut matrix = DMatrix::zeros(n, n);
    for e in &tree.edges {
        matrix[(e.a, e.b)] = 1.0 / deg[e.a] as f64;
        matrix[(e.b, e.a)] = 1.0 / deg[e.b] as f64;
    }
    TransitionMatrix {
        nodes: tree.nodes.clone(),
        matrix,
    }
}

/// Stationary distribution of the tree walk, `pi(v) = deg(v) / (2 (n-1))`,
/// verified against the fixed-point residual `|pi P - pi|`.
pub fn stationary(p: &TransitionMatrix, tree: &SpanningTree) -> Result<StationaryDistribution> {
    let n = tree.n();
    let deg = tree.degrees();
    let two_m = 2.0 * (n - 1) as f64;
    let probabilities = DVector::from_iterator(n, deg.iter().map(|&d| d as f64 / two_m));

    let image = p.matrix.tr_mul(&probabilities);
    let residual = (&image - &probabilities).amax();
    if residual > STATIONARY_RESIDUAL_TOL {
        return Err(Error::Inconsistent {
            msg: format!("stationary residual {residual:e} exceeds {STATIONARY_RESIDUAL_TOL:e}"),
        });
    }
    Ok(StationaryDistribution { probabilities })
}

/// Fundamental matrix `Z = (I - P + Pi)^-1` where every row of `Pi` is the
/// stationary distribution. Solved by dense LU; the inversion residual is
/// checked before the matrix is released.
pub fn fundamental_matrix(
    p: &TransitionMatrix,
    pi: &StationaryDistribution,
) -> Result<DMatrix<f64>> {
    let n = p.matrix.nrows();
    let ones = DVector::from_element(n, 1.0);
    let pi_rows = &ones * pi.probabilities.transpose();
    let a = DMatrix::identity(n, n) - &p.matrix + pi_rows;

    let z = a.clone().lu().try_inverse().ok_or_else(|| Error::Inconsistent {
        msg: "fundamental matrix system is singular".into(),
    })?;

    let residual = (&a * &z - DMatrix::identity(n, n)).amax();
    if residual > FUNDAMENTAL_RESIDUAL_TOL {
        return Err(Error::Inconsistent {
            msg: format!("fundamental residual {residual:e} exceeds {FUNDAMENTAL_RESIDUAL_TOL:e}"),
        });
    }
    Ok(z)
}

/// Mean first-passage times from the fundamental matrix:
/// `m(s,v) = (z(v,v) - z(s,v)) / pi(v)` off the diagonal and `1/pi(v)` on it.
pub fn mfpt(z: &DMatrix<f64>, pi: &StationaryDistribution, nodes: &[String]) -> MfptMatrix {
    let n = z.nrows();
    let entries = DMatrix::from_fn(n, n, |s, v| {
        if s == v {
            1.0 / pi.probabilities[v]
        } else {
            (z[(v, v)] - z[(s, v)]) / pi.probabilities[v]
        }
    });
    MfptMatrix {
        nodes: nodes.to_vec(),
        entries,
    }
}

/// `score(v) = n / sum_s m(s, v)`, the sum over all sources including the
/// recurrence term `m(v, v)`.
pub fn markov_centrality(m: &MfptMatrix) -> Result<CentralityVector> {
    let n = m.entries.nrows();
    let mut scores = BTreeMap::new();
    for v in 0..n {
        let col_sum: f64 = m.entries.column(v).iter().sum();
        let score = n as f64 / col_sum;
        if !(score.is_finite() && score > 0.0) {
            return Err(Error::Inconsistent {
                msg: format!("non-positive centrality for node {}", m.nodes[v]),
            });
        }
        scores.insert(m.nodes[v].clone(), score);
    }
    Ok(CentralityVector { scores })
}

/// Full chain from tree to centrality scores.
pub fn tree_centrality(tree: &SpanningTree) -> Result<CentralityVector> {
    let p = walk_transition(tree);
    let pi = stationary(&p, tree)?;
    let z = fundamental_matrix(&p, &pi)?;
    let m = mfpt(&z, &pi, &tree.nodes);
    markov_centrality(&m)
}
