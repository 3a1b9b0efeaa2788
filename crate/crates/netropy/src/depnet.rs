//! Correlation-based dependency networks and their minimal spanning trees.

use crate::error::{Error, Result};
use crate::returns::ReturnSeries;

/// Symmetric pairwise Pearson coefficients with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub tickers: Vec<String>,
    entries: Vec<f64>,
}

/// Symmetric pairwise distances with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub tickers: Vec<String>,
    entries: Vec<f64>,
}

macro_rules! square_matrix_impl {
    ($ty:ident) => {
        impl $ty {
            pub fn from_rows(tickers: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
                let n = tickers.len();
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Inconsistent {
                        msg: format!("{} rows do not form an {n}x{n} matrix", stringify!($ty)),
                    });
                }
                let mut entries = Vec::with_capacity(n * n);
                for row in rows {
                    entries.extend_from_slice(row);
                }
                Ok($ty { tickers, entries })
            }

            pub fn n(&self) -> usize {
                self.tickers.len()
            }

            pub fn get(&self, i: usize, j: usize) -> f64 {
                self.entries[i * self.n() + j]
            }
        }
    };
}

square_matrix_impl!(CorrelationMatrix);
square_matrix_impl!(DistanceMatrix);

impl DistanceMatrix {
    fn set(&mut self, i: usize, j: usize, v: f64) {
        let n = self.n();
        self.entries[i * n + j] = v;
    }
}

/// How a correlation becomes a distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceKind {
    /// `d = 1 - rho^2`, in `[0, 1]`.
    #[default]
    OneMinusRhoSquared,
    /// `d = sqrt(2 (1 - rho))`, in `[0, 2]`.
    SqrtTwoOneMinusRho,
}

/// An edge of the dependency tree. `a < b` index into the node list.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
    /// Correlation of the endpoints, when the tree was built from one.
    pub rho: Option<f64>,
}

/// The n-node, (n-1)-edge minimal dependency skeleton.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    pub nodes: Vec<String>,
    pub edges: Vec<TreeEdge>,
}

impl SpanningTree {
    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Neighbor lists, sorted per node.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n()];
        for e in &self.edges {
            deg[e.a] += 1;
            deg[e.b] += 1;
        }
        deg
    }
}

/// Sample Pearson coefficients over aligned return series.
///
/// Entries outside `[-1, 1]` by more than 1e-12 are an internal error; within
/// that tolerance they are clamped.
pub fn pearson_matrix(panel: &[ReturnSeries]) -> Result<CorrelationMatrix> {
    if panel.len() < 2 {
        return Err(Error::NotEnoughData {
            what: "pearson_matrix".into(),
            min: 2,
            got: panel.len(),
        });
    }
    let len = panel[0].values.len();
    if len < 2 {
        return Err(Error::NotEnoughData {
            what: "pearson_matrix series length".into(),
            min: 2,
            got: len,
        });
    }
    for s in panel {
        if s.values.len() != len {
            return Err(Error::InvalidSeries {
                ticker: s.ticker.clone(),
                msg: format!("length {} differs from panel length {len}", s.values.len()),
            });
        }
    }

    // Center once, reject zero-variance series up front.
    let mut centered: Vec<Vec<f64>> = Vec::with_capacity(panel.len());
    let mut norms: Vec<f64> = Vec::with_capacity(panel.len());
    for s in panel {
        let m = s.values.iter().sum::<f64>() / len as f64;
        let c: Vec<f64> = s.values.iter().map(|v| v - m).collect();
        let ss: f64 = c.iter().map(|v| v * v).sum();
        if ss <= 0.0 {
            return Err(Error::ZeroVariance {
                ticker: s.ticker.clone(),
            });
        }
        centered.push(c);
        norms.push(ss.sqrt());
    }

    let n = panel.len();
    let mut rows = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        rows[i][i] = 1.0;
        for j in (i + 1)..n {
            let dot: f64 = centered[i]
                .iter()
                .zip(centered[j].iter())
                .map(|(a, b)| a * b)
                .sum();
            let mut rho = dot / (norms[i] * norms[j]);
            if rho.abs() > 1.0 {
                if rho.abs() - 1.0 > 1e-12 {
                    return Err(Error::Inconsistent {
                        msg: format!(
                            "correlation {} out of range for pair ({}, {})",
                            rho, panel[i].ticker, panel[j].ticker
                        ),
                    });
                }
                rho = rho.signum();
            }
            rows[i][j] = rho;
            rows[j][i] = rho;
        }
    }

    CorrelationMatrix::from_rows(panel.iter().map(|s| s.ticker.clone()).collect(), &rows)
}

/// `d = 1 - rho^2` with the diagonal forced to exactly zero.
pub fn to_distance(corr: &CorrelationMatrix) -> DistanceMatrix {
    to_distance_with(corr, DistanceKind::OneMinusRhoSquared)
}

pub fn to_distance_with(corr: &CorrelationMatrix, kind: DistanceKind) -> DistanceMatrix {
    let n = corr.n();
    let mut dist = DistanceMatrix {
        tickers: corr.tickers.clone(),
        entries: vec![0.0; n * n],
    };
    for i in 0..n {
        for j in 0..n {
            let v = if i == j {
                0.0
            } else {
                let rho = corr.get(i, j);
                match kind {
                    DistanceKind::OneMinusRhoSquared => 1.0 - rho * rho,
                    DistanceKind::SqrtTwoOneMinusRho => (2.0 * (1.0 - rho)).max(0.0).sqrt(),
                }
            };
            dist.set(i, j, v);
        }
    }
    dist
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.rank[ra] < self.rank[rb] {
            self.parent[ra] = rb;
        } else {
            self.parent[rb] = ra;
            if self.rank[ra] == self.rank[rb] {
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Kruskal's algorithm over the complete graph on the matrix's tickers.
///
/// Candidate edges are scanned in ascending weight; equal weights are broken
/// lexicographically by `(min ticker, max ticker)` so the tree is identical
/// across runs and platforms.
pub fn build_mst(dist: &DistanceMatrix) -> Result<SpanningTree> {
    let n = dist.n();
    if n < 2 {
        return Err(Error::NotEnoughData {
            what: "build_mst".into(),
            min: 2,
            got: n,
        });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !dist.get(i, j).is_finite() {
                return Err(Error::Inconsistent {
                    msg: format!(
                        "non-finite distance for pair ({}, {})",
                        dist.tickers[i], dist.tickers[j]
                    ),
                });
            }
        }
    }

    let mut candidates: Vec<(usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            candidates.push((i, j));
        }
    }
    let tie_key = |&(i, j): &(usize, usize)| {
        let (ti, tj) = (&dist.tickers[i], &dist.tickers[j]);
        if ti <= tj {
            (ti, tj)
        } else {
            (tj, ti)
        }
    };
    candidates.sort_by(|x, y| {
        dist.get(x.0, x.1)
            .total_cmp(&dist.get(y.0, y.1))
            .then_with(|| tie_key(x).cmp(&tie_key(y)))
    });

    let mut dsu = DisjointSet::new(n);
    let mut edges = Vec::with_capacity(n - 1);
    for (i, j) in candidates {
        if dsu.union(i, j) {
            edges.push(TreeEdge {
                a: i,
                b: j,
                weight: dist.get(i, j),
                rho: None,
            });
            if edges.len() == n - 1 {
                break;
            }
        }
    }
    debug_assert_eq!(edges.len(), n - 1);

    Ok(SpanningTree {
        nodes: dist.tickers.clone(),
        edges,
    })
}

/// Distance conversion plus tree extraction, with each edge annotated by the
/// correlation of its endpoints.
pub fn correlation_mst(
    corr: &CorrelationMatrix,
    kind: DistanceKind,
) -> Result<(DistanceMatrix, SpanningTree)> {
    let dist = to_distance_with(corr, kind);
    let mut tree = build_mst(&dist)?;
    for e in &mut tree.edges {
        e.rho = Some(corr.get(e.a, e.b));
    }
    Ok((dist, tree))
}
