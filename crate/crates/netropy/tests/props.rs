//! Cross-module invariants: properties that only show up when several
//! stages are chained together.

mod common;

use std::collections::BTreeSet;

use netropy::centrality;
use netropy::depnet::{self, DistanceKind};
use netropy::entropy;
use netropy::ingest::{self, Observation, PriceSeries};
use netropy::pipeline::analyze_year;
use netropy::returns::ReturnSeries;
use netropy::synth::{self, BlockSpec, SynthSpec};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The match-length estimator converges: longer iid samples land closer to
/// the true rate on average.
#[test]
fn entropy_error_shrinks_with_sequence_length() {
    let mean_abs_err = |n: usize| -> f64 {
        (0..20)
            .map(|seed| {
                let series = synth::gen_iid(n, 4, seed);
                let h = entropy::entropy_rate_lz(&series).unwrap().value;
                (h - 2.0).abs()
            })
            .sum::<f64>()
            / 20.0
    };
    let coarse = mean_abs_err(1 << 10);
    let fine = mean_abs_err(1 << 16);
    assert!(
        fine < coarse,
        "mean error did not shrink: {coarse:.4} at 2^10 vs {fine:.4} at 2^16"
    );
}

/// The tie rule makes the tree a function of the ticker set, not of input
/// order.
#[test]
fn mst_edges_ignore_series_order() {
    let blocks = [
        BlockSpec { size: 6, rho: 0.5 },
        BlockSpec { size: 5, rho: 0.3 },
    ];
    let rets = synth::gen_correlated_returns(&blocks, 400, 9).unwrap();

    let edge_set = |panel: &[ReturnSeries]| -> BTreeSet<(String, String)> {
        let corr = depnet::pearson_matrix(panel).unwrap();
        let (_, tree) = depnet::correlation_mst(&corr, DistanceKind::OneMinusRhoSquared).unwrap();
        tree.edges
            .iter()
            .map(|e| {
                let (a, b) = (tree.nodes[e.a].clone(), tree.nodes[e.b].clone());
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect()
    };

    let base = edge_set(&rets);
    let mut shuffled = rets.clone();
    shuffled.reverse();
    assert_eq!(edge_set(&shuffled), base);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        shuffled.shuffle(&mut rng);
        assert_eq!(edge_set(&shuffled), base);
    }
}

/// Multiplying every close by a power of two is exact in binary floating
/// point, so the whole year analysis — returns, correlations, tree,
/// centrality, entropy — must come out bit-identical.
#[test]
fn power_of_two_price_scaling_is_invisible_downstream() {
    let spec = SynthSpec::BlockCorrelatedGaussian {
        n: 300,
        seed: 21,
        blocks: vec![
            BlockSpec { size: 4, rho: 0.5 },
            BlockSpec { size: 3, rho: 0.2 },
        ],
    };
    let (series, _) = synth::materialize(&spec).unwrap();
    let scaled: Vec<PriceSeries> = series
        .iter()
        .map(|s| {
            let obs = s
                .observations()
                .iter()
                .map(|o| Observation {
                    date: o.date,
                    close: o.close * 4.0,
                })
                .collect();
            PriceSeries::new(s.ticker(), s.sector(), obs).unwrap()
        })
        .collect();

    let base = analyze_year(
        &ingest::slice_year(&series, 2000).unwrap(),
        4,
        DistanceKind::OneMinusRhoSquared,
    )
    .unwrap();
    let rescaled = analyze_year(
        &ingest::slice_year(&scaled, 2000).unwrap(),
        4,
        DistanceKind::OneMinusRhoSquared,
    )
    .unwrap();

    assert_eq!(base.metrics.len(), rescaled.metrics.len());
    for (a, b) in base.metrics.iter().zip(&rescaled.metrics) {
        assert_eq!(a.ticker, b.ticker);
        assert_eq!(a.mean_return.to_bits(), b.mean_return.to_bits());
        assert_eq!(a.sd_return.to_bits(), b.sd_return.to_bits());
        assert_eq!(a.entropy_bits.to_bits(), b.entropy_bits.to_bits());
        assert_eq!(a.centrality.to_bits(), b.centrality.to_bits());
    }
    for (ea, eb) in base.tree.edges.iter().zip(&rescaled.tree.edges) {
        assert_eq!((ea.a, ea.b), (eb.a, eb.b));
        assert_eq!(ea.weight.to_bits(), eb.weight.to_bits());
    }
}

/// Breadth-first hop distances over an edge list.
fn hop_distances(n: usize, edges: &[(usize, usize)], from: usize) -> Vec<usize> {
    let adj = common::adjacency(n, edges);
    let mut dist = vec![usize::MAX; n];
    dist[from] = 0;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

proptest! {
    /// Correlation and distance matrices stay well formed on arbitrary
    /// panels, and the tree built from them spans every node.
    #[test]
    fn random_panels_yield_wellformed_networks(
        seed in 0u64..1000,
        m in 3usize..8,
        len in 8usize..40,
        alt in proptest::bool::ANY,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let panel: Vec<ReturnSeries> = (0..m)
            .map(|i| ReturnSeries {
                ticker: format!("T{i:02}"),
                values: (0..len).map(|_| rng.random::<f64>() - 0.5).collect(),
            })
            .collect();
        let corr = depnet::pearson_matrix(&panel).unwrap();
        let bound = if alt { 2.0 } else { 1.0 };
        for i in 0..m {
            prop_assert_eq!(corr.get(i, i).to_bits(), 1.0f64.to_bits());
            for j in 0..m {
                prop_assert_eq!(corr.get(i, j).to_bits(), corr.get(j, i).to_bits());
                prop_assert!(corr.get(i, j).abs() <= 1.0);
            }
        }
        let kind = if alt { DistanceKind::SqrtTwoOneMinusRho } else { DistanceKind::OneMinusRhoSquared };
        let (dist, tree) = depnet::correlation_mst(&corr, kind).unwrap();
        for i in 0..m {
            for j in 0..m {
                prop_assert!((0.0..=bound).contains(&dist.get(i, j)));
            }
        }
        prop_assert_eq!(tree.edges.len(), m - 1);
        let edges: Vec<(usize, usize)> = tree.edges.iter().map(|e| (e.a, e.b)).collect();
        let reach = hop_distances(m, &edges, 0);
        prop_assert!(reach.iter().all(|&d| d != usize::MAX), "tree is disconnected");
        for e in &tree.edges {
            prop_assert_eq!(e.weight.to_bits(), dist.get(e.a, e.b).to_bits());
            let rho = e.rho.unwrap();
            let want = if alt { (2.0 * (1.0 - rho)).sqrt() } else { 1.0 - rho * rho };
            prop_assert_eq!(e.weight.to_bits(), want.to_bits());
        }
    }

    /// A walk crosses at most one edge per step, so every mean first-passage
    /// time is bounded below by the hop distance; diagonals are the exact
    /// return times 2(n-1)/deg(v).
    #[test]
    fn mfpt_dominates_hop_distance_on_random_trees(seed in 0u64..1000, n in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = common::random_tree(n, &mut rng);
        let tree = netropy::depnet::SpanningTree {
            nodes: (0..n).map(|i| format!("N{i:02}")).collect(),
            edges: edges
                .iter()
                .map(|&(a, b)| netropy::depnet::TreeEdge { a, b, weight: 1.0, rho: None })
                .collect(),
        };
        let p = centrality::walk_transition(&tree);
        let pi = centrality::stationary(&p, &tree).unwrap();
        let z = centrality::fundamental_matrix(&p, &pi).unwrap();
        let m = centrality::mfpt(&z, &pi, &tree.nodes);
        let deg = tree.degrees();
        for v in 0..n {
            let hops = hop_distances(n, &edges, v);
            for s in 0..n {
                if s != v {
                    prop_assert!(m.entries[(s, v)] >= hops[s] as f64 - 1e-9);
                }
            }
            let want_return = 2.0 * (n - 1) as f64 / deg[v] as f64;
            prop_assert!((m.entries[(v, v)] - want_return).abs() <= 1e-9);
        }
    }
}
