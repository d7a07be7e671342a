//! Instance generators: worst-case families with known-optimal and
//! adversarial partitions, random initial assignments, synthetic
//! power-law graphs, and bound diagnostics.

use std::collections::HashSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A generated graph together with an optimal partition, an adversarial
/// partition that no local adjustment can improve, and the exact expected
/// replication factors of both (as num/den pairs).
#[derive(Clone, Debug)]
pub struct WorstCaseInstance {
    pub graph: Graph,
    pub k: usize,
    pub optimal: Vec<usize>,
    pub adversarial: Vec<usize>,
    pub rf_optimal: (u64, u64),
    pub rf_adversarial: (u64, u64),
}

/// `k = p(p-1)/2` disjoint copies of the complete graph on `p` vertices,
/// each with exactly `k` edges. The optimal partition puts one clique per
/// part (RF 1). The adversarial partition gives each part exactly one edge
/// from each clique, via one canonical bijection between a clique's
/// lexicographically ordered edges and the parts; its RF is `p - 1`, which
/// equals the average degree, and it has no adjustable edges.
pub fn gen_clique_worstcase(p: usize) -> Result<WorstCaseInstance> {
    if p < 3 {
        return Err(Error::InvalidParam("clique family needs p >= 3".into()));
    }
    let k = p * (p - 1) / 2;
    let n = k * p;
    let mut edges = Vec::with_capacity(k * k);
    let mut optimal = Vec::with_capacity(k * k);
    let mut adversarial = Vec::with_capacity(k * k);
    for clique in 0..k {
        let base = clique * p;
        let mut rank = 0;
        for a in 0..p {
            for b in (a + 1)..p {
                edges.push((base + a, base + b));
                optimal.push(clique);
                adversarial.push(rank);
                rank += 1;
            }
        }
    }
    let graph = Graph::from_edges(n, &edges)?;
    Ok(WorstCaseInstance {
        graph,
        k,
        optimal,
        adversarial,
        rf_optimal: (1, 1),
        rf_adversarial: ((p - 1) as u64, 1),
    })
}

/// `k` disjoint complete bipartite graphs K_{k^2,k}. The optimal partition
/// puts one component per part (RF 1). The adversarial partition assigns,
/// within each component, all edges of the j-th small-side vertex to part
/// j; its RF is (k^2+1)/(k+1) and it has no adjustable edges.
pub fn gen_bipartite_worstcase(k: usize) -> Result<WorstCaseInstance> {
    if k < 2 {
        return Err(Error::InvalidParam("bipartite family needs k >= 2".into()));
    }
    let per_component = k * k + k;
    let n = k * per_component;
    let mut edges = Vec::with_capacity(k * k * k * k);
    let mut optimal = Vec::new();
    let mut adversarial = Vec::new();
    for comp in 0..k {
        let base = comp * per_component;
        // Large side first (k^2 ids), then the small side (k ids).
        for u in 0..k * k {
            for j in 0..k {
                edges.push((base + u, base + k * k + j));
                optimal.push(comp);
                adversarial.push(j);
            }
        }
    }
    let graph = Graph::from_edges(n, &edges)?;
    Ok(WorstCaseInstance {
        graph,
        k,
        optimal,
        adversarial,
        rf_optimal: (1, 1),
        rf_adversarial: ((k * k + 1) as u64, (k + 1) as u64),
    })
}

/// Shuffle the edges with a seeded generator and deal them round-robin
/// into `k` parts. Part sizes differ by at most one, so the result is
/// alpha-balanced for any alpha >= 1.
pub fn initial_random(graph: &Graph, k: usize, seed: u64) -> Vec<usize> {
    let m = graph.edge_count();
    let mut order: Vec<usize> = (0..m).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut assign = vec![0usize; m];
    for (pos, &e) in order.iter().enumerate() {
        assign[e] = pos % k;
    }
    assign
}

/// Deterministic baseline: edge id modulo k.
pub fn initial_hash(graph: &Graph, k: usize) -> Vec<usize> {
    (0..graph.edge_count()).map(|e| e % k).collect()
}

/// Generate a simple graph with a skewed degree distribution: vertex
/// weights are drawn from a power law with the given exponent, then edges
/// are sampled with endpoint probability proportional to weight, rejecting
/// loops and duplicates. Deterministic per seed.
pub fn gen_random_powerlaw(n: usize, m: usize, exponent: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParam("power-law graph needs n >= 2".into()));
    }
    if m == 0 || m > n * (n - 1) / 2 {
        return Err(Error::InvalidParam(format!(
            "m = {m} infeasible for a simple graph on {n} vertices"
        )));
    }
    if exponent <= 1.0 {
        return Err(Error::InvalidParam("exponent must be > 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Pareto-distributed weights, capped so no vertex could demand more
    // than n-1 distinct neighbors.
    let cap = (n - 1) as f64;
    let weights: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random_range(0.0..1.0);
            (1.0 - u).powf(-1.0 / (exponent - 1.0)).min(cap)
        })
        .collect();
    let mut cumulative = Vec::with_capacity(n);
    let mut total = 0.0;
    for &w in &weights {
        total += w;
        cumulative.push(total);
    }
    let pick = |rng: &mut ChaCha8Rng| -> usize {
        let x = rng.random_range(0.0..total);
        cumulative.partition_point(|&c| c <= x).min(n - 1)
    };

    let mut chosen: HashSet<(usize, usize)> = HashSet::with_capacity(m);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m);
    let mut rejections = 0usize;
    let rejection_limit = 100 * m + 10_000;
    while edges.len() < m && rejections < rejection_limit {
        let u = pick(&mut rng);
        let v = pick(&mut rng);
        if u == v {
            rejections += 1;
            continue;
        }
        let e = (u.min(v), u.max(v));
        if chosen.insert(e) {
            edges.push(e);
        } else {
            rejections += 1;
        }
    }
    // Dense corner: fill deterministically instead of rejection-sampling
    // towards a nearly complete graph.
    if edges.len() < m {
        'fill: for u in 0..n {
            for v in (u + 1)..n {
                if chosen.insert((u, v)) {
                    edges.push((u, v));
                    if edges.len() == m {
                        break 'fill;
                    }
                }
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// min(k, average degree): an upper bound on the replication factor of any
/// valid partition, hence on the approximation ratio against an optimum
/// of at least 1.
pub fn rf_upper_bound(graph: &Graph, k: usize) -> f64 {
    (k as f64).min(graph.average_degree())
}

/// A hand-built ten-vertex instance exercising one full block adjustment.
///
/// Part 0 holds a three-vertex block {0, 1, 2} whose three incident
/// adjustable edges each have exactly one foreign reachable part: edges 2
/// and 4 can only go to part 1, edge 3 only to part 2. Part 3 overlaps the
/// block in exactly two vertices, making it the unique best destination.
/// Adjusting the block moves its two edges to part 3 and relocates the
/// three adjustable edges, cutting the copy count by exactly 2.
#[derive(Clone, Debug)]
pub struct BlockMoveExample {
    pub graph: Graph,
    pub k: usize,
    pub alpha_str: &'static str,
    pub assign: Vec<usize>,
    /// Vertex set of the block in part 0.
    pub block_vertices: Vec<usize>,
    /// Expected destination part of the block.
    pub expected_dest: usize,
    /// Forced relocation target per adjustable edge id.
    pub expected_routes: Vec<(usize, usize)>,
    /// Exact change in the copy count after the adjustment.
    pub expected_copies_delta: i64,
}

pub fn gen_block_move_example() -> BlockMoveExample {
    // Vertices: block {0,1,2}; outside neighbors 3,4,5; anchor hub 6;
    // helpers 7 (part 1), 8 (part 2), 9 (part 3).
    let edges = vec![
        (0, 2), // 0: block edge
        (1, 2), // 1: block edge
        (2, 3), // 2: adjustable, reachable only to part 1
        (1, 4), // 3: adjustable, reachable only to part 2
        (2, 5), // 4: adjustable, reachable only to part 1
        (3, 6), // 5: anchor keeping 3 in part 0
        (4, 6), // 6: anchor keeping 4 in part 0
        (5, 6), // 7: anchor keeping 5 in part 0
        (3, 7), // 8: part 1
        (5, 7), // 9: part 1
        (2, 7), // 10: part 1
        (1, 8), // 11: part 2
        (4, 8), // 12: part 2
        (0, 9), // 13: part 3
        (1, 9), // 14: part 3
    ];
    let graph = Graph::from_edges(10, &edges).unwrap();
    let assign = vec![0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 2, 2, 3, 3];
    BlockMoveExample {
        graph,
        k: 4,
        alpha_str: "2.2",
        assign,
        block_vertices: vec![0, 1, 2],
        expected_dest: 3,
        expected_routes: vec![(2, 1), (3, 2), (4, 1)],
        expected_copies_delta: -2,
    }
}
