//! Self-contained integer maximum-flow solver.
//!
//! Level-graph blocking flow (Dinic). The adjustment networks built by the
//! flow-based refiner are dominated by unit capacities, which this scheme
//! handles well. Capacities are integers because each unit of flow stands
//! for one edge move; the algorithm never produces fractional flow.

use std::collections::VecDeque;
use std::io::Write;

/// Directed capacitated network with a designated source and sink.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    node_count: usize,
    source: usize,
    sink: usize,
    arcs: Vec<(usize, usize, u64)>,
}

impl FlowNetwork {
    pub fn new(node_count: usize, source: usize, sink: usize) -> FlowNetwork {
        assert!(source < node_count && sink < node_count);
        assert_ne!(source, sink);
        FlowNetwork { node_count, source, sink, arcs: Vec::new() }
    }

    /// Add an arc and return its id; per-arc flow is reported in arc order.
    pub fn add_arc(&mut self, tail: usize, head: usize, capacity: u64) -> usize {
        assert!(tail < self.node_count && head < self.node_count);
        self.arcs.push((tail, head, capacity));
        self.arcs.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[(usize, usize, u64)] {
        &self.arcs
    }

    /// Plain-text dump for test fixtures and debugging.
    pub fn dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "nodes {} source {} sink {}", self.node_count, self.source, self.sink)?;
        for &(tail, head, cap) in &self.arcs {
            writeln!(w, "arc {tail} {head} {cap}")?;
        }
        Ok(())
    }
}

/// A maximum flow: total value plus per-arc flow aligned with the arc list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub value: u64,
    pub flow: Vec<u64>,
}

struct Residual {
    // to, residual capacity; arc 2i is forward for input arc i, 2i+1 its twin.
    to: Vec<usize>,
    cap: Vec<u64>,
    head: Vec<Vec<usize>>,
}

pub fn max_flow(net: &FlowNetwork) -> FlowResult {
    let n = net.node_count;
    let mut res = Residual {
        to: Vec::with_capacity(2 * net.arcs.len()),
        cap: Vec::with_capacity(2 * net.arcs.len()),
        head: vec![Vec::new(); n],
    };
    for &(tail, head, cap) in &net.arcs {
        res.head[tail].push(res.to.len());
        res.to.push(head);
        res.cap.push(cap);
        res.head[head].push(res.to.len());
        res.to.push(tail);
        res.cap.push(0);
    }

    let mut value = 0u64;
    let mut level = vec![-1i64; n];
    loop {
        if !bfs_levels(net, &res, &mut level) {
            break;
        }
        let mut next = vec![0usize; n];
        loop {
            let pushed = blocking_dfs(net.source, u64::MAX, net, &mut res, &level, &mut next);
            if pushed == 0 {
                break;
            }
            value += pushed;
        }
    }

    let flow = (0..net.arcs.len()).map(|i| res.cap[2 * i + 1]).collect();
    FlowResult { value, flow }
}

fn bfs_levels(net: &FlowNetwork, res: &Residual, level: &mut [i64]) -> bool {
    level.fill(-1);
    level[net.source] = 0;
    let mut queue = VecDeque::from([net.source]);
    while let Some(u) = queue.pop_front() {
        for &a in &res.head[u] {
            let v = res.to[a];
            if res.cap[a] > 0 && level[v] < 0 {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    level[net.sink] >= 0
}

fn blocking_dfs(
    u: usize,
    limit: u64,
    net: &FlowNetwork,
    res: &mut Residual,
    level: &[i64],
    next: &mut [usize],
) -> u64 {
    if u == net.sink {
        return limit;
    }
    while next[u] < res.head[u].len() {
        let a = res.head[u][next[u]];
        let v = res.to[a];
        if res.cap[a] > 0 && level[v] == level[u] + 1 {
            let pushed = blocking_dfs(v, limit.min(res.cap[a]), net, res, level, next);
            if pushed > 0 {
                res.cap[a] -= pushed;
                res.cap[a ^ 1] += pushed;
                return pushed;
            }
        }
        next[u] += 1;
    }
    0
}
