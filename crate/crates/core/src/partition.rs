//! Mutable k-edge-partition state with incremental bookkeeping.
//!
//! A [`Partition`] assigns every edge to one of `k` parts and maintains,
//! per vertex, the multiset of parts its incident edges live in. From that
//! it answers replication-factor, balance, reachability and adjustability
//! queries in (near) constant time, and decomposes parts into blocks:
//! connected components of a part's subgraph after removing all adjustable
//! edges.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Balance parameter, a decimal >= 1 with at most three fractional digits,
/// held exactly in thousandths so capacity decisions are bit-exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alpha {
    millis: u64,
}

impl Alpha {
    pub fn from_millis(millis: u64) -> Result<Alpha> {
        if millis < 1000 {
            return Err(Error::InvalidAlpha(format!("{}.{:03}", millis / 1000, millis % 1000)));
        }
        Ok(Alpha { millis })
    }

    pub fn millis(self) -> u64 {
        self.millis
    }

    pub fn as_f64(self) -> f64 {
        self.millis as f64 / 1000.0
    }

    /// ceil(alpha * m / k) over integers.
    pub fn capacity(self, m: usize, k: usize) -> usize {
        let num = self.millis as u128 * m as u128;
        let den = 1000u128 * k as u128;
        num.div_ceil(den) as usize
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Alpha> {
        let bad = || Error::InvalidAlpha(s.to_string());
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() || frac_part.len() > 3 {
            return Err(bad());
        }
        let int: u64 = int_part.parse().map_err(|_| bad())?;
        let mut frac: u64 = 0;
        if !frac_part.is_empty() {
            frac = frac_part.parse().map_err(|_| bad())?;
            for _ in frac_part.len()..3 {
                frac *= 10;
            }
        }
        Alpha::from_millis(int * 1000 + frac)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.millis.is_multiple_of(1000) {
            write!(f, "{}", self.millis / 1000)
        } else {
            let s = format!("{:03}", self.millis % 1000);
            write!(f, "{}.{}", self.millis / 1000, s.trim_end_matches('0'))
        }
    }
}

/// A connected component of one part's subgraph after removing all
/// adjustable edges. `edges` is empty iff this is a vertex block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub part: usize,
    /// Sorted vertex set.
    pub vertices: Vec<usize>,
    /// Sorted edge-id set; empty for vertex blocks.
    pub edges: Vec<usize>,
}

impl Block {
    pub fn is_vertex_block(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn min_vertex(&self) -> usize {
        self.vertices[0]
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

/// Record of a single edge move, sufficient to undo it exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveDelta {
    pub edge: usize,
    pub from: usize,
    pub to: usize,
    pub copies_delta: i64,
}

/// Block counts over all parts, with a histogram keyed by vertex-set size.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BlockStats {
    pub count: usize,
    pub histogram: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct Partition {
    graph: Arc<Graph>,
    k: usize,
    alpha: Alpha,
    cap: usize,
    assign: Vec<usize>,
    part_size: Vec<usize>,
    part_edges: Vec<BTreeSet<usize>>,
    /// Per vertex: part id -> number of incident edges assigned to it.
    vertex_parts: Vec<BTreeMap<usize, usize>>,
    /// Number of (part, vertex) pairs with a positive multiplicity.
    copies: usize,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
            && self.alpha == other.alpha
            && self.assign == other.assign
            && self.part_size == other.part_size
            && self.vertex_parts == other.vertex_parts
            && self.copies == other.copies
    }
}

impl Partition {
    pub fn new(graph: Arc<Graph>, k: usize, alpha: Alpha, assign: Vec<usize>) -> Result<Partition> {
        if k == 0 {
            return Err(Error::InvalidParam("k must be at least 1".into()));
        }
        let m = graph.edge_count();
        if assign.len() != m {
            return Err(Error::InvalidParam(format!(
                "assignment covers {} edges, graph has {m}",
                assign.len()
            )));
        }
        if let Some((e, &p)) = assign.iter().enumerate().find(|&(_, &p)| p >= k) {
            return Err(Error::InvalidParam(format!(
                "edge {e} assigned to part {p}, but k = {k}"
            )));
        }

        let cap = alpha.capacity(m, k);
        let mut part_size = vec![0usize; k];
        let mut part_edges = vec![BTreeSet::new(); k];
        let mut vertex_parts = vec![BTreeMap::new(); graph.vertex_count()];
        let mut copies = 0usize;
        for (e, &p) in assign.iter().enumerate() {
            part_size[p] += 1;
            part_edges[p].insert(e);
            let (u, v) = graph.edge(e);
            for w in [u, v] {
                let slot = vertex_parts[w].entry(p).or_insert(0);
                if *slot == 0 {
                    copies += 1;
                }
                *slot += 1;
            }
        }

        Ok(Partition {
            graph,
            k,
            alpha,
            cap,
            assign,
            part_size,
            part_edges,
            vertex_parts,
            copies,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> Arc<Graph> {
        Arc::clone(&self.graph)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    /// ceil(alpha * m / k), the per-part edge capacity.
    pub fn capacity(&self) -> usize {
        self.cap
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    pub fn part_of(&self, e: usize) -> usize {
        self.assign[e]
    }

    pub fn part_size(&self, i: usize) -> usize {
        self.part_size[i]
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_size
    }

    /// Edge ids of part `i` in ascending order.
    pub fn part_edges(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.part_edges[i].iter().copied()
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    /// Number of edges of part `i` incident to `v`.
    pub fn multiplicity(&self, i: usize, v: usize) -> usize {
        self.vertex_parts[v].get(&i).copied().unwrap_or(0)
    }

    pub fn vertex_in_part(&self, v: usize, i: usize) -> bool {
        self.vertex_parts[v].contains_key(&i)
    }

    /// Parts containing at least one edge incident to `v`, ascending.
    pub fn parts_of_vertex(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.vertex_parts[v].keys().copied()
    }

    /// copies / n.
    pub fn replication_factor(&self) -> f64 {
        self.copies as f64 / self.graph.vertex_count() as f64
    }

    pub fn is_balanced(&self) -> bool {
        self.part_size.iter().all(|&s| s <= self.cap)
    }

    /// Parts containing both endpoints of `e`; always contains `part_of(e)`.
    pub fn reachable_parts(&self, e: usize) -> Vec<usize> {
        let (u, v) = self.graph.edge(e);
        let (small, large) = if self.vertex_parts[u].len() <= self.vertex_parts[v].len() {
            (&self.vertex_parts[u], &self.vertex_parts[v])
        } else {
            (&self.vertex_parts[v], &self.vertex_parts[u])
        };
        small
            .keys()
            .copied()
            .filter(|p| large.contains_key(p))
            .collect()
    }

    /// True iff some part other than the edge's own contains both endpoints.
    pub fn is_adjustable(&self, e: usize) -> bool {
        let own = self.assign[e];
        let (u, v) = self.graph.edge(e);
        let (small, large) = if self.vertex_parts[u].len() <= self.vertex_parts[v].len() {
            (&self.vertex_parts[u], &self.vertex_parts[v])
        } else {
            (&self.vertex_parts[v], &self.vertex_parts[u])
        };
        small
            .keys()
            .any(|&p| p != own && large.contains_key(&p))
    }

    /// Move edge `e` to part `to`, updating all bookkeeping incrementally.
    /// Balance is not enforced here; callers enforce it per algorithm.
    pub fn move_edge(&mut self, e: usize, to: usize) -> MoveDelta {
        assert!(e < self.assign.len(), "edge {e} out of range");
        assert!(to < self.k, "part {to} out of range");
        let from = self.assign[e];
        assert_ne!(from, to, "edge {e} is already in part {to}");

        let (u, v) = self.graph.edge(e);
        let mut copies_delta = 0i64;
        for w in [u, v] {
            match self.vertex_parts[w].entry(from) {
                Entry::Occupied(mut slot) => {
                    *slot.get_mut() -= 1;
                    if *slot.get() == 0 {
                        slot.remove();
                        copies_delta -= 1;
                    }
                }
                Entry::Vacant(_) => unreachable!("bookkeeping out of sync at vertex {w}"),
            }
            let slot = self.vertex_parts[w].entry(to).or_insert(0);
            if *slot == 0 {
                copies_delta += 1;
            }
            *slot += 1;
        }
        self.assign[e] = to;
        self.part_size[from] -= 1;
        self.part_size[to] += 1;
        self.part_edges[from].remove(&e);
        self.part_edges[to].insert(e);
        self.copies = (self.copies as i64 + copies_delta) as usize;

        MoveDelta { edge: e, from, to, copies_delta }
    }

    /// Undo a move exactly; the partition returns to its previous state.
    pub fn undo_move(&mut self, delta: MoveDelta) {
        let back = self.move_edge(delta.edge, delta.from);
        debug_assert_eq!(back.copies_delta, -delta.copies_delta);
    }

    /// Decompose part `i` into blocks: connected components of the part's
    /// subgraph restricted to non-adjustable edges. Vertices of the part
    /// left with no such edge become vertex blocks. Blocks are returned
    /// sorted by minimum vertex id.
    pub fn blocks(&self, i: usize) -> Vec<Block> {
        let edge_ids: Vec<usize> = self.part_edges[i].iter().copied().collect();
        let mut verts: BTreeSet<usize> = BTreeSet::new();
        for &e in &edge_ids {
            let (u, v) = self.graph.edge(e);
            verts.insert(u);
            verts.insert(v);
        }
        let verts: Vec<usize> = verts.into_iter().collect();
        let index: BTreeMap<usize, usize> =
            verts.iter().enumerate().map(|(idx, &v)| (v, idx)).collect();

        let mut dsu = DisjointSets::new(verts.len());
        let mut kept: Vec<usize> = Vec::new();
        for &e in &edge_ids {
            if self.is_adjustable(e) {
                continue;
            }
            let (u, v) = self.graph.edge(e);
            dsu.union(index[&u], index[&v]);
            kept.push(e);
        }

        let mut vertex_groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (idx, &v) in verts.iter().enumerate() {
            vertex_groups.entry(dsu.find(idx)).or_default().push(v);
        }
        let mut edge_groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &e in &kept {
            let (u, _) = self.graph.edge(e);
            edge_groups.entry(dsu.find(index[&u])).or_default().push(e);
        }

        let mut blocks: Vec<Block> = vertex_groups
            .into_iter()
            .map(|(root, vertices)| Block {
                part: i,
                vertices,
                edges: edge_groups.remove(&root).unwrap_or_default(),
            })
            .collect();
        blocks.sort_by_key(|b| b.min_vertex());
        blocks
    }

    /// Adjustable edges of the block's part with at least one endpoint in
    /// the block's vertex set. This includes adjustable edges with both
    /// endpoints inside the block; all of them must relocate before the
    /// block's vertices can leave the part.
    pub fn incident_adjustable(&self, block: &Block) -> Vec<usize> {
        let mut out: BTreeSet<usize> = BTreeSet::new();
        for &v in &block.vertices {
            for &(_, e) in self.graph.neighbors(v) {
                if self.assign[e] == block.part
                    && !block.contains_edge(e)
                    && self.is_adjustable(e)
                {
                    out.insert(e);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Verify `block` is still a current block of its part and return its
    /// incident adjustable edges. Fails if any block edge left the part or
    /// became adjustable, if a block vertex left the part, or if the block
    /// stopped being maximal (a touching part-edge turned non-adjustable).
    pub fn validate_block(&self, block: &Block) -> Result<Vec<usize>> {
        let i = block.part;
        for &e in &block.edges {
            if self.assign[e] != i {
                return Err(Error::StaleBlock(format!("edge {e} left part {i}")));
            }
            if self.is_adjustable(e) {
                return Err(Error::StaleBlock(format!("block edge {e} became adjustable")));
            }
        }
        for &v in &block.vertices {
            if !self.vertex_in_part(v, i) {
                return Err(Error::StaleBlock(format!("vertex {v} left part {i}")));
            }
        }
        let mut incident: BTreeSet<usize> = BTreeSet::new();
        for &v in &block.vertices {
            for &(_, e) in self.graph.neighbors(v) {
                if self.assign[e] == i && !block.contains_edge(e) {
                    if !self.is_adjustable(e) {
                        return Err(Error::StaleBlock(format!(
                            "edge {e} merged into the block's component"
                        )));
                    }
                    incident.insert(e);
                }
            }
        }
        Ok(incident.into_iter().collect())
    }

    /// Number of vertex copies eliminated by moving `block` into part `j`:
    /// |V(C) ∩ V(E_j)|.
    pub fn gain(&self, block: &Block, j: usize) -> usize {
        debug_assert_ne!(j, block.part);
        block
            .vertices
            .iter()
            .filter(|&&v| self.vertex_parts[v].contains_key(&j))
            .count()
    }

    /// Block counts and size histogram over all parts.
    pub fn block_stats(&self) -> BlockStats {
        let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
        let mut count = 0;
        for i in 0..self.k {
            for block in self.blocks(i) {
                count += 1;
                *histogram.entry(block.vertices.len()).or_insert(0) += 1;
            }
        }
        BlockStats { count, histogram: histogram.into_iter().collect() }
    }

    /// Recompute every derived field from `assign` and compare with the
    /// incrementally maintained state. Returns the first discrepancy.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        let fresh = Partition::new(
            Arc::clone(&self.graph),
            self.k,
            self.alpha,
            self.assign.clone(),
        )
        .map_err(|e| e.to_string())?;
        if fresh.part_size != self.part_size {
            return Err("part sizes diverge from scratch recomputation".into());
        }
        if fresh.part_edges != self.part_edges {
            return Err("part edge sets diverge from scratch recomputation".into());
        }
        if fresh.vertex_parts != self.vertex_parts {
            return Err("vertex multiplicities diverge from scratch recomputation".into());
        }
        if fresh.copies != self.copies {
            return Err(format!(
                "copies diverge: incremental {} vs scratch {}",
                self.copies, fresh.copies
            ));
        }
        let bound_ok = self.copies <= 2 * self.graph.edge_count()
            && self.copies <= self.k * self.graph.vertex_count();
        if !bound_ok {
            return Err("copies exceed the min(k, average degree) bound".into());
        }
        Ok(())
    }
}

/// Union-find over `0..len` with union by size and path halving.
struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(len: usize) -> DisjointSets {
        DisjointSets { parent: (0..len).collect(), size: vec![1; len] }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut x = x;
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn alpha(s: &str) -> Alpha {
        s.parse().unwrap()
    }

    fn triangle() -> Arc<Graph> {
        Arc::new(Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap())
    }

    fn k4() -> Arc<Graph> {
        Arc::new(
            Graph::from_edges(4, &[(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)]).unwrap(),
        )
    }

    /// K4 with parts {01,23}, {02,13}, {03,12}: every part spans all four
    /// vertices, so every edge is adjustable everywhere.
    fn k4_three_parts() -> Partition {
        Partition::new(k4(), 3, alpha("1"), vec![0, 0, 1, 1, 2, 2]).unwrap()
    }

    #[test]
    fn alpha_parsing_and_capacity() {
        assert_eq!(alpha("1").millis(), 1000);
        assert_eq!(alpha("1.1").millis(), 1100);
        assert_eq!(alpha("2.25").millis(), 2250);
        assert!("0.9".parse::<Alpha>().is_err());
        assert!("1.1234".parse::<Alpha>().is_err());
        assert!("abc".parse::<Alpha>().is_err());
        // ceil(1.1 * 10 / 3) = ceil(11/3) = 4
        assert_eq!(alpha("1.1").capacity(10, 3), 4);
        assert_eq!(alpha("1").capacity(3, 3), 1);
        assert_eq!(alpha("1").to_string(), "1");
        assert_eq!(alpha("1.100").to_string(), "1.1");
    }

    #[test]
    fn single_part_bookkeeping() {
        let p = Partition::new(triangle(), 1, alpha("1"), vec![0, 0, 0]).unwrap();
        assert_eq!(p.copies(), 3);
        assert_eq!(p.replication_factor(), 1.0);
        assert!(p.is_balanced());
        for e in 0..3 {
            assert_eq!(p.reachable_parts(e), vec![0]);
            assert!(!p.is_adjustable(e));
        }
        // A connected graph in a single part is one block.
        let stats = p.block_stats();
        assert_eq!(stats.count, 1);
        assert_eq!(stats.histogram, vec![(3, 1)]);
    }

    #[test]
    fn triangle_three_parts() {
        let p = Partition::new(triangle(), 3, alpha("1"), vec![0, 1, 2]).unwrap();
        assert_eq!(p.capacity(), 1);
        assert!(p.is_balanced());
        assert_eq!(p.copies(), 6);
        assert_eq!(p.replication_factor(), 2.0);
        // Each other part misses one endpoint.
        for e in 0..3 {
            assert_eq!(p.reachable_parts(e), vec![p.part_of(e)]);
            assert!(!p.is_adjustable(e));
        }
    }

    #[test]
    fn path_two_parts() {
        let g = Arc::new(Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap());
        let mut p = Partition::new(g, 2, alpha("2"), vec![0, 1]).unwrap();
        assert_eq!(p.copies(), 4);
        assert!((p.replication_factor() - 4.0 / 3.0).abs() < 1e-12);
        let delta = p.move_edge(0, 1);
        assert_eq!(p.copies(), 3);
        assert_eq!(p.replication_factor(), 1.0);
        assert_eq!(delta.copies_delta, -1);
        let snapshot = p.clone();
        let d2 = p.move_edge(1, 0);
        p.undo_move(d2);
        assert_eq!(p, snapshot);
    }

    #[test]
    fn balance_thresholds() {
        let g = Arc::new(
            Graph::from_edges(
                20,
                &(0..10).map(|i| (2 * i, 2 * i + 1)).collect::<Vec<_>>(),
            )
            .unwrap(),
        );
        // m=10, k=3, alpha=1.1 -> cap 4
        let mut assign = vec![0; 4];
        assign.extend(vec![1; 3]);
        assign.extend(vec![2; 3]);
        let p = Partition::new(Arc::clone(&g), 3, alpha("1.1"), assign).unwrap();
        assert!(p.is_balanced());

        let mut assign = vec![0; 5];
        assign.extend(vec![1; 3]);
        assign.extend(vec![2; 2]);
        let p = Partition::new(g, 3, alpha("1.1"), assign).unwrap();
        assert!(!p.is_balanced());
    }

    #[test]
    fn k4_everything_adjustable() {
        let mut p = k4_three_parts();
        for e in 0..6 {
            assert_eq!(p.reachable_parts(e), vec![0, 1, 2]);
            assert!(p.is_adjustable(e));
        }
        // Endpoints already occur in the target, so a move never adds
        // copies; here it frees both endpoints from the donor part.
        let copies = p.copies();
        let delta = p.move_edge(0, 1);
        assert_eq!(delta.copies_delta, -2);
        p.undo_move(delta);
        assert_eq!(p.copies(), copies);
        // Removing all edges leaves isolated vertices: 4 vertex blocks per part.
        for i in 0..3 {
            let blocks = p.blocks(i);
            assert_eq!(blocks.len(), 4);
            assert!(blocks.iter().all(|b| b.is_vertex_block()));
        }
        let stats = p.block_stats();
        assert_eq!(stats.count, 12);
        assert_eq!(stats.histogram, vec![(1, 12)]);
    }

    #[test]
    fn blocks_of_single_part_are_components() {
        // Two disjoint paths in one part.
        let g = Arc::new(Graph::from_edges(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap());
        let p = Partition::new(g, 1, alpha("1"), vec![0; 4]).unwrap();
        let blocks = p.blocks(0);
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].vertices, vec![0, 1, 2]);
        assert_eq!(blocks[1].vertices, vec![3, 4, 5]);
        assert!(p.incident_adjustable(&blocks[0]).is_empty());
    }

    #[test]
    fn gain_counts_overlap() {
        let p = k4_three_parts();
        let blocks = p.blocks(0);
        // Vertex blocks; every other part contains all four vertices.
        assert_eq!(p.gain(&blocks[0], 1), 1);
        assert_eq!(p.gain(&blocks[0], 2), 1);

        // Disjoint parts have zero gain.
        let g = Arc::new(Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap());
        let p = Partition::new(g, 2, alpha("2"), vec![0, 1]).unwrap();
        let blocks = p.blocks(0);
        assert_eq!(p.gain(&blocks[0], 1), 0);
    }

    #[test]
    fn new_partition_validation() {
        assert!(Partition::new(triangle(), 0, alpha("1"), vec![0, 0, 0]).is_err());
        assert!(Partition::new(triangle(), 2, alpha("1"), vec![0, 0]).is_err());
        assert!(Partition::new(triangle(), 2, alpha("1"), vec![0, 0, 2]).is_err());
    }

    #[test]
    fn partitions_move_between_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Graph>();
        assert_send_sync::<Partition>();
        let p = k4_three_parts();
        let copies = std::thread::spawn(move || p.copies()).join().unwrap();
        assert_eq!(copies, 12);
    }

    fn random_simple_graph(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Arc<Graph> {
        let mut edges = BTreeSet::new();
        while edges.len() < m {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v {
                edges.insert((u.min(v), u.max(v)));
            }
        }
        Arc::new(Graph::from_edges(n, &edges.into_iter().collect::<Vec<_>>()).unwrap())
    }

    #[test]
    fn incremental_bookkeeping_matches_scratch_recomputation() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let n = rng.random_range(5..30);
            let max_m = n * (n - 1) / 2;
            let m = rng.random_range(1..=max_m.min(200));
            let g = random_simple_graph(&mut rng, n, m);
            let k = rng.random_range(1..6);
            let assign: Vec<usize> = (0..m).map(|_| rng.random_range(0..k)).collect();
            let mut p = Partition::new(g, k, alpha("10"), assign).unwrap();

            for _ in 0..40 {
                let e = rng.random_range(0..m);
                let mut to = rng.random_range(0..k);
                if to == p.part_of(e) {
                    to = (to + 1) % k;
                }
                if to == p.part_of(e) {
                    continue; // k == 1
                }
                p.move_edge(e, to);
            }
            p.check_consistency().unwrap();

            // Adjustability answers match a from-scratch definition check.
            for e in 0..m {
                let own = p.part_of(e);
                let (u, v) = p.graph().edge(e);
                let scratch = (0..k).any(|j| {
                    j != own && p.multiplicity(j, u) > 0 && p.multiplicity(j, v) > 0
                });
                assert_eq!(p.is_adjustable(e), scratch);
            }

            // Blocks of each part partition the part's vertex set.
            for i in 0..k {
                let blocks = p.blocks(i);
                let mut seen = BTreeSet::new();
                for b in &blocks {
                    assert_eq!(b.part, i);
                    for &v in &b.vertices {
                        assert!(seen.insert(v), "blocks share vertex {v}");
                    }
                }
                let expected: BTreeSet<usize> = p
                    .part_edges(i)
                    .flat_map(|e| {
                        let (u, v) = p.graph().edge(e);
                        [u, v]
                    })
                    .collect();
                assert_eq!(seen, expected);
            }
        }
    }
}
