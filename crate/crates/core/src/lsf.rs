//! Flow-based local search: move several blocks per round.
//!
//! Each round greedily picks an independent set of blocks (at most one per
//! part, vertex sets pairwise at graph distance >= 2), pre-assigns every
//! non-vertex block the destination that maximizes its overlap gain under
//! reserved capacities, tentatively places the block edges there, and then
//! routes all incident adjustable edges at once through a max-flow network:
//! one unit-capacity source arc per adjustable edge, one unit arc per
//! foreign reachable part, and sink arcs limited by each part's remaining
//! capacity after the reservations. A block commits only if every one of
//! its adjustable edges received a unit of flow; otherwise its tentative
//! placement is undone. Sink capacities never credit departing edges, so
//! balance holds no matter which subset of blocks commits.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::lsg::AssertLevel;
use crate::maxflow::{max_flow, FlowNetwork};
use crate::partition::{Block, MoveDelta, Partition};
use crate::report::RefineReport;

#[derive(Clone, Debug)]
pub struct LsfConfig {
    pub seed: u64,
    /// Upper bound on rounds; defaults to 200 * k.
    pub max_rounds: Option<usize>,
    /// Stop after this many consecutive rounds without a copy-count drop.
    pub stagnation_rounds: usize,
    /// Wall-clock stop condition.
    pub time_budget: Option<Duration>,
    pub assert_level: AssertLevel,
}

impl Default for LsfConfig {
    fn default() -> Self {
        LsfConfig {
            seed: 1,
            max_rounds: None,
            stagnation_rounds: 50,
            time_budget: Some(Duration::from_secs(60)),
            assert_level: AssertLevel::Off,
        }
    }
}

/// Per-part block decompositions, recomputed lazily after invalidation.
#[derive(Clone, Debug)]
pub struct BlockCache {
    per_part: Vec<Option<Vec<Block>>>,
}

impl BlockCache {
    pub fn new(k: usize) -> BlockCache {
        BlockCache { per_part: vec![None; k] }
    }

    pub fn invalidate(&mut self, i: usize) {
        self.per_part[i] = None;
    }

    pub fn get(&mut self, p: &Partition, i: usize) -> &[Block] {
        if self.per_part[i].is_none() {
            self.per_part[i] = Some(p.blocks(i));
        }
        self.per_part[i].as_deref().unwrap()
    }
}

/// Greedily pick an independent block set: parts are visited in a
/// seeded-random permutation and each part contributes the first of its
/// blocks (in seeded-random order) whose vertex set stays at distance two
/// or more from everything already picked. Cached decompositions are
/// revalidated before use; a stale part is recomputed on the spot.
pub fn select_independent_set(
    p: &Partition,
    cache: &mut BlockCache,
    rng: &mut ChaCha8Rng,
) -> Vec<Block> {
    let mut part_order: Vec<usize> = (0..p.k()).collect();
    part_order.shuffle(rng);

    let mut picked: Vec<Block> = Vec::new();
    // Picked vertices plus their neighborhoods; any candidate touching
    // this set would be at distance < 2 from a picked block.
    let mut closed: HashSet<usize> = HashSet::new();

    for &i in &part_order {
        let mut refreshed = false;
        loop {
            let blocks = cache.get(p, i).to_vec();
            let mut order: Vec<usize> = (0..blocks.len()).collect();
            order.shuffle(rng);

            let mut chosen: Option<Block> = None;
            let mut saw_stale = false;
            for idx in order {
                let cand = &blocks[idx];
                if cand.vertices.iter().any(|v| closed.contains(v)) {
                    continue;
                }
                if p.validate_block(cand).is_err() {
                    saw_stale = true;
                    break;
                }
                chosen = Some(cand.clone());
                break;
            }

            if saw_stale && !refreshed {
                cache.invalidate(i);
                refreshed = true;
                continue;
            }
            if let Some(block) = chosen {
                for &v in &block.vertices {
                    closed.insert(v);
                    for &(u, _) in p.graph().neighbors(v) {
                        closed.insert(u);
                    }
                }
                picked.push(block);
            }
            break;
        }
    }
    picked
}

/// A picked block with its pre-assigned destination. Vertex blocks carry
/// no destination; their vertex simply leaves the part once the incident
/// adjustable edges are gone, an expected gain of one.
#[derive(Clone, Debug)]
pub struct SelectedBlock {
    pub block: Block,
    pub dest: Option<usize>,
    pub expected_gain: usize,
}

/// Pre-assign destinations in decreasing vertex-set size, reserving
/// capacity as blocks claim their targets. A non-vertex block needs a
/// foreign part with positive overlap and room for its edge set on top of
/// everything already reserved; blocks with no such part are dropped.
pub fn choose_destinations(p: &Partition, picked: Vec<Block>) -> Vec<SelectedBlock> {
    let mut reserved: Vec<usize> = p.part_sizes().to_vec();
    let mut non_vertex: Vec<Block> = Vec::new();
    let mut vertex_blocks: Vec<Block> = Vec::new();
    for b in picked {
        if b.is_vertex_block() {
            vertex_blocks.push(b);
        } else {
            non_vertex.push(b);
        }
    }
    non_vertex.sort_by(|a, b| {
        b.vertices
            .len()
            .cmp(&a.vertices.len())
            .then(a.part.cmp(&b.part))
            .then(a.min_vertex().cmp(&b.min_vertex()))
    });

    let mut out: Vec<SelectedBlock> = Vec::new();
    for block in non_vertex {
        let mut overlap: std::collections::BTreeMap<usize, usize> = Default::default();
        for &v in &block.vertices {
            for j in p.parts_of_vertex(v) {
                if j != block.part {
                    *overlap.entry(j).or_insert(0) += 1;
                }
            }
        }
        let mut best: Option<(usize, usize, usize)> = None; // (gain, reserved, part)
        for (&j, &gain) in &overlap {
            if reserved[j] + block.edges.len() > p.capacity() {
                continue;
            }
            let better = match best {
                None => true,
                Some((bg, br, _)) => gain > bg || (gain == bg && reserved[j] < br),
            };
            if better {
                best = Some((gain, reserved[j], j));
            }
        }
        if let Some((gain, _, j)) = best {
            reserved[j] += block.edges.len();
            out.push(SelectedBlock { block, dest: Some(j), expected_gain: gain });
        }
    }
    vertex_blocks.sort_by_key(|b| (b.part, b.min_vertex()));
    for block in vertex_blocks {
        out.push(SelectedBlock { block, dest: None, expected_gain: 1 });
    }
    out
}

/// One adjustable edge's slice of the network.
#[derive(Clone, Debug)]
struct EdgeNode {
    edge: usize,
    source_arc: usize,
    /// (arc id, target part) per foreign reachable part.
    choices: Vec<(usize, usize)>,
}

/// The network plus everything needed to decode a flow back into edge
/// moves and to undo tentative placements.
#[derive(Debug)]
pub struct AdjustPlan {
    pub network: FlowNetwork,
    set: Vec<SelectedBlock>,
    edge_nodes: Vec<Vec<EdgeNode>>,
    placements: Vec<Vec<MoveDelta>>,
    /// Part sizes with tentative placements counted but departures not
    /// credited back.
    pub reserved_sizes: Vec<usize>,
    /// Sink-arc capacity per part: cap - reserved, clamped at zero.
    pub remaining_capacity: Vec<usize>,
}

impl AdjustPlan {
    pub fn block_count(&self) -> usize {
        self.set.len()
    }

    pub fn adjustable_edge_count(&self) -> usize {
        self.edge_nodes.iter().map(|v| v.len()).sum()
    }
}

/// Collect incident adjustable edges, tentatively place every destined
/// block, and build the routing network against the placed state (so a
/// block's own relocation can open its destination to its chord edges).
/// The partition holds the tentative placements until [`apply_flow_plan`]
/// commits or reverts them.
pub fn build_flow_network(p: &mut Partition, set: Vec<SelectedBlock>) -> AdjustPlan {
    // The incident sets are collected before any placement; independence
    // keeps them, and their adjustability, untouched by other blocks.
    let mut incident_per_block: Vec<Vec<usize>> = Vec::with_capacity(set.len());
    let mut seen_vertices: BTreeSet<usize> = BTreeSet::new();
    let mut seen_edges: BTreeSet<usize> = BTreeSet::new();
    for sel in &set {
        let incident = p
            .validate_block(&sel.block)
            .expect("selected blocks must be current");
        for &v in &sel.block.vertices {
            assert!(seen_vertices.insert(v), "selected blocks share vertex {v}");
        }
        for &e in &incident {
            assert!(seen_edges.insert(e), "selected blocks share adjustable edge {e}");
        }
        incident_per_block.push(incident);
    }

    let sizes_before: Vec<usize> = p.part_sizes().to_vec();
    let mut placements: Vec<Vec<MoveDelta>> = Vec::with_capacity(set.len());
    let mut reserved_sizes = sizes_before;
    for sel in &set {
        let mut deltas = Vec::new();
        if let Some(dest) = sel.dest {
            for &e in &sel.block.edges {
                deltas.push(p.move_edge(e, dest));
            }
            reserved_sizes[dest] += sel.block.edges.len();
        }
        placements.push(deltas);
    }

    let k = p.k();
    let remaining_capacity: Vec<usize> =
        (0..k).map(|i| p.capacity().saturating_sub(reserved_sizes[i])).collect();

    // Node layout: 0 source, 1 sink, 2..2+k part nodes, then edge nodes.
    let edge_total: usize = incident_per_block.iter().map(|v| v.len()).sum();
    let mut network = FlowNetwork::new(2 + k + edge_total, 0, 1);
    for (j, &room) in remaining_capacity.iter().enumerate() {
        network.add_arc(2 + j, 1, room as u64);
    }
    let mut next_node = 2 + k;
    let mut edge_nodes: Vec<Vec<EdgeNode>> = Vec::with_capacity(set.len());
    for (sel, incident) in set.iter().zip(&incident_per_block) {
        let mut nodes = Vec::with_capacity(incident.len());
        for &e in incident {
            let node = next_node;
            next_node += 1;
            let source_arc = network.add_arc(0, node, 1);
            let mut choices = Vec::new();
            for j in p.reachable_parts(e) {
                if j != sel.block.part {
                    choices.push((network.add_arc(node, 2 + j, 1), j));
                }
            }
            nodes.push(EdgeNode { edge: e, source_arc, choices });
        }
        edge_nodes.push(nodes);
    }

    AdjustPlan { network, set, edge_nodes, placements, reserved_sizes, remaining_capacity }
}

#[derive(Clone, Debug)]
pub struct FlowOutcome {
    pub flow_value: u64,
    /// Indices (into the plan's block set) of committed blocks.
    pub applied: Vec<usize>,
    pub reverted: Vec<usize>,
    pub copies_delta: i64,
    pub changed_parts: Vec<usize>,
}

/// Solve the plan's network and commit every block whose adjustable edges
/// are all saturated: their edges move along their flow arcs and the
/// tentative placement stays. Everything else is undone bit-exactly.
pub fn apply_flow_plan(p: &mut Partition, plan: AdjustPlan) -> FlowOutcome {
    let result = max_flow(&plan.network);
    let mut outcome = FlowOutcome {
        flow_value: result.value,
        applied: Vec::new(),
        reverted: Vec::new(),
        copies_delta: 0,
        changed_parts: Vec::new(),
    };
    let mut changed: BTreeSet<usize> = BTreeSet::new();
    let mut expected_gain = 0i64;

    for (idx, (sel, nodes)) in plan.set.iter().zip(&plan.edge_nodes).enumerate() {
        let saturated = nodes.iter().all(|en| result.flow[en.source_arc] == 1);
        if saturated {
            for en in nodes {
                let (_, target) = en
                    .choices
                    .iter()
                    .find(|&&(arc, _)| result.flow[arc] == 1)
                    .copied()
                    .expect("saturated edge node must push its unit somewhere");
                let delta = p.move_edge(en.edge, target);
                outcome.copies_delta += delta.copies_delta;
                changed.insert(target);
            }
            changed.insert(sel.block.part);
            if let Some(dest) = sel.dest {
                changed.insert(dest);
            }
            for d in &plan.placements[idx] {
                outcome.copies_delta += d.copies_delta;
            }
            expected_gain += sel.expected_gain as i64;
            outcome.applied.push(idx);
        } else {
            for &delta in plan.placements[idx].iter().rev() {
                p.undo_move(delta);
            }
            outcome.reverted.push(idx);
        }
    }

    debug_assert!(
        outcome.copies_delta <= -expected_gain,
        "committed blocks realized less than their gains"
    );
    outcome.changed_parts = changed.into_iter().collect();
    outcome
}

/// The outer loop: rounds of select / pre-assign / route / commit until
/// the round limit, the time budget, or a stagnation streak stops it.
pub fn refine(p: &mut Partition, cfg: &LsfConfig) -> RefineReport {
    let started = Instant::now();
    let mut report = RefineReport::before("lsf", p, cfg.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_rounds = cfg.max_rounds.unwrap_or(200 * p.k());

    let mut cache = BlockCache::new(p.k());
    let mut stagnant = 0usize;
    let mut rounds = 0usize;
    while rounds < max_rounds && stagnant < cfg.stagnation_rounds {
        if let Some(budget) = cfg.time_budget {
            if started.elapsed() >= budget {
                break;
            }
        }
        rounds += 1;
        let copies_before = p.copies();

        let picked = select_independent_set(p, &mut cache, &mut rng);
        let set = choose_destinations(p, picked);
        let plan = build_flow_network(p, set);
        let outcome = apply_flow_plan(p, plan);

        report.blocks_applied += outcome.applied.len();
        report.blocks_reverted += outcome.reverted.len();
        for &i in &outcome.changed_parts {
            cache.invalidate(i);
        }

        if cfg.assert_level == AssertLevel::Full {
            assert!(p.is_balanced(), "flow round broke balance");
            assert!(p.copies() <= copies_before, "flow round increased copies");
            p.check_consistency().expect("bookkeeping diverged");
        }
        if p.copies() < copies_before {
            stagnant = 0;
        } else {
            stagnant += 1;
        }
    }

    report.rounds = rounds;
    report.finish(p, started.elapsed().as_millis() as u64);
    report
}
