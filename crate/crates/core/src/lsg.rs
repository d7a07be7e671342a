//! Greedy local search: per-block adjustment and the part-scan loop.
//!
//! A single adjustment relocates one block. The block's edges move first,
//! to the part that overlaps the block's vertex set the most (under the
//! balance cap); then every adjustable edge incident on the block moves,
//! in seeded-random order, to some foreign reachable part with spare
//! capacity. If any step has no feasible target the whole adjustment is
//! undone, leaving the partition bit-identical. A successful adjustment
//! frees the block's vertices from its part, so the copy count drops by
//! at least the destination overlap.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::partition::{Block, MoveDelta, Partition};
use crate::report::RefineReport;

/// How much self-checking refinement does while it runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AssertLevel {
    #[default]
    Off,
    /// After every committed adjustment: balance, monotone copy count, and
    /// full scratch recomputation of the incremental bookkeeping.
    Full,
}

/// Feasibility test for the block's destination part. The balance currency
/// is edges, so the default requires room for the block's edge set. The
/// vertex-count variant reserves room for the vertex set instead; for
/// cyclic blocks it can admit destinations the edge count would reject.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CapacityRule {
    #[default]
    EdgeCount,
    VertexCount,
}

#[derive(Clone, Debug)]
pub struct LsgConfig {
    pub seed: u64,
    pub assert_level: AssertLevel,
    pub capacity_rule: CapacityRule,
}

impl Default for LsgConfig {
    fn default() -> Self {
        LsgConfig {
            seed: 1,
            assert_level: AssertLevel::Off,
            capacity_rule: CapacityRule::EdgeCount,
        }
    }
}

/// Result of one attempted block adjustment.
#[derive(Clone, Debug)]
pub struct AdjustOutcome {
    pub moved: bool,
    pub copies_delta: i64,
    /// Parts that donated or received edges (empty if not moved).
    pub changed_parts: Vec<usize>,
}

fn pick_destination(p: &Partition, block: &Block, rule: CapacityRule) -> Option<(usize, usize)> {
    let mut overlap: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in &block.vertices {
        for j in p.parts_of_vertex(v) {
            if j != block.part {
                *overlap.entry(j).or_insert(0) += 1;
            }
        }
    }
    let need = match rule {
        CapacityRule::EdgeCount => block.edges.len(),
        CapacityRule::VertexCount => block.vertices.len(),
    };
    let mut best: Option<(usize, usize, usize)> = None; // (gain, size, part)
    for (&j, &gain) in &overlap {
        if p.part_size(j) + need > p.capacity() {
            continue;
        }
        let better = match best {
            None => true,
            // Max overlap; ties prefer the smaller part, then the lower id.
            Some((bg, bs, _)) => gain > bg || (gain == bg && p.part_size(j) < bs),
        };
        if better {
            best = Some((gain, p.part_size(j), j));
        }
    }
    best.map(|(gain, _, j)| (j, gain))
}

/// Attempt to adjust one block. On success the partition is balanced and
/// its copy count has dropped by at least the destination overlap (or by
/// at least one for a vertex block). On failure the partition is restored
/// exactly. Errors if `block` is not a current block of its part.
pub fn try_adjust_block(
    p: &mut Partition,
    block: &Block,
    rng: &mut ChaCha8Rng,
    rule: CapacityRule,
) -> Result<AdjustOutcome> {
    let i = block.part;
    let mut incident = p.validate_block(block)?;

    // A vertex block needs no destination: once its adjustable edges are
    // gone the vertex simply leaves the part, for a gain of one.
    let dest = if block.is_vertex_block() {
        None
    } else {
        match pick_destination(p, block, rule) {
            Some(found) => Some(found),
            None => {
                return Ok(AdjustOutcome { moved: false, copies_delta: 0, changed_parts: vec![] })
            }
        }
    };

    let mut deltas: Vec<MoveDelta> = Vec::with_capacity(block.edges.len() + incident.len());
    let mut changed: BTreeSet<usize> = BTreeSet::new();
    changed.insert(i);
    // The block moves first; relocating it can only widen the options for
    // its incident adjustable edges.
    if let Some((j, _)) = dest {
        for &e in &block.edges {
            deltas.push(p.move_edge(e, j));
        }
        changed.insert(j);
    }

    incident.shuffle(rng);
    for &e in &incident {
        let mut target: Option<(usize, usize)> = None; // (remaining, part)
        for j in p.reachable_parts(e) {
            if j == i || p.part_size(j) >= p.capacity() {
                continue;
            }
            let remaining = p.capacity() - p.part_size(j);
            if target.is_none_or(|(r, _)| remaining > r) {
                target = Some((remaining, j));
            }
        }
        match target {
            Some((_, j)) => {
                deltas.push(p.move_edge(e, j));
                changed.insert(j);
            }
            None => {
                for delta in deltas.into_iter().rev() {
                    p.undo_move(delta);
                }
                return Ok(AdjustOutcome { moved: false, copies_delta: 0, changed_parts: vec![] });
            }
        }
    }

    let copies_delta: i64 = deltas.iter().map(|d| d.copies_delta).sum();
    let min_gain = dest.map_or(1, |(_, gain)| gain as i64);
    debug_assert!(copies_delta <= -min_gain, "adjustment realized less than its gain");
    Ok(AdjustOutcome {
        moved: true,
        copies_delta,
        changed_parts: changed.into_iter().collect(),
    })
}

/// Scan loop: every part starts marked; processing a part computes its
/// blocks and tries to adjust each in non-decreasing vertex-set size.
/// Parts touched by a successful adjustment are re-marked. Terminates when
/// no marks remain, which is guaranteed because every success strictly
/// decreases the copy count.
pub fn refine(p: &mut Partition, cfg: &LsgConfig) -> RefineReport {
    let started = Instant::now();
    let mut report = RefineReport::before("lsg", p, cfg.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let k = p.k();
    let mut marked = vec![true; k];
    let mut rounds = 0usize;
    while let Some(i) = marked.iter().position(|&b| b) {
        marked[i] = false;
        rounds += 1;
        let mut blocks = p.blocks(i);
        blocks.sort_by_key(|b| (b.vertices.len(), b.min_vertex()));
        for block in &blocks {
            // A vertex block can disappear while earlier blocks of this
            // part are adjusted: relocating another block's incident edges
            // may take the vertex's last edge with it. That is the outcome
            // the adjustment wanted, so just skip it. Non-vertex blocks of
            // the part under scan stay valid throughout.
            if block.is_vertex_block() && !p.vertex_in_part(block.min_vertex(), i) {
                continue;
            }
            let outcome = try_adjust_block(p, block, &mut rng, cfg.capacity_rule)
                .expect("blocks of the part under scan stay valid");
            if outcome.moved {
                report.adjust_success += 1;
                for &j in &outcome.changed_parts {
                    marked[j] = true;
                }
                if cfg.assert_level == AssertLevel::Full {
                    assert!(outcome.copies_delta < 0, "committed adjustment must reduce copies");
                    assert!(p.is_balanced(), "adjustment broke balance");
                    p.check_consistency().expect("bookkeeping diverged");
                }
            } else {
                report.adjust_failed += 1;
            }
        }
    }

    report.rounds = rounds;
    report.finish(p, started.elapsed().as_millis() as u64);
    report
}
