//! Refinement and evaluation reports.

use serde::Serialize;

use crate::partition::{BlockStats, Partition};

/// Everything a refinement run reports: quality before and after, balance,
/// block statistics, move counts, and bound diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct RefineReport {
    pub algo: String,
    pub n: usize,
    pub m: usize,
    pub avg_degree: f64,
    pub k: usize,
    pub alpha: f64,
    pub cap: usize,
    pub seed: u64,
    pub rf_before: f64,
    pub rf_after: f64,
    pub copies_before: usize,
    pub copies_after: usize,
    pub improvement_pct: f64,
    pub balanced_before: bool,
    pub balanced_after: bool,
    pub blocks_before: BlockStats,
    pub blocks_after: BlockStats,
    /// Successful single-block adjustments (greedy passes).
    pub adjust_success: usize,
    /// Attempted single-block adjustments that were undone.
    pub adjust_failed: usize,
    /// Blocks committed by flow rounds.
    pub blocks_applied: usize,
    /// Blocks tentatively placed and reverted by flow rounds.
    pub blocks_reverted: usize,
    pub rounds: usize,
    /// min(k, average degree); any valid partition's RF stays within it.
    pub rf_bound: f64,
    pub rf_within_bound: bool,
    pub wall_time_ms: u64,
}

impl RefineReport {
    pub(crate) fn before(algo: &str, p: &Partition, seed: u64) -> RefineReport {
        let g = p.graph();
        RefineReport {
            algo: algo.to_string(),
            n: g.vertex_count(),
            m: g.edge_count(),
            avg_degree: g.average_degree(),
            k: p.k(),
            alpha: p.alpha().as_f64(),
            cap: p.capacity(),
            seed,
            rf_before: p.replication_factor(),
            rf_after: p.replication_factor(),
            copies_before: p.copies(),
            copies_after: p.copies(),
            improvement_pct: 0.0,
            balanced_before: p.is_balanced(),
            balanced_after: p.is_balanced(),
            blocks_before: p.block_stats(),
            blocks_after: BlockStats::default(),
            adjust_success: 0,
            adjust_failed: 0,
            blocks_applied: 0,
            blocks_reverted: 0,
            rounds: 0,
            rf_bound: 0.0,
            rf_within_bound: true,
            wall_time_ms: 0,
        }
    }

    pub(crate) fn finish(&mut self, p: &Partition, wall_time_ms: u64) {
        self.rf_after = p.replication_factor();
        self.copies_after = p.copies();
        self.improvement_pct = if self.rf_before > 0.0 {
            100.0 * (self.rf_before - self.rf_after) / self.rf_before
        } else {
            0.0
        };
        self.balanced_after = p.is_balanced();
        self.blocks_after = p.block_stats();
        self.rf_bound = crate::instances::rf_upper_bound(p.graph(), p.k());
        self.rf_within_bound = self.rf_after <= self.rf_bound + 1e-9;
        self.wall_time_ms = wall_time_ms;
    }

    /// Fold a follow-up run into this report, keeping the "before" side.
    pub fn merge_followup(&mut self, later: &RefineReport) {
        self.algo = format!("{}+{}", self.algo, later.algo);
        self.rf_after = later.rf_after;
        self.copies_after = later.copies_after;
        self.improvement_pct = if self.rf_before > 0.0 {
            100.0 * (self.rf_before - self.rf_after) / self.rf_before
        } else {
            0.0
        };
        self.balanced_after = later.balanced_after;
        self.blocks_after = later.blocks_after.clone();
        self.adjust_success += later.adjust_success;
        self.adjust_failed += later.adjust_failed;
        self.blocks_applied += later.blocks_applied;
        self.blocks_reverted += later.blocks_reverted;
        self.rounds += later.rounds;
        self.rf_within_bound = self.rf_after <= self.rf_bound + 1e-9;
        self.wall_time_ms += later.wall_time_ms;
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn csv_header() -> &'static str {
        "algo,n,m,avg_degree,k,alpha,cap,seed,rf_before,rf_after,improvement_pct,\
         copies_before,copies_after,balanced_before,balanced_after,blocks_before,\
         blocks_after,adjust_success,adjust_failed,blocks_applied,blocks_reverted,\
         rounds,rf_bound,rf_within_bound,wall_time_ms"
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{}\n{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            Self::csv_header(),
            self.algo,
            self.n,
            self.m,
            self.avg_degree,
            self.k,
            self.alpha,
            self.cap,
            self.seed,
            self.rf_before,
            self.rf_after,
            self.improvement_pct,
            self.copies_before,
            self.copies_after,
            self.balanced_before,
            self.balanced_after,
            self.blocks_before.count,
            self.blocks_after.count,
            self.adjust_success,
            self.adjust_failed,
            self.blocks_applied,
            self.blocks_reverted,
            self.rounds,
            self.rf_bound,
            self.rf_within_bound,
            self.wall_time_ms,
        )
    }
}

/// Snapshot of a partition's quality, produced by `eval`.
#[derive(Clone, Debug, Serialize)]
pub struct EvalReport {
    pub n: usize,
    pub m: usize,
    pub avg_degree: f64,
    pub k: usize,
    pub alpha: f64,
    pub cap: usize,
    pub rf: f64,
    pub copies: usize,
    pub balanced: bool,
    pub blocks: BlockStats,
    pub rf_bound: f64,
    pub rf_within_bound: bool,
}

impl EvalReport {
    pub fn from_partition(p: &Partition) -> EvalReport {
        let g = p.graph();
        let rf = p.replication_factor();
        let rf_bound = crate::instances::rf_upper_bound(g, p.k());
        EvalReport {
            n: g.vertex_count(),
            m: g.edge_count(),
            avg_degree: g.average_degree(),
            k: p.k(),
            alpha: p.alpha().as_f64(),
            cap: p.capacity(),
            rf,
            copies: p.copies(),
            balanced: p.is_balanced(),
            blocks: p.block_stats(),
            rf_bound,
            rf_within_bound: rf <= rf_bound + 1e-9,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn csv_header() -> &'static str {
        "n,m,avg_degree,k,alpha,cap,rf,copies,balanced,blocks,rf_bound,rf_within_bound"
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{}\n{},{},{},{},{},{},{},{},{},{},{},{}\n",
            Self::csv_header(),
            self.n,
            self.m,
            self.avg_degree,
            self.k,
            self.alpha,
            self.cap,
            self.rf,
            self.copies,
            self.balanced,
            self.blocks.count,
            self.rf_bound,
            self.rf_within_bound,
        )
    }
}
