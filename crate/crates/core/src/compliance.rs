//! Topology rule for site plans: a block-count threshold above which the
//! mean egress distance is bounded, plus a fold-exposure check for strips
//! folded back within spark range of themselves.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::egress::expected_egress;
use crate::error::{invalid, Result};
use crate::layout::Layout;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleConfig {
    /// Rule applies to layouts with at least this many blocks.
    pub n_threshold: usize,
    /// Upper bound on the mean egress distance, in cell steps.
    pub egress_bound: f64,
    /// Spark dispersal radius in block-widths.
    pub dispersal_radius: u64,
    pub strip_path_factor: u64,
}

impl Default for RuleConfig {
    fn default() -> Self {
        Self {
            n_threshold: 50,
            egress_bound: 2.0,
            dispersal_radius: 3,
            strip_path_factor: 2,
        }
    }
}

impl RuleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_threshold < 1
            || self.egress_bound.is_nan()
            || self.egress_bound < 1.0
            || self.dispersal_radius < 1
            || self.strip_path_factor < 1
        {
            return Err(invalid("rule configuration values must all be >= 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EgressVerdict {
    pub applicable: bool,
    pub pass: bool,
    pub measured: f64,
}

pub fn check_egress_rule(layout: &Layout, cfg: &RuleConfig) -> Result<EgressVerdict> {
    cfg.validate()?;
    let measured = expected_egress(layout)?.mean;
    let applicable = layout.block_count() >= cfg.n_threshold;
    Ok(EgressVerdict {
        applicable,
        pass: !applicable || measured <= cfg.egress_bound,
        measured,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldVerdict {
    pub exposure_pairs: usize,
    pub pass: bool,
}

/// Counts block pairs within `dispersal_radius` of each other whose distance
/// along the strip exceeds `strip_path_factor * dispersal_radius`.
///
/// The strip is the graph joining blocks at block distance 1. Pairs in
/// different components of that graph are infinitely far apart along it.
pub fn check_fold_spacing(layout: &Layout, cfg: &RuleConfig) -> Result<FoldVerdict> {
    cfg.validate()?;
    let blocks = layout.blocks();
    let coords: Vec<(i64, i64)> = blocks.iter().map(|b| b.block_coords()).collect();
    let n = coords.len();
    let cheb = |a: usize, b: usize| {
        let (ar, ac) = coords[a];
        let (br, bc) = coords[b];
        (ar - br).unsigned_abs().max((ac - bc).unsigned_abs())
    };

    let adjacency: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && cheb(i, j) <= 1).collect())
        .collect();

    let radius = cfg.dispersal_radius;
    let limit = cfg.strip_path_factor.saturating_mul(radius);
    let mut exposure_pairs = 0;
    let mut hops = vec![u64::MAX; n];
    let mut queue = VecDeque::new();
    for src in 0..n {
        hops.fill(u64::MAX);
        hops[src] = 0;
        queue.push_back(src);
        // Paths longer than `limit` never matter, so the search stops there.
        while let Some(u) = queue.pop_front() {
            if hops[u] >= limit {
                continue;
            }
            for &v in &adjacency[u] {
                if hops[v] == u64::MAX {
                    hops[v] = hops[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        exposure_pairs += (src + 1..n)
            .filter(|&j| cheb(src, j) <= radius && hops[j] > limit)
            .count();
    }

    Ok(FoldVerdict {
        exposure_pairs,
        pass: exposure_pairs == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplianceReport {
    pub applicable: bool,
    pub n_blocks: usize,
    pub measured_expected_egress: f64,
    pub egress_pass: bool,
    pub fold_exposure_pairs: usize,
    pub fold_pass: bool,
    pub overall_pass: bool,
}

pub fn compliance_report(layout: &Layout, cfg: &RuleConfig) -> Result<ComplianceReport> {
    let egress = check_egress_rule(layout, cfg)?;
    let fold = check_fold_spacing(layout, cfg)?;
    Ok(ComplianceReport {
        applicable: egress.applicable,
        n_blocks: layout.block_count(),
        measured_expected_egress: egress.measured,
        egress_pass: egress.pass,
        fold_exposure_pairs: fold.exposure_pairs,
        fold_pass: fold.pass,
        overall_pass: !egress.applicable || (egress.pass && fold.pass),
    })
}
