//! Contact-process fire spread with Chebyshev-radius spark dispersal.
//!
//! Blocks live on the block lattice (cell coordinates halved). Each step a
//! burning block first survives with probability `gamma` (otherwise it burns
//! out), and each survivor then throws `sparks_per_step` sparks. A spark
//! lands on a uniformly chosen nonzero offset of the Chebyshev disc of radius
//! `r`; if an intact block sits there it ignites at the end of the step.
//! Sparks landing on aisles, exterior or already-burning sites are lost.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};
use crate::layout::{BlockSite, Layout};
use crate::rng::{derive_seed, FireStream};

/// Chebyshev distance between block-lattice positions.
pub fn block_distance(a: BlockSite, b: BlockSite) -> u64 {
    let (ar, ac) = a.block_coords();
    let (br, bc) = b.block_coords();
    (ar - br).unsigned_abs().max((ac - bc).unsigned_abs())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FireParams {
    pub gamma: f64,
    pub r: u32,
    pub sparks_per_step: u32,
    pub max_steps: u64,
    pub percolation_fraction: f64,
}

impl FireParams {
    pub fn new(
        gamma: f64,
        r: u32,
        sparks_per_step: u32,
        max_steps: u64,
        percolation_fraction: f64,
    ) -> Result<Self> {
        let p = Self {
            gamma,
            r,
            sparks_per_step,
            max_steps,
            percolation_fraction,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(invalid(format!(
                "gamma must lie in [0, 1], got {}",
                self.gamma
            )));
        }
        if self.r < 1 {
            return Err(invalid("dispersal radius must be at least 1"));
        }
        if self.max_steps < 1 {
            return Err(invalid("max_steps must be at least 1"));
        }
        if !(self.percolation_fraction > 0.0 && self.percolation_fraction <= 1.0) {
            return Err(invalid(format!(
                "percolation_fraction must lie in (0, 1], got {}",
                self.percolation_fraction
            )));
        }
        Ok(())
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self {
            gamma,
            ..self.clone()
        }
    }
}

impl Default for FireParams {
    fn default() -> Self {
        Self {
            gamma: 0.5,
            r: 3,
            sparks_per_step: 1,
            max_steps: 500,
            percolation_fraction: 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockStatus {
    Intact,
    Burning,
    BurntOut,
}

/// Precomputed block-lattice index for one layout.
#[derive(Clone, Debug)]
pub struct FireModel {
    blocks: Vec<BlockSite>,
    coords: Vec<(i64, i64)>,
    lattice_h: i64,
    lattice_w: i64,
    // CSR: blocks sharing lattice site `s` are members[starts[s]..starts[s+1]].
    starts: Vec<u32>,
    members: Vec<u32>,
}

impl FireModel {
    pub fn new(layout: &Layout) -> Self {
        let blocks = layout.blocks();
        let coords: Vec<_> = blocks.iter().map(|b| b.block_coords()).collect();
        let lattice_h = layout.height().div_ceil(2) as i64;
        let lattice_w = layout.width().div_ceil(2) as i64;
        let sites = (lattice_h * lattice_w) as usize;

        let mut starts = vec![0u32; sites + 1];
        for &(r, c) in &coords {
            starts[(r * lattice_w + c) as usize + 1] += 1;
        }
        for s in 0..sites {
            starts[s + 1] += starts[s];
        }
        let mut fill = starts.clone();
        let mut members = vec![0u32; coords.len()];
        for (i, &(r, c)) in coords.iter().enumerate() {
            let s = (r * lattice_w + c) as usize;
            members[fill[s] as usize] = i as u32;
            fill[s] += 1;
        }

        Self {
            blocks,
            coords,
            lattice_h,
            lattice_w,
            starts,
            members,
        }
    }

    pub fn blocks(&self) -> &[BlockSite] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn index_of(&self, site: BlockSite) -> Option<usize> {
        self.blocks.binary_search(&site).ok()
    }

    /// Blocks at block-lattice position `(r, c)`; empty off-lattice.
    fn at(&self, r: i64, c: i64) -> &[u32] {
        if r < 0 || c < 0 || r >= self.lattice_h || c >= self.lattice_w {
            return &[];
        }
        let s = (r * self.lattice_w + c) as usize;
        &self.members[self.starts[s] as usize..self.starts[s + 1] as usize]
    }

    /// Blocks other than `block` within Chebyshev radius `r`.
    pub fn neighbours_within(&self, block: usize, r: u32) -> usize {
        let (br, bc) = self.coords[block];
        let r = r as i64;
        let mut n = 0;
        for dr in -r..=r {
            for dc in -r..=r {
                n += self.at(br + dr, bc + dc).len();
            }
        }
        n - 1
    }

    pub fn initial_state(&self, ignition: BlockSite) -> Result<FireState> {
        let idx = self
            .index_of(ignition)
            .ok_or_else(|| domain(format!("ignition {ignition} is not a block of the layout")))?;
        let mut status = vec![BlockStatus::Intact; self.blocks.len()];
        status[idx] = BlockStatus::Burning;
        Ok(FireState {
            status,
            step: 0,
            ignition,
        })
    }

    fn percolation_reached(&self, ignition: usize, burned: &[bool], fraction: f64) -> bool {
        let (ir, ic) = self.coords[ignition];
        let dist = |i: usize| {
            let (r, c) = self.coords[i];
            (r - ir).unsigned_abs().max((c - ic).unsigned_abs())
        };
        let extent = (0..self.blocks.len()).map(dist).max().unwrap_or(0);
        if extent == 0 {
            return false;
        }
        let threshold = fraction * extent as f64;
        burned
            .iter()
            .enumerate()
            .any(|(i, &b)| b && dist(i) as f64 >= threshold)
    }

    /// Runs one fire to extinction or `max_steps`.
    pub fn run(&self, params: &FireParams, ignition: BlockSite, seed: u64) -> Result<FireOutcome> {
        params.validate()?;
        let stream = FireStream::new(seed);
        let offsets = disc_offsets(params.r);
        let mut state = self.initial_state(ignition)?;
        let mut burning: Vec<u32> = vec![self.index_of(ignition).unwrap() as u32];
        while !burning.is_empty() && state.step < params.max_steps {
            burning = self.advance(&mut state, burning, params, &offsets, &stream);
        }
        let ignition_idx = self.index_of(ignition).unwrap();
        let burn_map: Vec<bool> = state
            .status
            .iter()
            .map(|&s| s != BlockStatus::Intact)
            .collect();
        let burned = burn_map.iter().filter(|&&b| b).count();
        Ok(FireOutcome {
            burned_fraction: burned as f64 / self.blocks.len() as f64,
            percolated: self.percolation_reached(
                ignition_idx,
                &burn_map,
                params.percolation_fraction,
            ),
            duration: state.step,
            burn_map,
        })
    }

    /// One synchronous step. `burning` lists the currently burning blocks;
    /// the burning list for the next step is returned.
    fn advance(
        &self,
        state: &mut FireState,
        burning: Vec<u32>,
        params: &FireParams,
        offsets: &[(i64, i64)],
        stream: &FireStream,
    ) -> Vec<u32> {
        let step = state.step;
        let mut next = Vec::with_capacity(burning.len());
        for b in burning {
            if stream.survival(step, b as u64) < params.gamma {
                next.push(b);
            } else {
                state.status[b as usize] = BlockStatus::BurntOut;
            }
        }

        let mut ignited = Vec::new();
        for &b in &next {
            let (br, bc) = self.coords[b as usize];
            for s in 0..params.sparks_per_step {
                let (dr, dc) = offsets[stream.spark(step, b as u64, s as u64, offsets.len())];
                for &target in self.at(br + dr, bc + dc) {
                    let t = &mut state.status[target as usize];
                    if *t == BlockStatus::Intact {
                        // Marked burning now; it joins the burning list only
                        // for the next step.
                        *t = BlockStatus::Burning;
                        ignited.push(target);
                    }
                }
            }
        }
        next.extend(ignited);
        state.step += 1;
        next
    }
}

/// Nonzero offsets of the Chebyshev disc of radius `r`, row-major.
pub fn disc_offsets(r: u32) -> Vec<(i64, i64)> {
    let r = r as i64;
    (-r..=r)
        .flat_map(|dr| (-r..=r).map(move |dc| (dr, dc)))
        .filter(|&o| o != (0, 0))
        .collect()
}

/// Number of blocks other than `site` within Chebyshev radius `r`.
pub fn receptive_neighbors(layout: &Layout, site: BlockSite, r: u32) -> Result<usize> {
    if r < 1 {
        return Err(invalid("dispersal radius must be at least 1"));
    }
    let model = FireModel::new(layout);
    let idx = model
        .index_of(site)
        .ok_or_else(|| domain(format!("{site} is not a block of the layout")))?;
    Ok(model.neighbours_within(idx, r))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FireState {
    pub status: Vec<BlockStatus>,
    pub step: u64,
    pub ignition: BlockSite,
}

impl FireState {
    pub fn burning_count(&self) -> usize {
        self.status
            .iter()
            .filter(|&&s| s == BlockStatus::Burning)
            .count()
    }

    pub fn ever_burned(&self) -> Vec<bool> {
        self.status
            .iter()
            .map(|&s| s != BlockStatus::Intact)
            .collect()
    }
}

/// Advances `state` by one step. Draws are keyed by `(stream, step, block,
/// spark)`, so repeated calls with equal arguments agree.
pub fn step_fire(
    state: &FireState,
    model: &FireModel,
    params: &FireParams,
    stream: &FireStream,
) -> FireState {
    let burning: Vec<u32> = state
        .status
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == BlockStatus::Burning)
        .map(|(i, _)| i as u32)
        .collect();
    let mut next = state.clone();
    model.advance(&mut next, burning, params, &disc_offsets(params.r), stream);
    next
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FireOutcome {
    pub burned_fraction: f64,
    pub percolated: bool,
    pub duration: u64,
    /// Ever-burned flag per block, in row-major block order.
    pub burn_map: Vec<bool>,
}

impl FireOutcome {
    /// Site-plan-shaped grid: `X` burned, `B` intact, `.` aisle.
    pub fn burn_grid(&self, layout: &Layout) -> String {
        let mut grid: Vec<Vec<char>> = crate::layout::serialize_site_plan(layout)
            .lines()
            .map(|l| l.chars().collect())
            .collect();
        for (site, &burned) in layout.blocks().iter().zip(&self.burn_map) {
            if burned {
                grid[site.row][site.col] = 'X';
            }
        }
        let mut out = String::new();
        for row in grid {
            out.extend(row);
            out.push('\n');
        }
        out
    }
}

pub fn simulate_fire(
    layout: &Layout,
    params: &FireParams,
    ignition: BlockSite,
    seed: u64,
) -> Result<FireOutcome> {
    FireModel::new(layout).run(params, ignition, seed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadEstimate {
    pub probability: f64,
    /// 95% normal-approximation half-width.
    pub ci_halfwidth: f64,
    pub replicates: u64,
}

impl SpreadEstimate {
    fn from_counts(successes: u64, replicates: u64) -> Self {
        let p = successes as f64 / replicates as f64;
        Self {
            probability: p,
            ci_halfwidth: 1.96 * (p * (1.0 - p) / replicates as f64).sqrt(),
            replicates,
        }
    }
}

/// Fraction of percolating replicates. Replicate `i` is seeded from
/// `(master_seed, i)`; replicates run on the current rayon pool.
pub fn spread_probability(
    layout: &Layout,
    params: &FireParams,
    ignition: BlockSite,
    replicates: u64,
    master_seed: u64,
) -> Result<SpreadEstimate> {
    spread_probability_with(
        &FireModel::new(layout),
        params,
        ignition,
        replicates,
        master_seed,
    )
}

pub fn spread_probability_with(
    model: &FireModel,
    params: &FireParams,
    ignition: BlockSite,
    replicates: u64,
    master_seed: u64,
) -> Result<SpreadEstimate> {
    if replicates < 1 {
        return Err(invalid("replicates must be at least 1"));
    }
    params.validate()?;
    model.initial_state(ignition)?;
    let successes = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let outcome = model
                .run(params, ignition, derive_seed(master_seed, i))
                .expect("parameters validated above");
            u64::from(outcome.percolated)
        })
        .sum();
    Ok(SpreadEstimate::from_counts(successes, replicates))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalGammaConfig {
    pub tolerance: f64,
    pub replicates_per_probe: u64,
    pub target_probability: f64,
}

impl Default for CriticalGammaConfig {
    fn default() -> Self {
        Self {
            tolerance: 0.02,
            replicates_per_probe: 400,
            target_probability: 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub gamma: f64,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalGammaEstimate {
    pub gamma_c: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub replicates_per_probe: u64,
    pub target_probability: f64,
    pub probes: Vec<Probe>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GammaSearch {
    Converged(CriticalGammaEstimate),
    /// Spread probability does not cross the target between gamma = 0 and 1.
    NoCrossing {
        p_at_zero: f64,
        p_at_one: f64,
        replicates_per_probe: u64,
        target_probability: f64,
    },
}

impl GammaSearch {
    pub fn estimate(&self) -> Option<&CriticalGammaEstimate> {
        match self {
            GammaSearch::Converged(e) => Some(e),
            GammaSearch::NoCrossing { .. } => None,
        }
    }
}

/// Bisects gamma for the crossing of `target_probability`. Probe `k`
/// (0: gamma = 0, 1: gamma = 1, then bisection midpoints) uses master seed
/// `derive_seed(master_seed, k)`.
pub fn estimate_critical_gamma(
    layout: &Layout,
    params: &FireParams,
    ignition: BlockSite,
    config: &CriticalGammaConfig,
    master_seed: u64,
) -> Result<GammaSearch> {
    if config.tolerance.is_nan() || config.tolerance <= 0.0 {
        return Err(invalid("tolerance must be positive"));
    }
    if !(config.target_probability > 0.0 && config.target_probability < 1.0) {
        return Err(invalid("target probability must lie in (0, 1)"));
    }
    let model = FireModel::new(layout);
    let reps = config.replicates_per_probe;
    let target = config.target_probability;
    let mut probe_index = 0u64;
    let mut probes = Vec::new();
    let mut probe = |gamma: f64| -> Result<f64> {
        let p = spread_probability_with(
            &model,
            &params.with_gamma(gamma),
            ignition,
            reps,
            derive_seed(master_seed, probe_index),
        )?
        .probability;
        probe_index += 1;
        probes.push(Probe {
            gamma,
            probability: p,
        });
        Ok(p)
    };

    let p_at_zero = probe(0.0)?;
    let p_at_one = probe(1.0)?;
    if !(p_at_zero < target && p_at_one >= target) {
        return Ok(GammaSearch::NoCrossing {
            p_at_zero,
            p_at_one,
            replicates_per_probe: reps,
            target_probability: target,
        });
    }

    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > config.tolerance {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(GammaSearch::Converged(CriticalGammaEstimate {
        gamma_c: 0.5 * (lo + hi),
        bracket_lo: lo,
        bracket_hi: hi,
        replicates_per_probe: reps,
        target_probability: target,
        probes,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{build_checkerboard, build_linear};

    fn params(gamma: f64, r: u32, sparks: u32, max_steps: u64) -> FireParams {
        FireParams::new(gamma, r, sparks, max_steps, 0.5).unwrap()
    }

    /// Brute-force pairwise count.
    fn pairwise_neighbours(layout: &Layout, site: BlockSite, r: u64) -> usize {
        layout
            .blocks()
            .into_iter()
            .filter(|&b| b != site && block_distance(site, b) <= r)
            .count()
    }

    #[test]
    fn block_distance_cases() {
        let a = BlockSite::new(1, 1);
        assert_eq!(block_distance(a, a), 0);
        assert_eq!(
            block_distance(BlockSite::new(0, 0), BlockSite::new(0, 2)),
            1
        );
        assert_eq!(block_distance(a, BlockSite::new(7, 3)), 3);
    }

    #[test]
    fn neighbour_counts_match_pairwise_oracle() {
        let cb = build_checkerboard(30).unwrap();
        let centre_cb = BlockSite::new(15, 15);
        let line = build_linear(31).unwrap();
        let centre_line = BlockSite::new(0, 30);
        for r in 1..=6u32 {
            let n_cb = receptive_neighbors(&cb, centre_cb, r).unwrap();
            let n_line = receptive_neighbors(&line, centre_line, r).unwrap();
            assert_eq!(n_cb, pairwise_neighbours(&cb, centre_cb, r as u64));
            assert_eq!(n_line, pairwise_neighbours(&line, centre_line, r as u64));
            let side = 2 * r as usize + 1;
            assert_eq!(n_cb, side * side - 1);
            assert_eq!(n_line, 2 * r as usize);
        }
        assert_eq!(receptive_neighbors(&cb, centre_cb, 1).unwrap(), 8);
    }

    #[test]
    fn neighbour_counts_near_edges_are_truncated() {
        let cb = build_checkerboard(10).unwrap();
        let corner = BlockSite::new(1, 1);
        assert_eq!(receptive_neighbors(&cb, corner, 3).unwrap(), 15);
        assert_eq!(
            receptive_neighbors(&cb, corner, 3).unwrap(),
            pairwise_neighbours(&cb, corner, 3)
        );
        assert!(receptive_neighbors(&cb, BlockSite::new(0, 0), 3).is_err());
    }

    #[test]
    fn zero_gamma_no_sparks_burns_out_immediately() {
        let layout = build_checkerboard(10).unwrap();
        let model = FireModel::new(&layout);
        let ignition = layout.central_block().unwrap();
        let state = model.initial_state(ignition).unwrap();
        assert_eq!(state.burning_count(), 1);
        let next = step_fire(&state, &model, &params(0.0, 1, 0, 10), &FireStream::new(1));
        let idx = model.index_of(ignition).unwrap();
        assert_eq!(next.status[idx], BlockStatus::BurntOut);
        assert_eq!(next.ever_burned().iter().filter(|&&b| b).count(), 1);
        assert_eq!(next.step, 1);

        let out = simulate_fire(&layout, &params(0.0, 1, 0, 10), ignition, 3).unwrap();
        assert_eq!(out.burned_fraction, 1.0 / 25.0);
        assert!(!out.percolated);
        assert_eq!(out.duration, 1);
    }

    #[test]
    fn full_survival_keeps_burning_count_non_decreasing() {
        let layout = build_checkerboard(16).unwrap();
        let model = FireModel::new(&layout);
        let p = params(1.0, 2, 1, 50);
        let stream = FireStream::new(11);
        let mut state = model
            .initial_state(layout.central_block().unwrap())
            .unwrap();
        for _ in 0..50 {
            let next = step_fire(&state, &model, &p, &stream);
            assert!(next.burning_count() >= state.burning_count());
            state = next;
        }
    }

    #[test]
    fn single_block_always_fully_burned() {
        let layout = build_linear(1).unwrap();
        for gamma in [0.0, 0.5, 1.0] {
            let out =
                simulate_fire(&layout, &params(gamma, 3, 4, 20), BlockSite::new(0, 0), 5).unwrap();
            assert_eq!(out.burned_fraction, 1.0);
            assert!(!out.percolated);
        }
    }

    #[test]
    fn two_block_strip_percolates_for_every_seed() {
        // Each step the neighbour is hit with probability 1/8; over 200
        // steps the miss probability is (7/8)^200 < 3e-12.
        let layout = build_linear(2).unwrap();
        let p = params(1.0, 1, 1, 200);
        for seed in 0..2000 {
            let out = simulate_fire(&layout, &p, BlockSite::new(0, 0), seed).unwrap();
            assert!(out.percolated, "seed {seed}");
            assert_eq!(out.burned_fraction, 1.0);
        }
    }

    #[test]
    fn simulate_is_deterministic() {
        let layout = build_checkerboard(20).unwrap();
        let p = params(0.6, 3, 1, 500);
        let ignition = layout.central_block().unwrap();
        let a = simulate_fire(&layout, &p, ignition, 77).unwrap();
        let b = simulate_fire(&layout, &p, ignition, 77).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn run_agrees_with_repeated_step_fire() {
        let layout = build_checkerboard(14).unwrap();
        let model = FireModel::new(&layout);
        let p = params(0.7, 2, 2, 40);
        let ignition = layout.central_block().unwrap();
        for seed in 0..20 {
            let stream = FireStream::new(seed);
            let mut state = model.initial_state(ignition).unwrap();
            while state.burning_count() > 0 && state.step < p.max_steps {
                state = step_fire(&state, &model, &p, &stream);
            }
            let out = model.run(&p, ignition, seed).unwrap();
            assert_eq!(out.burn_map, state.ever_burned());
            assert_eq!(out.duration, state.step);
        }
    }

    #[test]
    fn non_block_ignition_is_rejected() {
        let layout = build_checkerboard(10).unwrap();
        assert!(matches!(
            simulate_fire(&layout, &FireParams::default(), BlockSite::new(0, 0), 1),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn params_are_validated() {
        assert!(FireParams::new(1.1, 3, 1, 10, 0.5).is_err());
        assert!(FireParams::new(0.5, 0, 1, 10, 0.5).is_err());
        assert!(FireParams::new(0.5, 3, 1, 0, 0.5).is_err());
        assert!(FireParams::new(0.5, 3, 1, 10, 0.0).is_err());
        assert!(FireParams::new(0.5, 3, 0, 10, 1.0).is_ok());
    }

    #[test]
    fn burn_grid_marks_burned_blocks() {
        let layout = build_linear(3).unwrap();
        let out = FireOutcome {
            burned_fraction: 2.0 / 3.0,
            percolated: true,
            duration: 4,
            burn_map: vec![true, true, false],
        };
        assert_eq!(out.burn_grid(&layout), "X.X.B.\n");
    }

    #[test]
    fn spread_extremes() {
        let layout = build_checkerboard(10).unwrap();
        let ignition = layout.central_block().unwrap();
        let none = spread_probability(&layout, &params(0.0, 3, 0, 50), ignition, 50, 1).unwrap();
        assert_eq!(none.probability, 0.0);
        assert_eq!(none.ci_halfwidth, 0.0);
        let all = spread_probability(&layout, &params(1.0, 3, 8, 500), ignition, 200, 1).unwrap();
        assert!(all.probability >= 0.99, "{all:?}");
    }

    #[test]
    fn single_block_has_no_crossing() {
        let layout = build_linear(1).unwrap();
        let res = estimate_critical_gamma(
            &layout,
            &FireParams::default(),
            BlockSite::new(0, 0),
            &CriticalGammaConfig {
                replicates_per_probe: 20,
                ..Default::default()
            },
            3,
        )
        .unwrap();
        assert_eq!(
            res,
            GammaSearch::NoCrossing {
                p_at_zero: 0.0,
                p_at_one: 0.0,
                replicates_per_probe: 20,
                target_probability: 0.5
            }
        );
    }

    #[test]
    fn bisection_bracket_respects_tolerance() {
        let layout = build_checkerboard(12).unwrap();
        let res = estimate_critical_gamma(
            &layout,
            &params(0.0, 2, 1, 200),
            layout.central_block().unwrap(),
            &CriticalGammaConfig {
                tolerance: 0.05,
                replicates_per_probe: 100,
                target_probability: 0.5,
            },
            9,
        )
        .unwrap();
        let est = res.estimate().expect("crossing exists");
        assert!(est.bracket_hi - est.bracket_lo <= 0.05);
        assert!(est.bracket_lo <= est.gamma_c && est.gamma_c <= est.bracket_hi);
        assert!(est.probes.len() >= 2 + 5);
    }
}
