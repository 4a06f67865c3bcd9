//! Distance to the exterior, closed-form checkerboard expectations and the
//! exponential mortality weight.
//!
//! Distances count grid-cell steps. An aisle cell on the grid boundary is one
//! step from the exterior, so every aisle cell of a linear strip has distance
//! 1 and the checkerboard mean grows like `L / 6`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};
use crate::layout::{CellKind, Layout};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellDistance {
    Block,
    Steps(u32),
    /// Aisle cell enclosed by blocks with no path off the grid.
    Unreachable,
}

/// Shortest 4-connected step count from each aisle cell to the exterior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceField {
    height: usize,
    width: usize,
    cells: Vec<CellDistance>,
}

impl DistanceField {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, row: usize, col: usize) -> CellDistance {
        self.cells[row * self.width + col]
    }

    pub fn cells(&self) -> &[CellDistance] {
        &self.cells
    }

    /// Finite distances in row-major order.
    pub fn reachable(&self) -> impl Iterator<Item = u32> + '_ {
        self.cells.iter().filter_map(|c| match c {
            CellDistance::Steps(d) => Some(*d),
            _ => None,
        })
    }

    pub fn unreachable_count(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| matches!(c, CellDistance::Unreachable))
            .count()
    }

    pub fn max(&self) -> Option<u32> {
        self.reachable().max()
    }
}

/// Multi-source BFS seeded at every boundary aisle cell with distance 1.
pub fn distance_field(layout: &Layout) -> DistanceField {
    let (h, w) = (layout.height(), layout.width());
    let mut cells: Vec<CellDistance> = layout
        .cells()
        .iter()
        .map(|k| match k {
            CellKind::Block => CellDistance::Block,
            CellKind::Aisle => CellDistance::Unreachable,
        })
        .collect();

    let mut queue = VecDeque::new();
    for r in 0..h {
        for c in 0..w {
            let on_edge = r == 0 || c == 0 || r + 1 == h || c + 1 == w;
            if on_edge && cells[r * w + c] == CellDistance::Unreachable {
                cells[r * w + c] = CellDistance::Steps(1);
                queue.push_back((r, c));
            }
        }
    }

    while let Some((r, c)) = queue.pop_front() {
        let CellDistance::Steps(d) = cells[r * w + c] else {
            unreachable!("queued cells always carry a distance")
        };
        let neighbours = [
            (r.wrapping_sub(1), c),
            (r + 1, c),
            (r, c.wrapping_sub(1)),
            (r, c + 1),
        ];
        for (nr, nc) in neighbours {
            if nr >= h || nc >= w {
                continue;
            }
            let slot = &mut cells[nr * w + nc];
            if *slot == CellDistance::Unreachable {
                *slot = CellDistance::Steps(d + 1);
                queue.push_back((nr, nc));
            }
        }
    }

    DistanceField {
        height: h,
        width: w,
        cells,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub d: u32,
    pub count: usize,
}

/// Summary of a distance field over its reachable aisle cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EgressStats {
    pub mean: f64,
    pub max: u32,
    pub aisle_cells: usize,
    pub histogram: Vec<HistogramBin>,
    /// Enclosed aisle cells, excluded from every other field.
    #[serde(skip)]
    pub unreachable: usize,
}

impl EgressStats {
    pub fn from_field(field: &DistanceField) -> Result<Self> {
        let max = field
            .max()
            .ok_or_else(|| domain("layout has no aisle cell connected to the exterior"))?;
        let mut counts = vec![0usize; max as usize + 1];
        for d in field.reachable() {
            counts[d as usize] += 1;
        }
        let aisle_cells: usize = counts.iter().sum();
        let total: u64 = counts
            .iter()
            .enumerate()
            .map(|(d, &n)| d as u64 * n as u64)
            .sum();
        let histogram = counts
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(d, &count)| HistogramBin { d: d as u32, count })
            .collect();
        Ok(Self {
            mean: total as f64 / aisle_cells as f64,
            max,
            aisle_cells,
            histogram,
            unreachable: field.unreachable_count(),
        })
    }
}

/// Mean distance from a uniformly chosen reachable aisle cell.
pub fn expected_egress(layout: &Layout) -> Result<EgressStats> {
    EgressStats::from_field(&distance_field(layout))
}

fn check_side(side: usize) -> Result<()> {
    if side < 2 || side % 2 == 1 {
        return Err(domain(format!(
            "side length must be even and >= 2, got {side}"
        )));
    }
    Ok(())
}

/// `Pr(D >= k) = ((L - 2k) / L)^2` for the continuum checkerboard; zero at
/// `k = L/2`.
pub fn analytic_tail(side: usize, k: usize) -> Result<f64> {
    check_side(side)?;
    if k > side / 2 {
        return Err(domain(format!("k must lie in 0..={}, got {k}", side / 2)));
    }
    let l = side as f64;
    let inner = (l - 2.0 * k as f64) / l;
    Ok(inner * inner)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticMode {
    /// `L/6 - 1/2 + 1/(3L)`, the closed form of the tail sum.
    Exact,
    /// `L/6`.
    Asymptotic,
}

pub fn analytic_expected(side: usize, mode: AnalyticMode) -> Result<f64> {
    check_side(side)?;
    let l = side as f64;
    Ok(match mode {
        AnalyticMode::Exact => l / 6.0 - 0.5 + 1.0 / (3.0 * l),
        AnalyticMode::Asymptotic => l / 6.0,
    })
}

/// `sqrt(N) / 3`: the asymptotic checkerboard expectation for `N` blocks,
/// defined for any `N` (the side `2 sqrt(N)` need not be an even integer).
pub fn asymptotic_expected_for_blocks(blocks: f64) -> f64 {
    blocks.sqrt() / 3.0
}

/// Exponential incapacitation weight `min(1, p0 * exp(lambda * d))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MortalityParams {
    lambda: f64,
    p0: f64,
}

impl MortalityParams {
    pub const DEFAULT_LAMBDA: f64 = 0.3;
    pub const DEFAULT_P0: f64 = 1e-3;

    pub fn new(lambda: f64, p0: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(invalid(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        if !(p0 > 0.0 && p0 <= 1.0) {
            return Err(invalid(format!("p0 must lie in (0, 1], got {p0}")));
        }
        Ok(Self { lambda, p0 })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }
}

impl Default for MortalityParams {
    fn default() -> Self {
        Self {
            lambda: Self::DEFAULT_LAMBDA,
            p0: Self::DEFAULT_P0,
        }
    }
}

pub fn mortality_weight(d: f64, params: &MortalityParams) -> Result<f64> {
    if d.is_nan() || d < 0.0 {
        return Err(domain(format!("distance must be >= 0, got {d}")));
    }
    Ok((params.p0 * (params.lambda * d).exp()).min(1.0))
}

/// Mean mortality weight over reachable aisle cells.
pub fn mortality_mean(layout: &Layout, params: &MortalityParams) -> Result<f64> {
    let stats = expected_egress(layout)?;
    let mut total = 0.0;
    for bin in &stats.histogram {
        total += bin.count as f64 * mortality_weight(bin.d as f64, params)?;
    }
    Ok(total / stats.aisle_cells as f64)
}

/// Ratio of mean mortality weights, `a` over `b`.
pub fn mortality_ratio(a: &Layout, b: &Layout, params: &MortalityParams) -> Result<f64> {
    Ok(mortality_mean(a, params)? / mortality_mean(b, params)?)
}
