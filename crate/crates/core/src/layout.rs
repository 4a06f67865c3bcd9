//! Block/aisle grids: generators for the layout family and the site-plan
//! text format.
//!
//! Cell `(row, col)` is addressed row-major from the top-left corner. Any
//! position outside `0..height x 0..width` is exterior. Generated layouts
//! place blocks on a spacing-two sub-lattice, so halving a block's cell
//! coordinates gives its position in block-width units.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    Block,
    Aisle,
}

impl CellKind {
    pub fn symbol(self) -> char {
        match self {
            CellKind::Block => 'B',
            CellKind::Aisle => '.',
        }
    }
}

/// A rectangular market grid.
///
/// Equality compares the grid only; `name` is a free-text label and is not
/// part of the site-plan format.
#[derive(Clone, Debug)]
pub struct Layout {
    height: usize,
    width: usize,
    cells: Vec<CellKind>,
    name: String,
}

impl PartialEq for Layout {
    fn eq(&self, other: &Self) -> bool {
        self.height == other.height && self.width == other.width && self.cells == other.cells
    }
}

impl Eq for Layout {}

/// A block cell of a layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockSite {
    pub row: usize,
    pub col: usize,
}

impl BlockSite {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// Position on the block lattice (cell coordinates halved).
    pub fn block_coords(&self) -> (i64, i64) {
        ((self.row / 2) as i64, (self.col / 2) as i64)
    }
}

impl fmt::Display for BlockSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

/// Parameters for the layout family. Lengths tagged "block-widths" count
/// block lattice sites; `central_aisle` counts cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyParams {
    /// `side` x `side` cells, blocks at odd-odd positions.
    Checkerboard { side: usize },
    /// One row of `blocks` blocks alternating with aisles.
    Linear { blocks: usize },
    /// Two linear rows separated by `central_aisle` aisle rows.
    DoubleRow {
        blocks_per_row: usize,
        central_aisle: usize,
    },
    /// A linear spine of `spine` blocks along the top row with teeth of
    /// `tooth` blocks hanging down at spine positions 0, pitch, 2*pitch, ...
    Comb {
        spine: usize,
        tooth: usize,
        pitch: usize,
    },
    /// A one-block-thick ring with outer extent `width` x `height`
    /// block-widths.
    HollowRect { width: usize, height: usize },
    /// A serpentine strip: `segments` horizontal runs of `segment` blocks,
    /// `gap` block-widths apart, joined by vertical connector blocks at
    /// alternating ends.
    Zigzag {
        segment: usize,
        segments: usize,
        gap: usize,
    },
}

impl Layout {
    /// Builds a layout from row-major cells.
    ///
    /// Layouts without blocks are accepted so that aisle-only plans can be
    /// analysed for egress; operations that need blocks check for them.
    pub fn new(
        height: usize,
        width: usize,
        cells: Vec<CellKind>,
        name: impl Into<String>,
    ) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(invalid("layout must have at least one row and one column"));
        }
        if cells.len() != height * width {
            return Err(invalid(format!(
                "expected {} cells for a {}x{} grid, got {}",
                height * width,
                height,
                width,
                cells.len()
            )));
        }
        Ok(Self {
            height,
            width,
            cells,
            name: name.into(),
        })
    }

    fn from_block_cells(
        height: usize,
        width: usize,
        blocks: impl IntoIterator<Item = (usize, usize)>,
        name: String,
    ) -> Result<Self> {
        let mut cells = vec![CellKind::Aisle; height * width];
        for (r, c) in blocks {
            let slot = &mut cells[r * width + c];
            if *slot == CellKind::Block {
                return Err(invalid(format!("overlapping blocks at cell ({r}, {c})")));
            }
            *slot = CellKind::Block;
        }
        Self::new(height, width, cells, name)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn cells(&self) -> &[CellKind] {
        &self.cells
    }

    /// Cell kind at `(row, col)`, or `None` for exterior positions.
    pub fn get(&self, row: i64, col: i64) -> Option<CellKind> {
        if row < 0 || col < 0 || row as usize >= self.height || col as usize >= self.width {
            return None;
        }
        Some(self.cells[row as usize * self.width + col as usize])
    }

    pub fn is_block(&self, row: usize, col: usize) -> bool {
        row < self.height
            && col < self.width
            && self.cells[row * self.width + col] == CellKind::Block
    }

    pub fn block_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c == CellKind::Block).count()
    }

    pub fn aisle_count(&self) -> usize {
        self.cells.len() - self.block_count()
    }

    /// Block sites in row-major order.
    pub fn blocks(&self) -> Vec<BlockSite> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == CellKind::Block)
            .map(|(i, _)| BlockSite::new(i / self.width, i % self.width))
            .collect()
    }

    /// True when no two block cells share an edge.
    pub fn has_aisle_separation(&self) -> bool {
        for r in 0..self.height {
            for c in 0..self.width {
                if !self.is_block(r, c) {
                    continue;
                }
                if self.is_block(r + 1, c) || self.is_block(r, c + 1) {
                    return false;
                }
            }
        }
        true
    }

    /// The block nearest the centroid of all blocks (squared Euclidean
    /// distance in cell coordinates, ties broken row-major).
    pub fn central_block(&self) -> Option<BlockSite> {
        let blocks = self.blocks();
        let n = blocks.len() as i64;
        if n == 0 {
            return None;
        }
        let sum_r: i64 = blocks.iter().map(|b| b.row as i64).sum();
        let sum_c: i64 = blocks.iter().map(|b| b.col as i64).sum();
        // Compare n^2 * |p - centroid|^2 to stay in integers.
        blocks.into_iter().min_by_key(|b| {
            let dr = n * b.row as i64 - sum_r;
            let dc = n * b.col as i64 - sum_c;
            dr * dr + dc * dc
        })
    }
}

/// Checkerboard on an `side` x `side` grid with blocks at odd-odd cells.
pub fn build_checkerboard(side: usize) -> Result<Layout> {
    if side < 2 || side % 2 == 1 {
        return Err(invalid(format!(
            "checkerboard side must be even and at least 2, got {side}"
        )));
    }
    let blocks = (0..side / 2).flat_map(|i| (0..side / 2).map(move |j| (2 * i + 1, 2 * j + 1)));
    Layout::from_block_cells(side, side, blocks, format!("checkerboard L={side}"))
}

/// Single row of `2 * blocks` cells: blocks at even columns.
pub fn build_linear(blocks: usize) -> Result<Layout> {
    if blocks < 1 {
        return Err(invalid("linear layout needs at least one block"));
    }
    Layout::from_block_cells(
        1,
        2 * blocks,
        (0..blocks).map(|i| (0, 2 * i)),
        format!("linear N={blocks}"),
    )
}

fn require_positive(name: &str, value: usize) -> Result<()> {
    if value < 1 {
        return Err(invalid(format!("{name} must be at least 1, got {value}")));
    }
    Ok(())
}

pub fn build_variant(params: &FamilyParams) -> Result<Layout> {
    match *params {
        FamilyParams::Checkerboard { side } => build_checkerboard(side),
        FamilyParams::Linear { blocks } => build_linear(blocks),
        FamilyParams::DoubleRow {
            blocks_per_row,
            central_aisle,
        } => {
            require_positive("blocks_per_row", blocks_per_row)?;
            require_positive("central_aisle", central_aisle)?;
            let lower = central_aisle + 1;
            let cells = (0..blocks_per_row).flat_map(|i| [(0, 2 * i), (lower, 2 * i)]);
            Layout::from_block_cells(
                lower + 1,
                2 * blocks_per_row,
                cells,
                format!("double-row N={blocks_per_row}x2 aisle={central_aisle}"),
            )
        }
        FamilyParams::Comb {
            spine,
            tooth,
            pitch,
        } => {
            require_positive("spine", spine)?;
            require_positive("tooth", tooth)?;
            require_positive("pitch", pitch)?;
            let spine_cells = (0..spine).map(|j| (0, 2 * j));
            let teeth = (0..spine)
                .step_by(pitch)
                .flat_map(|j| (1..=tooth).map(move |k| (2 * k, 2 * j)));
            Layout::from_block_cells(
                2 * tooth + 1,
                2 * spine - 1,
                spine_cells.chain(teeth),
                format!("comb spine={spine} tooth={tooth} pitch={pitch}"),
            )
        }
        FamilyParams::HollowRect { width, height } => {
            require_positive("width", width)?;
            require_positive("height", height)?;
            let ring = (0..height).flat_map(|i| {
                (0..width)
                    .filter(move |&j| i == 0 || i + 1 == height || j == 0 || j + 1 == width)
                    .map(move |j| (2 * i, 2 * j))
            });
            Layout::from_block_cells(
                2 * height - 1,
                2 * width - 1,
                ring,
                format!("hollow-rect {width}x{height}"),
            )
        }
        FamilyParams::Zigzag {
            segment,
            segments,
            gap,
        } => {
            require_positive("segment", segment)?;
            require_positive("segments", segments)?;
            require_positive("gap", gap)?;
            let mut cells = Vec::with_capacity(segment * segments + (segments - 1) * (gap - 1));
            for k in 0..segments {
                let row = k * gap;
                cells.extend((0..segment).map(|j| (2 * row, 2 * j)));
                if k + 1 < segments {
                    let col = if k % 2 == 0 { segment - 1 } else { 0 };
                    cells.extend((row + 1..row + gap).map(|i| (2 * i, 2 * col)));
                }
            }
            Layout::from_block_cells(
                2 * gap * (segments - 1) + 1,
                2 * segment - 1,
                cells,
                format!("zigzag segment={segment} segments={segments} gap={gap}"),
            )
        }
    }
}

/// Parses `B`/`.` site-plan text. A single trailing newline is optional.
pub fn parse_site_plan(text: &str) -> Result<Layout> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty site plan".into(),
        });
    }
    let mut width = None;
    let mut cells = Vec::new();
    let mut height = 0;
    for (i, line) in body.split('\n').enumerate() {
        let line_no = i + 1;
        let mut count = 0;
        for (j, ch) in line.chars().enumerate() {
            let kind = match ch {
                'B' => CellKind::Block,
                '.' => CellKind::Aisle,
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        column: j + 1,
                        message: format!("illegal character {other:?} (expected 'B' or '.')"),
                    })
                }
            };
            cells.push(kind);
            count += 1;
        }
        match width {
            None if count == 0 => {
                return Err(Error::Parse {
                    line: line_no,
                    column: 1,
                    message: "empty row".into(),
                })
            }
            None => width = Some(count),
            Some(w) if w != count => {
                return Err(Error::Parse {
                    line: line_no,
                    column: count.min(w) + 1,
                    message: format!("ragged row: {count} cells, expected {w}"),
                })
            }
            Some(_) => {}
        }
        height += 1;
    }
    Layout::new(height, width.unwrap_or(0), cells, "site plan")
}

/// Canonical site-plan text: one line per row, each terminated by `\n`.
pub fn serialize_site_plan(layout: &Layout) -> String {
    let mut out = String::with_capacity(layout.height * (layout.width + 1));
    for row in layout.cells.chunks(layout.width) {
        out.extend(row.iter().map(|c| c.symbol()));
        out.push('\n');
    }
    out
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_site_plan(self))
    }
}
