//! SVG output: one square per cell.
//!
//! Blocks are drawn solid `#333333`. Distance heatmaps map reachable aisle
//! cells linearly from `#ffffcc` (distance 1) to `#bd0026` (the field
//! maximum); enclosed aisle cells are `#7f7f7f`. Plain site plans draw aisles
//! `#ffffff`.

use std::fmt::Write;

use crate::egress::{CellDistance, DistanceField};
use crate::layout::{CellKind, Layout};

const CELL: usize = 10;
const BLOCK: &str = "#333333";
const ENCLOSED: &str = "#7f7f7f";
const RAMP_LO: (u8, u8, u8) = (0xff, 0xff, 0xcc);
const RAMP_HI: (u8, u8, u8) = (0xbd, 0x00, 0x26);

/// Ramp colour for distance `d` on a field whose largest distance is `max`.
pub fn ramp_color(d: u32, max: u32) -> String {
    let t = if max <= 1 {
        0.0
    } else {
        (d.saturating_sub(1)) as f64 / (max - 1) as f64
    };
    let lerp = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * t).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(RAMP_LO.0, RAMP_HI.0),
        lerp(RAMP_LO.1, RAMP_HI.1),
        lerp(RAMP_LO.2, RAMP_HI.2)
    )
}

fn svg(height: usize, width: usize, fill: impl Fn(usize, usize) -> String) -> String {
    let (w, h) = (width * CELL, height * CELL);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    for r in 0..height {
        for c in 0..width {
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{}\"/>",
                c * CELL,
                r * CELL,
                fill(r, c)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_site_plan(layout: &Layout) -> String {
    svg(layout.height(), layout.width(), |r, c| {
        match layout.cells()[r * layout.width() + c] {
            CellKind::Block => BLOCK.to_string(),
            CellKind::Aisle => "#ffffff".to_string(),
        }
    })
}

pub fn render_distance_field(field: &DistanceField) -> String {
    let max = field.max().unwrap_or(1);
    svg(field.height(), field.width(), |r, c| {
        match field.get(r, c) {
            CellDistance::Block => BLOCK.to_string(),
            CellDistance::Unreachable => ENCLOSED.to_string(),
            CellDistance::Steps(d) => ramp_color(d, max),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egress::distance_field;
    use crate::layout::build_checkerboard;

    #[test]
    fn ramp_endpoints() {
        assert_eq!(ramp_color(1, 5), "#ffffcc");
        assert_eq!(ramp_color(5, 5), "#bd0026");
        assert_eq!(ramp_color(1, 1), "#ffffcc");
    }

    #[test]
    fn one_rect_per_cell() {
        let l = build_checkerboard(6).unwrap();
        let s = render_distance_field(&distance_field(&l));
        assert_eq!(s.matches("<rect").count(), 36);
        assert_eq!(s.matches(BLOCK).count(), 9);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert_eq!(render_site_plan(&l).matches("#ffffff").count(), 27);
    }
}
