//! SVG rendering of packings: one strip width is 600 units, heights use the same scale.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context;
use strippack::{Instance, Packed, RegionKind};

pub const SCALE: f64 = 600.0;
const MARGIN: f64 = 10.0;

const PALETTE: [&str; 16] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

/// Harmonic width class: `i` for widths in `(1/(i+1), 1/i]`.
fn width_class(w: f64) -> usize {
    ((1.0 / w).floor() as usize).max(1)
}

pub fn render_svg(instance: &Instance, packed: &Packed) -> String {
    let height = packed.packing.height;
    let (w_px, h_px) = (SCALE + 2.0 * MARGIN, height * SCALE + 2.0 * MARGIN);
    // strip y grows upward; SVG y grows downward
    let sy = |y: f64, h: f64| MARGIN + (height - y - h) * SCALE;
    let rects = instance.rect_map();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w_px:.3}" height="{h_px:.3}" viewBox="0 0 {w_px:.3} {h_px:.3}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect class="strip" x="{MARGIN:.3}" y="{MARGIN:.3}" width="{SCALE:.3}" height="{:.3}" fill="none" stroke="#000" stroke-width="1"/>"##,
        height * SCALE
    );
    for p in &packed.packing.placements {
        let Some(r) = rects.get(&p.rect_id) else {
            continue;
        };
        let color = PALETTE[width_class(r.w) % PALETTE.len()];
        let _ = writeln!(
            out,
            r##"<rect class="item" data-id="{}" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{color}" stroke="#222" stroke-width="0.5"/>"##,
            r.id,
            MARGIN + p.x * SCALE,
            sy(p.y, r.h),
            r.w * SCALE,
            r.h * SCALE
        );
    }
    for reg in &packed.regions {
        let (class, color) = match reg.kind {
            RegionKind::Band => ("band", "#000"),
            RegionKind::Slip(_) => ("slip", "#555"),
            RegionKind::Shelf(_) => ("shelf", "#c00"),
            RegionKind::Level => ("level", "#00c"),
        };
        let _ = writeln!(
            out,
            r#"<rect class="{class}" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="{color}" stroke-width="1" stroke-dasharray="4 3"/>"#,
            MARGIN + reg.x * SCALE,
            sy(reg.y, reg.h),
            reg.w * SCALE,
            reg.h * SCALE
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_svg(instance: &Instance, packed: &Packed, path: &Path) -> anyhow::Result<()> {
    std::fs::write(path, render_svg(instance, packed))
        .with_context(|| format!("writing {}", path.display()))
}
