//! Offline strip packing.
//!
//! Batch-and-pack sorts rects by width, stacks them into slips of height `c`, and then
//! treats every slip except the last as a 1-D item whose size is the slip width. Each
//! bin of the chosen 1-D algorithm becomes a band of height `c`; the last slip gets a
//! band of its own on top.

use crate::binpack::{BinAlgorithm, BinAssignment};
use crate::error::{Error, Result};
use crate::geometry::{Instance, Placement, StripPacking};
use crate::layout::{Packed, Region, RegionKind};
use crate::TAU;

/// A width-`width`, height-`capacity` container with rects stacked bottom-up.
#[derive(Debug, Clone, PartialEq)]
pub struct Slip {
    pub width: f64,
    pub capacity: f64,
    /// `(rect id, height)` in stacking order.
    pub contents: Vec<(u64, f64)>,
    pub packed_height: f64,
}

impl Slip {
    fn new(width: f64, capacity: f64) -> Self {
        Slip {
            width,
            capacity,
            contents: Vec::new(),
            packed_height: 0.0,
        }
    }

    fn push(&mut self, id: u64, h: f64) {
        self.contents.push((id, h));
        self.packed_height += h;
    }
}

fn check_c(c: f64) -> Result<()> {
    if c.is_finite() && c > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "slip height c must exceed 1, got {c}"
        )))
    }
}

/// Stacks rects, widest first, into slips of height `c`. Every slip except the last
/// ends with packed height above `c - 1`.
pub fn batch_into_slips(instance: &Instance, c: f64) -> Result<Vec<Slip>> {
    check_c(c)?;
    let mut rects = instance.rects.clone();
    rects.sort_by(|a, b| b.w.total_cmp(&a.w).then(a.id.cmp(&b.id)));
    let mut slips: Vec<Slip> = Vec::new();
    for r in rects {
        match slips.last_mut() {
            Some(s) if s.packed_height + r.h <= c + TAU => s.push(r.id, r.h),
            _ => {
                let mut s = Slip::new(r.w, c);
                s.push(r.id, r.h);
                slips.push(s);
            }
        }
    }
    Ok(slips)
}

/// A batch-and-pack result with the intermediate slips and 1-D assignment.
#[derive(Debug, Clone)]
pub struct BatchPacked {
    pub packed: Packed,
    pub slips: Vec<Slip>,
    /// Assignment of the closed slips (all but the last) to bins.
    pub bins: BinAssignment,
    pub c: f64,
}

impl BatchPacked {
    pub fn band_count(&self) -> usize {
        self.bins.bin_count()
    }
}

pub fn bp_pack(instance: &Instance, c: f64, bin_alg: &BinAlgorithm) -> Result<BatchPacked> {
    let slips = batch_into_slips(instance, c)?;
    let closed = slips.len().saturating_sub(1);
    let sizes: Vec<f64> = slips[..closed].iter().map(|s| s.width).collect();
    let bins = bin_alg.run(&sizes)?;

    let mut placements = Vec::with_capacity(instance.len());
    let mut regions = Vec::new();
    let mut place_slip = |slip: &Slip, x: f64, base: f64, regions: &mut Vec<Region>| {
        regions.push(Region {
            kind: RegionKind::Slip(0),
            x,
            y: base,
            w: slip.width,
            h: c,
        });
        let mut y = base;
        for &(id, h) in &slip.contents {
            placements.push(Placement { rect_id: id, x, y });
            y += h;
        }
    };
    for (b, bin) in bins.bins.iter().enumerate() {
        let base = b as f64 * c;
        regions.push(Region {
            kind: RegionKind::Band,
            x: 0.0,
            y: base,
            w: 1.0,
            h: c,
        });
        let mut x = 0.0;
        for &(slip_idx, width) in bin {
            place_slip(&slips[slip_idx], x, base, &mut regions);
            x += width;
        }
    }
    let mut height = bins.bin_count() as f64 * c;
    if let Some(last) = slips.last() {
        regions.push(Region {
            kind: RegionKind::Band,
            x: 0.0,
            y: height,
            w: 1.0,
            h: c,
        });
        place_slip(last, 0.0, height, &mut regions);
        height += c;
    }
    Ok(BatchPacked {
        packed: Packed {
            packing: StripPacking { height, placements },
            regions,
        },
        slips,
        bins,
        c,
    })
}

fn by_height_desc(instance: &Instance) -> Vec<crate::geometry::Rect> {
    let mut rects = instance.rects.clone();
    rects.sort_by(|a, b| b.h.total_cmp(&a.h).then(a.id.cmp(&b.id)));
    rects
}

struct Level {
    y: f64,
    h: f64,
    fill: f64,
}

fn level_pack(instance: &Instance, first_fit: bool) -> Packed {
    let mut levels: Vec<Level> = Vec::new();
    let mut placements = Vec::with_capacity(instance.len());
    let mut top = 0.0;
    for r in by_height_desc(instance) {
        let fits = |l: &Level| l.fill + r.w <= 1.0 + TAU;
        let target = if first_fit {
            levels.iter().position(fits)
        } else {
            levels.len().checked_sub(1).filter(|&i| fits(&levels[i]))
        };
        let idx = target.unwrap_or_else(|| {
            levels.push(Level {
                y: top,
                h: r.h,
                fill: 0.0,
            });
            top += r.h;
            levels.len() - 1
        });
        let l = &mut levels[idx];
        placements.push(Placement {
            rect_id: r.id,
            x: l.fill,
            y: l.y,
        });
        l.fill += r.w;
    }
    let regions = levels
        .iter()
        .map(|l| Region {
            kind: RegionKind::Level,
            x: 0.0,
            y: l.y,
            w: 1.0,
            h: l.h,
        })
        .collect();
    Packed {
        packing: StripPacking {
            height: top,
            placements,
        },
        regions,
    }
}

/// Next Fit Decreasing Height.
pub fn nfdh(instance: &Instance) -> Packed {
    level_pack(instance, false)
}

/// First Fit Decreasing Height.
pub fn ffdh(instance: &Instance) -> Packed {
    level_pack(instance, true)
}
