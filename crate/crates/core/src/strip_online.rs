//! Online strip packing.
//!
//! Group-and-pack splits arriving rects by width. Narrow rects (width at most epsilon)
//! go onto shelves whose heights are powers of `r`, filled by Next Fit. Wide rects of
//! type `i` are stacked into the open type-`i` slip of width `t_i` and height `c`. A new
//! slip is handed to Super Harmonic as a 1-D item of size `t_i` the moment it is
//! created; every Super Harmonic bin is a full-width band of height `c`. Bands and
//! shelves are stacked in creation order, so the strip height is the sum of the
//! extents created so far.

use std::collections::BTreeMap;

use crate::binpack::{BinAlgorithm, OnlinePacker, SuperHarmonic, SuperHarmonicParams};
use crate::error::{Error, Result};
use crate::geometry::{Instance, Placement, Rect, StripPacking};
use crate::layout::{Packed, Region, RegionKind};
use crate::TAU;

/// Height class of `h` for rounding base `r`: the `s >= 0` with `r^(s+1) < h <= r^s`,
/// together with `r^s`.
pub fn height_class(h: f64, r: f64) -> (i32, f64) {
    let mut s = ((h.ln() / r.ln()).floor() as i32).max(0);
    while s > 0 && r.powi(s) < h {
        s -= 1;
    }
    while r.powi(s + 1) >= h {
        s += 1;
    }
    (s, r.powi(s))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GpConfig {
    pub epsilon: f64,
    pub r: f64,
    pub c: f64,
    pub params: SuperHarmonicParams,
}

impl GpConfig {
    pub fn new(epsilon: f64, r: f64, c: f64, params: SuperHarmonicParams) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return bad(format!("epsilon {epsilon} must lie in (0, 1/2)"));
        }
        if (epsilon - params.epsilon()).abs() > TAU {
            return bad(format!(
                "epsilon {epsilon} must equal the parameter set's t_(k+1) = {}",
                params.epsilon()
            ));
        }
        if !(r > 0.0 && r < 1.0) {
            return bad(format!("shelf base r {r} must lie in (0, 1)"));
        }
        if !(c.is_finite() && c > 1.0) {
            return bad(format!("slip height c {c} must exceed 1"));
        }
        Ok(GpConfig {
            epsilon: params.epsilon(),
            r,
            c,
            params,
        })
    }

    /// Harmonic_k parameters with `epsilon = 1/(k+1)`.
    pub fn harmonic(k: usize, r: f64, c: f64) -> Result<Self> {
        let params = SuperHarmonicParams::harmonic(k)?;
        Self::new(params.epsilon(), r, c, params)
    }

    /// `max{c/(c-1), 1/r}`, the multiplier on the consolidated weight in the height bound.
    pub fn height_factor(&self) -> f64 {
        (self.c / (self.c - 1.0)).max(1.0 / self.r)
    }

    /// Additive term of the height bound: `c (3k^2 + 3k + 1) + 1/(1-r) + 1`.
    ///
    /// Covers up to three under-filled bins per `(i,j)` group, one per other group and
    /// for Next Fit, `k` open slips, and one open shelf per height class.
    pub fn additive_constant(&self) -> f64 {
        let k = self.params.k() as f64;
        self.c * (3.0 * k * k + 3.0 * k + 1.0) + 1.0 / (1.0 - self.r) + 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShelfInfo {
    pub class: i32,
    pub y: f64,
    pub height: f64,
    pub fill: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlipInfo {
    pub item_type: usize,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub fill: f64,
    pub band: usize,
}

/// Running state of group-and-pack. Placements are append-only.
#[derive(Debug, Clone)]
pub struct GpState {
    config: GpConfig,
    strip_top: f64,
    shelves: Vec<ShelfInfo>,
    open_shelf: BTreeMap<i32, usize>,
    slips: Vec<SlipInfo>,
    open_slip: Vec<Option<usize>>,
    sh: SuperHarmonic,
    band_base: Vec<f64>,
    placements: Vec<Placement>,
}

impl GpState {
    pub fn new(config: GpConfig) -> Self {
        let k = config.params.k();
        GpState {
            sh: SuperHarmonic::new(config.params.clone()),
            config,
            strip_top: 0.0,
            shelves: Vec::new(),
            open_shelf: BTreeMap::new(),
            slips: Vec::new(),
            open_slip: vec![None; k + 1],
            band_base: Vec::new(),
            placements: Vec::new(),
        }
    }

    pub fn config(&self) -> &GpConfig {
        &self.config
    }

    /// Next free height; also the current strip height.
    pub fn strip_top(&self) -> f64 {
        self.strip_top
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn shelves(&self) -> &[ShelfInfo] {
        &self.shelves
    }

    pub fn slips(&self) -> &[SlipInfo] {
        &self.slips
    }

    /// Indices into [`slips`](Self::slips) of the open slip per type (index 0 unused).
    pub fn open_slips(&self) -> &[Option<usize>] {
        &self.open_slip
    }

    pub fn open_shelves(&self) -> impl Iterator<Item = &ShelfInfo> {
        self.open_shelf.values().map(|&i| &self.shelves[i])
    }

    pub fn band_count(&self) -> usize {
        self.band_base.len()
    }

    pub fn super_harmonic(&self) -> &SuperHarmonic {
        &self.sh
    }

    /// Places one rect; the placement is final.
    pub fn insert(&mut self, rect: &Rect) -> Result<Placement> {
        let rect = Rect::new(rect.id, rect.w, rect.h)?;
        let ty = self.config.params.type_of(rect.w);
        let (x, y) = if ty > self.config.params.k() {
            self.insert_narrow(&rect)
        } else {
            self.insert_wide(&rect, ty)?
        };
        let p = Placement {
            rect_id: rect.id,
            x,
            y,
        };
        self.placements.push(p);
        Ok(p)
    }

    fn insert_narrow(&mut self, rect: &Rect) -> (f64, f64) {
        let (class, height) = height_class(rect.h, self.config.r);
        let idx = match self.open_shelf.get(&class) {
            Some(&i) if self.shelves[i].fill + rect.w <= 1.0 + TAU => i,
            _ => {
                self.shelves.push(ShelfInfo {
                    class,
                    y: self.strip_top,
                    height,
                    fill: 0.0,
                });
                self.strip_top += height;
                let i = self.shelves.len() - 1;
                self.open_shelf.insert(class, i);
                i
            }
        };
        let shelf = &mut self.shelves[idx];
        let x = shelf.fill;
        shelf.fill += rect.w;
        (x, shelf.y)
    }

    fn insert_wide(&mut self, rect: &Rect, ty: usize) -> Result<(f64, f64)> {
        let c = self.config.c;
        let idx = match self.open_slip[ty] {
            Some(i) if self.slips[i].fill < c - 1.0 => i,
            _ => {
                let width = self.config.params.t(ty);
                let placed = self.sh.place(self.slips.len(), width)?;
                if placed.slot.opened {
                    debug_assert_eq!(placed.slot.bin, self.band_base.len());
                    self.band_base.push(self.strip_top);
                    self.strip_top += c;
                }
                self.slips.push(SlipInfo {
                    item_type: ty,
                    x: placed.slot.offset,
                    y: self.band_base[placed.slot.bin],
                    width,
                    fill: 0.0,
                    band: placed.slot.bin,
                });
                let i = self.slips.len() - 1;
                self.open_slip[ty] = Some(i);
                i
            }
        };
        let slip = &mut self.slips[idx];
        let at = (slip.x, slip.y + slip.fill);
        slip.fill += rect.h;
        Ok(at)
    }

    pub fn packed(&self) -> Packed {
        let c = self.config.c;
        let mut regions: Vec<Region> = self
            .band_base
            .iter()
            .map(|&y| Region {
                kind: RegionKind::Band,
                x: 0.0,
                y,
                w: 1.0,
                h: c,
            })
            .collect();
        regions.extend(self.slips.iter().map(|s| Region {
            kind: RegionKind::Slip(s.item_type),
            x: s.x,
            y: s.y,
            w: s.width,
            h: c,
        }));
        regions.extend(self.shelves.iter().map(|s| Region {
            kind: RegionKind::Shelf(s.class),
            x: 0.0,
            y: s.y,
            w: 1.0,
            h: s.height,
        }));
        Packed {
            packing: StripPacking {
                height: self.strip_top,
                placements: self.placements.clone(),
            },
            regions,
        }
    }
}

/// Runs group-and-pack over the instance in arrival order.
pub fn gp_run(instance: &Instance, config: &GpConfig) -> Result<GpState> {
    let mut state = GpState::new(config.clone());
    for r in &instance.rects {
        state.insert(r)?;
    }
    Ok(state)
}

/// Shelf packing with rounding base `r`: one stream of shelves per height class, the
/// inner online bin packing algorithm choosing the shelf within a class.
pub fn shelf_pack(instance: &Instance, inner: &BinAlgorithm, r: f64) -> Result<Packed> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "shelf base r {r} must lie in (0, 1)"
        )));
    }
    struct Class {
        packer: Box<dyn OnlinePacker>,
        shelf_y: Vec<f64>,
        height: f64,
    }
    let mut classes: BTreeMap<i32, Class> = BTreeMap::new();
    let mut top = 0.0;
    let mut placements = Vec::with_capacity(instance.len());
    let mut regions = Vec::new();
    for (n, rect) in instance.rects.iter().enumerate() {
        let (s, height) = height_class(rect.h, r);
        let class = match classes.entry(s) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(e) => {
                let packer = inner.online()?.ok_or_else(|| {
                    Error::InvalidConfig(format!(
                        "shelf packing needs an online algorithm, got {inner}"
                    ))
                })?;
                e.insert(Class {
                    packer,
                    shelf_y: Vec::new(),
                    height,
                })
            }
        };
        let slot = class.packer.insert(n, rect.w)?;
        if slot.opened {
            class.shelf_y.push(top);
            regions.push(Region {
                kind: RegionKind::Shelf(s),
                x: 0.0,
                y: top,
                w: 1.0,
                h: class.height,
            });
            top += class.height;
        }
        placements.push(Placement {
            rect_id: rect.id,
            x: slot.offset,
            y: class.shelf_y[slot.bin],
        });
    }
    Ok(Packed {
        packing: StripPacking {
            height: top,
            placements,
        },
        regions,
    })
}
