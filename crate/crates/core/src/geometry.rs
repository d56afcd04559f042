//! Rectangles, instances, committed strip packings and their validation.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::TAU;

/// An axis-parallel item with width and height in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub id: u64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn new(id: u64, w: f64, h: f64) -> Result<Self> {
        let r = Rect { id, w, h };
        r.check()?;
        Ok(r)
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    fn check(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v <= 1.0;
        if ok(self.w) && ok(self.h) {
            Ok(())
        } else {
            Err(Error::InvalidRect {
                id: self.id,
                w: self.w,
                h: self.h,
            })
        }
    }
}

/// A strip packing problem. The order of `rects` is the online arrival order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_opt: Option<f64>,
    pub rects: Vec<Rect>,
}

impl Instance {
    /// Builds an instance, rejecting degenerate or oversized rects and duplicate ids.
    pub fn new(name: impl Into<String>, rects: Vec<Rect>, known_opt: Option<f64>) -> Result<Self> {
        let inst = Instance {
            name: name.into(),
            known_opt,
            rects,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Checks the invariants that deserialization cannot enforce.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for r in &self.rects {
            r.check()?;
            if !seen.insert(r.id) {
                return Err(Error::DuplicateId(r.id));
            }
        }
        if let Some(opt) = self.known_opt {
            if !(opt.is_finite() && opt >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "known_opt {opt} is not a height"
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, InstanceLoadError> {
        let inst: Instance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn total_area(&self) -> f64 {
        self.rects.iter().map(Rect::area).sum()
    }

    pub fn rect_map(&self) -> HashMap<u64, Rect> {
        self.rects.iter().map(|r| (r.id, *r)).collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum InstanceLoadError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// Lower-left corner of a placed rect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    #[serde(rename = "id")]
    pub rect_id: u64,
    pub x: f64,
    pub y: f64,
}

/// A committed packing: one placement per rect and the strip height used.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StripPacking {
    pub height: f64,
    pub placements: Vec<Placement>,
}

impl StripPacking {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("packing serializes")
    }
}

/// A geometric defect in a packing.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Overlap { a: u64, b: u64 },
    OutOfStrip { id: u64 },
    AboveHeight { id: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overlap { a, b } => write!(f, "overlap between rects {a} and {b}"),
            Violation::OutOfStrip { id } => write!(f, "rect {id} leaves the strip [0,1]"),
            Violation::AboveHeight { id } => {
                write!(f, "rect {id} extends above the packing height")
            }
        }
    }
}

/// The placement list does not describe the instance's rect set.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("placement ids do not match instance: missing {missing:?}, duplicate {duplicate:?}, unknown {unknown:?}")]
pub struct StructuralError {
    pub missing: Vec<u64>,
    pub duplicate: Vec<u64>,
    pub unknown: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Above this many rects the overlap check switches from all-pairs to a sweep over x.
pub const SWEEP_THRESHOLD: usize = 5000;

#[derive(Clone, Copy)]
struct Boxed {
    id: u64,
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Boxed {
    fn overlaps(&self, o: &Boxed) -> bool {
        let dx = self.x1.min(o.x1) - self.x0.max(o.x0);
        let dy = self.y1.min(o.y1) - self.y0.max(o.y0);
        dx > TAU && dy > TAU
    }
}

/// Checks a packing against its instance.
///
/// Id mismatches are a [`StructuralError`]; geometric defects are collected in the
/// report. Rects that only share an edge or a corner do not overlap.
pub fn validate_packing(
    instance: &Instance,
    packing: &StripPacking,
) -> std::result::Result<ValidationReport, StructuralError> {
    let rects = instance.rect_map();
    let mut seen = BTreeSet::new();
    let mut duplicate = Vec::new();
    let mut unknown = Vec::new();
    for p in &packing.placements {
        if !rects.contains_key(&p.rect_id) {
            unknown.push(p.rect_id);
        } else if !seen.insert(p.rect_id) {
            duplicate.push(p.rect_id);
        }
    }
    let missing: Vec<u64> = instance
        .rects
        .iter()
        .map(|r| r.id)
        .filter(|id| !seen.contains(id))
        .collect();
    if !(missing.is_empty() && duplicate.is_empty() && unknown.is_empty()) {
        return Err(StructuralError {
            missing,
            duplicate,
            unknown,
        });
    }

    let mut report = ValidationReport::default();
    let boxes: Vec<Boxed> = packing
        .placements
        .iter()
        .map(|p| {
            let r = rects[&p.rect_id];
            Boxed {
                id: p.rect_id,
                x0: p.x,
                y0: p.y,
                x1: p.x + r.w,
                y1: p.y + r.h,
            }
        })
        .collect();

    for b in &boxes {
        if b.x0 < -TAU || b.x1 > 1.0 + TAU || b.y0 < -TAU {
            report.violations.push(Violation::OutOfStrip { id: b.id });
        }
        if b.y1 > packing.height + TAU {
            report.violations.push(Violation::AboveHeight { id: b.id });
        }
    }

    let overlaps = if boxes.len() > SWEEP_THRESHOLD {
        overlaps_sweep(&boxes)
    } else {
        overlaps_pairwise(&boxes)
    };
    report.violations.extend(
        overlaps
            .into_iter()
            .map(|(a, b)| Violation::Overlap { a, b }),
    );
    Ok(report)
}

fn overlaps_pairwise(boxes: &[Boxed]) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for (i, a) in boxes.iter().enumerate() {
        for b in &boxes[i + 1..] {
            if a.overlaps(b) {
                out.push(ordered(a.id, b.id));
            }
        }
    }
    out.sort_unstable();
    out
}

fn overlaps_sweep(boxes: &[Boxed]) -> Vec<(u64, u64)> {
    let mut order: Vec<&Boxed> = boxes.iter().collect();
    order.sort_by(|a, b| a.x0.total_cmp(&b.x0));
    let mut out = Vec::new();
    for (i, a) in order.iter().enumerate() {
        for b in &order[i + 1..] {
            if b.x0 >= a.x1 - TAU {
                break;
            }
            if a.overlaps(b) {
                out.push(ordered(a.id, b.id));
            }
        }
    }
    out.sort_unstable();
    out
}

fn ordered(a: u64, b: u64) -> (u64, u64) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The best of the area bound, the stack of items wider than one half, and the tallest item.
pub fn lower_bound(instance: &Instance) -> f64 {
    let area = instance.total_area();
    let stack: f64 = instance
        .rects
        .iter()
        .filter(|r| r.w > 0.5)
        .map(|r| r.h)
        .sum();
    let tallest = instance.rects.iter().map(|r| r.h).fold(0.0, f64::max);
    area.max(stack).max(tallest)
}
