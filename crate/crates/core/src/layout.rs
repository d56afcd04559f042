//! Packings annotated with the containers that produced them, for rendering and checks.

use crate::geometry::StripPacking;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionKind {
    /// A full-width bin of height `c` holding slips.
    Band,
    /// A slip inside a band; the index is its type (online) or 0 (offline).
    Slip(usize),
    /// A full-width shelf; the index is its height class.
    Shelf(i32),
    /// A level of a level algorithm.
    Level,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub kind: RegionKind,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

/// A packing plus the regions drawn around its content.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Packed {
    pub packing: StripPacking,
    pub regions: Vec<Region>,
}
