//! Strip packing built on bin packing.
//!
//! * [`strip_offline`]: batch rects into fixed-height slips and pack the slips with any
//!   1-D algorithm, plus the NFDH / FFDH level baselines.
//! * [`strip_online`]: shelves for narrow rects, slips driven by Super Harmonic for wide
//!   ones, plus classic shelf baselines.
//! * [`binpack`]: the 1-D algorithms, including the Super Harmonic framework.
//! * [`analysis`]: the weighting system used to bound Super Harmonic and its strip variant.

pub mod analysis;
pub mod binpack;
mod error;
pub mod geometry;
pub mod layout;
pub mod strip_offline;
pub mod strip_online;

pub use error::{Error, Result};
pub use geometry::{lower_bound, validate_packing, Instance, Placement, Rect, StripPacking};
pub use layout::{Packed, Region, RegionKind};

/// Absolute tolerance for every geometric and capacity comparison.
pub const TAU: f64 = 1e-9;
