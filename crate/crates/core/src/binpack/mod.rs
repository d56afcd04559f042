//! One-dimensional bin packing: Next Fit, First Fit, FFD, Harmonic_k, Super Harmonic,
//! and an exact oracle for small inputs.
//!
//! Online algorithms are exposed both as whole-list functions and as incremental
//! [`OnlinePacker`] state machines, which the shelf and slip based strip algorithms
//! drive one item at a time.

mod exact;
mod params;
mod super_harmonic;

use std::fmt;
use std::str::FromStr;

pub use exact::{bin_opt_bruteforce, EXACT_MAX_ITEMS};
pub use params::{ParamFile, SuperHarmonicParams};
pub use super_harmonic::{Color, Group, ShSlot, SuperHarmonic};

use crate::error::{Error, Result};
use crate::TAU;

/// Result of a 1-D packing: bins of `(input index, size)` in insertion order.
#[derive(Debug, Clone, PartialEq, Default, serde::Serialize)]
pub struct BinAssignment {
    pub algorithm: String,
    pub bins: Vec<Vec<(usize, f64)>>,
}

impl BinAssignment {
    pub fn bin_count(&self) -> usize {
        self.bins.len()
    }

    pub fn loads(&self) -> Vec<f64> {
        self.bins
            .iter()
            .map(|b| b.iter().map(|&(_, s)| s).sum())
            .collect()
    }

    /// Checks capacity and that each input index appears exactly once with its size.
    pub fn check(&self, sizes: &[f64]) -> std::result::Result<(), String> {
        let mut seen = vec![false; sizes.len()];
        for (b, bin) in self.bins.iter().enumerate() {
            let load: f64 = bin.iter().map(|&(_, s)| s).sum();
            if load > 1.0 + TAU {
                return Err(format!("bin {b} has load {load}"));
            }
            for &(idx, size) in bin {
                if idx >= sizes.len() || seen[idx] {
                    return Err(format!("index {idx} out of range or repeated"));
                }
                if size != sizes[idx] {
                    return Err(format!(
                        "index {idx} carries size {size}, expected {}",
                        sizes[idx]
                    ));
                }
                seen[idx] = true;
            }
        }
        match seen.iter().position(|s| !s) {
            Some(idx) => Err(format!("index {idx} unpacked")),
            None => Ok(()),
        }
    }
}

pub(crate) fn check_size(index: usize, size: f64) -> Result<()> {
    if size > 0.0 && size <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidSize { index, size })
    }
}

fn check_sizes(sizes: &[f64]) -> Result<()> {
    sizes
        .iter()
        .enumerate()
        .try_for_each(|(i, &s)| check_size(i, s))
}

/// Where an online packer put an item.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slot {
    pub bin: usize,
    /// Left coordinate of the item inside its bin.
    pub offset: f64,
    /// The bin was opened for this item.
    pub opened: bool,
}

/// An online bin packing algorithm fed one item at a time.
pub trait OnlinePacker {
    fn name(&self) -> String;

    fn insert(&mut self, index: usize, size: f64) -> Result<Slot>;

    fn bin_count(&self) -> usize;

    fn assignment(&self) -> BinAssignment;
}

#[derive(Debug, Default, Clone)]
struct Bins {
    bins: Vec<Vec<(usize, f64)>>,
    loads: Vec<f64>,
}

impl Bins {
    fn open(&mut self, index: usize, size: f64) -> Slot {
        self.bins.push(vec![(index, size)]);
        self.loads.push(size);
        Slot {
            bin: self.bins.len() - 1,
            offset: 0.0,
            opened: true,
        }
    }

    fn add(&mut self, bin: usize, index: usize, size: f64) -> Slot {
        let offset = self.loads[bin];
        self.bins[bin].push((index, size));
        self.loads[bin] += size;
        Slot {
            bin,
            offset,
            opened: false,
        }
    }

    fn fits(&self, bin: usize, size: f64) -> bool {
        self.loads[bin] + size <= 1.0 + TAU
    }
}

#[derive(Debug, Default, Clone)]
pub struct NextFit {
    bins: Bins,
}

impl NextFit {
    pub fn new() -> Self {
        Self::default()
    }
}

impl OnlinePacker for NextFit {
    fn name(&self) -> String {
        "nf".into()
    }

    fn insert(&mut self, index: usize, size: f64) -> Result<Slot> {
        check_size(index, size)?;
        Ok(match self.bins.bins.len().checked_sub(1) {
            Some(last) if self.bins.fits(last, size) => self.bins.add(last, index, size),
            _ => self.bins.open(index, size),
        })
    }

    fn bin_count(&self) -> usize {
        self.bins.bins.len()
    }

    fn assignment(&self) -> BinAssignment {
        BinAssignment {
            algorithm: self.name(),
            bins: self.bins.bins.clone(),
        }
    }
}

#[derive(Debug, Default, Clone)]
pub struct FirstFit {
    bins: Bins,
}

impl FirstFit {
    pub fn new() -> Self {
        Self::default()
    }
}

impl OnlinePacker for FirstFit {
    fn name(&self) -> String {
        "ff".into()
    }

    fn insert(&mut self, index: usize, size: f64) -> Result<Slot> {
        check_size(index, size)?;
        Ok(
            match (0..self.bins.bins.len()).find(|&b| self.bins.fits(b, size)) {
                Some(b) => self.bins.add(b, index, size),
                None => self.bins.open(index, size),
            },
        )
    }

    fn bin_count(&self) -> usize {
        self.bins.bins.len()
    }

    fn assignment(&self) -> BinAssignment {
        BinAssignment {
            algorithm: self.name(),
            bins: self.bins.bins.clone(),
        }
    }
}

/// Classic Harmonic_k: type `i` (size in `(1/(i+1), 1/i]`, `i <= k`) bins hold `i` items
/// of that type only; items of size at most `1/(k+1)` are packed by Next Fit.
#[derive(Debug, Clone)]
pub struct Harmonic {
    k: usize,
    bins: Bins,
    // per type: open bin and its item count
    open: Vec<Option<(usize, usize)>>,
    small_open: Option<usize>,
}

impl Harmonic {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("harmonic needs k >= 1".into()));
        }
        Ok(Harmonic {
            k,
            bins: Bins::default(),
            open: vec![None; k + 1],
            small_open: None,
        })
    }

    /// Type index in `1..=k+1`; boundaries are `1/i` with the closed end on the right.
    pub fn type_of(&self, size: f64) -> usize {
        let bound = |i: usize| 1.0 / i as f64;
        let mut i = ((1.0 / size).floor() as usize).clamp(1, self.k + 1);
        while i <= self.k && size <= bound(i + 1) + TAU {
            i += 1;
        }
        while i > 1 && size > bound(i) + TAU {
            i -= 1;
        }
        i
    }
}

impl OnlinePacker for Harmonic {
    fn name(&self) -> String {
        format!("harmonic:{}", self.k)
    }

    fn insert(&mut self, index: usize, size: f64) -> Result<Slot> {
        check_size(index, size)?;
        let ty = self.type_of(size);
        if ty > self.k {
            let slot = match self.small_open {
                Some(b) if self.bins.fits(b, size) => self.bins.add(b, index, size),
                _ => self.bins.open(index, size),
            };
            self.small_open = Some(slot.bin);
            return Ok(slot);
        }
        let slot = match self.open[ty] {
            Some((b, count)) if count < ty => {
                self.open[ty] = Some((b, count + 1));
                self.bins.add(b, index, size)
            }
            _ => {
                let slot = self.bins.open(index, size);
                self.open[ty] = Some((slot.bin, 1));
                slot
            }
        };
        Ok(slot)
    }

    fn bin_count(&self) -> usize {
        self.bins.bins.len()
    }

    fn assignment(&self) -> BinAssignment {
        BinAssignment {
            algorithm: self.name(),
            bins: self.bins.bins.clone(),
        }
    }
}

fn run_online(mut packer: impl OnlinePacker, sizes: &[f64]) -> Result<BinAssignment> {
    check_sizes(sizes)?;
    for (i, &s) in sizes.iter().enumerate() {
        packer.insert(i, s)?;
    }
    Ok(packer.assignment())
}

pub fn next_fit(sizes: &[f64]) -> Result<BinAssignment> {
    run_online(NextFit::new(), sizes)
}

pub fn first_fit(sizes: &[f64]) -> Result<BinAssignment> {
    run_online(FirstFit::new(), sizes)
}

/// First Fit over the sizes sorted non-increasing; equal sizes keep input order.
pub fn first_fit_decreasing(sizes: &[f64]) -> Result<BinAssignment> {
    check_sizes(sizes)?;
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| sizes[b].total_cmp(&sizes[a]).then(a.cmp(&b)));
    let mut ff = FirstFit::new();
    for i in order {
        ff.insert(i, sizes[i])?;
    }
    let mut out = ff.assignment();
    out.algorithm = "ffd".into();
    Ok(out)
}

pub fn harmonic_k(sizes: &[f64], k: usize) -> Result<BinAssignment> {
    run_online(Harmonic::new(k)?, sizes)
}

pub fn super_harmonic(sizes: &[f64], params: &SuperHarmonicParams) -> Result<BinAssignment> {
    run_online(SuperHarmonic::new(params.clone()), sizes)
}

/// A bin packing algorithm selectable by name.
#[derive(Debug, Clone, PartialEq)]
pub enum BinAlgorithm {
    NextFit,
    FirstFit,
    FirstFitDecreasing,
    Harmonic(usize),
    SuperHarmonic(Box<SuperHarmonicParams>),
}

impl BinAlgorithm {
    pub fn run(&self, sizes: &[f64]) -> Result<BinAssignment> {
        match self {
            BinAlgorithm::NextFit => next_fit(sizes),
            BinAlgorithm::FirstFit => first_fit(sizes),
            BinAlgorithm::FirstFitDecreasing => first_fit_decreasing(sizes),
            BinAlgorithm::Harmonic(k) => harmonic_k(sizes, *k),
            BinAlgorithm::SuperHarmonic(p) => super_harmonic(sizes, p),
        }
    }

    /// An incremental packer, or `None` for offline algorithms.
    pub fn online(&self) -> Result<Option<Box<dyn OnlinePacker>>> {
        Ok(match self {
            BinAlgorithm::NextFit => Some(Box::new(NextFit::new())),
            BinAlgorithm::FirstFit => Some(Box::new(FirstFit::new())),
            BinAlgorithm::FirstFitDecreasing => None,
            BinAlgorithm::Harmonic(k) => Some(Box::new(Harmonic::new(*k)?)),
            BinAlgorithm::SuperHarmonic(p) => Some(Box::new(SuperHarmonic::new((**p).clone()))),
        })
    }
}

impl fmt::Display for BinAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinAlgorithm::NextFit => write!(f, "nf"),
            BinAlgorithm::FirstFit => write!(f, "ff"),
            BinAlgorithm::FirstFitDecreasing => write!(f, "ffd"),
            BinAlgorithm::Harmonic(k) => write!(f, "harmonic:{k}"),
            BinAlgorithm::SuperHarmonic(p) => write!(f, "superharmonic:k={}", p.k()),
        }
    }
}

/// Parses `nf`, `ff`, `ffd`, `harmonic:<k>` and `superharmonic:<builtin>`.
/// Parameter files are resolved by the caller.
impl FromStr for BinAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("unknown bin packing algorithm '{s}'"));
        Ok(match s {
            "nf" => BinAlgorithm::NextFit,
            "ff" => BinAlgorithm::FirstFit,
            "ffd" => BinAlgorithm::FirstFitDecreasing,
            _ => {
                let (head, tail) = s.split_once(':').ok_or_else(bad)?;
                match head {
                    "harmonic" => BinAlgorithm::Harmonic(tail.parse().map_err(|_| bad())?),
                    "superharmonic" | "sh" => BinAlgorithm::SuperHarmonic(Box::new(
                        SuperHarmonicParams::builtin(tail).ok_or_else(bad)?,
                    )),
                    _ => return Err(bad()),
                }
            }
        })
    }
}
