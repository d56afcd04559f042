//! The Super Harmonic online bin packing framework.
//!
//! Each type-`i` item (`i <= k`) is colored on arrival: with `s_i` items of the type seen
//! so far, it is red exactly when the red counter `e_i` is behind `floor(alpha_i * s_i)`.
//! Blue items fill a bin from its left end, `beta_i` at a time. Red items of type `j`
//! occupy the reserved space at the right end, `gamma_j` at a time. Bins are grouped as
//!
//! * `(i)`   blue type `i` only, and type `i` never accepts red items (`phi(i) = 0`);
//! * `(i,?)` blue type `i` only, still waiting for red items;
//! * `(?,j)` red type `j` only, still waiting for blue items;
//! * `(i,j)` blue type `i` and red type `j`.
//!
//! Items of type `k+1` are packed by Next Fit into bins of their own.
//!
//! Scans over "any j" go through groups in ascending `j`, and through bins of one group in
//! creation order.

use std::collections::{BTreeMap, BTreeSet};

use super::{check_size, BinAssignment, OnlinePacker, Slot, SuperHarmonicParams};
use crate::error::Result;
use crate::TAU;

/// Bin group names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    /// `(i)`
    Blue(usize),
    /// `(i,?)`
    BlueWaiting(usize),
    /// `(?,j)`
    RedWaiting(usize),
    /// `(i,j)`
    Pair(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Blue,
    Red,
    Small,
}

/// Outcome of one Super Harmonic insertion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShSlot {
    pub slot: Slot,
    pub item_type: usize,
    pub color: Color,
}

#[derive(Debug, Clone, Default)]
struct ShBin {
    blue: Option<(usize, u32)>,
    red: Option<(usize, u32)>,
    small_load: f64,
    items: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Default)]
struct Members {
    all: BTreeSet<usize>,
    blue_room: BTreeSet<usize>,
    red_room: BTreeSet<usize>,
}

#[derive(Debug, Clone)]
pub struct SuperHarmonic {
    params: SuperHarmonicParams,
    s: Vec<u64>,
    e: Vec<u64>,
    bins: Vec<ShBin>,
    groups: BTreeMap<Group, Members>,
    small_open: Option<usize>,
}

impl SuperHarmonic {
    pub fn new(params: SuperHarmonicParams) -> Self {
        let k = params.k();
        SuperHarmonic {
            params,
            s: vec![0; k + 1],
            e: vec![0; k + 1],
            bins: Vec::new(),
            groups: BTreeMap::new(),
            small_open: None,
        }
    }

    pub fn params(&self) -> &SuperHarmonicParams {
        &self.params
    }

    /// `(s_i, e_i)` for type `i`.
    pub fn counters(&self, i: usize) -> (u64, u64) {
        (self.s[i], self.e[i])
    }

    pub fn group_of_bin(&self, bin: usize) -> Option<Group> {
        self.group_of(&self.bins[bin])
    }

    /// Bins currently in a group, in creation order.
    pub fn group_members(&self, group: Group) -> Vec<usize> {
        self.groups
            .get(&group)
            .map(|m| m.all.iter().copied().collect())
            .unwrap_or_default()
    }

    pub fn groups(&self) -> impl Iterator<Item = Group> + '_ {
        self.groups
            .iter()
            .filter(|(_, m)| !m.all.is_empty())
            .map(|(g, _)| *g)
    }

    /// `(blue count, red count)` of a bin.
    pub fn bin_counts(&self, bin: usize) -> (u32, u32) {
        let b = &self.bins[bin];
        (b.blue.map_or(0, |x| x.1), b.red.map_or(0, |x| x.1))
    }

    fn red_limit(&self, j: usize) -> f64 {
        self.params.gamma(j) as f64 * self.params.t(j)
    }

    fn group_of(&self, bin: &ShBin) -> Option<Group> {
        match (bin.blue, bin.red) {
            (Some((i, _)), None) if self.params.phi(i) == 0 => Some(Group::Blue(i)),
            (Some((i, _)), None) => Some(Group::BlueWaiting(i)),
            (None, Some((j, _))) => Some(Group::RedWaiting(j)),
            (Some((i, _)), Some((j, _))) => Some(Group::Pair(i, j)),
            (None, None) => None,
        }
    }

    fn detach(&mut self, idx: usize) {
        if let Some(g) = self.group_of(&self.bins[idx]) {
            let m = self.groups.get_mut(&g).expect("group registered");
            m.all.remove(&idx);
            m.blue_room.remove(&idx);
            m.red_room.remove(&idx);
        }
    }

    fn attach(&mut self, idx: usize) {
        let bin = &self.bins[idx];
        let Some(g) = self.group_of(bin) else { return };
        let blue_room = bin.blue.is_some_and(|(i, c)| c < self.params.beta(i));
        let red_room = bin.red.is_some_and(|(j, c)| c < self.params.gamma(j));
        let m = self.groups.entry(g).or_default();
        m.all.insert(idx);
        if blue_room {
            m.blue_room.insert(idx);
        }
        if red_room {
            m.red_room.insert(idx);
        }
    }

    fn first_with_blue_room(&self, g: Group) -> Option<usize> {
        self.groups
            .get(&g)
            .and_then(|m| m.blue_room.first().copied())
    }

    fn first_with_red_room(&self, g: Group) -> Option<usize> {
        self.groups
            .get(&g)
            .and_then(|m| m.red_room.first().copied())
    }

    fn first_member(&self, g: Group) -> Option<usize> {
        self.groups.get(&g).and_then(|m| m.all.first().copied())
    }

    fn put(
        &mut self,
        bin: Option<usize>,
        ty: usize,
        color: Color,
        index: usize,
        size: f64,
    ) -> ShSlot {
        let opened = bin.is_none();
        let idx = bin.unwrap_or_else(|| {
            self.bins.push(ShBin::default());
            self.bins.len() - 1
        });
        self.detach(idx);
        let b = &mut self.bins[idx];
        let offset = match color {
            Color::Blue => {
                let count = b.blue.get_or_insert((ty, 0));
                debug_assert_eq!(count.0, ty);
                count.1 += 1;
                (count.1 - 1) as f64 * self.params.t(ty)
            }
            Color::Red => {
                let count = b.red.get_or_insert((ty, 0));
                debug_assert_eq!(count.0, ty);
                count.1 += 1;
                1.0 - count.1 as f64 * self.params.t(ty)
            }
            Color::Small => {
                b.small_load += size;
                b.small_load - size
            }
        };
        b.items.push((index, size));
        self.attach(idx);
        ShSlot {
            slot: Slot {
                bin: idx,
                offset,
                opened,
            },
            item_type: ty,
            color,
        }
    }

    fn place_red(&mut self, ty: usize, index: usize, size: f64) -> ShSlot {
        let k = self.params.k();
        let target = self
            .first_with_red_room(Group::RedWaiting(ty))
            .or_else(|| (1..=k).find_map(|j| self.first_with_red_room(Group::Pair(j, ty))))
            .or_else(|| {
                let need = self.red_limit(ty);
                (1..=k)
                    .filter(|&j| {
                        let phi = self.params.phi(j);
                        phi != 0 && self.params.delta(phi) + TAU >= need
                    })
                    .find_map(|j| self.first_member(Group::BlueWaiting(j)))
            });
        self.put(target, ty, Color::Red, index, size)
    }

    fn place_blue(&mut self, ty: usize, index: usize, size: f64) -> ShSlot {
        let k = self.params.k();
        let phi = self.params.phi(ty);
        if phi == 0 {
            let target = self.first_with_blue_room(Group::Blue(ty));
            return self.put(target, ty, Color::Blue, index, size);
        }
        let space = self.params.delta(phi);
        let target = (1..=k)
            .find_map(|j| self.first_with_blue_room(Group::Pair(ty, j)))
            .or_else(|| self.first_with_blue_room(Group::BlueWaiting(ty)))
            .or_else(|| {
                (1..=k)
                    .filter(|&j| self.params.alpha(j) > 0.0 && space + TAU >= self.red_limit(j))
                    .find_map(|j| self.first_member(Group::RedWaiting(j)))
            });
        self.put(target, ty, Color::Blue, index, size)
    }

    /// Packs one item and reports where it went.
    pub fn place(&mut self, index: usize, size: f64) -> Result<ShSlot> {
        check_size(index, size)?;
        let ty = self.params.type_of(size);
        if ty > self.params.k() {
            let target = self
                .small_open
                .filter(|&b| self.bins[b].small_load + size <= 1.0 + TAU);
            let slot = self.put(target, ty, Color::Small, index, size);
            self.small_open = Some(slot.slot.bin);
            return Ok(slot);
        }
        self.s[ty] += 1;
        let quota = (self.params.alpha(ty) * self.s[ty] as f64).floor() as u64;
        Ok(if self.e[ty] < quota {
            self.e[ty] += 1;
            self.place_red(ty, index, size)
        } else {
            self.place_blue(ty, index, size)
        })
    }

    /// Verifies counters, per-bin capacities and the bounds on under-filled bins per group.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let p = &self.params;
        for i in 1..=p.k() {
            let quota = (p.alpha(i) * self.s[i] as f64).floor() as u64;
            if self.e[i] != quota {
                return Err(format!(
                    "type {i}: e = {} but floor(alpha s) = {quota}",
                    self.e[i]
                ));
            }
        }
        for (idx, bin) in self.bins.iter().enumerate() {
            let mut extent = bin.small_load;
            if let Some((i, c)) = bin.blue {
                if c > p.beta(i) {
                    return Err(format!("bin {idx} holds {c} blue type-{i} items"));
                }
                extent += p.beta(i) as f64 * p.t(i);
            }
            if let Some((j, c)) = bin.red {
                if c > p.gamma(j) {
                    return Err(format!("bin {idx} holds {c} red type-{j} items"));
                }
                let red = self.red_limit(j);
                if let Some((i, _)) = bin.blue {
                    if red > p.delta(p.phi(i)) + TAU {
                        return Err(format!(
                            "bin {idx}: red extent {red} exceeds reserved space"
                        ));
                    }
                    extent = p.beta(i) as f64 * p.t(i) + p.delta(p.phi(i));
                } else {
                    extent += red;
                }
            }
            if extent > 1.0 + TAU {
                return Err(format!("bin {idx} extent {extent} exceeds capacity"));
            }
        }
        for (g, m) in &self.groups {
            let under = m.blue_room.union(&m.red_room).count();
            let limit = if matches!(g, Group::Pair(..)) { 3 } else { 1 };
            if under > limit {
                return Err(format!("group {g:?} has {under} under-filled bins"));
            }
        }
        Ok(())
    }
}

impl OnlinePacker for SuperHarmonic {
    fn name(&self) -> String {
        format!("superharmonic:k={}", self.params.k())
    }

    fn insert(&mut self, index: usize, size: f64) -> Result<Slot> {
        self.place(index, size).map(|s| s.slot)
    }

    fn bin_count(&self) -> usize {
        self.bins.len()
    }

    fn assignment(&self) -> BinAssignment {
        BinAssignment {
            algorithm: self.name(),
            bins: self.bins.iter().map(|b| b.items.clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_trace() {
        let mut sh = SuperHarmonic::new(SuperHarmonicParams::toy3());
        let sizes = [0.55, 0.3, 0.3, 0.3, 0.3];
        let expected_counters = [(0, 0), (1, 0), (2, 1), (3, 1), (4, 2)];
        let mut colors = Vec::new();
        for (i, &s) in sizes.iter().enumerate() {
            colors.push(sh.place(i, s).unwrap().color);
            assert_eq!(sh.counters(3), expected_counters[i]);
            sh.check_invariants().unwrap();
        }
        use Color::*;
        assert_eq!(colors, vec![Blue, Blue, Red, Blue, Red]);
        assert_eq!(sh.bin_count(), 3);
        assert_eq!(sh.group_of_bin(0), Some(Group::Pair(2, 3)));
        assert_eq!(sh.group_of_bin(1), Some(Group::Blue(3)));
        assert_eq!(sh.group_of_bin(2), Some(Group::RedWaiting(3)));
        let a = sh.assignment();
        assert_eq!(a.bins[0], vec![(0, 0.55), (2, 0.3)]);
        assert_eq!(a.bins[1], vec![(1, 0.3), (3, 0.3)]);
        assert_eq!(a.bins[2], vec![(4, 0.3)]);
    }

    #[test]
    fn red_first_then_blue_converts() {
        // a red type-3 item opens (?,3); the next type-2 item converts it into (2,3)
        let mut sh = SuperHarmonic::new(SuperHarmonicParams::toy3());
        sh.place(0, 0.3).unwrap();
        let red = sh.place(1, 0.3).unwrap();
        assert_eq!(red.color, Color::Red);
        assert!(red.slot.opened);
        assert_eq!(sh.group_of_bin(red.slot.bin), Some(Group::RedWaiting(3)));
        assert!((red.slot.offset - (1.0 - 1.0 / 3.0)).abs() < 1e-12);
        let blue = sh.place(2, 0.5).unwrap();
        assert_eq!(blue.slot.bin, red.slot.bin);
        assert_eq!(blue.slot.offset, 0.0);
        assert_eq!(sh.group_of_bin(red.slot.bin), Some(Group::Pair(2, 3)));
        sh.check_invariants().unwrap();
    }

    #[test]
    fn full_item_single_bin() {
        for p in [
            SuperHarmonicParams::toy3(),
            SuperHarmonicParams::harmonic(5).unwrap(),
        ] {
            let mut sh = SuperHarmonic::new(p);
            sh.place(0, 1.0).unwrap();
            assert_eq!(sh.bin_count(), 1);
        }
    }

    #[test]
    fn small_items_use_next_fit() {
        let mut sh = SuperHarmonic::new(SuperHarmonicParams::toy3());
        let slots: Vec<_> = [0.2, 0.2, 0.5, 0.2, 0.2, 0.2, 0.2]
            .iter()
            .enumerate()
            .map(|(i, &s)| sh.place(i, s).unwrap())
            .collect();
        assert_eq!(slots[0].color, Color::Small);
        assert_eq!(slots[3].slot.bin, slots[0].slot.bin);
        assert!((slots[3].slot.offset - 0.4).abs() < 1e-12);
        // fifth small item (load 1.0) still fits; the sixth opens a new NF bin
        assert_eq!(slots[5].slot.bin, slots[0].slot.bin);
        assert!(slots[6].slot.opened);
    }
}
