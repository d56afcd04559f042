//! The Super Harmonic weighting system.
//!
//! Weights live in a `(2K+1)`-dimensional space with basis `b_0, b_1..b_K, r_1..r_K`.
//! A type-`i` item weighs `(1-alpha_i)/beta_i` on `b_phi(i)` plus `alpha_i/gamma_i` on
//! `r_varphi(i)`; an item of size `x <= epsilon` weighs `x/(1-epsilon)` on `b_0`. A rect of
//! width `x` and height `y` weighs `y` times its width's weight, so cutting a rect into
//! horizontal layers preserves total weight. The consolidation function `xi` turns a
//! weight vector into a bin count.
//!
//! # Upper bound over distributions
//!
//! [`ratio_upper_bound`] maximizes `xi(sum_q chi(q) w(q))` over all distributions `chi` on
//! the pattern set. `xi` is a maximum over branches `j = 1..=K+1` of
//! `f_j(x) = L(x) + min(A_j(x), B_j(x))` with `L`, `A_j`, `B_j` linear, so it suffices to
//! maximize each `f_j` over the simplex. That is the linear program
//! `max z  s.t. z <= (L + A_j) chi, z <= (L + B_j) chi, sum chi = 1, chi >= 0`, whose basic
//! optimal solutions have at most two nonzero `chi`. Either a single pattern is optimal,
//! or two patterns on opposite sides of `A_j = B_j` mixed so that the two terms balance.
//! Writing `u = L + A_j` and `d = A_j - B_j` per pattern, the best balanced pair is the
//! upper convex hull of the points `(d, u)` evaluated at `d = 0`.

use serde::Serialize;

use crate::binpack::SuperHarmonicParams;
use crate::error::{Error, Result};
use crate::geometry::Rect;

/// Coordinates over `b_0..b_K` and `r_1..r_K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    pub b: Vec<f64>,
    pub r: Vec<f64>,
}

impl WeightVector {
    pub fn zero(big_k: usize) -> Self {
        WeightVector {
            b: vec![0.0; big_k + 1],
            r: vec![0.0; big_k],
        }
    }

    /// `K`, the number of red spaces.
    pub fn big_k(&self) -> usize {
        self.r.len()
    }

    /// `r_j` coordinate for `j in 1..=K`.
    pub fn red(&self, j: usize) -> f64 {
        self.r[j - 1]
    }

    pub fn coords(&self) -> impl Iterator<Item = f64> + '_ {
        self.b.iter().chain(&self.r).copied()
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        WeightVector {
            b: self.b.iter().map(|v| v * lambda).collect(),
            r: self.r.iter().map(|v| v * lambda).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &WeightVector, lambda: f64) {
        debug_assert_eq!(self.big_k(), other.big_k());
        for (a, b) in self.b.iter_mut().zip(&other.b) {
            *a += lambda * b;
        }
        for (a, b) in self.r.iter_mut().zip(&other.r) {
            *a += lambda * b;
        }
    }

    pub fn max_abs_diff(&self, other: &WeightVector) -> f64 {
        self.coords()
            .zip(other.coords())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::AddAssign<&WeightVector> for WeightVector {
    fn add_assign(&mut self, rhs: &WeightVector) {
        self.add_scaled(rhs, 1.0);
    }
}

/// Weight of a 1-D item of size `x`.
pub fn weight_of(x: f64, params: &SuperHarmonicParams) -> Result<WeightVector> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::InvalidSize { index: 0, size: x });
    }
    let mut w = WeightVector::zero(params.big_k());
    let i = params.type_of(x);
    if i > params.k() {
        w.b[0] = x / (1.0 - params.epsilon());
        return Ok(w);
    }
    let alpha = params.alpha(i);
    w.b[params.phi(i)] += (1.0 - alpha) / params.beta(i) as f64;
    if alpha > 0.0 {
        // validated parameters guarantee a red space for every type with red items
        let j = params.varphi(i).expect("red type has a space");
        w.r[j - 1] += alpha / params.gamma(i) as f64;
    }
    Ok(w)
}

/// Weight of a `width x height` rect: `height * weight_of(width)`.
pub fn weight_of_rect(
    width: f64,
    height: f64,
    params: &SuperHarmonicParams,
) -> Result<WeightVector> {
    if !(height >= 0.0 && height.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "rect height {height} must be non-negative"
        )));
    }
    Ok(weight_of(width, params)?.scaled(height))
}

/// Sum of rect weights.
pub fn total_weight(rects: &[Rect], params: &SuperHarmonicParams) -> Result<WeightVector> {
    let mut total = WeightVector::zero(params.big_k());
    for r in rects {
        total.add_scaled(&weight_of(r.w, params)?, r.h);
    }
    Ok(total)
}

/// Sum of 1-D item weights.
pub fn total_item_weight(sizes: &[f64], params: &SuperHarmonicParams) -> Result<WeightVector> {
    let mut total = WeightVector::zero(params.big_k());
    for &s in sizes {
        total += &weight_of(s, params)?;
    }
    Ok(total)
}

/// `(L, A_j, B_j)` for branch `j in 1..=K+1`.
fn branch_terms(x: &WeightVector, j: usize) -> (f64, f64, f64) {
    let big_k = x.big_k();
    let blue_all: f64 = x.b[1..].iter().sum();
    let red_all: f64 = x.r.iter().sum();
    let red_from_j: f64 = (j..=big_k).map(|i| x.red(i)).sum();
    let blue_below_j: f64 = (1..j).map(|i| x.b[i]).sum();
    (x.b[0], red_from_j + blue_all, red_all + blue_below_j)
}

/// The consolidation function `xi`.
pub fn consolidate(x: &WeightVector) -> f64 {
    (1..=x.big_k() + 1)
        .map(|j| {
            let (l, a, b) = branch_terms(x, j);
            l + a.min(b)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Bin contents: `q[i-1]` items of type `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Pattern {
    pub q: Vec<u32>,
}

impl Pattern {
    /// `sum_i q_i t_(i+1)`, the least space the items can occupy.
    pub fn occupied(&self, params: &SuperHarmonicParams) -> f64 {
        self.q
            .iter()
            .enumerate()
            .map(|(i, &n)| n as f64 * params.t(i + 2))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternOptions {
    pub maximal_only: bool,
    pub cap: usize,
}

pub const DEFAULT_PATTERN_CAP: usize = 10_000_000;

impl Default for PatternOptions {
    fn default() -> Self {
        PatternOptions {
            maximal_only: false,
            cap: DEFAULT_PATTERN_CAP,
        }
    }
}

// Patterns need sum q_i t_(i+1) < 1; sums within this of 1 count as full.
const PATTERN_SLACK: f64 = 1e-12;

fn fits(load: f64) -> bool {
    load < 1.0 - PATTERN_SLACK
}

/// Upper estimate of the pattern count from the volume of the scaled simplex.
fn pattern_count_estimate(params: &SuperHarmonicParams) -> f64 {
    let k = params.k();
    let lows: Vec<f64> = (2..=k + 1).map(|i| params.t(i)).collect();
    let spread: f64 = 1.0 + lows.iter().sum::<f64>();
    let log = lows.iter().map(|l| -l.ln()).sum::<f64>() + k as f64 * spread.ln()
        - (1..=k).map(|i| (i as f64).ln()).sum::<f64>();
    log.exp()
}

/// All patterns, depth-first over types in decreasing size.
pub fn enumerate_patterns(
    params: &SuperHarmonicParams,
    opts: PatternOptions,
) -> Result<Vec<Pattern>> {
    let k = params.k();
    let lows: Vec<f64> = (2..=k + 1).map(|i| params.t(i)).collect();
    let mut out = Vec::new();
    let mut q = vec![0u32; k];
    let mut visited = 0usize;
    fn walk(
        pos: usize,
        load: f64,
        lows: &[f64],
        q: &mut Vec<u32>,
        opts: &PatternOptions,
        visited: &mut usize,
        out: &mut Vec<Pattern>,
    ) -> bool {
        if pos == lows.len() {
            *visited += 1;
            if *visited > opts.cap {
                return false;
            }
            if !opts.maximal_only || lows.iter().all(|&l| !fits(load + l)) {
                out.push(Pattern { q: q.clone() });
            }
            return true;
        }
        let mut n = 0u32;
        loop {
            let here = load + n as f64 * lows[pos];
            if !fits(here) {
                break;
            }
            q[pos] = n;
            if !walk(pos + 1, here, lows, q, opts, visited, out) {
                return false;
            }
            n += 1;
        }
        q[pos] = 0;
        true
    }
    if !walk(0, 0.0, &lows, &mut q, &opts, &mut visited, &mut out) {
        return Err(Error::PatternCapExceeded {
            cap: opts.cap,
            estimate: pattern_count_estimate(params),
        });
    }
    Ok(out)
}

/// `w(1 - sum q_i t_(i+1)) + sum q_i w(t_i)`.
pub fn pattern_weight(q: &Pattern, params: &SuperHarmonicParams) -> WeightVector {
    let residual = 1.0 - q.occupied(params);
    let mut w = if residual > 0.0 {
        weight_of(residual.min(1.0), params).expect("residual lies in (0, 1]")
    } else {
        WeightVector::zero(params.big_k())
    };
    for (i, &n) in q.q.iter().enumerate() {
        if n > 0 {
            let item = weight_of(params.t(i + 1), params).expect("class ceilings are valid sizes");
            w.add_scaled(&item, n as f64);
        }
    }
    w
}

/// The maximizing distribution found by [`max_consolidated`]: indices into the input with
/// their mixing coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Maximizer {
    pub value: f64,
    pub branch: usize,
    pub support: Vec<(usize, f64)>,
}

/// `max` over distributions `chi` of `xi(sum chi(q) w_q)`, exactly, for a finite list of
/// weight vectors sharing one `K`.
pub fn max_consolidated(weights: &[WeightVector]) -> Option<Maximizer> {
    let big_k = weights.first()?.big_k();
    let mut best: Option<Maximizer> = None;
    let mut offer = |m: Maximizer| {
        if best.as_ref().is_none_or(|b| m.value > b.value) {
            best = Some(m);
        }
    };
    for j in 1..=big_k + 1 {
        // (d, u) with u = L + A_j, d = A_j - B_j, so min(A_j, B_j) + L = u - max(d, 0)
        let pts: Vec<(f64, f64)> = weights
            .iter()
            .map(|w| {
                let (l, a, b) = branch_terms(w, j);
                (a - b, l + a)
            })
            .collect();
        for (idx, &(d, u)) in pts.iter().enumerate() {
            offer(Maximizer {
                value: u - d.max(0.0),
                branch: j,
                support: vec![(idx, 1.0)],
            });
        }
        if let Some(m) = balanced_pair(&pts) {
            offer(Maximizer { branch: j, ..m });
        }
    }
    best
}

/// Best mix of two points with `d` of opposite signs at `d = 0`, via the upper hull.
fn balanced_pair(pts: &[(f64, f64)]) -> Option<Maximizer> {
    if !(pts.iter().any(|p| p.0 < 0.0) && pts.iter().any(|p| p.0 > 0.0)) {
        return None;
    }
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| {
        pts[a]
            .0
            .total_cmp(&pts[b].0)
            .then(pts[a].1.total_cmp(&pts[b].1))
    });
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<usize> = Vec::new();
    for &i in &order {
        while hull.len() >= 2
            && cross(pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]], pts[i]) >= 0.0
        {
            hull.pop();
        }
        hull.push(i);
    }
    hull.windows(2).find_map(|w| {
        let (p, q) = (pts[w[0]], pts[w[1]]);
        if p.0 < 0.0 && q.0 > 0.0 {
            let lambda = -p.0 / (q.0 - p.0);
            Some(Maximizer {
                value: p.1 + lambda * (q.1 - p.1),
                branch: 0,
                support: vec![(w[0], 1.0 - lambda), (w[1], lambda)],
            })
        } else {
            None
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub value: f64,
    pub branch: usize,
    /// Maximizing patterns with their mixing coefficients.
    pub support: Vec<(Pattern, f64)>,
    pub pattern_count: usize,
}

/// Maximum of the consolidated pattern weight over all distributions on patterns.
pub fn ratio_upper_bound(
    params: &SuperHarmonicParams,
    opts: PatternOptions,
) -> Result<BoundReport> {
    let patterns = enumerate_patterns(params, opts)?;
    let weights: Vec<WeightVector> = patterns.iter().map(|q| pattern_weight(q, params)).collect();
    let m = max_consolidated(&weights).expect("the empty pattern is always present");
    Ok(BoundReport {
        value: m.value,
        branch: m.branch,
        support: m
            .support
            .iter()
            .map(|&(i, c)| (patterns[i].clone(), c))
            .collect(),
        pattern_count: patterns.len(),
    })
}

/// Additive slack on the bin count bound of Super Harmonic: `3k^2 + 2k + 1`.
pub fn bin_count_slack(params: &SuperHarmonicParams) -> f64 {
    let k = params.k() as f64;
    3.0 * k * k + 2.0 * k + 1.0
}
