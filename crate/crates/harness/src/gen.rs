//! Seeded instance generators.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64(seed)`), so an
//! instance is a pure function of its parameters and seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strippack::{Instance, Rect};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("range ({0}, {1}] is empty or leaves (0, 1]")]
    BadRange(f64, f64),
    #[error("height {height} needs at least {needed} unit-height pieces, only {n} requested")]
    TooFewPieces {
        n: usize,
        height: f64,
        needed: usize,
    },
    #[error("tiling height must be positive, got {0}")]
    BadHeight(f64),
    #[error(transparent)]
    Instance(#[from] strippack::Error),
}

/// A half-open interval `(lo, hi]` inside `(0, 1]`.
fn check_range((lo, hi): (f64, f64)) -> Result<(), GenError> {
    if lo >= 0.0 && hi <= 1.0 && lo < hi {
        Ok(())
    } else {
        Err(GenError::BadRange(lo, hi))
    }
}

fn sample(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    hi - rng.gen::<f64>() * (hi - lo)
}

/// `n` rects with widths and heights uniform on the given `(lo, hi]` ranges.
pub fn gen_uniform(
    n: usize,
    seed: u64,
    w_range: (f64, f64),
    h_range: (f64, f64),
) -> Result<Instance, GenError> {
    check_range(w_range)?;
    check_range(h_range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rects = (0..n)
        .map(|i| {
            let w = sample(&mut rng, w_range);
            let h = sample(&mut rng, h_range);
            Rect::new(i as u64, w, h)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Instance::new(format!("uniform-n{n}-s{seed}"), rects, None)?)
}

#[derive(Clone, Copy)]
struct Piece {
    w: f64,
    h: f64,
}

/// Cuts the `1 x height` strip into `n` pieces by random guillotine cuts, so the pieces
/// tile the strip and the optimum is exactly `height`. Rect order is shuffled.
pub fn gen_tiling(n: usize, height: f64, seed: u64) -> Result<Instance, GenError> {
    if !(height > 0.0 && height.is_finite()) {
        return Err(GenError::BadHeight(height));
    }
    let bands = (height - 1e-12).ceil().max(1.0) as usize;
    if n < bands {
        return Err(GenError::TooFewPieces {
            n,
            height,
            needed: bands,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pieces = vec![
        Piece {
            w: 1.0,
            h: height / bands as f64
        };
        bands
    ];
    while pieces.len() < n {
        let total: f64 = pieces.iter().map(|p| p.w * p.h).sum();
        let mut pick = rng.gen::<f64>() * total;
        let idx = pieces
            .iter()
            .position(|p| {
                pick -= p.w * p.h;
                pick < 0.0
            })
            .unwrap_or(pieces.len() - 1);
        let p = pieces[idx];
        let frac = rng.gen_range(0.25..0.75);
        let (a, b) = if rng.gen::<bool>() {
            (
                Piece {
                    w: p.w * frac,
                    h: p.h,
                },
                Piece {
                    w: p.w - p.w * frac,
                    h: p.h,
                },
            )
        } else {
            (
                Piece {
                    w: p.w,
                    h: p.h * frac,
                },
                Piece {
                    w: p.w,
                    h: p.h - p.h * frac,
                },
            )
        };
        pieces[idx] = a;
        pieces.push(b);
    }
    pieces.shuffle(&mut rng);
    let rects = pieces
        .iter()
        .enumerate()
        .map(|(i, p)| Rect::new(i as u64, p.w, p.h))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Instance::new(
        format!("tiling-n{n}-H{height}-s{seed}"),
        rects,
        Some(height),
    )?)
}

/// Wraps 1-D sizes as rects of one common height.
pub fn gen_equal_height(sizes: &[f64], height: f64) -> Result<Instance, GenError> {
    let rects = sizes
        .iter()
        .enumerate()
        .map(|(i, &w)| Rect::new(i as u64, w, height))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Instance::new(
        format!("equal-height-n{}", sizes.len()),
        rects,
        None,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use strippack::lower_bound;

    #[test]
    fn uniform_basics() {
        assert!(gen_uniform(0, 1, (0.0, 1.0), (0.0, 1.0))
            .unwrap()
            .is_empty());
        let a = gen_uniform(50, 9, (0.0, 1.0), (0.2, 0.4)).unwrap();
        assert_eq!(a, gen_uniform(50, 9, (0.0, 1.0), (0.2, 0.4)).unwrap());
        assert_ne!(a, gen_uniform(50, 10, (0.0, 1.0), (0.2, 0.4)).unwrap());
        assert!(a.rects.iter().all(|r| r.h > 0.2 && r.h <= 0.4));
        assert!(gen_uniform(5, 1, (0.5, 0.5), (0.0, 1.0)).is_err());
        assert!(gen_uniform(5, 1, (0.0, 1.5), (0.0, 1.0)).is_err());
        let big = gen_uniform(1000, 42, (0.0, 1.0), (0.0, 1.0)).unwrap();
        assert!(lower_bound(&big) > 0.0);
    }

    #[test]
    fn tiling_single_piece() {
        let t = gen_tiling(1, 1.0, 3).unwrap();
        assert_eq!(
            t.rects,
            vec![Rect {
                id: 0,
                w: 1.0,
                h: 1.0
            }]
        );
        assert_eq!(t.known_opt, Some(1.0));
    }

    #[test]
    fn tiling_conserves_area() {
        for seed in 0..20 {
            let t = gen_tiling(300, 7.5, seed).unwrap();
            assert_eq!(t.len(), 300);
            assert!((t.total_area() - 7.5).abs() < 1e-9);
        }
        let t = gen_tiling(1000, 50.0, 1).unwrap();
        assert!((lower_bound(&t) - 50.0).abs() < 1e-9);
    }

    #[test]
    fn tiling_rejects_impossible_requests() {
        assert_eq!(
            gen_tiling(3, 5.0, 0),
            Err(GenError::TooFewPieces {
                n: 3,
                height: 5.0,
                needed: 5
            })
        );
        assert!(gen_tiling(3, 0.0, 0).is_err());
    }

    #[test]
    fn equal_height_wraps_sizes() {
        let i = gen_equal_height(&[0.5, 0.5], 1.0).unwrap();
        assert_eq!(i.len(), 2);
        assert!(i.rects.iter().all(|r| r.h == 1.0));
        assert!(gen_equal_height(&[0.0], 1.0).is_err());
    }
}
