#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strippack::binpack::{ParamFile, SuperHarmonicParams};
use strippack::{Instance, Rect};

/// Five wide types and two red spaces; types 4 and 5 contribute red items.
pub fn two_space_params() -> SuperHarmonicParams {
    SuperHarmonicParams::from_file(ParamFile {
        k: 5,
        t: vec![1.0, 0.6, 0.5, 0.4, 1.0 / 3.0, 0.25],
        alpha: vec![0.0, 0.0, 0.0, 0.2, 0.3],
        beta: None,
        delta: vec![0.2, 0.4],
        phi: Some(vec![0, 2, 0, 1, 0]),
        varphi: None,
    })
    .unwrap()
}

pub fn param_sets() -> Vec<SuperHarmonicParams> {
    vec![
        SuperHarmonicParams::toy3(),
        two_space_params(),
        SuperHarmonicParams::harmonic(3).unwrap(),
        SuperHarmonicParams::harmonic(12).unwrap(),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in `(lo, hi]`.
pub fn unit(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    hi - rng.gen::<f64>() * (hi - lo)
}

pub fn sizes(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| unit(rng, 0.0, 1.0)).collect()
}

pub fn instance(rng: &mut ChaCha8Rng, n: usize, w: (f64, f64), h: (f64, f64)) -> Instance {
    let rects = (0..n)
        .map(|i| Rect::new(i as u64, unit(rng, w.0, w.1), unit(rng, h.0, h.1)).unwrap())
        .collect();
    Instance::new("random", rects, None).unwrap()
}
