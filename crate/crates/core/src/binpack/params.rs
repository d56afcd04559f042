//! Super Harmonic parameter sets.
//!
//! Types are 1-based throughout: type `i` covers sizes in `(t[i+1], t[i]]` for
//! `i in 1..=k`, and type `k+1` is everything at most `epsilon = t[k+1]`. Reserved red
//! spaces are `Delta[1..=K]`, with `Delta[0] = 0` meaning "no red space".

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::TAU;

/// On-disk form of a parameter set. `beta`, `phi` and `varphi` are optional;
/// a `varphi` entry of 0 means undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamFile {
    pub k: usize,
    pub t: Vec<f64>,
    pub alpha: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<u32>>,
    #[serde(rename = "Delta", default)]
    pub delta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub varphi: Option<Vec<usize>>,
}

/// A validated Super Harmonic parameter set with derived `gamma` and `varphi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperHarmonicParams {
    k: usize,
    t: Vec<f64>,
    alpha: Vec<f64>,
    beta: Vec<u32>,
    delta: Vec<f64>,
    phi: Vec<usize>,
    varphi: Vec<Option<usize>>,
    gamma: Vec<u32>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

fn floor_ratio(num: f64, den: f64) -> u32 {
    (num / den + 1e-9).floor() as u32
}

impl SuperHarmonicParams {
    pub fn from_file(file: ParamFile) -> Result<Self> {
        let ParamFile {
            k,
            mut t,
            alpha,
            beta,
            delta,
            phi,
            varphi,
        } = file;
        if k == 0 {
            return Err(invalid("k must be at least 1"));
        }
        if t.len() != k + 1 {
            return Err(invalid(format!(
                "t needs k+1 = {} entries, got {}",
                k + 1,
                t.len()
            )));
        }
        if (t[0] - 1.0).abs() > TAU {
            return Err(invalid(format!("t_1 must be 1, got {}", t[0])));
        }
        t[0] = 1.0;
        if t.iter().any(|v| !v.is_finite()) || t.windows(2).any(|w| w[1] >= w[0]) || t[k] <= 0.0 {
            return Err(invalid("t must be strictly decreasing and positive"));
        }
        if alpha.len() != k || alpha.iter().any(|a| !(0.0..=1.0).contains(a)) {
            return Err(invalid("alpha needs k entries in [0,1]"));
        }
        let beta = match beta {
            Some(b) => b,
            None => t[..k].iter().map(|&ti| floor_ratio(1.0, ti)).collect(),
        };
        if beta.len() != k {
            return Err(invalid("beta needs k entries"));
        }
        for (i, (&b, &ti)) in beta.iter().zip(&t).enumerate() {
            if b == 0 || b as f64 * ti > 1.0 + TAU {
                return Err(invalid(format!(
                    "beta_{} = {b} must satisfy 1 <= beta * t <= 1",
                    i + 1
                )));
            }
        }
        let big_k = delta.len();
        if big_k > k {
            return Err(invalid("more red spaces than types"));
        }
        if delta.iter().any(|d| !d.is_finite())
            || delta.first().is_some_and(|&d| d <= 0.0)
            || delta.last().is_some_and(|&d| d >= 0.5)
            || delta.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(invalid(
                "Delta must satisfy 0 < Delta_1 < ... < Delta_K < 1/2",
            ));
        }
        let phi = phi.unwrap_or_else(|| vec![0; k]);
        if phi.len() != k {
            return Err(invalid("phi needs k entries"));
        }
        for i in 0..k {
            if phi[i] > big_k {
                return Err(invalid(format!(
                    "phi({}) = {} exceeds K = {big_k}",
                    i + 1,
                    phi[i]
                )));
            }
            let left = 1.0 - t[i] * beta[i] as f64;
            if phi[i] > 0 && delta[phi[i] - 1] > left + TAU {
                return Err(invalid(format!(
                    "Delta_phi({}) = {} exceeds the left space {left}",
                    i + 1,
                    delta[phi[i] - 1]
                )));
            }
        }

        let gamma: Vec<u32> = t[..k]
            .iter()
            .map(|&ti| match (delta.first(), delta.last()) {
                (Some(&d1), Some(&dk)) if ti <= dk + TAU => {
                    if ti > d1 + TAU {
                        1
                    } else {
                        floor_ratio(d1, ti).max(1)
                    }
                }
                _ => 0,
            })
            .collect();
        let derived: Vec<Option<usize>> = (0..k)
            .map(|i| {
                if gamma[i] == 0 {
                    None
                } else {
                    delta.iter().position(|&d| t[i] <= d + TAU).map(|j| j + 1)
                }
            })
            .collect();
        if let Some(given) = varphi {
            if given.len() != k {
                return Err(invalid("varphi needs k entries"));
            }
            for i in 0..k {
                if given[i] != derived[i].unwrap_or(0) {
                    return Err(invalid(format!(
                        "varphi({}) = {} disagrees with the smallest fitting space {:?}",
                        i + 1,
                        given[i],
                        derived[i]
                    )));
                }
            }
        }
        for i in 0..k {
            if alpha[i] > 0.0 && gamma[i] == 0 {
                return Err(invalid(format!(
                    "type {} has red fraction {} but no red space holds it (gamma = 0)",
                    i + 1,
                    alpha[i]
                )));
            }
        }

        Ok(SuperHarmonicParams {
            k,
            t,
            alpha,
            beta,
            delta,
            phi,
            varphi: derived,
            gamma,
        })
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, ParamLoadError> {
        let file: ParamFile = serde_json::from_str(text)?;
        Ok(Self::from_file(file)?)
    }

    pub fn to_file(&self) -> ParamFile {
        ParamFile {
            k: self.k,
            t: self.t.clone(),
            alpha: self.alpha.clone(),
            beta: Some(self.beta.clone()),
            delta: self.delta.clone(),
            phi: Some(self.phi.clone()),
            varphi: Some(self.varphi.iter().map(|v| v.unwrap_or(0)).collect()),
        }
    }

    /// Classic Harmonic: `t_i = 1/i`, no red items.
    pub fn harmonic(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("k must be at least 1"));
        }
        Self::from_file(ParamFile {
            k,
            t: (1..=k + 1).map(|i| 1.0 / i as f64).collect(),
            alpha: vec![0.0; k],
            beta: None,
            delta: vec![],
            phi: None,
            varphi: None,
        })
    }

    /// A three-type set with one red space: type-2 bins leave 0.4 free for a red type-3 item,
    /// and half of all type-3 items are red.
    pub fn toy3() -> Self {
        Self::from_file(ParamFile {
            k: 3,
            t: vec![1.0, 0.6, 1.0 / 3.0, 0.25],
            alpha: vec![0.0, 0.0, 0.5],
            beta: Some(vec![1, 1, 3]),
            delta: vec![0.4],
            phi: Some(vec![0, 1, 0]),
            varphi: None,
        })
        .expect("toy parameters are valid")
    }

    /// Looks up `harmonic:<k>` or `toy3`.
    pub fn builtin(name: &str) -> Option<Self> {
        if name == "toy3" {
            return Some(Self::toy3());
        }
        let k = name.strip_prefix("harmonic:")?.parse().ok()?;
        Self::harmonic(k).ok()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of red spaces `K`.
    pub fn big_k(&self) -> usize {
        self.delta.len()
    }

    pub fn epsilon(&self) -> f64 {
        self.t[self.k]
    }

    /// `t_i` for `i in 1..=k+1`.
    pub fn t(&self, i: usize) -> f64 {
        self.t[i - 1]
    }

    pub fn alpha(&self, i: usize) -> f64 {
        self.alpha[i - 1]
    }

    pub fn beta(&self, i: usize) -> u32 {
        self.beta[i - 1]
    }

    pub fn gamma(&self, i: usize) -> u32 {
        self.gamma[i - 1]
    }

    pub fn phi(&self, i: usize) -> usize {
        self.phi[i - 1]
    }

    pub fn varphi(&self, i: usize) -> Option<usize> {
        self.varphi[i - 1]
    }

    /// `Delta_j` for `j in 0..=K`, with `Delta_0 = 0`.
    pub fn delta(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.delta[j - 1]
        }
    }

    /// Space left in a bin holding `beta_i` items of size `t_i`.
    pub fn left_space(&self, i: usize) -> f64 {
        1.0 - self.t(i) * self.beta(i) as f64
    }

    /// Type of a size in `(0, 1]`: `1..=k` for wide sizes, `k+1` for sizes at most epsilon.
    /// Boundaries are right-closed; values within `TAU` above a boundary round down to it.
    pub fn type_of(&self, size: f64) -> usize {
        self.t.partition_point(|&b| size <= b + TAU).max(1)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParamLoadError {
    #[error("malformed parameter file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] Error),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_set_derivations() {
        let p = SuperHarmonicParams::toy3();
        assert_eq!(
            (1..=3).map(|i| p.gamma(i)).collect::<Vec<_>>(),
            vec![0, 0, 1]
        );
        assert_eq!(p.varphi(3), Some(1));
        assert_eq!(p.varphi(2), None);
        assert!((p.left_space(2) - 0.4).abs() < 1e-12);
        assert_eq!(p.type_of(0.55), 2);
        assert_eq!(p.type_of(0.3), 3);
        assert_eq!(p.type_of(0.25), 4);
        assert_eq!(p.type_of(1.0), 1);
    }

    #[test]
    fn harmonic_defaults() {
        let p = SuperHarmonicParams::harmonic(12).unwrap();
        assert_eq!(p.big_k(), 0);
        assert!((p.epsilon() - 1.0 / 13.0).abs() < 1e-15);
        for i in 1..=12 {
            assert_eq!(p.beta(i), i as u32);
            assert_eq!(p.gamma(i), 0);
        }
    }

    #[test]
    fn gamma_piecewise_rule() {
        // Delta = [0.1, 0.3]: t = 0.4 > Delta_K -> 0; t = 0.25 in (Delta_1, Delta_K] -> 1;
        // t = 0.05 <= Delta_1 -> floor(0.1 / 0.05) = 2; t = 0.04 -> floor(2.5) = 2
        let p = SuperHarmonicParams::from_file(ParamFile {
            k: 5,
            t: vec![1.0, 0.4, 0.25, 0.05, 0.04, 0.03],
            alpha: vec![0.0; 5],
            beta: None,
            delta: vec![0.1, 0.3],
            phi: None,
            varphi: None,
        })
        .unwrap();
        assert_eq!(
            (1..=5).map(|i| p.gamma(i)).collect::<Vec<_>>(),
            vec![0, 0, 1, 2, 2]
        );
        assert_eq!(
            (1..=5).map(|i| p.varphi(i)).collect::<Vec<_>>(),
            vec![None, None, Some(2), Some(1), Some(1)]
        );
    }

    #[test]
    fn rejects_bad_sets() {
        let base = SuperHarmonicParams::toy3().to_file();
        let mutate = |f: &dyn Fn(&mut ParamFile)| {
            let mut p = base.clone();
            f(&mut p);
            SuperHarmonicParams::from_file(p)
        };
        assert!(mutate(&|_| {}).is_ok());
        assert!(mutate(&|p| p.t[1] = 1.2).is_err());
        assert!(mutate(&|p| p.t[0] = 0.9).is_err());
        assert!(mutate(&|p| p.delta = vec![0.5]).is_err());
        assert!(mutate(&|p| p.alpha[0] = 1.5).is_err());
        // red items of type 1 have nowhere to go
        assert!(mutate(&|p| p.alpha[0] = 0.2).is_err());
        // type 1 has no left space for Delta_1
        assert!(mutate(&|p| p.phi = Some(vec![1, 1, 0])).is_err());
        assert!(mutate(&|p| p.phi = Some(vec![0, 2, 0])).is_err());
        assert!(mutate(&|p| p.beta = Some(vec![1, 2, 3])).is_err());
        assert!(mutate(&|p| p.varphi = Some(vec![0, 0, 0])).is_err());
        assert!(mutate(&|p| p.varphi = Some(vec![0, 0, 1])).is_ok());
    }

    #[test]
    fn file_round_trip() {
        let p = SuperHarmonicParams::toy3();
        let text = serde_json::to_string(&p.to_file()).unwrap();
        assert!(text.contains("\"Delta\""));
        assert_eq!(SuperHarmonicParams::from_json(&text).unwrap(), p);
    }

    #[test]
    fn builtins() {
        assert_eq!(SuperHarmonicParams::builtin("harmonic:3").unwrap().k(), 3);
        assert_eq!(SuperHarmonicParams::builtin("toy3").unwrap().big_k(), 1);
        assert!(SuperHarmonicParams::builtin("harmonic:0").is_none());
        assert!(SuperHarmonicParams::builtin("h++").is_none());
    }
}
