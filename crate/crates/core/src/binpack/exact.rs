use crate::error::{Error, Result};
use crate::TAU;

use super::check_size;

pub const EXACT_MAX_ITEMS: usize = 16;

/// Minimum number of unit bins, by dynamic programming over item subsets.
///
/// For every subset the table keeps the lexicographically smallest
/// `(bins used, load of the last bin)` over all insertion orders, which is enough to
/// recover the optimum of the full set.
pub fn bin_opt_bruteforce(sizes: &[f64]) -> Result<usize> {
    let n = sizes.len();
    if n > EXACT_MAX_ITEMS {
        return Err(Error::TooManyItems {
            n,
            max: EXACT_MAX_ITEMS,
        });
    }
    sizes
        .iter()
        .enumerate()
        .try_for_each(|(i, &s)| check_size(i, s))?;
    if n == 0 {
        return Ok(0);
    }
    let full = (1usize << n) - 1;
    let mut best = vec![(usize::MAX, f64::INFINITY); full + 1];
    best[0] = (0, f64::INFINITY);
    for mask in 1..=full {
        let mut cur = (usize::MAX, f64::INFINITY);
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (bins, load) = best[mask ^ (1 << i)];
            let cand = if load + sizes[i] <= 1.0 + TAU {
                (bins, load + sizes[i])
            } else {
                (bins + 1, sizes[i])
            };
            if cand.0 < cur.0 || (cand.0 == cur.0 && cand.1 < cur.1) {
                cur = cand;
            }
        }
        best[mask] = cur;
    }
    Ok(best[full].0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Minimum cover by feasible single-bin subsets, O(3^n).
    fn subset_cover(sizes: &[f64]) -> usize {
        let n = sizes.len();
        let full = (1usize << n) - 1;
        let fits: Vec<bool> = (0..=full)
            .map(|m| {
                (0..n)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| sizes[i])
                    .sum::<f64>()
                    <= 1.0 + TAU
            })
            .collect();
        let mut dp = vec![usize::MAX; full + 1];
        dp[0] = 0;
        for mask in 1..=full {
            let low = mask & mask.wrapping_neg();
            let mut sub = mask;
            while sub != 0 {
                if sub & low != 0 && fits[sub] && dp[mask ^ sub] != usize::MAX {
                    dp[mask] = dp[mask].min(dp[mask ^ sub] + 1);
                }
                sub = (sub - 1) & mask;
            }
        }
        dp[full]
    }

    #[test]
    fn examples() {
        assert_eq!(bin_opt_bruteforce(&[0.6, 0.5, 0.4, 0.3]).unwrap(), 2);
        assert_eq!(bin_opt_bruteforce(&[0.6, 0.6, 0.6]).unwrap(), 3);
        assert_eq!(bin_opt_bruteforce(&[]).unwrap(), 0);
    }

    #[test]
    fn refuses_large_inputs() {
        assert_eq!(
            bin_opt_bruteforce(&[0.1; 17]),
            Err(Error::TooManyItems {
                n: 17,
                max: EXACT_MAX_ITEMS
            })
        );
    }

    #[test]
    fn agrees_with_subset_cover() {
        let mut s = 7u64;
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64).max(1e-3)
        };
        for trial in 0..300 {
            let n = 1 + trial % 9;
            let sizes: Vec<f64> = (0..n).map(|_| next()).collect();
            assert_eq!(
                bin_opt_bruteforce(&sizes).unwrap(),
                subset_cover(&sizes),
                "{sizes:?}"
            );
        }
    }
}
