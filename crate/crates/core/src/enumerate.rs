//! Placements of `k` indistinguishable chips on `n` vertices.

use alloc::vec;
use alloc::vec::Vec;

/// Iterates all nonnegative vectors of length `n` with sum `k` in
/// colexicographic order: `(k, 0, …, 0)` first, `(0, …, 0, k)` last.
#[derive(Debug, Clone)]
pub struct Placements {
    current: Option<Vec<i64>>,
}

impl Placements {
    pub fn new(n: usize, k: i64) -> Self {
        let current = if n == 0 {
            (k == 0).then(Vec::new)
        } else {
            let mut v = vec![0; n];
            v[0] = k;
            Some(v)
        };
        Placements { current }
    }
}

impl Iterator for Placements {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        if let Some(i) = next.iter().position(|&c| c > 0) {
            if i + 1 < next.len() {
                let t = next[i];
                next[i] = 0;
                next[i + 1] += 1;
                next[0] = t - 1;
                self.current = Some(next);
            }
        }
        Some(out)
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of placements of `k` chips on `n` vertices.
pub fn placement_count(n: usize, k: i64) -> u128 {
    if n == 0 || k < 0 {
        return u128::from(n == 0 && k == 0);
    }
    binomial(k as u64 + n as u64 - 1, n as u64 - 1)
}
