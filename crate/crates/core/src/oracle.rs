//! Slow reference implementations.
//!
//! Nothing here calls into [`crate::engine`] or [`crate::divisor`]; the
//! oracles use only the host types, so agreement with the fast paths is
//! evidence rather than tautology.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::chips::{ChipDistribution, FiringHost};
use crate::divisor::Divisor;
use crate::engine::{Certificate, GameOutcome};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default cap on stored configurations or enumerated divisors.
pub const DEFAULT_STATE_LIMIT: usize = 2_000_000;

/// Plays the min-index game, remembering every configuration. A repeat
/// proves the game is infinite; running out of active vertices proves it
/// stops. Works on any host, Eulerian or not, because chip conservation
/// keeps the configuration space finite.
pub fn classify_by_cycle_detection<H: FiringHost + ?Sized>(
    host: &H,
    x: &ChipDistribution,
    state_limit: usize,
) -> Result<GameOutcome> {
    let n = host.vertex_count();
    if x.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: x.len() });
    }
    let mut chips = x.as_slice().to_vec();
    let mut odometer = vec![0u64; n];
    let mut seen: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    let mut step = 0u64;
    loop {
        if let Some(&first) = seen.get(&chips) {
            return Ok(GameOutcome::NonTerminating(Certificate::RepeatedConfiguration {
                first_seen_step: first,
                repeat_step: step,
            }));
        }
        if seen.len() >= state_limit {
            return Err(Error::StateSpaceTooLarge(state_limit));
        }
        seen.insert(chips.clone(), step);
        let Some(v) = (0..n).find(|&v| chips[v] >= host.threshold(v)) else {
            return Ok(GameOutcome::Terminating { steps: step, final_chips: ChipDistribution::new(chips)?, odometer });
        };
        chips[v] -= host.threshold(v);
        for &(u, m) in host.targets(v) {
            chips[u] += m;
        }
        odometer[v] += 1;
        step += 1;
    }
}

/// dist(x) by breadth-first search over added chip vectors, one chip per
/// level, each candidate judged by [`classify_by_cycle_detection`].
pub fn brute_force_dist<H: FiringHost + ?Sized>(host: &H, x: &ChipDistribution, state_limit: usize) -> Result<i64> {
    let n = host.vertex_count();
    let max_level = host.directed_arc_count() + 1;
    let mut level: BTreeSet<Vec<i64>> = BTreeSet::new();
    level.insert(vec![0; n]);
    for k in 0..=max_level {
        for y in &level {
            let sum: Vec<i64> = x.as_slice().iter().zip(y).map(|(a, b)| a + b).collect();
            let outcome = classify_by_cycle_detection(host, &ChipDistribution::new(sum)?, state_limit)?;
            if !outcome.is_terminating() {
                return Ok(k);
            }
        }
        let mut next = BTreeSet::new();
        for y in &level {
            for v in 0..n {
                let mut z = y.clone();
                z[v] += 1;
                next.insert(z);
            }
            if next.len() > state_limit {
                return Err(Error::StateSpaceTooLarge(state_limit));
            }
        }
        level = next;
    }
    Err(Error::StateSpaceTooLarge(state_limit))
}

/// Divisor-class oracle built on exact integer linear algebra.
///
/// With `Q` the reduced (positive) Laplacian obtained by deleting vertex 0,
/// two divisors of equal degree are equivalent iff `Q z = h' - f'` has an
/// integral solution (primes drop vertex 0). The solution is unique and
/// equals `adj(Q)(h' - f') / det(Q)`, so equivalence reduces to comparing
/// `adj(Q) f' mod det(Q)`, the class key.
#[derive(Debug, Clone)]
pub struct DivisorClassOracle<'g> {
    graph: &'g Graph,
    det: i128,
    adjugate: Vec<Vec<i128>>,
    effective_keys: BTreeMap<i64, BTreeSet<Vec<i128>>>,
    limit: usize,
}

impl<'g> DivisorClassOracle<'g> {
    pub fn new(graph: &'g Graph, limit: usize) -> Self {
        let n = graph.vertex_count();
        let m = n - 1;
        let reduced: Vec<Vec<i128>> = (1..n)
            .map(|i| {
                (1..n)
                    .map(|j| if i == j { graph.degree(i) as i128 } else { -(graph.multiplicity(i, j) as i128) })
                    .collect()
            })
            .collect();
        let det = determinant(reduced.clone());
        let mut adjugate = vec![vec![0i128; m]; m];
        for (i, row) in adjugate.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                // adj[i][j] = (-1)^{i+j} det(Q without row j, column i)
                let minor: Vec<Vec<i128>> = reduced
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r != j)
                    .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                *entry = sign * determinant(minor);
            }
        }
        DivisorClassOracle { graph, det, adjugate, effective_keys: BTreeMap::new(), limit }
    }

    /// det of the reduced Laplacian: the number of spanning trees.
    pub fn det(&self) -> i128 {
        self.det
    }

    pub fn class_key(&self, f: &[i64]) -> Vec<i128> {
        self.adjugate
            .iter()
            .map(|row| {
                let dot: i128 = row.iter().zip(&f[1..]).map(|(a, &b)| a * b as i128).sum();
                dot.rem_euclid(self.det)
            })
            .collect()
    }

    pub fn equivalent(&self, f: &Divisor, h: &Divisor) -> bool {
        f.degree() == h.degree() && self.class_key(f.values()) == self.class_key(h.values())
    }

    /// Scans every effective divisor of the same degree.
    pub fn has_effective_equivalent(&mut self, f: &Divisor) -> Result<bool> {
        let degree = f.degree();
        if degree < 0 {
            return Ok(false);
        }
        if !self.effective_keys.contains_key(&degree) {
            let mut keys = BTreeSet::new();
            let mut count = 0usize;
            let mut failed = false;
            let n = self.graph.vertex_count();
            let mut current = vec![0i64; n];
            effective_of_degree(&mut current, 0, degree, &mut |h| {
                count += 1;
                if count > self.limit {
                    failed = true;
                    return false;
                }
                keys.insert(self.class_key(h));
                true
            });
            if failed {
                return Err(Error::SearchBoxExceeded(self.limit as u128));
            }
            self.effective_keys.insert(degree, keys);
        }
        Ok(self.effective_keys[&degree].contains(&self.class_key(f.values())))
    }

    /// rank(f) straight from the definition: the smallest degree of an
    /// effective `e` with no effective divisor equivalent to `f - e`, minus 1.
    pub fn rank(&mut self, f: &Divisor) -> Result<i64> {
        let n = self.graph.vertex_count();
        for k in 0..=f.degree().max(-1) + 1 {
            let mut found = false;
            let mut error = None;
            let mut current = vec![0i64; n];
            effective_of_degree(&mut current, 0, k, &mut |e| {
                let rest = Divisor::new(f.values().iter().zip(e).map(|(a, b)| a - b).collect());
                match self.has_effective_equivalent(&rest) {
                    Ok(true) => true,
                    Ok(false) => {
                        found = true;
                        false
                    }
                    Err(err) => {
                        error = Some(err);
                        false
                    }
                }
            });
            if let Some(err) = error {
                return Err(err);
            }
            if found {
                return Ok(k - 1);
            }
        }
        Ok(-1)
    }
}

/// Calls `visit` on every nonnegative vector with the given total; stops
/// early when `visit` returns false. Returns false if stopped.
fn effective_of_degree(
    current: &mut [i64],
    index: usize,
    remaining: i64,
    visit: &mut dyn FnMut(&[i64]) -> bool,
) -> bool {
    if index + 1 == current.len() {
        current[index] = remaining;
        let keep_going = visit(current);
        current[index] = 0;
        return keep_going;
    }
    for c in 0..=remaining {
        current[index] = c;
        if !effective_of_degree(current, index + 1, remaining - c, visit) {
            current[index] = 0;
            return false;
        }
    }
    current[index] = 0;
    true
}

/// Fraction-free Gaussian elimination.
fn determinant(mut a: Vec<Vec<i128>>) -> i128 {
    let m = a.len();
    if m == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..m - 1 {
        if a[k][k] == 0 {
            match (k + 1..m).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..m {
            for j in k + 1..m {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[m - 1][m - 1]
}

/// rank(f) through [`DivisorClassOracle`].
pub fn brute_force_rank(g: &Graph, f: &Divisor) -> Result<i64> {
    if f.len() != g.vertex_count() {
        return Err(Error::HostMismatch);
    }
    DivisorClassOracle::new(g, DEFAULT_STATE_LIMIT).rank(f)
}

/// (max|f| + max|h| + 2|E|)·n, the default half-width for
/// [`equivalent_by_box_search`].
pub fn default_box_bound(g: &Graph, f: &Divisor, h: &Divisor) -> i64 {
    let max_abs = |d: &Divisor| d.values().iter().map(|v| v.abs()).max().unwrap_or(0);
    (max_abs(f) + max_abs(h) + 2 * g.edge_count()) * g.vertex_count() as i64
}

/// Looks for a firing vector `z` with `z(0) = 0` and `|z(v)| <= bound` such
/// that `h = f + L z`. Refuses boxes with more than `limit` points.
pub fn equivalent_by_box_search(g: &Graph, f: &Divisor, h: &Divisor, bound: i64, limit: u128) -> Result<bool> {
    let n = g.vertex_count();
    if f.len() != n || h.len() != n {
        return Err(Error::HostMismatch);
    }
    if f.degree() != h.degree() {
        return Ok(false);
    }
    let side = 2 * bound as u128 + 1;
    let points = (1..n).try_fold(1u128, |acc, _| acc.checked_mul(side)).unwrap_or(u128::MAX);
    if points > limit {
        return Err(Error::SearchBoxExceeded(points));
    }
    let laplacian = g.laplacian();
    let mut z = vec![-bound; n];
    z[0] = 0;
    loop {
        let hit = (0..n).all(|i| {
            let lz: i64 = (0..n).map(|j| laplacian[i][j] * z[j]).sum();
            f[i] + lz == h[i]
        });
        if hit {
            return Ok(true);
        }
        let mut i = 1;
        loop {
            if i == n {
                return Ok(false);
            }
            z[i] += 1;
            if z[i] <= bound {
                break;
            }
            z[i] = -bound;
            i += 1;
        }
    }
}
