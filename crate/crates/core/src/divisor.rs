//! Divisors on graphs: linear equivalence through q-reduced divisors, rank,
//! the chip-firing dual pair and Riemann–Roch residuals.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use crate::chips::ChipDistribution;
use crate::engine;
use crate::enumerate::Placements;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Reduction vertex used wherever a canonical form is needed.
pub const CANONICAL_Q: usize = 0;

/// Integer chip counts indexed by vertex; entries may be negative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Divisor(Vec<i64>);

impl Divisor {
    pub fn new(values: Vec<i64>) -> Self {
        Divisor(values)
    }

    /// Checks the length against `g`.
    pub fn on(g: &Graph, values: Vec<i64>) -> Result<Self> {
        if values.len() != g.vertex_count() {
            return Err(Error::LengthMismatch { expected: g.vertex_count(), actual: values.len() });
        }
        Ok(Divisor(values))
    }

    pub fn zero(n: usize) -> Self {
        Divisor(vec![0; n])
    }

    /// K(v) = d(v) - 2.
    pub fn canonical(g: &Graph) -> Self {
        Divisor(g.degrees().iter().map(|d| d - 2).collect())
    }

    /// K⁺(v) = d(v) - 1.
    pub fn k_plus(g: &Graph) -> Self {
        Divisor(g.degrees().iter().map(|d| d - 1).collect())
    }

    /// deg(f) = Σ f(v).
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&v| v >= 0)
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn minus(&self, other: &[i64]) -> Result<Divisor> {
        self.zip_with(other, |a, b| a.checked_sub(b))
    }

    pub fn plus(&self, other: &[i64]) -> Result<Divisor> {
        self.zip_with(other, |a, b| a.checked_add(b))
    }

    fn zip_with(&self, other: &[i64], op: impl Fn(i64, i64) -> Option<i64>) -> Result<Divisor> {
        if other.len() != self.0.len() {
            return Err(Error::HostMismatch);
        }
        self.0
            .iter()
            .zip(other)
            .map(|(&a, &b)| op(a, b).ok_or(Error::Overflow("divisor value")))
            .collect::<Result<Vec<_>>>()
            .map(Divisor)
    }

    fn check_host(&self, g: &Graph) -> Result<()> {
        if self.0.len() != g.vertex_count() {
            return Err(Error::HostMismatch);
        }
        Ok(())
    }
}

impl Index<usize> for Divisor {
    type Output = i64;
    fn index(&self, v: usize) -> &i64 {
        &self.0[v]
    }
}

/// The q-reduced representative of a divisor class: nonnegative away from
/// `q`, and no nonempty set avoiding `q` can fire without going negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedDivisor {
    q: usize,
    values: Divisor,
}

impl ReducedDivisor {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn divisor(&self) -> &Divisor {
        &self.values
    }

    pub fn values(&self) -> &[i64] {
        self.values.values()
    }

    /// Chips on `q`; the class has an effective member iff this is >= 0.
    pub fn at_q(&self) -> i64 {
        self.values[self.q]
    }
}

/// K⁺ - f, defined when f(v) <= d(v) - 1 everywhere.
pub fn dual_pair(g: &Graph, f: &Divisor) -> Result<ChipDistribution> {
    f.check_host(g)?;
    for v in 0..g.vertex_count() {
        let limit = g.degree(v) - 1;
        if f[v] > limit {
            return Err(Error::OutOfRange { vertex: v, value: f[v], limit });
        }
    }
    ChipDistribution::new(Divisor::k_plus(g).minus(f.values())?.into_vec())
}

/// K⁺ - x, the divisor whose dual pair is `x`.
pub fn dual_divisor(g: &Graph, x: &ChipDistribution) -> Result<Divisor> {
    x.check_host(g)?;
    Divisor::k_plus(g).minus(x.as_slice())
}

/// Computes the q-reduced divisor equivalent to `f`.
pub fn q_reduce(g: &Graph, f: &Divisor, q: usize) -> Result<ReducedDivisor> {
    q_reduce_counted(g, f, q).map(|(r, _)| r)
}

/// As [`q_reduce`], also returning the number of (batched) set-firings.
///
/// First every negative vertex other than `q` borrows, `ceil(-f(v)/d(v))`
/// times at once, until none is negative; in the dual this is sandpile
/// stabilisation towards the sink `q`, so it stops. Then Dhar's burning
/// runs from `q`; while some set stays unburnt it fires as many times as
/// it legally can and the fire restarts.
pub fn q_reduce_counted(g: &Graph, f: &Divisor, q: usize) -> Result<(ReducedDivisor, u64)> {
    f.check_host(g)?;
    let n = g.vertex_count();
    if q >= n {
        return Err(Error::VertexOutOfRange { vertex: q, n });
    }
    let mut values = f.values().to_vec();
    let mut steps = 0u64;

    loop {
        let mut borrowed = false;
        for v in (0..n).filter(|&v| v != q) {
            if values[v] < 0 {
                let d = g.degree(v);
                let times = (-values[v] + d - 1) / d;
                values[v] += times * d;
                for &(u, m) in g.neighbors(v) {
                    values[u] = values[u].checked_sub(times * m).ok_or(Error::Overflow("q-reduction"))?;
                }
                steps += 1;
                borrowed = true;
            }
        }
        if !borrowed {
            break;
        }
    }

    let mut burnt = vec![false; n];
    let mut toward_burnt = vec![0i64; n];
    let mut stack = Vec::with_capacity(n);
    loop {
        burnt.iter_mut().for_each(|b| *b = false);
        toward_burnt.iter_mut().for_each(|c| *c = 0);
        stack.clear();
        burnt[q] = true;
        stack.push(q);
        while let Some(w) = stack.pop() {
            for &(u, m) in g.neighbors(w) {
                if !burnt[u] {
                    toward_burnt[u] += m;
                    if values[u] < toward_burnt[u] {
                        burnt[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        if burnt.iter().all(|&b| b) {
            break;
        }
        // the unburnt set can fire `times` times, each unburnt vertex losing
        // its edges into the burnt part
        let times = (0..n)
            .filter(|&u| !burnt[u] && toward_burnt[u] > 0)
            .map(|u| values[u] / toward_burnt[u])
            .min()
            .expect("an unburnt set borders the burnt part");
        for u in 0..n {
            if burnt[u] {
                continue;
            }
            values[u] -= times * toward_burnt[u];
            for &(w, m) in g.neighbors(u) {
                if burnt[w] {
                    values[w] += times * m;
                }
            }
        }
        steps += 1;
    }
    Ok((ReducedDivisor { q, values: Divisor(values) }, steps))
}

/// f ~ h, decided by comparing reduced forms at [`CANONICAL_Q`].
pub fn linear_equivalent(g: &Graph, f: &Divisor, h: &Divisor) -> Result<bool> {
    f.check_host(g)?;
    h.check_host(g)?;
    if f.degree() != h.degree() {
        return Ok(false);
    }
    Ok(q_reduce(g, f, CANONICAL_Q)? == q_reduce(g, h, CANONICAL_Q)?)
}

/// Whether some effective divisor is equivalent to `f`.
pub fn has_effective_equivalent(g: &Graph, f: &Divisor) -> Result<bool> {
    f.check_host(g)?;
    if f.degree() < 0 {
        return Ok(false);
    }
    Ok(q_reduce(g, f, CANONICAL_Q)?.at_q() >= 0)
}

/// The same question answered through the dual pair: `f` (with
/// f(v) <= d(v) - 1) has an effective equivalent iff K⁺ - f terminates.
pub fn has_effective_equivalent_by_game(g: &Graph, f: &Divisor) -> Result<bool> {
    let x = dual_pair(g, f)?;
    Ok(engine::classify(g, &x)?.is_terminating())
}

/// rank(f): the largest `r` such that `f - e` has an effective equivalent
/// for every effective `e` of degree `r`, or -1.
///
/// Enumerates effective divisors degree by degree in colex order; the first
/// `e` of degree `k` with no effective equivalent of `f - e` gives `k - 1`.
pub fn rank(g: &Graph, f: &Divisor) -> Result<i64> {
    f.check_host(g)?;
    let reduced = q_reduce(g, f, CANONICAL_Q)?;
    if f.degree() < 0 || reduced.at_q() < 0 {
        return Ok(-1);
    }
    let base = reduced.divisor();
    let n = g.vertex_count();
    for k in 1..=f.degree() + 1 {
        for e in Placements::new(n, k) {
            if !has_effective_equivalent(g, &base.minus(&e)?)? {
                return Ok(k - 1);
            }
        }
    }
    unreachable!("removing deg(f) + 1 chips leaves negative degree")
}

/// Outcome of [`verify_rank_upper_witness`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessCheck {
    pub accepted: bool,
    /// Set-firings spent reducing `f - witness`; zero when a cheap guard
    /// rejected the witness first.
    pub reduction_steps: u64,
}

/// Checks a certificate for rank(f) <= k: an effective `witness` of degree
/// at most k + 1 such that `f - witness` has no effective equivalent. One
/// q-reduction, no game play and no rank search.
pub fn verify_rank_upper_witness(g: &Graph, f: &Divisor, k: i64, witness: &Divisor) -> Result<WitnessCheck> {
    f.check_host(g)?;
    witness.check_host(g)?;
    if !witness.is_effective() || witness.degree() > k.saturating_add(1) {
        return Ok(WitnessCheck { accepted: false, reduction_steps: 0 });
    }
    let rest = f.minus(witness.values())?;
    if rest.degree() < 0 {
        return Ok(WitnessCheck { accepted: true, reduction_steps: 0 });
    }
    let (reduced, steps) = q_reduce_counted(g, &rest, CANONICAL_Q)?;
    Ok(WitnessCheck { accepted: reduced.at_q() < 0, reduction_steps: steps })
}

/// rank(f) - rank(K - f) - (deg(f) - |E| + |V|); zero by Riemann–Roch.
pub fn riemann_roch_residual(g: &Graph, f: &Divisor) -> Result<i64> {
    let dual = Divisor::canonical(g).minus(f.values())?;
    let expected = f.degree() - g.edge_count() + g.vertex_count() as i64;
    Ok(rank(g, f)? - rank(g, &dual)? - expected)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualityReport {
    pub rank: i64,
    pub dist: i64,
}

/// Computes rank(f) by enumeration and dist(K⁺ - f) by chip-firing search
/// and checks rank(f) = dist(K⁺ - f) - 1.
pub fn rank_duality_check(g: &Graph, f: &Divisor) -> Result<DualityReport> {
    let x = dual_pair(g, f)?;
    let dist = engine::distance_to_nonterminating(g, &x)?;
    let rank = rank(g, f)?;
    if rank != dist - 1 {
        return Err(Error::DualityViolation { rank, dist });
    }
    Ok(DualityReport { rank, dist })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::new(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap()
    }
    fn div(v: &[i64]) -> Divisor {
        Divisor::new(v.to_vec())
    }

    #[test]
    fn dual_pairs() {
        assert_eq!(dual_pair(&k3(), &div(&[0, 0, 0])).unwrap().as_slice(), &[1, 1, 1]);
        assert_eq!(dual_pair(&k3(), &div(&[1, 1, 1])).unwrap().as_slice(), &[0, 0, 0]);
        assert_eq!(dual_pair(&k3(), &div(&[2, 0, 0])), Err(Error::OutOfRange { vertex: 0, value: 2, limit: 1 }));
        let x = dual_pair(&k3(), &div(&[-1, 0, 1])).unwrap();
        assert_eq!(dual_divisor(&k3(), &x).unwrap(), div(&[-1, 0, 1]));
    }

    #[test]
    fn reduction() {
        assert_eq!(q_reduce(&k3(), &div(&[0, 2, 0]), 0).unwrap().values(), &[1, 0, 1]);
        assert_eq!(q_reduce(&k3(), &div(&[0, 0, 0]), 0).unwrap().values(), &[0, 0, 0]);
        let once = q_reduce(&k3(), &div(&[-3, 5, -1]), 1).unwrap();
        let twice = q_reduce(&k3(), once.divisor(), 1).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn equivalence() {
        assert_eq!(linear_equivalent(&k3(), &div(&[-2, 1, 1]), &div(&[0, 0, 0])), Ok(true));
        assert_eq!(linear_equivalent(&k3(), &div(&[-1, 0, 1]), &div(&[0, 0, 0])), Ok(false));
        assert_eq!(linear_equivalent(&k3(), &div(&[3, -1, 0]), &div(&[3, -1, 0])), Ok(true));
        assert_eq!(linear_equivalent(&k3(), &div(&[1, 0, 0]), &div(&[0, 0, 0])), Ok(false));
        assert_eq!(linear_equivalent(&k3(), &div(&[1, 0]), &div(&[0, 0, 0])), Err(Error::HostMismatch));
    }

    #[test]
    fn effectiveness() {
        assert_eq!(has_effective_equivalent(&k3(), &div(&[-1, 0, 0])), Ok(false));
        assert_eq!(has_effective_equivalent(&k3(), &div(&[-2, 1, 1])), Ok(true));
        assert_eq!(has_effective_equivalent(&k3(), &div(&[-1, 0, 1])), Ok(false));
        assert_eq!(has_effective_equivalent_by_game(&k3(), &div(&[-2, 1, 1])), Ok(true));
        assert_eq!(has_effective_equivalent_by_game(&k3(), &div(&[-1, 0, 1])), Ok(false));
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&k3(), &div(&[0, 0, 0])), Ok(0));
        assert_eq!(rank(&k3(), &div(&[1, 1, 1])), Ok(2));
        assert_eq!(rank(&k3(), &div(&[1, 0, 0])), Ok(0));
        assert_eq!(rank(&k3(), &div(&[-1, 0, 1])), Ok(-1));
        let double = Graph::new(2, &[(0, 1, 2)]).unwrap();
        assert_eq!(rank(&double, &div(&[0, 0])), Ok(0));
    }

    #[test]
    fn witnesses() {
        let f = div(&[1, 1, 1]);
        assert!(verify_rank_upper_witness(&k3(), &f, 2, &div(&[2, 1, 0])).unwrap().accepted);
        assert!(!verify_rank_upper_witness(&k3(), &f, 2, &div(&[0, 0, 3])).unwrap().accepted);
        assert!(!verify_rank_upper_witness(&k3(), &f, 2, &div(&[4, 0, 0])).unwrap().accepted);
        assert!(!verify_rank_upper_witness(&k3(), &f, 5, &div(&[-1, 0, 0])).unwrap().accepted);
    }

    #[test]
    fn riemann_roch_examples() {
        assert_eq!(riemann_roch_residual(&k3(), &div(&[1, 1, 1])), Ok(0));
        assert_eq!(riemann_roch_residual(&k3(), &div(&[0, 0, 0])), Ok(0));
        let double = Graph::new(2, &[(0, 1, 2)]).unwrap();
        assert_eq!(riemann_roch_residual(&double, &div(&[0, 0])), Ok(0));
    }

    #[test]
    fn duality() {
        assert_eq!(rank_duality_check(&k3(), &div(&[1, 1, 1])), Ok(DualityReport { rank: 2, dist: 3 }));
        assert_eq!(rank_duality_check(&k3(), &div(&[0, 0, 0])), Ok(DualityReport { rank: 0, dist: 1 }));
        assert_eq!(rank_duality_check(&k3(), &div(&[-1, 0, 1])), Ok(DualityReport { rank: -1, dist: 0 }));
    }
}
