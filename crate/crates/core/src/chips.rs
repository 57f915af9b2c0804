use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result};

/// A host on which chips can be fired.
///
/// An undirected graph acts as its bidirected digraph: a vertex fires when
/// it holds at least its degree and sends one chip along every incident
/// edge. All size statistics are reported for that directed form, so one
/// simulator and one set of bounds serve both kinds of host.
pub trait FiringHost {
    fn vertex_count(&self) -> usize;
    /// Chips `v` must hold to be active: d(v), or d⁺(v) on a digraph.
    fn threshold(&self, v: usize) -> i64;
    /// `(receiver, multiplicity)` pairs fed when `v` fires.
    fn targets(&self, v: usize) -> &[(usize, i64)];
    /// |E| of the directed form.
    fn directed_arc_count(&self) -> i64;
    /// Δ of the directed form.
    fn directed_max_degree(&self) -> i64;
    fn is_eulerian(&self) -> bool;
}

/// Nonnegative chip counts indexed by vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChipDistribution(Vec<i64>);

impl ChipDistribution {
    pub fn new(chips: Vec<i64>) -> Result<Self> {
        if let Some((vertex, &value)) = chips.iter().enumerate().find(|(_, &c)| c < 0) {
            return Err(Error::NegativeChips { vertex, value });
        }
        chips.iter().try_fold(0i64, |acc, &c| acc.checked_add(c)).ok_or(Error::Overflow("total chip count"))?;
        Ok(ChipDistribution(chips))
    }

    /// Validates the length against `host` as well.
    pub fn on<H: FiringHost + ?Sized>(host: &H, chips: Vec<i64>) -> Result<Self> {
        if chips.len() != host.vertex_count() {
            return Err(Error::LengthMismatch { expected: host.vertex_count(), actual: chips.len() });
        }
        Self::new(chips)
    }

    pub fn zero(n: usize) -> Self {
        ChipDistribution(alloc::vec![0; n])
    }

    pub(crate) fn from_raw(chips: Vec<i64>) -> Self {
        debug_assert!(chips.iter().all(|&c| c >= 0));
        ChipDistribution(chips)
    }

    /// |x|, the total number of chips.
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    /// Pointwise sum.
    pub fn plus(&self, other: &[i64]) -> Result<Self> {
        if other.len() != self.0.len() {
            return Err(Error::LengthMismatch { expected: self.0.len(), actual: other.len() });
        }
        let sum = self
            .0
            .iter()
            .zip(other)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("chip count")))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sum)
    }

    pub(crate) fn check_host<H: FiringHost + ?Sized>(&self, host: &H) -> Result<()> {
        if self.0.len() != host.vertex_count() {
            return Err(Error::LengthMismatch { expected: host.vertex_count(), actual: self.0.len() });
        }
        Ok(())
    }
}

impl Index<usize> for ChipDistribution {
    type Output = i64;
    fn index(&self, v: usize) -> &i64 {
        &self.0[v]
    }
}

impl AsRef<[i64]> for ChipDistribution {
    fn as_ref(&self) -> &[i64] {
        &self.0
    }
}
