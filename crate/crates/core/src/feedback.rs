//! Minimum feedback arc sets and the chip distributions they induce.
//!
//! `minfas` is computed exactly as the minimum number of backward arcs over
//! all linear orders of the vertices, by dynamic programming over vertex
//! subsets. The optimal order doubles as the acyclicity certificate of the
//! remaining arcs.

use alloc::vec;
use alloc::vec::Vec;

use crate::chips::ChipDistribution;
use crate::engine;
use crate::error::{Error, Result};
use crate::graph::Digraph;

/// Default vertex limit of [`minfas_exact`]; the table has `2^n` entries.
pub const DEFAULT_DP_LIMIT: usize = 22;

/// Hosts up to this size have minimality checked in [`fas_distribution`].
pub const MINIMALITY_CHECK_LIMIT: usize = 16;

/// Arcs whose removal leaves the host acyclic, with a topological order of
/// the remaining arcs as certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedbackArcSet {
    arcs: Vec<(usize, usize, i64)>,
    order: Vec<usize>,
}

impl FeedbackArcSet {
    /// Validates that `arcs` is a sub-multiset of the host's arcs and that
    /// `order` topologically sorts the arcs left over.
    pub fn new(host: &Digraph, arcs: &[(usize, usize, i64)], order: Vec<usize>) -> Result<Self> {
        let n = host.vertex_count();
        let mut merged: Vec<(usize, usize, i64)> = Vec::with_capacity(arcs.len());
        let mut sorted = arcs.to_vec();
        sorted.sort_unstable();
        for (u, v, m) in sorted {
            if m < 1 {
                return Err(Error::InvalidMultiplicity(u, v, m));
            }
            match merged.last_mut() {
                Some(last) if (last.0, last.1) == (u, v) => last.2 += m,
                _ => merged.push((u, v, m)),
            }
        }
        for &(u, v, m) in &merged {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if m > host.multiplicity(u, v) {
                return Err(Error::InvalidFeedbackSet("arc not present in host"));
            }
        }
        let position = positions(&order, n).ok_or_else(|| Error::BadCertificate(order.clone()))?;
        let fas = FeedbackArcSet { arcs: merged, order };
        for &(u, v, m) in host.arcs() {
            if m > fas.multiplicity(u, v) && position[u] > position[v] {
                return Err(Error::BadCertificate(fas.order));
            }
        }
        Ok(fas)
    }

    pub fn arcs(&self) -> &[(usize, usize, i64)] {
        &self.arcs
    }

    /// Topological order of the host with these arcs removed.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// |F|, counting parallel arcs.
    pub fn size(&self) -> i64 {
        self.arcs.iter().map(|a| a.2).sum()
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> i64 {
        match self.arcs.binary_search_by(|a| (a.0, a.1).cmp(&(u, v))) {
            Ok(i) => self.arcs[i].2,
            Err(_) => 0,
        }
    }

    /// d⁻_F(v) for every vertex.
    pub fn in_degrees(&self, n: usize) -> Vec<i64> {
        let mut d = vec![0; n];
        for &(_, v, m) in &self.arcs {
            d[v] += m;
        }
        d
    }

    /// d⁺_F(v) for every vertex.
    pub fn out_degrees(&self, n: usize) -> Vec<i64> {
        let mut d = vec![0; n];
        for &(u, _, m) in &self.arcs {
            d[u] += m;
        }
        d
    }
}

fn positions(order: &[usize], n: usize) -> Option<Vec<usize>> {
    if order.len() != n {
        return None;
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return None;
        }
        position[v] = i;
    }
    Some(position)
}

/// Backward arcs of `order`: arcs `(u, v)` with `v` placed before `u`.
pub fn backward_arcs(host: &Digraph, order: &[usize]) -> Result<FeedbackArcSet> {
    let position = positions(order, host.vertex_count()).ok_or_else(|| Error::BadCertificate(order.to_vec()))?;
    let arcs: Vec<_> = host.arcs().iter().copied().filter(|&(u, v, _)| position[u] > position[v]).collect();
    FeedbackArcSet::new(host, &arcs, order.to_vec())
}

/// minfas(D) and one optimal feedback arc set, for hosts of at most
/// [`DEFAULT_DP_LIMIT`] vertices.
pub fn minfas_exact(host: &Digraph) -> Result<(i64, FeedbackArcSet)> {
    minfas_exact_with_limit(host, DEFAULT_DP_LIMIT)
}

pub fn minfas_exact_with_limit(host: &Digraph, limit: usize) -> Result<(i64, FeedbackArcSet)> {
    let n = host.vertex_count();
    if n > limit || n >= usize::BITS as usize {
        return Err(Error::TooLarge("minfas dynamic programme"));
    }
    let full = (1usize << n) - 1;
    // best[S]: fewest backward arcs over orders of S placed as a prefix
    let mut best = vec![i64::MAX; full + 1];
    let mut last = vec![u8::MAX; full + 1];
    best[0] = 0;
    for set in 0..full {
        let base = best[set];
        if base == i64::MAX {
            continue;
        }
        for v in 0..n {
            if set & (1 << v) != 0 {
                continue;
            }
            // appending v after S turns every arc v -> S backward
            let cost: i64 = host.out_neighbors(v).iter().filter(|&&(u, _)| set & (1 << u) != 0).map(|&(_, m)| m).sum();
            let next = set | (1 << v);
            if base + cost < best[next] {
                best[next] = base + cost;
                last[next] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut set = full;
    while set != 0 {
        let v = last[set] as usize;
        order.push(v);
        set &= !(1 << v);
    }
    order.reverse();
    let fas = backward_arcs(host, &order)?;
    debug_assert_eq!(fas.size(), best[full]);
    Ok((best[full], fas))
}

/// The distribution `x(v) = d⁻_F(v)` of a minimum feedback arc set on an
/// Eulerian host. Minimality is checked on hosts of up to
/// [`MINIMALITY_CHECK_LIMIT`] vertices and trusted beyond.
pub fn fas_distribution(host: &Digraph, fas: &FeedbackArcSet) -> Result<ChipDistribution> {
    if !host.is_eulerian() {
        return Err(Error::UnsupportedHost);
    }
    if host.vertex_count() <= MINIMALITY_CHECK_LIMIT {
        let (minimum, _) = minfas_exact(host)?;
        if fas.size() != minimum {
            return Err(Error::NotMinimal { size: fas.size(), minimum });
        }
    }
    ChipDistribution::new(fas.in_degrees(host.vertex_count()))
}

/// One rotation step: find a source `v₀` of the host minus `F` with no
/// out-arc in `F`, fire it, and move its in-arcs out of `F` and its
/// out-arcs into `F`. Returns the new set, the new distribution and `v₀`.
pub fn rotate_fas(
    host: &Digraph,
    fas: &FeedbackArcSet,
    x: &ChipDistribution,
) -> Result<(FeedbackArcSet, ChipDistribution, usize)> {
    if !host.is_eulerian() {
        return Err(Error::UnsupportedHost);
    }
    let n = host.vertex_count();
    x.check_host(host)?;
    let indeg_f = fas.in_degrees(n);
    if (0..n).any(|v| x[v] < indeg_f[v]) {
        return Err(Error::PreconditionUnmet("distribution does not dominate d⁻_F"));
    }
    let source = (0..n).find(|&v| {
        host.in_neighbors(v).iter().all(|&(u, m)| fas.multiplicity(u, v) == m)
            && host.out_neighbors(v).iter().all(|&(w, _)| fas.multiplicity(v, w) == 0)
    });
    let v0 = source.ok_or(Error::NoSource)?;
    let fired = engine::fire(host, x, v0)?;
    let mut arcs: Vec<_> = fas.arcs.iter().copied().filter(|&(_, v, _)| v != v0).collect();
    arcs.extend(host.out_neighbors(v0).iter().map(|&(w, m)| (v0, w, m)));
    let mut order: Vec<usize> = fas.order.iter().copied().filter(|&v| v != v0).collect();
    order.push(v0);
    let rotated = FeedbackArcSet::new(host, &arcs, order)?;
    Ok((rotated, fired, v0))
}
