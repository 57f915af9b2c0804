//! Orientations of undirected graphs and distributions lying under an
//! acyclic one.

use alloc::vec;
use alloc::vec::Vec;

use crate::chips::ChipDistribution;
use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

/// Exhaustive search over vertex orders is refused above this size.
pub const EXHAUSTIVE_LIMIT: usize = 8;

/// A direction for every edge instance of a base graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    arcs: Vec<(usize, usize, i64)>,
    in_degree: Vec<i64>,
    out_degree: Vec<i64>,
    topological_order: Option<Vec<usize>>,
}

impl Orientation {
    /// Directs `(u, v, m)` triples; together with their reversals they must
    /// reproduce the edge multiset of `base` exactly.
    pub fn from_arcs(base: &Graph, arcs: &[(usize, usize, i64)]) -> Result<Self> {
        let n = base.vertex_count();
        let mut projected: Vec<(usize, usize, i64)> = Vec::new();
        for &(u, v, m) in arcs {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if m < 1 {
                return Err(Error::InvalidMultiplicity(u, v, m));
            }
            projected.push((u.min(v), u.max(v), m));
        }
        projected.sort_unstable();
        let mut merged: Vec<(usize, usize, i64)> = Vec::new();
        for (u, v, m) in projected {
            match merged.last_mut() {
                Some(last) if (last.0, last.1) == (u, v) => last.2 += m,
                _ => merged.push((u, v, m)),
            }
        }
        if merged != base.edges() {
            return Err(Error::InvalidOrientation("arcs do not project onto the base edges"));
        }
        let mut in_degree = vec![0; n];
        let mut out_degree = vec![0; n];
        for &(u, v, m) in arcs {
            out_degree[u] += m;
            in_degree[v] += m;
        }
        let topological_order = kahn(n, arcs);
        Ok(Orientation { arcs: arcs.to_vec(), in_degree, out_degree, topological_order })
    }

    /// Directs every edge from the endpoint earlier in `order` to the later.
    pub fn from_order(base: &Graph, order: &[usize]) -> Result<Self> {
        let n = base.vertex_count();
        let mut position = vec![usize::MAX; n];
        if order.len() != n {
            return Err(Error::InvalidOrientation("order is not a permutation"));
        }
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(Error::InvalidOrientation("order is not a permutation"));
            }
            position[v] = i;
        }
        let arcs: Vec<_> = base
            .edges()
            .iter()
            .map(|&(u, v, m)| if position[u] < position[v] { (u, v, m) } else { (v, u, m) })
            .collect();
        let mut o = Self::from_arcs(base, &arcs)?;
        o.topological_order = Some(order.to_vec());
        Ok(o)
    }

    pub fn arcs(&self) -> &[(usize, usize, i64)] {
        &self.arcs
    }

    /// d⁻_D(v) for every vertex.
    pub fn in_degrees(&self) -> &[i64] {
        &self.in_degree
    }

    pub fn out_degrees(&self) -> &[i64] {
        &self.out_degree
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order.is_some()
    }

    /// A topological order when the orientation is acyclic.
    pub fn topological_order(&self) -> Option<&[usize]> {
        self.topological_order.as_deref()
    }

    pub fn to_digraph(&self, n: usize) -> Result<Digraph> {
        Digraph::new(n, &self.arcs)
    }
}

fn kahn(n: usize, arcs: &[(usize, usize, i64)]) -> Option<Vec<usize>> {
    let mut indegree = vec![0i64; n];
    let mut out: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for &(u, v, m) in arcs {
        indegree[v] += m;
        out[u].push((v, m));
    }
    let mut ready: Vec<usize> = (0..n).rev().filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = ready.pop() {
        order.push(u);
        for &(v, m) in &out[u] {
            indegree[v] -= m;
            if indegree[v] == 0 {
                ready.push(v);
            }
        }
    }
    (order.len() == n).then_some(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Greedy,
    Exhaustive,
}

/// Looks for an acyclic orientation `D` with `x(v) <= d⁻_D(v)` everywhere.
///
/// Greedy mode repeatedly places the smallest unplaced vertex whose chips do
/// not exceed its edge count to the already placed vertices. A vertex that
/// qualifies keeps qualifying as the placed set grows, so getting stuck
/// means no witness order exists. Exhaustive mode tries every order.
pub fn under_acyclic_orientation(g: &Graph, x: &ChipDistribution, mode: SearchMode) -> Result<Option<Orientation>> {
    x.check_host(g)?;
    let order = match mode {
        SearchMode::Greedy => greedy_order(g, x),
        SearchMode::Exhaustive => exhaustive_order(g, x)?,
    };
    let Some(order) = order else { return Ok(None) };
    let orientation = Orientation::from_order(g, &order)?;
    // re-check against the definition
    let dominated = (0..g.vertex_count()).all(|v| x[v] <= orientation.in_degrees()[v]);
    if !orientation.is_acyclic() || !dominated {
        return Err(Error::InvalidOrientation("search returned a non-witness"));
    }
    Ok(Some(orientation))
}

fn greedy_order(g: &Graph, x: &ChipDistribution) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut placed = vec![false; n];
    // edges from each vertex into the placed set
    let mut toward_placed = vec![0i64; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let v = (0..n).find(|&v| !placed[v] && x[v] <= toward_placed[v])?;
        placed[v] = true;
        order.push(v);
        for &(u, m) in g.neighbors(v) {
            toward_placed[u] += m;
        }
    }
    Some(order)
}

fn exhaustive_order(g: &Graph, x: &ChipDistribution) -> Result<Option<Vec<usize>>> {
    let n = g.vertex_count();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge("exhaustive orientation search"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        let mut position = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let witness = order.iter().all(|&v| {
            let earlier: i64 =
                g.neighbors(v).iter().filter(|&&(u, _)| position[u] < position[v]).map(|&(_, m)| m).sum();
            x[v] <= earlier
        });
        if witness {
            return Ok(Some(order));
        }
        if !next_permutation(&mut order) {
            return Ok(None);
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// dist(x) = |E| - |x| for `x` under an acyclic orientation.
pub fn dist_under_acyclic(g: &Graph, x: &ChipDistribution) -> Result<i64> {
    match under_acyclic_orientation(g, x, SearchMode::Greedy)? {
        Some(_) => Ok(g.edge_count() - x.total()),
        None => Err(Error::PreconditionUnmet("distribution is not under an acyclic orientation")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::new(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap()
    }
    fn chips(v: &[i64]) -> ChipDistribution {
        ChipDistribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn triangle_examples() {
        for mode in [SearchMode::Greedy, SearchMode::Exhaustive] {
            let o = under_acyclic_orientation(&k3(), &chips(&[0, 1, 2]), mode).unwrap().unwrap();
            assert_eq!(o.topological_order(), Some(&[0, 1, 2][..]));
            assert_eq!(o.in_degrees(), &[0, 1, 2]);
            assert_eq!(under_acyclic_orientation(&k3(), &chips(&[1, 1, 1]), mode).unwrap(), None);
            assert!(under_acyclic_orientation(&k3(), &chips(&[0, 0, 0]), mode).unwrap().is_some());
        }
    }

    #[test]
    fn formula() {
        assert_eq!(dist_under_acyclic(&k3(), &chips(&[0, 0, 1])), Ok(2));
        assert_eq!(dist_under_acyclic(&k3(), &chips(&[0, 1, 2])), Ok(0));
        assert_eq!(dist_under_acyclic(&k3(), &chips(&[0, 0, 0])), Ok(3));
        assert!(dist_under_acyclic(&k3(), &chips(&[1, 1, 1])).is_err());
    }

    #[test]
    fn orientation_validation() {
        let cyc = Orientation::from_arcs(&k3(), &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        assert!(!cyc.is_acyclic());
        let ok = Orientation::from_arcs(&k3(), &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        assert_eq!(ok.topological_order(), Some(&[0, 1, 2][..]));
        assert!(Orientation::from_arcs(&k3(), &[(0, 1, 1), (1, 2, 1)]).is_err());
    }

    #[test]
    fn exhaustive_guard() {
        let edges: Vec<_> = (0..8).map(|i| (i, i + 1, 1)).collect();
        let path = Graph::new(9, &edges).unwrap();
        assert_eq!(
            under_acyclic_orientation(&path, &ChipDistribution::zero(9), SearchMode::Exhaustive),
            Err(Error::TooLarge("exhaustive orientation search"))
        );
    }
}
