//! Instance transformations that preserve the distance to non-terminating
//! distributions: the split-arc transform of a digraph into an undirected
//! graph, and edge subdivision.

use alloc::vec;
use alloc::vec::Vec;

use crate::chips::ChipDistribution;
use crate::divisor::{self, Divisor};
use crate::engine::{self, Policy};
use crate::error::{Error, Result};
use crate::feedback;
use crate::graph::{Digraph, Graph};

/// Largest transformed host [`verify_phi_lemma`] will search on.
pub const PHI_LEMMA_VERTEX_LIMIT: usize = 16;

/// An Eulerian digraph `D` turned into an undirected graph: every arc
/// instance `e = (u, w)` gets its own split vertex `ψ(e)`, joined to `u` by
/// `M` parallel edges and to `w` by one edge, with `M = 8|V|²|E|Δ`.
///
/// Vertex `v` of `D` keeps index `v`; arc instance `i` (canonical order,
/// parallel arcs repeated) becomes vertex `|V(D)| + i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiResult {
    source: Digraph,
    target: Graph,
    m: i64,
    arc_instances: Vec<(usize, usize)>,
}

/// What a vertex of the transformed graph stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preimage {
    Vertex(usize),
    Arc(usize),
}

impl PhiResult {
    pub fn source(&self) -> &Digraph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    /// The multiplicity `M` of each tail segment.
    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn arc_instances(&self) -> &[(usize, usize)] {
        &self.arc_instances
    }

    pub fn psi_vertex(&self, v: usize) -> usize {
        v
    }

    pub fn psi_arc(&self, instance: usize) -> usize {
        self.source.vertex_count() + instance
    }

    pub fn preimage(&self, w: usize) -> Preimage {
        let n = self.source.vertex_count();
        if w < n {
            Preimage::Vertex(w)
        } else {
            Preimage::Arc(w - n)
        }
    }

    /// d(ψ(v)) = d⁺(v)·M + d⁻(v), d(ψ(e)) = M + 1, |E(G)| = |E(D)|·(M + 1)
    /// and |V(G)| = |V(D)| + |E(D)|.
    pub fn degree_identities_hold(&self) -> bool {
        let d = &self.source;
        let n = d.vertex_count();
        let vertices = (0..n).all(|v| self.target.degree(v) == d.out_degree(v) * self.m + d.in_degree(v));
        let arcs = (0..self.arc_instances.len()).all(|i| self.target.degree(self.psi_arc(i)) == self.m + 1);
        vertices
            && arcs
            && self.target.vertex_count() == n + self.arc_instances.len()
            && self.target.edge_count() == d.arc_count() * (self.m + 1)
    }

    /// |E(G)| <= 9|V(G)|⁵, checked in 128-bit arithmetic.
    pub fn size_bound_holds(&self) -> bool {
        let v = self.target.vertex_count() as i128;
        (self.target.edge_count() as i128) <= 9 * v * v * v * v * v
    }
}

/// M = 8|V|²|E|Δ.
pub fn phi_multiplier(d: &Digraph) -> Result<i64> {
    let n = d.vertex_count() as i64;
    8i64.checked_mul(n)
        .and_then(|v| v.checked_mul(n))
        .and_then(|v| v.checked_mul(d.arc_count()))
        .and_then(|v| v.checked_mul(d.max_degree()))
        .ok_or(Error::Overflow("phi multiplier"))
}

pub fn phi_transform(d: &Digraph) -> Result<PhiResult> {
    phi_transform_with_multiplier(d, phi_multiplier(d)?)
}

/// The same construction with an arbitrary even `m`. Only the full
/// multiplier carries the distance identity; smaller values are for
/// exploration.
pub fn phi_transform_with_multiplier(d: &Digraph, m: i64) -> Result<PhiResult> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::PreconditionUnmet("multiplier must be even and positive"));
    }
    m.checked_mul(d.max_degree())
        .and_then(|v| v.checked_mul(d.arc_count()))
        .ok_or(Error::Overflow("phi transform size"))?;
    let n = d.vertex_count();
    let arc_instances = d.arc_instances();
    let mut edges = Vec::with_capacity(2 * arc_instances.len());
    for (i, &(tail, head)) in arc_instances.iter().enumerate() {
        edges.push((tail, n + i, m));
        edges.push((n + i, head, 1));
    }
    let target = Graph::new(n + arc_instances.len(), &edges)?;
    let result = PhiResult { source: d.clone(), target, m, arc_instances };
    debug_assert!(result.degree_identities_hold());
    Ok(result)
}

/// d⁺(v)·M on ψ(v) and M/2 on every ψ(e).
pub fn base_distribution(p: &PhiResult) -> ChipDistribution {
    let n = p.source.vertex_count();
    let mut chips = vec![p.m / 2; p.target.vertex_count()];
    for (v, c) in chips.iter_mut().enumerate().take(n) {
        *c = p.source.out_degree(v) * p.m;
    }
    ChipDistribution::from_raw(chips)
}

/// Firings on the transformed graph that mirror firing `v` on the digraph:
/// ψ(v), then ψ(e) for each out-arc instance `e` of `v` by increasing index.
pub fn lift_firing(p: &PhiResult, v: usize) -> Vec<usize> {
    let mut script = vec![p.psi_vertex(v)];
    script.extend(p.arc_instances.iter().enumerate().filter(|(_, &(tail, _))| tail == v).map(|(i, _)| p.psi_arc(i)));
    script
}

/// Result of replaying a digraph game on the transformed graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingReport {
    pub coupled_steps: usize,
    /// ỹ(ψ(v)) = x̃(v) + d⁺(v)·M after every step.
    pub vertex_equation_holds: bool,
    /// M/2 - k <= ỹ(ψ(e)) <= M/2 + k after step k.
    pub arc_equation_holds: bool,
    pub final_source: ChipDistribution,
    pub final_target: ChipDistribution,
}

/// Plays `order` on `D` from `x` and the lifted scripts on `φ(D)` from
/// `x + base_D`, checking legality on both sides and both coupling
/// equations after every step. At most `M/2` steps.
pub fn coupled_replay(p: &PhiResult, x: &ChipDistribution, order: &[usize]) -> Result<CouplingReport> {
    x.check_host(&p.source)?;
    if order.len() as i64 > p.m / 2 {
        return Err(Error::PreconditionUnmet("coupled replay is limited to M/2 steps"));
    }
    let n = p.source.vertex_count();
    let mut y = base_distribution(p).plus(&{
        let mut lifted = vec![0; p.target.vertex_count()];
        lifted[..n].copy_from_slice(x.as_slice());
        lifted
    })?;
    let mut xs = x.clone();
    let mut vertex_ok = true;
    let mut arc_ok = true;
    for (k, &v) in order.iter().enumerate() {
        xs = engine::fire(&p.source, &xs, v)?;
        for w in lift_firing(p, v) {
            y = engine::fire(&p.target, &y, w)?;
        }
        let k = k as i64 + 1;
        vertex_ok &= (0..n).all(|u| y[p.psi_vertex(u)] == xs[u] + p.source.out_degree(u) * p.m);
        arc_ok &= (0..p.arc_instances.len()).all(|i| {
            let c = y[p.psi_arc(i)];
            p.m / 2 - k <= c && c <= p.m / 2 + k
        });
    }
    Ok(CouplingReport {
        coupled_steps: order.len(),
        vertex_equation_holds: vertex_ok,
        arc_equation_holds: arc_ok,
        final_source: xs,
        final_target: y,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiLemmaReport {
    pub m: i64,
    /// dist_D(0), taken as minfas(D).
    pub lhs: i64,
    /// dist_{φ(D)}(base_D), found by chip-firing search.
    pub rhs: i64,
    pub equal: bool,
    /// |E(D)| - |V(D)| + 1.
    pub upper_bound: i64,
    pub base_terminates: bool,
    pub coupling: CouplingReport,
    /// The coupled period returned both games to their starting points.
    pub period_restored: bool,
    /// Distributions classified by the right-hand search.
    pub candidates: u64,
    /// Firings simulated by the right-hand search.
    pub firings: u64,
}

impl PhiLemmaReport {
    pub fn holds(&self) -> bool {
        self.equal
            && self.lhs <= self.upper_bound
            && self.base_terminates
            && self.coupling.vertex_equation_holds
            && self.coupling.arc_equation_holds
            && self.period_restored
    }
}

/// Checks dist_D(0) = dist_{φ(D)}(base_D) on an Eulerian digraph, computing
/// the left side as minfas(D) and the right side by chip-firing search on
/// the transformed graph. Also replays one full firing period of a minimum
/// non-terminating distribution through the coupling.
pub fn verify_phi_lemma(d: &Digraph) -> Result<PhiLemmaReport> {
    verify_phi_lemma_with_multiplier(d, phi_multiplier(d)?)
}

/// [`verify_phi_lemma`] on the transform built with multiplier `m`. The
/// identity is only guaranteed for the full multiplier.
pub fn verify_phi_lemma_with_multiplier(d: &Digraph, m: i64) -> Result<PhiLemmaReport> {
    if !d.is_eulerian() {
        return Err(Error::PreconditionUnmet("the lemma needs an Eulerian digraph"));
    }
    let p = phi_transform_with_multiplier(d, m)?;
    if p.target.vertex_count() > PHI_LEMMA_VERTEX_LIMIT {
        return Err(Error::TooLarge("transformed graph for the lemma check"));
    }
    let (lhs, fas) = feedback::minfas_exact(d)?;
    let base = base_distribution(&p);
    let base_terminates = engine::classify(&p.target, &base)?.is_terminating();
    let search = engine::distance_search(&p.target, &base)?;

    // a minimum non-terminating distribution, advanced until every vertex
    // has fired, then one period through the coupling
    let x = feedback::fas_distribution(d, &fas)?;
    let n = d.vertex_count();
    let mut cap = n as u64;
    let run = loop {
        let run = engine::run_legal_game(d, &x, &Policy::MinIndex, cap)?;
        if run.last_fired.iter().all(Option::is_some) {
            break run;
        }
        if run.end == engine::RunEnd::Terminated || cap > engine::step_bound(d)? {
            return Err(Error::PreconditionUnmet("minimum feedback distribution did not cycle"));
        }
        cap *= 2;
    };
    let order = engine::post_all_fired_order(d, &run.final_chips, &run.last_fired)?;
    let coupling = coupled_replay(&p, &run.final_chips, &order)?;
    let mut start = base.clone().into_vec();
    for (v, c) in start.iter_mut().enumerate().take(n) {
        *c += run.final_chips[v];
    }
    let period_restored =
        coupling.final_source == run.final_chips && coupling.final_target.as_slice() == start.as_slice();

    Ok(PhiLemmaReport {
        m: p.m,
        lhs,
        rhs: search.dist,
        equal: lhs == search.dist,
        upper_bound: d.arc_count() - n as i64 + 1,
        base_terminates,
        coupling,
        period_restored,
        candidates: search.candidates,
        firings: search.firings,
    })
}

/// Splits every edge instance with a new vertex. Vertex `n + i` subdivides
/// edge instance `i` (canonical order, parallel edges repeated).
pub fn subdivide_graph(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let mut edges = Vec::new();
    let mut next = n;
    for &(u, v, m) in g.edges() {
        for _ in 0..m {
            edges.push((u, next, 1));
            edges.push((next, v, 1));
            next += 1;
        }
    }
    Graph::new(next, &edges).expect("subdivision of a connected graph is connected")
}

/// Subdivides `g` and extends `x` by one chip on every new vertex.
pub fn subdivide(g: &Graph, x: &ChipDistribution) -> Result<(Graph, ChipDistribution)> {
    x.check_host(g)?;
    let sub = subdivide_graph(g);
    let mut chips = x.as_slice().to_vec();
    chips.resize(sub.vertex_count(), 1);
    Ok((sub, ChipDistribution::new(chips)?))
}

/// Subdivides `g` and extends `f` by zero on every new vertex.
pub fn divisor_subdivide(g: &Graph, f: &Divisor) -> Result<(Graph, Divisor)> {
    if f.len() != g.vertex_count() {
        return Err(Error::HostMismatch);
    }
    let sub = subdivide_graph(g);
    let mut values = f.values().to_vec();
    values.resize(sub.vertex_count(), 0);
    Ok((sub, Divisor::new(values)))
}

/// (dist_G(x), dist_{G'}(x')) for the subdivision.
pub fn subdivision_dist_pair(g: &Graph, x: &ChipDistribution) -> Result<(i64, i64)> {
    let (sub, lifted) = subdivide(g, x)?;
    Ok((engine::distance_to_nonterminating(g, x)?, engine::distance_to_nonterminating(&sub, &lifted)?))
}

/// (rank_G(f), rank_{G'}(f')) for the subdivision.
pub fn subdivision_rank_pair(g: &Graph, f: &Divisor) -> Result<(i64, i64)> {
    let (sub, lifted) = divisor_subdivide(g, f)?;
    Ok((divisor::rank(g, f)?, divisor::rank(&sub, &lifted)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2() -> Digraph {
        Digraph::new(2, &[(0, 1, 1), (1, 0, 1)]).unwrap()
    }
    fn c3() -> Digraph {
        Digraph::new(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap()
    }
    fn d4() -> Digraph {
        Digraph::new(4, &[(0, 3, 1), (2, 0, 1), (1, 2, 1), (3, 1, 1), (3, 2, 1), (2, 3, 1)]).unwrap()
    }
    fn k3() -> Graph {
        Graph::new(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap()
    }

    #[test]
    fn phi_sizes() {
        let p = phi_transform(&d2()).unwrap();
        assert_eq!(p.m(), 64);
        assert_eq!(p.target().vertex_count(), 4);
        assert_eq!(p.target().degrees(), &[65, 65, 65, 65]);
        assert_eq!(p.target().edge_count(), 130);
        assert!(p.degree_identities_hold() && p.size_bound_holds());

        let p = phi_transform(&c3()).unwrap();
        assert_eq!(p.m(), 216);
        assert_eq!(p.target().vertex_count(), 6);
        assert_eq!(p.target().edge_count(), 651);

        assert_eq!(phi_transform(&d4()).unwrap().m(), 1536);
        let doubled = Digraph::new(2, &[(0, 1, 2), (1, 0, 2)]).unwrap();
        let p = phi_transform(&doubled).unwrap();
        assert_eq!(p.target().vertex_count(), 6);
        assert!(p.degree_identities_hold());
    }

    #[test]
    fn base_and_lift() {
        let p = phi_transform(&d2()).unwrap();
        assert_eq!(base_distribution(&p).as_slice(), &[64, 64, 32, 32]);
        assert!(engine::active_vertices(p.target(), &base_distribution(&p)).is_empty());
        assert_eq!(lift_firing(&p, 0), vec![0, 2]);
        let p = phi_transform(&c3()).unwrap();
        assert_eq!(base_distribution(&p).as_slice(), &[216, 216, 216, 108, 108, 108]);
        assert_eq!(lift_firing(&p, 0), vec![0, 3]);
        assert_eq!(p.preimage(4), Preimage::Arc(1));
    }

    #[test]
    fn coupled_d2() {
        let p = phi_transform(&d2()).unwrap();
        let x = ChipDistribution::new(vec![1, 0]).unwrap();
        let report = coupled_replay(&p, &x, &[0, 1]).unwrap();
        assert!(report.vertex_equation_holds && report.arc_equation_holds);
        assert_eq!(report.final_source, x);
        assert_eq!(report.final_target.as_slice(), &[65, 64, 32, 32]);
    }

    #[test]
    fn lemma_small_cases() {
        for d in [d2(), c3()] {
            let r = verify_phi_lemma(&d).unwrap();
            assert_eq!((r.lhs, r.rhs), (1, 1));
            assert!(r.holds(), "{r:?}");
        }
        let path = Digraph::new(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert!(matches!(verify_phi_lemma(&path), Err(Error::PreconditionUnmet(_))));
    }

    #[test]
    fn subdivisions() {
        let (g, x) = subdivide(&k3(), &ChipDistribution::zero(3)).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 6);
        assert!(g.is_simple() && g.degrees().iter().all(|&d| d == 2));
        assert_eq!(x.as_slice(), &[0, 0, 0, 1, 1, 1]);
        assert_eq!(subdivision_dist_pair(&k3(), &ChipDistribution::zero(3)), Ok((3, 3)));

        let double = Graph::new(2, &[(0, 1, 2)]).unwrap();
        let (g, x) = subdivide(&double, &ChipDistribution::zero(2)).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(x.as_slice(), &[0, 0, 1, 1]);
        assert_eq!(subdivision_dist_pair(&double, &ChipDistribution::zero(2)), Ok((2, 2)));

        let ones = ChipDistribution::new(vec![1, 1, 1]).unwrap();
        assert_eq!(subdivision_dist_pair(&k3(), &ones), Ok((1, 1)));

        for (f, r) in [([0, 0, 0], 0), ([1, 1, 1], 2), ([-1, 0, 1], -1)] {
            assert_eq!(subdivision_rank_pair(&k3(), &Divisor::new(f.to_vec())), Ok((r, r)));
        }
    }
}
