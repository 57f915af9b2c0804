//! Host multigraphs.
//!
//! Vertices are dense indices `0..n`. Edge multiplicities are stored
//! explicitly rather than expanded, so hosts with very large parallel
//! classes stay compact.

use alloc::vec;
use alloc::vec::Vec;

use crate::chips::FiringHost;
use crate::error::{Error, Result};

/// Connected undirected multigraph without loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Canonical edge list: `u < v`, sorted, one entry per vertex pair.
    edges: Vec<(usize, usize, i64)>,
    adjacency: Vec<Vec<(usize, i64)>>,
    degree: Vec<i64>,
    edge_count: i64,
}

/// Weakly connected directed multigraph without loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    /// Canonical arc list: sorted, one entry per ordered pair.
    arcs: Vec<(usize, usize, i64)>,
    out_adjacency: Vec<Vec<(usize, i64)>>,
    in_adjacency: Vec<Vec<(usize, i64)>>,
    out_degree: Vec<i64>,
    in_degree: Vec<i64>,
    arc_count: i64,
    max_degree: i64,
    eulerian: bool,
    simple: bool,
}

fn canonical_pairs(n: usize, pairs: &[(usize, usize, i64)], undirected: bool) -> Result<Vec<(usize, usize, i64)>> {
    if n == 0 {
        return Err(Error::EmptyVertexSet);
    }
    let mut merged: Vec<(usize, usize, i64)> = Vec::with_capacity(pairs.len());
    for &(u, v, m) in pairs {
        for w in [u, v] {
            if w >= n {
                return Err(Error::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(Error::LoopEdge(u));
        }
        if m < 1 {
            return Err(Error::InvalidMultiplicity(u, v, m));
        }
        let (a, b) = if undirected && v < u { (v, u) } else { (u, v) };
        merged.push((a, b, m));
    }
    merged.sort_unstable();
    let mut out: Vec<(usize, usize, i64)> = Vec::with_capacity(merged.len());
    for (a, b, m) in merged {
        match out.last_mut() {
            Some(last) if last.0 == a && last.1 == b => {
                last.2 = last.2.checked_add(m).ok_or(Error::Overflow("edge multiplicity"))?;
            }
            _ => out.push((a, b, m)),
        }
    }
    Ok(out)
}

fn connected(n: usize, pairs: &[(usize, usize, i64)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for &(u, v, _) in pairs {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components == 1
}

fn total(pairs: &[(usize, usize, i64)]) -> Result<i64> {
    pairs.iter().try_fold(0i64, |acc, &(_, _, m)| acc.checked_add(m)).ok_or(Error::Overflow("edge count"))
}

impl Graph {
    /// Builds a graph from `(u, v, multiplicity)` triples. Repeated pairs are
    /// merged, and `(u, v)` and `(v, u)` denote the same pair.
    pub fn new(n: usize, edges: &[(usize, usize, i64)]) -> Result<Self> {
        let edges = canonical_pairs(n, edges, true)?;
        if !connected(n, &edges) {
            return Err(Error::Disconnected);
        }
        let edge_count = total(&edges)?;
        edge_count.checked_mul(2).ok_or(Error::Overflow("degree sum"))?;
        let mut adjacency = vec![Vec::new(); n];
        let mut degree = vec![0i64; n];
        for &(u, v, m) in &edges {
            adjacency[u].push((v, m));
            adjacency[v].push((u, m));
            degree[u] += m;
            degree[v] += m;
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adjacency, degree, edge_count })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    /// `(neighbour, multiplicity)` pairs sorted by neighbour.
    pub fn neighbors(&self, v: usize) -> &[(usize, i64)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> i64 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degree
    }

    /// Number of parallel edges between `u` and `v`.
    pub fn multiplicity(&self, u: usize, v: usize) -> i64 {
        let list = &self.adjacency[u];
        match list.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => list[i].1,
            Err(_) => 0,
        }
    }

    /// |E|, counting parallel edges.
    pub fn edge_count(&self) -> i64 {
        self.edge_count
    }

    /// Cycle-space dimension |E| - |V| + 1.
    pub fn genus(&self) -> i64 {
        self.edge_count - self.n as i64 + 1
    }

    pub fn max_degree(&self) -> i64 {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|&(_, _, m)| m == 1)
    }

    /// L(i,i) = -d(v_i), L(i,j) = d(v_i, v_j).
    pub fn laplacian(&self) -> Vec<Vec<i64>> {
        let mut l = vec![vec![0i64; self.n]; self.n];
        for (v, row) in l.iter_mut().enumerate() {
            row[v] = -self.degree[v];
            for &(u, m) in &self.adjacency[v] {
                row[u] = m;
            }
        }
        l
    }

    /// Replaces every edge by a pair of opposite arcs.
    pub fn bidirect(&self) -> Digraph {
        let arcs: Vec<_> = self.edges.iter().flat_map(|&(u, v, m)| [(u, v, m), (v, u, m)]).collect();
        Digraph::new(self.n, &arcs).expect("bidirected connected graph is a valid digraph")
    }
}

impl Digraph {
    /// Builds a digraph from `(tail, head, multiplicity)` triples; repeated
    /// ordered pairs are merged.
    pub fn new(n: usize, arcs: &[(usize, usize, i64)]) -> Result<Self> {
        let arcs = canonical_pairs(n, arcs, false)?;
        if !connected(n, &arcs) {
            return Err(Error::Disconnected);
        }
        let arc_count = total(&arcs)?;
        let mut out_adjacency = vec![Vec::new(); n];
        let mut in_adjacency = vec![Vec::new(); n];
        let mut out_degree = vec![0i64; n];
        let mut in_degree = vec![0i64; n];
        for &(u, v, m) in &arcs {
            out_adjacency[u].push((v, m));
            in_adjacency[v].push((u, m));
            out_degree[u] += m;
            in_degree[v] += m;
        }
        for list in &mut in_adjacency {
            list.sort_unstable();
        }
        let max_degree = out_degree.iter().chain(in_degree.iter()).copied().max().unwrap_or(0);
        let eulerian = out_degree == in_degree;
        let simple = arcs.iter().all(|&(_, _, m)| m == 1);
        Ok(Digraph {
            n,
            arcs,
            out_adjacency,
            in_adjacency,
            out_degree,
            in_degree,
            arc_count,
            max_degree,
            eulerian,
            simple,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize, i64)] {
        &self.arcs
    }

    /// Every arc instance, parallel arcs repeated, in canonical order.
    pub fn arc_instances(&self) -> Vec<(usize, usize)> {
        self.arcs.iter().flat_map(|&(u, v, m)| core::iter::repeat_n((u, v), m as usize)).collect()
    }

    pub fn out_neighbors(&self, v: usize) -> &[(usize, i64)] {
        &self.out_adjacency[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[(usize, i64)] {
        &self.in_adjacency[v]
    }

    pub fn out_degree(&self, v: usize) -> i64 {
        self.out_degree[v]
    }

    pub fn in_degree(&self, v: usize) -> i64 {
        self.in_degree[v]
    }

    /// Number of arcs from `u` to `v`.
    pub fn multiplicity(&self, u: usize, v: usize) -> i64 {
        let list = &self.out_adjacency[u];
        match list.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => list[i].1,
            Err(_) => 0,
        }
    }

    pub fn arc_count(&self) -> i64 {
        self.arc_count
    }

    /// Maximum over all vertices of in- and out-degree.
    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn is_eulerian(&self) -> bool {
        self.eulerian
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    /// L(i,i) = -d⁺(v_i), L(i,j) = number of arcs from v_j to v_i. Column j
    /// is the effect of firing v_j.
    pub fn laplacian(&self) -> Vec<Vec<i64>> {
        let mut l = vec![vec![0i64; self.n]; self.n];
        for &(u, v, m) in &self.arcs {
            l[v][u] = m;
        }
        for (v, row) in l.iter_mut().enumerate() {
            row[v] = -self.out_degree[v];
        }
        l
    }
}

impl FiringHost for Graph {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn threshold(&self, v: usize) -> i64 {
        self.degree[v]
    }
    fn targets(&self, v: usize) -> &[(usize, i64)] {
        &self.adjacency[v]
    }
    fn directed_arc_count(&self) -> i64 {
        2 * self.edge_count
    }
    fn directed_max_degree(&self) -> i64 {
        self.max_degree()
    }
    fn is_eulerian(&self) -> bool {
        true
    }
}

impl FiringHost for Digraph {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn threshold(&self, v: usize) -> i64 {
        self.out_degree[v]
    }
    fn targets(&self, v: usize) -> &[(usize, i64)] {
        &self.out_adjacency[v]
    }
    fn directed_arc_count(&self) -> i64 {
        self.arc_count
    }
    fn directed_max_degree(&self) -> i64 {
        self.max_degree
    }
    fn is_eulerian(&self) -> bool {
        self.eulerian
    }
}
