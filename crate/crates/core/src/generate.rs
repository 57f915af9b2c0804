//! Seeded instance generators and small exhaustive universes.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

const MAX_ATTEMPTS: usize = 10_000;

/// Union of `cycles` random directed cycles, each on a random set of
/// between 2 and `max_len` distinct vertices. Redrawn until every vertex is
/// covered and the result is weakly connected. Always Eulerian.
pub fn random_eulerian_digraph(n: usize, cycles: usize, max_len: usize, seed: u64) -> Result<Digraph> {
    if n < 2 || cycles == 0 || max_len < 2 {
        return Err(Error::PreconditionUnmet("need n >= 2, cycles >= 1, max_len >= 2"));
    }
    let max_len = max_len.min(n);
    if cycles * max_len < n {
        return Err(Error::GenerationFailed(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vertices: Vec<usize> = (0..n).collect();
    for _ in 0..MAX_ATTEMPTS {
        let mut arcs = Vec::new();
        for _ in 0..cycles {
            let len = rng.gen_range(2..=max_len);
            vertices.shuffle(&mut rng);
            let cycle = &vertices[..len];
            for i in 0..len {
                arcs.push((cycle[i], cycle[(i + 1) % len], 1));
            }
        }
        match Digraph::new(n, &arcs) {
            Ok(d) => return Ok(d),
            Err(Error::Disconnected) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenerationFailed(MAX_ATTEMPTS))
}

/// Connected multigraph on `n` vertices with every pair's multiplicity drawn
/// uniformly from `0..=max_mult`; redrawn until connected.
pub fn random_graph(n: usize, max_mult: i64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyVertexSet);
    }
    if n > 1 && max_mult < 1 {
        return Err(Error::PreconditionUnmet("max_mult must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let m = rng.gen_range(0..=max_mult);
                if m > 0 {
                    edges.push((u, v, m));
                }
            }
        }
        match Graph::new(n, &edges) {
            Ok(g) => return Ok(g),
            Err(Error::Disconnected) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenerationFailed(MAX_ATTEMPTS))
}

/// Every connected labelled multigraph on `n` vertices with multiplicities
/// at most `max_mult`.
pub fn connected_multigraphs(n: usize, max_mult: i64) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut mult = vec![0i64; pairs.len()];
    let mut out = Vec::new();
    loop {
        let edges: Vec<_> = pairs.iter().zip(&mult).filter(|(_, &m)| m > 0).map(|(&(u, v), &m)| (u, v, m)).collect();
        if let Ok(g) = Graph::new(n, &edges) {
            out.push(g);
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == mult.len() {
                return out;
            }
            mult[i] += 1;
            if mult[i] <= max_mult {
                break;
            }
            mult[i] = 0;
            i += 1;
        }
    }
}
