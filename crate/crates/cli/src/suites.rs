//! Seeded batch checks over generated instances.

use chipfire_core::divisor::{self, Divisor};
use chipfire_core::engine;
use chipfire_core::feedback;
use chipfire_core::generate::{random_eulerian_digraph, random_graph};
use chipfire_core::oracle::{self, DEFAULT_STATE_LIMIT};
use chipfire_core::orientation::{self, SearchMode};
use chipfire_core::{ChipDistribution, Digraph, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::commands::Report;
use crate::error::{CliError, Result};

/// Largest vertex count the suites accept.
pub const N_MAX_LIMIT: usize = 6;

fn check_n_max(n_max: usize) -> Result<()> {
    if !(2..=N_MAX_LIMIT).contains(&n_max) {
        return Err(CliError::Usage(format!("--n-max must be between 2 and {N_MAX_LIMIT}")));
    }
    Ok(())
}

fn sample_graph(rng: &mut ChaCha8Rng, n_max: usize) -> Result<Graph> {
    let n = rng.gen_range(2..=n_max);
    Ok(random_graph(n, 2, rng.gen())?)
}

fn sample_eulerian(rng: &mut ChaCha8Rng, n_max: usize) -> Result<Digraph> {
    let n = rng.gen_range(2..=n_max);
    Ok(random_eulerian_digraph(n, rng.gen_range(1..=3), n, rng.gen())?)
}

fn sample_divisor(rng: &mut ChaCha8Rng, g: &Graph, lo: i64, hi: impl Fn(i64) -> i64) -> Divisor {
    Divisor::new((0..g.vertex_count()).map(|v| rng.gen_range(lo..=hi(g.degree(v)))).collect())
}

fn sample_chips(rng: &mut ChaCha8Rng, bounds: impl Iterator<Item = i64>) -> ChipDistribution {
    ChipDistribution::new(bounds.map(|b| rng.gen_range(0..=b)).collect()).expect("nonnegative")
}

pub fn riemann_roch(n_max: usize, samples: usize, seed: u64) -> Result<Report> {
    check_n_max(n_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..samples {
        let g = sample_graph(&mut rng, n_max)?;
        let f = sample_divisor(&mut rng, &g, -3, |_| 3);
        if divisor::riemann_roch_residual(&g, &f)? != 0 {
            failures += 1;
        }
    }
    Ok(Report::checked(json!({"checked": samples, "failures": failures}), failures == 0))
}

struct Row {
    name: &'static str,
    checked: usize,
    failures: usize,
}

impl Row {
    fn new(name: &'static str) -> Self {
        Row { name, checked: 0, failures: 0 }
    }

    fn record(&mut self, agree: bool) {
        self.checked += 1;
        if !agree {
            self.failures += 1;
        }
    }
}

/// Every fast path against its oracle or identity, `samples` instances each.
pub fn oracle_suite(n_max: usize, samples: usize, seed: u64) -> Result<Report> {
    check_n_max(n_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classify = Row::new("classify_vs_cycle_detection");
    let mut dist = Row::new("dist_vs_breadth_first");
    let mut rank = Row::new("rank_vs_definition");
    let mut duality = Row::new("rank_dist_duality");
    let mut minfas = Row::new("dist_zero_vs_minfas");
    let mut acyclic = Row::new("acyclic_orientation_formula");
    let mut riemann_roch = Row::new("riemann_roch");

    for _ in 0..samples {
        let g = sample_graph(&mut rng, n_max)?;
        let d = sample_eulerian(&mut rng, n_max)?;

        let x = sample_chips(&mut rng, (0..g.vertex_count()).map(|v| g.degree(v)));
        let fast = engine::classify(&g, &x)?.is_terminating();
        let slow = oracle::classify_by_cycle_detection(&g, &x, DEFAULT_STATE_LIMIT)?.is_terminating();
        classify.record(fast == slow);
        let y = sample_chips(&mut rng, (0..d.vertex_count()).map(|v| d.out_degree(v)));
        let fast = engine::classify(&d, &y)?.is_terminating();
        let slow = oracle::classify_by_cycle_detection(&d, &y, DEFAULT_STATE_LIMIT)?.is_terminating();
        classify.record(fast == slow);

        let fast = engine::distance_to_nonterminating(&d, &y)?;
        dist.record(fast == oracle::brute_force_dist(&d, &y, DEFAULT_STATE_LIMIT)?);

        let f = sample_divisor(&mut rng, &g, -2, |d| d - 1);
        let r = divisor::rank(&g, &f)?;
        rank.record(r == oracle::brute_force_rank(&g, &f)?);
        let x = divisor::dual_pair(&g, &f)?;
        duality.record(r == engine::distance_to_nonterminating(&g, &x)? - 1);

        let zero = ChipDistribution::zero(d.vertex_count());
        minfas.record(feedback::minfas_exact(&d)?.0 == engine::distance_to_nonterminating(&d, &zero)?);

        let x = sample_chips(&mut rng, (0..g.vertex_count()).map(|v| g.degree(v)));
        let greedy = orientation::under_acyclic_orientation(&g, &x, SearchMode::Greedy)?;
        let exhaustive = orientation::under_acyclic_orientation(&g, &x, SearchMode::Exhaustive)?;
        let formula_holds = match greedy {
            Some(_) => engine::distance_to_nonterminating(&g, &x)? == g.edge_count() - x.total(),
            None => true,
        };
        acyclic.record(greedy.is_some() == exhaustive.is_some() && formula_holds);

        let f = sample_divisor(&mut rng, &g, -3, |_| 3);
        riemann_roch.record(divisor::riemann_roch_residual(&g, &f)? == 0);
    }

    let rows = [classify, dist, rank, duality, minfas, acyclic, riemann_roch];
    let pass = rows.iter().all(|r| r.failures == 0);
    let theorems: Vec<_> = rows
        .iter()
        .map(|r| json!({"name": r.name, "checked": r.checked, "failures": r.failures, "pass": r.failures == 0}))
        .collect();
    let body = json!({"n_max": n_max, "samples": samples, "seed": seed, "theorems": theorems, "pass": pass});
    Ok(Report::checked(body, pass))
}
