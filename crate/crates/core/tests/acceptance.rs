//! Acceptance suite. Prints one line per criterion and exits nonzero if
//! any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use chipfire_core::divisor::{self, Divisor};
use chipfire_core::engine::{self, GameOutcome};
use chipfire_core::enumerate::Placements;
use chipfire_core::feedback;
use chipfire_core::generate::{connected_multigraphs, random_eulerian_digraph, random_graph};
use chipfire_core::oracle::{self, DivisorClassOracle, DEFAULT_STATE_LIMIT};
use chipfire_core::orientation::{self, SearchMode};
use chipfire_core::reductions;
use chipfire_core::{ChipDistribution, Digraph, FiringHost, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    checked: usize,
    failures: Vec<String>,
    note: String,
}

impl Outcome {
    fn new(checked: usize, failures: Vec<String>) -> Self {
        Outcome { checked, failures, note: String::new() }
    }
}

fn small_graphs() -> Vec<Graph> {
    (2..=4).flat_map(|n| connected_multigraphs(n, 2)).collect()
}

fn five_vertex_graphs() -> Vec<Graph> {
    (0..100).map(|s| random_graph(5, 2, 5_000 + s).unwrap()).collect()
}

fn d4() -> Digraph {
    Digraph::new(4, &[(0, 3, 1), (2, 0, 1), (1, 2, 1), (3, 1, 1), (3, 2, 1), (2, 3, 1)]).unwrap()
}

fn eulerian_suite() -> Vec<Digraph> {
    let mut seen = BTreeSet::new();
    let mut out = vec![d4()];
    seen.insert((4, d4().arcs().to_vec()));
    let mut seed = 0u64;
    while out.len() < 201 {
        seed += 1;
        let n = 2 + (seed % 4) as usize;
        let cycles = 1 + (seed / 4 % 4) as usize;
        let Ok(d) = random_eulerian_digraph(n, cycles, n, seed) else { continue };
        if d.arc_count() <= 10 && seen.insert((n, d.arcs().to_vec())) {
            out.push(d);
        }
    }
    out
}

fn all_upto<H: FiringHost>(host: &H, max_total: i64) -> impl Iterator<Item = Vec<i64>> {
    let n = host.vertex_count();
    (0..=max_total).flat_map(move |k| Placements::new(n, k))
}

fn random_divisor(g: &Graph, rng: &mut ChaCha8Rng, lo: impl Fn(i64) -> i64, hi: impl Fn(i64) -> i64) -> Divisor {
    Divisor::new((0..g.vertex_count()).map(|v| rng.gen_range(lo(g.degree(v))..=hi(g.degree(v)))).collect())
}

fn chips(v: &[i64]) -> ChipDistribution {
    ChipDistribution::new(v.to_vec()).unwrap()
}

fn criterion_1() -> Outcome {
    let graphs: Vec<Graph> = small_graphs().into_iter().chain(five_vertex_graphs()).collect();
    let failures = graphs
        .par_iter()
        .filter_map(|g| {
            let dist = engine::distance_to_nonterminating(g, &ChipDistribution::zero(g.vertex_count()));
            (dist != Ok(g.edge_count())).then(|| format!("{:?}: dist {dist:?}, |E| {}", g.edges(), g.edge_count()))
        })
        .collect();
    Outcome::new(graphs.len(), failures)
}

fn criterion_2() -> Outcome {
    let suite = eulerian_suite();
    let failures = suite
        .par_iter()
        .filter_map(|d| {
            let dist = engine::distance_to_nonterminating(d, &ChipDistribution::zero(d.vertex_count()));
            let minfas = feedback::minfas_exact(d).map(|(size, _)| size);
            (dist.is_err() || dist != minfas).then(|| format!("{:?}: dist {dist:?}, minfas {minfas:?}", d.arcs()))
        })
        .collect();
    let d4_dist = engine::distance_to_nonterminating(&d4(), &ChipDistribution::zero(4));
    let mut out = Outcome::new(suite.len(), failures);
    if d4_dist != Ok(2) {
        out.failures.push(format!("figure digraph: dist {d4_dist:?}"));
    }
    out
}

fn criterion_3() -> Outcome {
    let suite = eulerian_suite();
    let failures = suite
        .par_iter()
        .filter_map(|d| {
            let n = d.vertex_count();
            let check = || -> Result<(), String> {
                let (size, mut fas) = feedback::minfas_exact(d).map_err(|e| e.to_string())?;
                let mut x = feedback::fas_distribution(d, &fas).map_err(|e| e.to_string())?;
                if engine::classify(d, &x).map_err(|e| e.to_string())?.is_terminating() {
                    return Err("fas distribution terminates".into());
                }
                for i in 0..3 * n {
                    let (next, y, _) = feedback::rotate_fas(d, &fas, &x).map_err(|e| format!("rotation {i}: {e}"))?;
                    let indeg = next.in_degrees(n);
                    if next.size() != size || (0..n).any(|v| y[v] < indeg[v]) {
                        return Err(format!("rotation {i} broke size or dominance"));
                    }
                    fas = next;
                    x = y;
                }
                Ok(())
            };
            check().err().map(|e| format!("{:?}: {e}", d.arcs()))
        })
        .collect();
    Outcome::new(suite.len(), failures)
}

fn duality_pairs() -> Vec<(Graph, Divisor)> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut pairs = Vec::new();
    for g in small_graphs() {
        for _ in 0..2 {
            let f = random_divisor(&g, &mut rng, |_| -2, |d| d - 1);
            pairs.push((g.clone(), f));
        }
    }
    pairs
}

fn criterion_4() -> Outcome {
    let pairs = duality_pairs();
    let failures = pairs
        .par_iter()
        .filter_map(|(g, f)| {
            let rank = divisor::rank(g, f);
            let dist = divisor::dual_pair(g, f).and_then(|x| engine::distance_to_nonterminating(g, &x));
            match (rank, dist) {
                (Ok(r), Ok(d)) if r == d - 1 => None,
                (r, d) => Some(format!("{:?} f={:?}: rank {r:?}, dist {d:?}", g.edges(), f.values())),
            }
        })
        .collect();
    Outcome::new(pairs.len(), failures)
}

fn criterion_5() -> Outcome {
    let graphs = small_graphs();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples: Vec<(Graph, Divisor)> = (0..400)
        .map(|_| {
            let g = graphs[rng.gen_range(0..graphs.len())].clone();
            let f = random_divisor(&g, &mut rng, |_| -3, |_| 3);
            (g, f)
        })
        .collect();
    let failures = samples
        .par_iter()
        .filter_map(|(g, f)| {
            let residual = divisor::riemann_roch_residual(g, f);
            (residual != Ok(0)).then(|| format!("{:?} f={:?}: residual {residual:?}", g.edges(), f.values()))
        })
        .collect();
    Outcome::new(samples.len(), failures)
}

fn criterion_6() -> Outcome {
    // every multigraph up to 4 vertices, every simple graph on 5
    let mut graphs: Vec<Graph> = small_graphs();
    graphs.extend(connected_multigraphs(5, 1));
    let results: Vec<(usize, Vec<String>)> = graphs
        .par_iter()
        .map(|g| {
            let n = g.vertex_count();
            let (mut recognized, mut failures) = (0, Vec::new());
            let bounds: Vec<i64> = (0..n).map(|v| g.degree(v)).collect();
            let mut x = vec![0i64; n];
            loop {
                let dist = chips(&x);
                let greedy = orientation::under_acyclic_orientation(g, &dist, SearchMode::Greedy).unwrap();
                let exhaustive = orientation::under_acyclic_orientation(g, &dist, SearchMode::Exhaustive).unwrap();
                if greedy.is_some() != exhaustive.is_some() {
                    failures.push(format!("{:?} x={x:?}: recognizers disagree", g.edges()));
                }
                if greedy.is_some() {
                    recognized += 1;
                    let formula = orientation::dist_under_acyclic(g, &dist);
                    let search = engine::distance_to_nonterminating(g, &dist);
                    if formula.is_err() || formula != search {
                        failures.push(format!("{:?} x={x:?}: formula {formula:?}, search {search:?}", g.edges()));
                    }
                }
                // mixed-radix increment over 0..=d(v)
                let mut i = 0;
                while i < n && x[i] == bounds[i] {
                    x[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                x[i] += 1;
            }
            (recognized, failures)
        })
        .collect();
    let recognized: usize = results.iter().map(|r| r.0).sum();
    let failures = results.into_iter().flat_map(|r| r.1).collect();
    let mut out = Outcome::new(graphs.len(), failures);
    out.note = format!("{recognized} recognized distributions");
    out
}

fn criterion_7() -> Outcome {
    let d2 = Digraph::new(2, &[(0, 1, 1), (1, 0, 1)]).unwrap();
    let c3 = Digraph::new(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (name, d, m) in [("D2", d2, 64), ("C3", c3, 216)] {
        match reductions::verify_phi_lemma(&d) {
            Ok(r) => {
                let direct = engine::distance_to_nonterminating(&d, &ChipDistribution::zero(d.vertex_count()));
                if !r.holds() || r.m != m || r.lhs != 1 || r.rhs != 1 || direct != Ok(1) {
                    failures.push(format!("{name}: {r:?}, direct dist {direct:?}"));
                }
                notes.push(format!(
                    "{name}: M={} lhs={} rhs={} coupled steps={}",
                    r.m, r.lhs, r.rhs, r.coupling.coupled_steps
                ));
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let mut out = Outcome::new(2, failures);
    out.note = notes.join("; ");
    out
}

fn criterion_8() -> Outcome {
    let graphs = small_graphs();
    let results: Vec<(usize, Vec<String>)> = graphs
        .par_iter()
        .enumerate()
        .map(|(index, g)| {
            let n = g.vertex_count();
            let mut rng = ChaCha8Rng::seed_from_u64(800 + index as u64);
            let mut failures = Vec::new();
            let mut pairs = 0;
            // keep the searches on the subdivided graph small: dist <= 3, rank <= 2
            let xs = (0..50)
                .map(|_| chips(&(0..n).map(|v| rng.gen_range(0..=g.degree(v))).collect::<Vec<_>>()))
                .filter(|x| engine::distance_to_nonterminating(g, x).unwrap() <= 3)
                .take(3)
                .collect::<Vec<_>>();
            for x in xs {
                match reductions::subdivision_dist_pair(g, &x) {
                    Ok((a, b)) if a == b => {}
                    other => failures.push(format!("{:?} x={:?}: {other:?}", g.edges(), x.as_slice())),
                }
                pairs += 1;
            }
            let fs = (0..50)
                .map(|_| random_divisor(g, &mut rng, |_| -2, |d| d))
                .filter(|f| divisor::rank(g, f).unwrap() <= 2)
                .take(3)
                .collect::<Vec<_>>();
            for f in fs {
                match reductions::subdivision_rank_pair(g, &f) {
                    Ok((a, b)) if a == b => {}
                    other => failures.push(format!("{:?} f={:?}: {other:?}", g.edges(), f.values())),
                }
                pairs += 1;
            }
            (pairs, failures)
        })
        .collect();
    let pairs: usize = results.iter().map(|r| r.0).sum();
    Outcome::new(pairs, results.into_iter().flat_map(|r| r.1).collect())
}

fn criterion_9() -> Outcome {
    let results: Vec<Option<String>> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(900 + i);
            let n = 3 + (i % 3) as usize;
            let check = |host: &dyn Fn(&[i64]) -> Option<String>, len: usize, bound: i64, rng: &mut ChaCha8Rng| {
                // draw until terminating; the sum bound keeps most draws terminating
                loop {
                    let x: Vec<i64> = (0..len).map(|_| rng.gen_range(0..=bound)).collect();
                    if let Some(r) = host(&x) {
                        return if r.is_empty() { None } else { Some(r) };
                    }
                }
            };
            if i % 2 == 0 {
                let g = random_graph(n, 2, 9_000 + i).unwrap();
                let run = |x: &[i64]| abelian(&g, x, 20, i);
                check(&run, n, g.max_degree(), &mut rng)
            } else {
                let d = random_eulerian_digraph(n, 3, n, 9_000 + i).unwrap();
                let run = |x: &[i64]| abelian(&d, x, 20, i);
                check(&run, n, d.max_degree(), &mut rng)
            }
        })
        .collect();
    Outcome::new(100, results.into_iter().flatten().collect())
}

/// None if `x` does not terminate, Some("") if all trials agree.
fn abelian<H: FiringHost>(host: &H, x: &[i64], trials: usize, seed: u64) -> Option<String> {
    let x = chips(x);
    if !engine::classify(host, &x).unwrap().is_terminating() {
        return None;
    }
    match engine::verify_abelian(host, &x, trials, seed) {
        Ok(report) if report.trials == trials => Some(String::new()),
        other => Some(format!("x={:?}: {other:?}", x.as_slice())),
    }
}

/// Reduction steps allowed per verifier call: n·|E|·(1 + Σ|f - g|).
fn witness_step_bound(g: &Graph, rest: &Divisor) -> u64 {
    let weight: i64 = rest.values().iter().map(|v| v.abs()).sum();
    (g.vertex_count() as u64) * (g.edge_count() as u64) * (1 + weight as u64)
}

fn criterion_10() -> Outcome {
    let k3 = Graph::new(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
    let f = Divisor::new(vec![1, 1, 1]);
    let mut failures = Vec::new();
    for (g, k, expected) in [(vec![2, 1, 0], 2, true), (vec![0, 0, 3], 2, false), (vec![2, 1, 1], 2, false)] {
        let got = divisor::verify_rank_upper_witness(&k3, &f, k, &Divisor::new(g.clone())).map(|c| c.accepted);
        if got != Ok(expected) {
            failures.push(format!("K3 g={g:?}: {got:?}"));
        }
    }

    let pairs = duality_pairs();
    let results: Vec<(u64, f64, Vec<String>)> = pairs
        .par_iter()
        .map(|(g, f)| {
            let n = g.vertex_count();
            let rank = divisor::rank(g, f).unwrap();
            let mut failures = Vec::new();
            let (mut max_steps, mut max_ratio) = (0u64, 0f64);
            // accepted witnesses exist for k = rank and never for k = rank - 1
            for k in [rank - 1, rank] {
                let mut accepted_any = false;
                for degree in 0..=k + 1 {
                    for e in Placements::new(n, degree) {
                        let e = Divisor::new(e);
                        let check = divisor::verify_rank_upper_witness(g, f, k, &e).unwrap();
                        let rest = f.minus(e.values()).unwrap();
                        max_steps = max_steps.max(check.reduction_steps);
                        max_ratio = max_ratio.max(check.reduction_steps as f64 / witness_step_bound(g, &rest) as f64);
                        if check.reduction_steps > witness_step_bound(g, &rest) {
                            failures.push(format!(
                                "{:?} f={:?} g={:?}: {} steps",
                                g.edges(),
                                f.values(),
                                e.values(),
                                check.reduction_steps
                            ));
                        }
                        accepted_any |= check.accepted;
                    }
                }
                if accepted_any != (k >= rank) {
                    failures.push(format!(
                        "{:?} f={:?} k={k}: accepted {accepted_any}, rank {rank}",
                        g.edges(),
                        f.values()
                    ));
                }
            }
            (max_steps, max_ratio, failures)
        })
        .collect();
    let max_steps = results.iter().map(|r| r.0).max().unwrap_or(0);
    let max_ratio = results.iter().map(|r| r.1).fold(0f64, f64::max);
    failures.extend(results.into_iter().flat_map(|r| r.2));
    let mut out = Outcome::new(pairs.len() + 3, failures);
    out.note = format!("max {max_steps} reduction steps, at most {:.3} of n*|E|*(1+|f-g|_1)", max_ratio);
    out
}

fn outcomes_agree<H: FiringHost>(host: &H, x: &[i64]) -> Option<String> {
    let x = chips(x);
    let fast = engine::classify(host, &x);
    let slow = oracle::classify_by_cycle_detection(host, &x, DEFAULT_STATE_LIMIT);
    let agree = match (&fast, &slow) {
        (Ok(a @ GameOutcome::Terminating { .. }), Ok(b)) => a == b,
        (Ok(GameOutcome::NonTerminating(_)), Ok(b)) => !b.is_terminating(),
        _ => false,
    };
    (!agree).then(|| format!("x={:?}: classify {fast:?}, oracle {slow:?}", x.as_slice()))
}

fn criterion_11() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0usize;

    let graphs = small_graphs();
    let graph_results: Vec<(usize, Vec<String>)> = graphs
        .par_iter()
        .map(|g| {
            let mut count = 0;
            let mut failures: Vec<String> = all_upto(g, 2 * g.edge_count())
                .filter_map(|x| {
                    count += 1;
                    outcomes_agree(g, &x).map(|e| format!("{:?} {e}", g.edges()))
                })
                .collect();
            let zero = ChipDistribution::zero(g.vertex_count());
            let slow = oracle::brute_force_dist(g, &zero, DEFAULT_STATE_LIMIT);
            let fast = engine::distance_to_nonterminating(g, &zero);
            if slow.is_err() || slow != fast {
                failures.push(format!("{:?}: dist {fast:?}, oracle {slow:?}", g.edges()));
            }
            (count + 1, failures)
        })
        .collect();
    let five: Vec<(usize, Vec<String>)> = five_vertex_graphs()
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let mut rng = ChaCha8Rng::seed_from_u64(1_100 + i as u64);
            let failures = (0..200)
                .filter_map(|_| {
                    let x: Vec<i64> = (0..5).map(|v| rng.gen_range(0..=g.degree(v))).collect();
                    outcomes_agree(g, &x).map(|e| format!("{:?} {e}", g.edges()))
                })
                .collect();
            (200, failures)
        })
        .collect();
    let digraph_results: Vec<(usize, Vec<String>)> = eulerian_suite()
        .par_iter()
        .map(|d| {
            let mut count = 1;
            let mut failures: Vec<String> = all_upto(d, d.arc_count())
                .filter_map(|x| {
                    count += 1;
                    outcomes_agree(d, &x).map(|e| format!("{:?} {e}", d.arcs()))
                })
                .collect();
            let zero = ChipDistribution::zero(d.vertex_count());
            let slow = oracle::brute_force_dist(d, &zero, DEFAULT_STATE_LIMIT);
            let fast = engine::distance_to_nonterminating(d, &zero);
            if slow.is_err() || slow != fast {
                failures.push(format!("{:?}: dist {fast:?}, oracle {slow:?}", d.arcs()));
            }
            (count, failures)
        })
        .collect();
    let rank_results: Vec<Option<String>> = duality_pairs()
        .par_iter()
        .map(|(g, f)| {
            let fast = divisor::rank(g, f);
            let slow = DivisorClassOracle::new(g, DEFAULT_STATE_LIMIT).rank(f);
            (slow.is_err() || fast != slow)
                .then(|| format!("{:?} f={:?}: rank {fast:?}, oracle {slow:?}", g.edges(), f.values()))
        })
        .collect();
    for (count, f) in graph_results.into_iter().chain(five).chain(digraph_results) {
        checked += count;
        failures.extend(f);
    }
    checked += rank_results.len();
    failures.extend(rank_results.into_iter().flatten());
    Outcome::new(checked, failures)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("dist(0) = |E| on graphs", criterion_1),
        ("dist(0) = minfas on Eulerian digraphs", criterion_2),
        ("feedback rotation keeps size and dominance", criterion_3),
        ("rank(f) = dist(K+ - f) - 1", criterion_4),
        ("Riemann-Roch residual is zero", criterion_5),
        ("acyclic-orientation distance formula", criterion_6),
        ("phi-transform distance identity on D2 and C3", criterion_7),
        ("subdivision preserves rank and dist", criterion_8),
        ("abelian property", criterion_9),
        ("rank witness verifier", criterion_10),
        ("fast paths agree with oracles", criterion_11),
    ];
    let mut all_pass = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed().as_secs_f64();
        let pass = outcome.failures.is_empty();
        all_pass &= pass;
        let note = if outcome.note.is_empty() { String::new() } else { format!(", {}", outcome.note) };
        println!(
            "criterion {:>2} {}: {} ({} checked, {} failed{note}, {elapsed:.1}s)",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            outcome.checked,
            outcome.failures.len(),
        );
        for failure in outcome.failures.iter().take(5) {
            println!("    {failure}");
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
