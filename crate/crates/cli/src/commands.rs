use std::time::Instant;

use chipfire_core::divisor;
use chipfire_core::engine::{self, Certificate, GameOutcome, Policy, RunEnd};
use chipfire_core::feedback;
use chipfire_core::generate;
use chipfire_core::orientation::{self, SearchMode};
use chipfire_core::reductions;
use chipfire_core::Divisor;
use serde_json::{json, Value};

use crate::args::{ModeArg, PolicyArg};
use crate::error::Result;
use crate::instance::{Host, Instance};

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: Value,
    /// False when a checked identity failed; maps to exit status 1.
    pub verified: bool,
    /// Lines printed before the body.
    pub trace: Vec<String>,
}

impl Report {
    pub fn ok(body: Value) -> Self {
        Report { body, verified: true, trace: Vec::new() }
    }

    pub fn checked(body: Value, verified: bool) -> Self {
        Report { body, verified, trace: Vec::new() }
    }
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::ChipCountBound { chips, bound } => json!({"kind":"chip_count_bound","chips":chips,"bound":bound}),
        Certificate::RepeatedConfiguration { first_seen_step, repeat_step } => {
            json!({"kind":"repeated_configuration","first_seen_step":first_seen_step,"repeat_step":repeat_step})
        }
        Certificate::StepBoundExceeded { bound } => json!({"kind":"step_bound_exceeded","bound":bound}),
        Certificate::AllFiredPeriod { at_step, chips, order } => {
            json!({"kind":"all_fired_period","at_step":at_step,"chips":chips.as_slice(),"order":order})
        }
    }
}

pub fn outcome_json(o: &GameOutcome) -> Value {
    match o {
        GameOutcome::Terminating { steps, final_chips, odometer } => {
            json!({"terminating":true,"steps":steps,"final":final_chips.as_slice(),"odometer":odometer})
        }
        GameOutcome::NonTerminating(c) => json!({"terminating":false,"certificate":certificate_json(c)}),
    }
}

pub fn classify(instance: &Instance) -> Result<Report> {
    let x = instance.chips()?;
    let outcome = match instance.host()? {
        Host::Graph(g) => engine::classify(&g, &x)?,
        Host::Digraph(d) => engine::classify(&d, &x)?,
    };
    Ok(Report::ok(outcome_json(&outcome)))
}

pub fn simulate(
    instance: &Instance,
    policy: PolicyArg,
    script: &[usize],
    seed: u64,
    cap: u64,
    trace: bool,
) -> Result<Report> {
    let x = instance.chips()?;
    let policy = match policy {
        PolicyArg::MinIndex => Policy::MinIndex,
        PolicyArg::Random => Policy::Random(seed),
        PolicyArg::Script => Policy::Scripted(script.to_vec()),
    };
    let mut lines = Vec::new();
    let on_step = |step: u64, v: usize, chips: &[i64]| {
        if trace {
            let chips: Vec<String> = chips.iter().map(i64::to_string).collect();
            lines.push(format!("{step} {v} {}", chips.join(",")));
        }
    };
    let run = match instance.host()? {
        Host::Graph(g) => engine::run_legal_game_traced(&g, &x, &policy, cap, on_step)?,
        Host::Digraph(d) => engine::run_legal_game_traced(&d, &x, &policy, cap, on_step)?,
    };
    let end = match run.end {
        RunEnd::Terminated => "terminated",
        RunEnd::StepCapReached => "step_cap",
        RunEnd::ScriptExhausted => "script_exhausted",
    };
    let body = json!({
        "end": end,
        "steps": run.steps,
        "final": run.final_chips.as_slice(),
        "odometer": run.odometer,
    });
    Ok(Report { body, verified: true, trace: lines })
}

pub fn dist(instance: &Instance) -> Result<Report> {
    let x = instance.chips_or_zero()?;
    let dist = match instance.host()? {
        Host::Graph(g) => engine::distance_to_nonterminating(&g, &x)?,
        Host::Digraph(d) => engine::distance_to_nonterminating(&d, &x)?,
    };
    Ok(Report::ok(json!({ "dist": dist })))
}

pub fn rank(instance: &Instance) -> Result<Report> {
    let g = instance.graph()?;
    let rank = divisor::rank(&g, &instance.divisor()?)?;
    Ok(Report::ok(json!({ "rank": rank })))
}

pub fn winnable(instance: &Instance) -> Result<Report> {
    let g = instance.graph()?;
    let winnable = divisor::has_effective_equivalent(&g, &instance.divisor()?)?;
    Ok(Report::ok(json!({ "winnable": winnable })))
}

pub fn reduce(instance: &Instance, q: usize) -> Result<Report> {
    let g = instance.graph()?;
    let (reduced, steps) = divisor::q_reduce_counted(&g, &instance.divisor()?, q)?;
    Ok(Report::ok(json!({"q": q, "reduced": reduced.values(), "steps": steps})))
}

/// The transformed instance, carrying base chips (plus the lifted chips of
/// the input when present).
pub fn reduce_phi(instance: &Instance, scaled_m: Option<i64>) -> Result<Report> {
    let d = instance.digraph()?;
    let p = match scaled_m {
        Some(m) => reductions::phi_transform_with_multiplier(&d, m)?,
        None => reductions::phi_transform(&d)?,
    };
    let mut chips = reductions::base_distribution(&p).into_vec();
    if let Some(x) = &instance.chips {
        for (c, v) in chips.iter_mut().zip(x) {
            *c += v;
        }
    }
    let out = Instance::from_graph(p.target()).with_chips(chips);
    Ok(Report::ok(serde_json::to_value(out)?))
}

pub fn reduce_subdivide(instance: &Instance) -> Result<Report> {
    let g = instance.graph()?;
    let mut out = Instance::from_graph(&reductions::subdivide_graph(&g));
    if instance.chips.is_some() {
        let (_, x) = reductions::subdivide(&g, &instance.chips()?)?;
        out = out.with_chips(x.into_vec());
    }
    if instance.divisor.is_some() {
        let (_, f) = reductions::divisor_subdivide(&g, &instance.divisor()?)?;
        out = out.with_divisor(f.into_vec());
    }
    Ok(Report::ok(serde_json::to_value(out)?))
}

pub fn minfas(instance: &Instance) -> Result<Report> {
    let d = instance.digraph()?;
    let (size, fas) = feedback::minfas_exact(&d)?;
    let arcs: Vec<[usize; 2]> =
        fas.arcs().iter().flat_map(|&(u, v, m)| std::iter::repeat_n([u, v], m as usize)).collect();
    Ok(Report::ok(json!({"minfas": size, "fas": arcs, "order": fas.order()})))
}

pub fn under_acyclic(instance: &Instance, mode: ModeArg) -> Result<Report> {
    let g = instance.graph()?;
    let x = instance.chips()?;
    let mode = match mode {
        ModeArg::Greedy => SearchMode::Greedy,
        ModeArg::Exhaustive => SearchMode::Exhaustive,
    };
    let body = match orientation::under_acyclic_orientation(&g, &x, mode)? {
        Some(o) => json!({
            "under_acyclic": true,
            "order": o.topological_order(),
            "arcs": o.arcs(),
            "dist": g.edge_count() - x.total(),
        }),
        None => json!({ "under_acyclic": false }),
    };
    Ok(Report::ok(body))
}

pub fn verify_witness(instance: &Instance, k: i64, witness: &[i64]) -> Result<Report> {
    let g = instance.graph()?;
    let check = divisor::verify_rank_upper_witness(&g, &instance.divisor()?, k, &Divisor::new(witness.to_vec()))?;
    Ok(Report::ok(json!({"accepted": check.accepted, "reduction_steps": check.reduction_steps})))
}

pub fn riemann_roch(instance: &Instance) -> Result<Report> {
    let g = instance.graph()?;
    let f = instance.divisor()?;
    let dual = Divisor::canonical(&g).minus(f.values())?;
    let rank = divisor::rank(&g, &f)?;
    let dual_rank = divisor::rank(&g, &dual)?;
    let rhs = f.degree() - g.edge_count() + g.vertex_count() as i64;
    let residual = divisor::riemann_roch_residual(&g, &f)?;
    let body = json!({
        "rank": rank,
        "dual_rank": dual_rank,
        "degree": f.degree(),
        "genus": g.genus(),
        "rhs": rhs,
        "residual": residual,
    });
    Ok(Report::checked(body, residual == 0))
}

pub fn verify_phi_lemma(instance: &Instance, scaled_m: Option<i64>) -> Result<Report> {
    let d = instance.digraph()?;
    let start = Instant::now();
    let r = match scaled_m {
        Some(m) => reductions::verify_phi_lemma_with_multiplier(&d, m)?,
        None => reductions::verify_phi_lemma(&d)?,
    };
    let body = json!({
        "lhs": r.lhs,
        "rhs": r.rhs,
        "equal": r.equal,
        "steps_used": r.firings,
        "m": r.m,
        "candidates": r.candidates,
        "base_terminates": r.base_terminates,
        "coupled_steps": r.coupling.coupled_steps,
        "vertex_equation_holds": r.coupling.vertex_equation_holds,
        "arc_equation_holds": r.coupling.arc_equation_holds,
        "period_restored": r.period_restored,
        "wall_time": start.elapsed().as_secs_f64(),
    });
    Ok(Report::checked(body, r.holds()))
}

/// dist before and after subdivision when the instance has chips, rank
/// when it has a divisor.
pub fn verify_subdivision(instance: &Instance) -> Result<Report> {
    let g = instance.graph()?;
    let start = Instant::now();
    let (lhs, rhs, steps) = if instance.chips.is_some() {
        let x = instance.chips()?;
        let (g2, x2) = reductions::subdivide(&g, &x)?;
        let before = engine::distance_search(&g, &x)?;
        let after = engine::distance_search(&g2, &x2)?;
        (before.dist, after.dist, Some(before.firings + after.firings))
    } else {
        let (lhs, rhs) = reductions::subdivision_rank_pair(&g, &instance.divisor()?)?;
        (lhs, rhs, None)
    };
    let body = json!({
        "lhs": lhs,
        "rhs": rhs,
        "equal": lhs == rhs,
        "steps_used": steps,
        "wall_time": start.elapsed().as_secs_f64(),
    });
    Ok(Report::checked(body, lhs == rhs))
}

pub fn verify_abelian(instance: &Instance, trials: usize, seed: u64) -> Result<Report> {
    let x = instance.chips()?;
    let report = match instance.host()? {
        Host::Graph(g) => engine::verify_abelian(&g, &x, trials, seed)?,
        Host::Digraph(d) => engine::verify_abelian(&d, &x, trials, seed)?,
    };
    Ok(Report::ok(json!({
        "trials": report.trials,
        "steps": report.steps,
        "final": report.final_chips.as_slice(),
        "odometer": report.odometer,
    })))
}

pub fn gen_graph(n: usize, max_mult: i64, seed: u64) -> Result<Report> {
    let g = generate::random_graph(n, max_mult, seed)?;
    Ok(Report::ok(serde_json::to_value(Instance::from_graph(&g))?))
}

pub fn gen_eulerian(n: usize, cycles: usize, max_len: Option<usize>, seed: u64) -> Result<Report> {
    let d = generate::random_eulerian_digraph(n, cycles, max_len.unwrap_or(n), seed)?;
    Ok(Report::ok(serde_json::to_value(Instance::from_digraph(&d))?))
}
