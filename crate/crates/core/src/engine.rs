//! Chip-firing games: legal firing, game play, termination classification
//! and the distance to non-terminating distributions.
//!
//! Termination on Eulerian hosts is decided without configuration hashing:
//! a terminating game stops within `2|V|²|E|Δ` firings, and once every
//! vertex has fired at least once the game is provably periodic (the
//! vertices can be fired once each, in order of their last firing, which
//! restores the distribution).

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chips::{ChipDistribution, FiringHost};
use crate::enumerate::Placements;
use crate::error::{Error, Result};

/// Which active vertex fires next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Policy {
    MinIndex,
    /// Uniformly random active vertex from a seeded ChaCha8 stream.
    Random(u64),
    /// Fire exactly these vertices, in order.
    Scripted(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameOutcome {
    Terminating { steps: u64, final_chips: ChipDistribution, odometer: Vec<u64> },
    NonTerminating(Certificate),
}

impl GameOutcome {
    pub fn is_terminating(&self) -> bool {
        matches!(self, GameOutcome::Terminating { .. })
    }
}

/// Evidence that a distribution is non-terminating.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// |x| exceeds |E| - |V| on the directed form, so some vertex is always
    /// active.
    ChipCountBound { chips: i64, bound: i64 },
    /// The deterministic min-index game revisited a configuration.
    RepeatedConfiguration { first_seen_step: u64, repeat_step: u64 },
    /// A game ran past the given number of firings.
    StepBoundExceeded { bound: u64 },
    /// At step `at_step` the game reached `chips`, from which firing `order`
    /// (every vertex once) is legal and returns to `chips`.
    AllFiredPeriod { at_step: u64, chips: ChipDistribution, order: Vec<usize> },
}

/// How a call to [`run_legal_game`] stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunEnd {
    /// No vertex is active.
    Terminated,
    StepCapReached,
    /// A scripted policy ran out of vertices while some vertex is active.
    ScriptExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameRun {
    pub end: RunEnd,
    pub steps: u64,
    pub final_chips: ChipDistribution,
    pub odometer: Vec<u64>,
    /// Step number (1-based) of each vertex's most recent firing.
    pub last_fired: Vec<Option<u64>>,
}

impl GameRun {
    /// Terminating for a finished game, `StepBoundExceeded` at the cap.
    pub fn outcome(&self) -> Option<GameOutcome> {
        match self.end {
            RunEnd::Terminated => Some(GameOutcome::Terminating {
                steps: self.steps,
                final_chips: self.final_chips.clone(),
                odometer: self.odometer.clone(),
            }),
            RunEnd::StepCapReached => {
                Some(GameOutcome::NonTerminating(Certificate::StepBoundExceeded { bound: self.steps }))
            }
            RunEnd::ScriptExhausted => None,
        }
    }
}

pub fn is_active<H: FiringHost + ?Sized>(host: &H, chips: &[i64], v: usize) -> bool {
    chips[v] >= host.threshold(v)
}

/// Vertices holding at least their (out-)degree, in increasing order.
pub fn active_vertices<H: FiringHost + ?Sized>(host: &H, x: &ChipDistribution) -> Vec<usize> {
    (0..host.vertex_count()).filter(|&v| is_active(host, x.as_slice(), v)).collect()
}

fn fire_in_place<H: FiringHost + ?Sized>(host: &H, chips: &mut [i64], v: usize) {
    chips[v] -= host.threshold(v);
    for &(u, m) in host.targets(v) {
        chips[u] += m;
    }
}

/// Fires `v`, which must be active.
pub fn fire<H: FiringHost + ?Sized>(host: &H, x: &ChipDistribution, v: usize) -> Result<ChipDistribution> {
    x.check_host(host)?;
    if v >= host.vertex_count() {
        return Err(Error::VertexOutOfRange { vertex: v, n: host.vertex_count() });
    }
    if !is_active(host, x.as_slice(), v) {
        return Err(Error::IllegalFiring(v));
    }
    let mut chips = x.as_slice().to_vec();
    fire_in_place(host, &mut chips, v);
    Ok(ChipDistribution::from_raw(chips))
}

/// Mutable game state shared by every simulation in this module.
struct Game<'h, H: FiringHost + ?Sized> {
    host: &'h H,
    chips: Vec<i64>,
    odometer: Vec<u64>,
    last_fired: Vec<Option<u64>>,
    steps: u64,
    fired_vertices: usize,
}

impl<'h, H: FiringHost + ?Sized> Game<'h, H> {
    fn new(host: &'h H, chips: &[i64]) -> Self {
        let n = host.vertex_count();
        Game {
            host,
            chips: chips.to_vec(),
            odometer: vec![0; n],
            last_fired: vec![None; n],
            steps: 0,
            fired_vertices: 0,
        }
    }

    fn reset(&mut self, chips: &[i64]) {
        self.chips.clear();
        self.chips.extend_from_slice(chips);
        self.odometer.iter_mut().for_each(|c| *c = 0);
        self.last_fired.iter_mut().for_each(|t| *t = None);
        self.steps = 0;
        self.fired_vertices = 0;
    }

    fn first_active(&self) -> Option<usize> {
        (0..self.chips.len()).find(|&v| is_active(self.host, &self.chips, v))
    }

    fn fire(&mut self, v: usize) {
        fire_in_place(self.host, &mut self.chips, v);
        self.steps += 1;
        if self.odometer[v] == 0 {
            self.fired_vertices += 1;
        }
        self.odometer[v] += 1;
        self.last_fired[v] = Some(self.steps);
    }

    fn into_run(self, end: RunEnd) -> GameRun {
        GameRun {
            end,
            steps: self.steps,
            final_chips: ChipDistribution::from_raw(self.chips),
            odometer: self.odometer,
            last_fired: self.last_fired,
        }
    }
}

/// Plays a legal game from `x` for at most `step_cap` firings.
pub fn run_legal_game<H: FiringHost + ?Sized>(
    host: &H,
    x: &ChipDistribution,
    policy: &Policy,
    step_cap: u64,
) -> Result<GameRun> {
    run_legal_game_traced(host, x, policy, step_cap, |_, _, _| {})
}

/// As [`run_legal_game`], calling `on_step(step, vertex, chips_after)` after
/// every firing.
pub fn run_legal_game_traced<H, F>(
    host: &H,
    x: &ChipDistribution,
    policy: &Policy,
    step_cap: u64,
    mut on_step: F,
) -> Result<GameRun>
where
    H: FiringHost + ?Sized,
    F: FnMut(u64, usize, &[i64]),
{
    x.check_host(host)?;
    let n = host.vertex_count();
    let mut game = Game::new(host, x.as_slice());
    let mut rng = match policy {
        Policy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let mut script = match policy {
        Policy::Scripted(order) => Some(order.iter().copied().enumerate()),
        _ => None,
    };
    let mut active = Vec::with_capacity(n);
    loop {
        let next = if let Some(script) = script.as_mut() {
            match script.next() {
                Some(_) if game.steps >= step_cap => {
                    return Ok(game.into_run(RunEnd::StepCapReached));
                }
                Some((index, v)) => {
                    if v >= n || !is_active(host, &game.chips, v) {
                        return Err(Error::IllegalScript { index, vertex: v });
                    }
                    v
                }
                None => {
                    let end = match game.first_active() {
                        Some(_) => RunEnd::ScriptExhausted,
                        None => RunEnd::Terminated,
                    };
                    return Ok(game.into_run(end));
                }
            }
        } else {
            let pick = if let Some(rng) = rng.as_mut() {
                active.clear();
                active.extend((0..n).filter(|&v| is_active(host, &game.chips, v)));
                (!active.is_empty()).then(|| active[rng.gen_range(0..active.len())])
            } else {
                game.first_active()
            };
            match pick {
                None => return Ok(game.into_run(RunEnd::Terminated)),
                Some(_) if game.steps >= step_cap => return Ok(game.into_run(RunEnd::StepCapReached)),
                Some(v) => v,
            }
        };
        game.fire(next);
        on_step(game.steps, next, &game.chips);
    }
}

/// The Eulerian termination bound `2|V|²|E|Δ` of the host's directed form.
pub fn step_bound<H: FiringHost + ?Sized>(host: &H) -> Result<u64> {
    let n = host.vertex_count() as u64;
    let e = u64::try_from(host.directed_arc_count()).map_err(|_| Error::Overflow("arc count"))?;
    let delta = u64::try_from(host.directed_max_degree()).map_err(|_| Error::Overflow("degree"))?;
    2u64.checked_mul(n)
        .and_then(|v| v.checked_mul(n))
        .and_then(|v| v.checked_mul(e))
        .and_then(|v| v.checked_mul(delta))
        .ok_or(Error::Overflow("step bound"))
}

/// Every distribution with more than this many chips is non-terminating:
/// |E| - |V| of the directed form (2|E| - |V| on an undirected graph).
pub fn chip_count_bound<H: FiringHost + ?Sized>(host: &H) -> i64 {
    host.directed_arc_count() - host.vertex_count() as i64
}

/// Reusable classification state for repeated calls on one host.
pub struct Classifier<'h, H: FiringHost + ?Sized> {
    game: Game<'h, H>,
    bound: u64,
    firings: u64,
}

impl<'h, H: FiringHost + ?Sized> Classifier<'h, H> {
    pub fn new(host: &'h H) -> Result<Self> {
        if !host.is_eulerian() {
            return Err(Error::UnsupportedHost);
        }
        let bound = step_bound(host)?;
        let n = host.vertex_count();
        Ok(Classifier { game: Game::new(host, &vec![0; n]), bound, firings: 0 })
    }

    pub fn step_bound(&self) -> u64 {
        self.bound
    }

    /// Firings simulated by this classifier so far.
    pub fn firings(&self) -> u64 {
        self.firings
    }

    /// Decides whether the game from `chips` terminates by min-index play
    /// until the game stops, every vertex has fired, or the step bound is
    /// exceeded.
    ///
    /// Above the chip count bound the verdict is already settled; play then
    /// only upgrades the certificate to a firing period.
    pub fn classify(&mut self, chips: &[i64]) -> Result<GameOutcome> {
        let host = self.game.host;
        if chips.len() != host.vertex_count() {
            return Err(Error::LengthMismatch { expected: host.vertex_count(), actual: chips.len() });
        }
        let total: i64 = chips.iter().sum();
        let bound = chip_count_bound(host);
        let forced = total > bound;
        self.game.reset(chips);
        let n = host.vertex_count();
        loop {
            if self.game.fired_vertices == n {
                let at = ChipDistribution::from_raw(self.game.chips.clone());
                let order = post_all_fired_order(host, &at, &self.game.last_fired)?;
                return Ok(GameOutcome::NonTerminating(Certificate::AllFiredPeriod {
                    at_step: self.game.steps,
                    chips: at,
                    order,
                }));
            }
            match self.game.first_active() {
                None => {
                    debug_assert!(!forced, "a game above the chip count bound stopped");
                    return Ok(GameOutcome::Terminating {
                        steps: self.game.steps,
                        final_chips: ChipDistribution::from_raw(self.game.chips.clone()),
                        odometer: self.game.odometer.clone(),
                    });
                }
                Some(_) if self.game.steps >= self.bound => {
                    let certificate = if forced {
                        Certificate::ChipCountBound { chips: total, bound }
                    } else {
                        Certificate::StepBoundExceeded { bound: self.bound }
                    };
                    return Ok(GameOutcome::NonTerminating(certificate));
                }
                Some(v) => {
                    self.game.fire(v);
                    self.firings += 1;
                }
            }
        }
    }

    /// Yes/no form of [`Classifier::classify`] that skips play above the
    /// chip count bound.
    pub fn terminates(&mut self, chips: &[i64]) -> Result<bool> {
        if chips.iter().sum::<i64>() > chip_count_bound(self.game.host) {
            return Ok(false);
        }
        Ok(self.classify(chips)?.is_terminating())
    }
}

/// Classifies `x` on a graph or an Eulerian digraph.
pub fn classify<H: FiringHost + ?Sized>(host: &H, x: &ChipDistribution) -> Result<GameOutcome> {
    x.check_host(host)?;
    Classifier::new(host)?.classify(x.as_slice())
}

/// Result of the iterative-deepening search behind
/// [`distance_to_nonterminating`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceSearch {
    pub dist: i64,
    /// First `y` (colex order) with `|y| = dist` and `x + y` non-terminating.
    pub witness: Vec<i64>,
    /// Distributions classified.
    pub candidates: u64,
    /// Firings simulated across all classifications.
    pub firings: u64,
}

/// Searches `k = 0, 1, 2, …` over every `y` with `|y| = k` in colex order
/// and stops at the first `x + y` that does not terminate. The chip count
/// bound caps `k`, so the search always ends.
pub fn distance_search<H: FiringHost + ?Sized>(host: &H, x: &ChipDistribution) -> Result<DistanceSearch> {
    x.check_host(host)?;
    let mut classifier = Classifier::new(host)?;
    let n = host.vertex_count();
    let upper = (chip_count_bound(host) + 1 - x.total()).max(0);
    let mut sum = vec![0i64; n];
    let mut candidates = 0;
    for k in 0..=upper {
        for y in Placements::new(n, k) {
            for ((s, a), b) in sum.iter_mut().zip(x.as_slice()).zip(&y) {
                *s = a + b;
            }
            candidates += 1;
            if !classifier.terminates(&sum)? {
                return Ok(DistanceSearch { dist: k, witness: y, candidates, firings: classifier.firings() });
            }
        }
    }
    unreachable!("{upper} added chips exceed the chip count bound")
}

/// dist(x): the fewest chips whose addition makes `x` non-terminating.
///
/// Exponential in general and meant for small hosts only.
pub fn distance_to_nonterminating<H: FiringHost + ?Sized>(host: &H, x: &ChipDistribution) -> Result<i64> {
    distance_search(host, x).map(|s| s.dist)
}

/// Orders the vertices by the time of their last firing. On an Eulerian
/// host, firing them once each in this order from `x` is legal and
/// restores `x`; the replay is checked before returning.
pub fn post_all_fired_order<H: FiringHost + ?Sized>(
    host: &H,
    x: &ChipDistribution,
    last_fired: &[Option<u64>],
) -> Result<Vec<usize>> {
    x.check_host(host)?;
    if last_fired.len() != host.vertex_count() {
        return Err(Error::LengthMismatch { expected: host.vertex_count(), actual: last_fired.len() });
    }
    let mut stamped = Vec::with_capacity(last_fired.len());
    for (v, t) in last_fired.iter().enumerate() {
        match t {
            Some(t) => stamped.push((*t, v)),
            None => return Err(Error::PreconditionUnmet("some vertex has never fired")),
        }
    }
    stamped.sort_unstable();
    let order: Vec<usize> = stamped.into_iter().map(|(_, v)| v).collect();
    let mut chips = x.as_slice().to_vec();
    for &v in &order {
        if !is_active(host, &chips, v) {
            return Err(Error::PreconditionUnmet("last-firing order is not a legal period"));
        }
        fire_in_place(host, &mut chips, v);
    }
    if chips != x.as_slice() {
        return Err(Error::PreconditionUnmet("last-firing order does not restore the distribution"));
    }
    Ok(order)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianReport {
    pub trials: usize,
    pub steps: u64,
    pub final_chips: ChipDistribution,
    pub odometer: Vec<u64>,
}

/// Plays `trials` random-order games from a terminating `x` and checks that
/// they agree on length, final distribution and odometer.
pub fn verify_abelian<H: FiringHost + ?Sized>(
    host: &H,
    x: &ChipDistribution,
    trials: usize,
    seed: u64,
) -> Result<AbelianReport> {
    let (steps, final_chips, odometer) = match classify(host, x)? {
        GameOutcome::Terminating { steps, final_chips, odometer } => (steps, final_chips, odometer),
        GameOutcome::NonTerminating(_) => return Err(Error::PreconditionUnmet("distribution is non-terminating")),
    };
    let cap = step_bound(host)?;
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let run = run_legal_game(host, x, &Policy::Random(seeds.gen()), cap)?;
        if run.end != RunEnd::Terminated {
            return Err(Error::AbelianViolation("a random game did not terminate"));
        }
        if run.steps != steps {
            return Err(Error::AbelianViolation("step counts differ"));
        }
        if run.final_chips != final_chips {
            return Err(Error::AbelianViolation("final distributions differ"));
        }
        if run.odometer != odometer {
            return Err(Error::AbelianViolation("odometers differ"));
        }
    }
    Ok(AbelianReport { trials, steps, final_chips, odometer })
}
