use std::collections::VecDeque;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use super::decision::DecisionVector;
use super::objective::{evaluate, Evaluation};
use super::spec::MissionSpec;
use crate::primitives::{FeasibilityReport, KnotState, QuinticSegment};
use crate::robustness::{robustness, smooth_robustness, Temperature, Trace};
use crate::{Error, Result, Vec3};

const ARMIJO_C: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 40;
const LBFGS_MEMORY: usize = 8;
/// Largest per-coordinate change of one step (m, m/s or m/s^2).
const MAX_STEP: f64 = 2.0;
/// Inf-norm of the first step along a raw gradient direction.
const GRADIENT_STEP: f64 = 0.5;

/// How the smoothing temperature evolves over a restart's iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TemperatureSchedule {
    Fixed(Temperature),
    /// `first` for the first half of the iteration budget, `second` after.
    TwoPhase { first: Temperature, second: Temperature },
}

impl TemperatureSchedule {
    pub fn at(&self, iteration: usize, max_iterations: usize) -> Temperature {
        match *self {
            Self::Fixed(k) => k,
            Self::TwoPhase { first, second } => {
                if iteration < max_iterations / 2 {
                    first
                } else {
                    second
                }
            }
        }
    }

    /// First iteration of the phase after the one containing `iteration`,
    /// if any.
    fn next_phase(&self, iteration: usize, max_iterations: usize) -> Option<usize> {
        match self {
            Self::TwoPhase { .. } if iteration < max_iterations / 2 => Some(max_iterations / 2),
            _ => None,
        }
    }
}

impl Default for TemperatureSchedule {
    fn default() -> Self {
        Self::TwoPhase { first: Temperature::new(10.0).unwrap(), second: Temperature::new(50.0).unwrap() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub temperature: TemperatureSchedule,
    /// Temperature at which the reported smooth robustness is evaluated.
    pub report_temperature: Temperature,
    /// Weight `lambda` of the kinematic penalty.
    pub penalty_weight: f64,
    pub seed: u64,
    pub time_budget: Duration,
    /// Standard deviation (m) of the knot-position jitter for restarts >= 1.
    pub jitter: f64,
    /// End a restart at its first feasible iterate with robustness >= epsilon,
    /// and skip remaining batches once any restart has succeeded.
    pub stop_on_success: bool,
    /// Restarts run concurrently in fixed batches of this size. Results do
    /// not depend on the thread count.
    pub batch_size: usize,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iterations: 300,
            temperature: TemperatureSchedule::default(),
            report_temperature: Temperature::new(25.0).unwrap(),
            penalty_weight: 100.0,
            seed: 0,
            time_budget: Duration::from_secs(60),
            jitter: 0.5,
            stop_on_success: true,
            batch_size: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PlanStatus {
    Success,
    RobustnessBelowEpsilon,
    Infeasible,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartLog {
    pub restart: usize,
    pub iterations: usize,
    /// Accepted objective values, one per iterate (including the start).
    pub objective: Vec<f64>,
    /// Temperature in force for each entry of `objective`.
    pub temperature: Vec<f64>,
    /// Exact robustness of this restart's best candidate.
    pub robustness: f64,
    pub penalty: f64,
    pub feasible: bool,
    pub succeeded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub restarts: Vec<RestartLog>,
    pub best_restart: usize,
    pub wall_time: Duration,
    pub budget_exhausted: bool,
}

impl Diagnostics {
    pub fn restarts_run(&self) -> usize {
        self.restarts.len()
    }

    pub fn total_iterations(&self) -> usize {
        self.restarts.iter().map(|r| r.iterations).sum()
    }
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub status: PlanStatus,
    pub decision: DecisionVector,
    pub segments: Vec<Vec<QuinticSegment>>,
    pub trace: Trace,
    pub robustness: f64,
    pub smooth_robustness: f64,
    pub report_temperature: Temperature,
    /// `[agent][segment]`.
    pub margins: Vec<Vec<FeasibilityReport>>,
    pub diagnostics: Diagnostics,
}

impl PlanResult {
    pub fn is_feasible(&self) -> bool {
        self.margins.iter().flatten().all(|m| m.feasible)
    }
}

struct Candidate {
    q: DecisionVector,
    eval: Evaluation,
    robustness: f64,
    feasible: bool,
    restart: usize,
}

impl Candidate {
    fn succeeded(&self, epsilon: f64) -> bool {
        self.feasible && self.robustness >= epsilon
    }

    /// Feasible beats infeasible; feasible ones rank by robustness,
    /// infeasible ones by penalty then robustness; lower restart wins ties.
    fn better_than(&self, other: &Candidate) -> bool {
        use std::cmp::Ordering::*;
        let ord = match (self.feasible, other.feasible) {
            (true, false) => Greater,
            (false, true) => Less,
            (true, true) => self.robustness.total_cmp(&other.robustness),
            (false, false) => other
                .eval
                .objective
                .penalty
                .total_cmp(&self.eval.objective.penalty)
                .then(self.robustness.total_cmp(&other.robustness)),
        };
        ord.then(other.restart.cmp(&self.restart)) == Greater
    }
}

fn candidate(q: DecisionVector, eval: Evaluation, spec: &MissionSpec, restart: usize) -> Result<Candidate> {
    let robustness = robustness(spec.resolved_formula(), &eval.trace, 0)?;
    let feasible = eval.margins.iter().flatten().all(|m| m.feasible);
    Ok(Candidate { q, eval, robustness, feasible, restart })
}

/// Straight line from each agent's start toward its first target region
/// (hover when it has none).
fn initial_guess(spec: &MissionSpec) -> DecisionVector {
    let mut q = DecisionVector::hover(spec);
    let m = spec.knots();
    for (a, agent) in spec.agents().iter().enumerate() {
        let Some(target) = spec.first_target(a) else { continue };
        let start = agent.initial.p;
        let cruise = (target - start) / spec.duration();
        for knot in 1..=m {
            let p = start + (target - start) * (knot as f64 / m as f64);
            let v = if knot == m { Vec3::zeros() } else { cruise };
            q.set_knot(a, knot, &KnotState::new(p, v, Vec3::zeros()));
        }
    }
    q
}

fn jittered(base: &DecisionVector, spec: &MissionSpec, cfg: &PlannerConfig, restart: usize) -> DecisionVector {
    let mut q = base.clone();
    if restart == 0 || cfg.jitter == 0.0 {
        return q;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let normal = Normal::new(0.0, cfg.jitter).expect("jitter validated");
    for a in 0..spec.agents().len() {
        for knot in 1..=spec.knots() {
            let mut s = q.knot(a, knot);
            for axis in 0..3 {
                s.p[axis] += normal.sample(&mut rng);
            }
            q.set_knot(a, knot, &s);
        }
    }
    q
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
}

/// Two-loop recursion for the ascent direction `H * g` from stored pairs
/// `(s, y)` with `y` the gradient change of the *negated* objective.
fn lbfgs_direction(g: &[f64], memory: &VecDeque<(Vec<f64>, Vec<f64>)>) -> Vec<f64> {
    let mut d = g.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y) in memory.iter().rev() {
        let rho = 1.0 / dot(y, s);
        let alpha = rho * dot(s, &d);
        d.iter_mut().zip(y).for_each(|(di, yi)| *di -= alpha * yi);
        alphas.push((alpha, rho));
    }
    if let Some((s, y)) = memory.back() {
        let gamma = dot(s, y) / dot(y, y);
        d.iter_mut().for_each(|x| *x *= gamma);
    }
    for ((s, y), (alpha, rho)) in memory.iter().zip(alphas.into_iter().rev()) {
        let beta = rho * dot(y, &d);
        d.iter_mut().zip(s).for_each(|(di, si)| *di += (alpha - beta) * si);
    }
    d
}

struct RestartOutcome {
    best: Candidate,
    log: RestartLog,
    out_of_time: bool,
}

fn run_restart(
    spec: &MissionSpec,
    cfg: &PlannerConfig,
    start: DecisionVector,
    restart: usize,
    deadline: Instant,
) -> Result<RestartOutcome> {
    let lambda = cfg.penalty_weight;
    let max_it = cfg.max_iterations;
    let mut k = cfg.temperature.at(0, max_it);
    let mut q = start;
    let mut eval = evaluate(&q, spec, k, lambda, true)?;
    let mut log = RestartLog {
        restart,
        iterations: 0,
        objective: vec![eval.objective.value],
        temperature: vec![k.value()],
        robustness: f64::NAN,
        penalty: f64::NAN,
        feasible: false,
        succeeded: false,
    };
    let mut best = candidate(q.clone(), evaluate(&q, spec, k, lambda, false)?, spec, restart)?;
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>)> = VecDeque::new();
    let mut out_of_time = false;
    let mut it = 0;

    while it < max_it && !(cfg.stop_on_success && best.succeeded(spec.epsilon())) {
        if Instant::now() >= deadline {
            out_of_time = true;
            break;
        }
        let k_now = cfg.temperature.at(it, max_it);
        if k_now != k {
            k = k_now;
            eval = evaluate(&q, spec, k, lambda, true)?;
            memory.clear();
            log.objective.push(eval.objective.value);
            log.temperature.push(k.value());
        }
        it += 1;

        let g = &eval.objective.gradient;
        let j0 = eval.objective.value;
        let mut accepted = None;
        for use_memory in [true, false] {
            if !use_memory && memory.is_empty() {
                // The plain gradient attempt already ran.
                break;
            }
            let mut d = if use_memory && !memory.is_empty() {
                lbfgs_direction(g, &memory)
            } else {
                let n = inf_norm(g);
                if n == 0.0 {
                    break;
                }
                g.iter().map(|x| x * GRADIENT_STEP / n).collect()
            };
            let slope = dot(g, &d);
            if slope.is_nan() || slope <= 0.0 {
                continue;
            }
            let n = inf_norm(&d);
            if n > MAX_STEP {
                d.iter_mut().for_each(|x| *x *= MAX_STEP / n);
            }
            let slope = dot(g, &d);
            let mut t = 1.0;
            for _ in 0..MAX_BACKTRACKS {
                let trial: Vec<f64> = q.as_slice().iter().zip(&d).map(|(x, di)| x + t * di).collect();
                let trial = DecisionVector::from_values(spec, trial)?;
                let e = evaluate(&trial, spec, k, lambda, false)?;
                if e.objective.value >= j0 + ARMIJO_C * t * slope {
                    accepted = Some((trial, e));
                    break;
                }
                t *= 0.5;
            }
            if accepted.is_some() {
                break;
            }
            memory.clear();
        }

        let Some((next_q, next_eval)) = accepted else {
            // Stationary at this temperature: move on to the next phase.
            match cfg.temperature.next_phase(it - 1, max_it) {
                Some(next) => {
                    it = next;
                    continue;
                }
                None => break,
            }
        };
        let next_full = evaluate(&next_q, spec, k, lambda, true)?;
        let s: Vec<f64> = next_q.as_slice().iter().zip(q.as_slice()).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = next_full.objective.gradient.iter().zip(g).map(|(a, b)| b - a).collect();
        if dot(&s, &y) > 1e-12 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
            memory.push_back((s, y));
            if memory.len() > LBFGS_MEMORY {
                memory.pop_front();
            }
        }
        q = next_q;
        eval = next_full;
        log.objective.push(eval.objective.value);
        log.temperature.push(k.value());
        let c = candidate(q.clone(), next_eval, spec, restart)?;
        if c.better_than(&best) {
            best = c;
        }
    }

    log.iterations = it.min(max_it);
    log.robustness = best.robustness;
    log.penalty = best.eval.objective.penalty;
    log.feasible = best.feasible;
    log.succeeded = best.succeeded(spec.epsilon());
    Ok(RestartOutcome { best, log, out_of_time })
}

fn check_config(cfg: &PlannerConfig) -> Result<()> {
    let bad = |msg: &str| Err(Error::InvalidSpec(msg.to_string()));
    if cfg.restarts == 0 {
        return bad("restarts must be at least 1");
    }
    if cfg.batch_size == 0 {
        return bad("batch_size must be at least 1");
    }
    if !(cfg.penalty_weight >= 0.0 && cfg.penalty_weight.is_finite()) {
        return bad("penalty weight must be finite and non-negative");
    }
    if !(cfg.jitter >= 0.0 && cfg.jitter.is_finite()) {
        return bad("jitter must be finite and non-negative");
    }
    Ok(())
}

/// Multi-start penalized ascent on the smooth robustness. Each restart is a
/// backtracking (Armijo) line search along L-BFGS directions, falling back
/// to the gradient; the best candidate across restarts is judged with exact
/// semantics and exact kinematic margins.
pub fn plan(spec: &MissionSpec, cfg: &PlannerConfig) -> Result<PlanResult> {
    check_config(cfg)?;
    let started = Instant::now();
    let deadline = started + cfg.time_budget;
    let base = initial_guess(spec);

    let mut best: Option<Candidate> = None;
    let mut logs = Vec::new();
    let mut budget_exhausted = false;
    let restarts: Vec<usize> = (0..cfg.restarts).collect();
    for batch in restarts.chunks(cfg.batch_size) {
        if Instant::now() >= deadline && !logs.is_empty() {
            budget_exhausted = true;
            break;
        }
        let outcomes: Vec<Result<RestartOutcome>> = batch
            .par_iter()
            .map(|&r| run_restart(spec, cfg, jittered(&base, spec, cfg, r), r, deadline))
            .collect();
        for outcome in outcomes {
            let outcome = outcome?;
            budget_exhausted |= outcome.out_of_time;
            logs.push(outcome.log);
            if best.as_ref().is_none_or(|b| outcome.best.better_than(b)) {
                best = Some(outcome.best);
            }
        }
        if cfg.stop_on_success && best.as_ref().is_some_and(|b| b.succeeded(spec.epsilon())) {
            break;
        }
    }

    let best = best.expect("at least one restart ran");
    let eps = spec.epsilon();
    let status = if best.succeeded(eps) {
        PlanStatus::Success
    } else if budget_exhausted {
        PlanStatus::BudgetExhausted
    } else if !best.feasible {
        PlanStatus::Infeasible
    } else {
        PlanStatus::RobustnessBelowEpsilon
    };
    let Candidate { q, eval, robustness, restart, .. } = best;
    let smooth = smooth_robustness(spec.resolved_formula(), &eval.trace, 0, cfg.report_temperature)?;
    Ok(PlanResult {
        status,
        decision: q,
        segments: eval.segments,
        trace: eval.trace,
        robustness,
        smooth_robustness: smooth,
        report_temperature: cfg.report_temperature,
        margins: eval.margins,
        diagnostics: Diagnostics { restarts: logs, best_restart: restart, wall_time: started.elapsed(), budget_exhausted },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::missions::Environment;
    use crate::planner::{validate_plan, Agent, Timing};
    use crate::primitives::KinematicBounds;
    use crate::stl::{parse_formula, Aabb};

    fn single(formula: &str, goal: Aabb) -> MissionSpec {
        let env = Environment::new(Aabb::new(Vec3::new(-10.0, -10.0, 0.0), Vec3::new(10.0, 10.0, 5.0)).unwrap(), 0.5)
            .with_goal("goal", goal);
        MissionSpec::new(
            vec![Agent::at_rest("d1", Vec3::new(0.0, 0.0, 1.0))],
            env,
            parse_formula(formula).unwrap(),
            Timing { duration: 10.0, ts: 0.1, knots: 5 },
            KinematicBounds::new(3.0, 5.0).unwrap(),
            0.01,
        )
        .unwrap()
    }

    #[test]
    fn reaches_a_single_goal() {
        let s = single("F[0,10] in(d1,goal) && G[0,10] in(d1,ws)", Aabb::cube(Vec3::new(5.0, 5.0, 2.0), 1.0).unwrap());
        let r = plan(&s, &PlannerConfig::default()).unwrap();
        assert_eq!(r.status, PlanStatus::Success);
        let v = validate_plan(&r, &s).unwrap();
        assert!(v.consistent && v.success && v.satisfied && v.pinned);
        assert!(v.robustness >= 0.01);
        assert_eq!(v.robustness, r.robustness);
    }

    #[test]
    fn hover_already_satisfies() {
        let s = single("G[0,10] in(d1,ws)", Aabb::cube(Vec3::new(5.0, 5.0, 2.0), 1.0).unwrap());
        let r = plan(&s, &PlannerConfig::default()).unwrap();
        assert_eq!(r.status, PlanStatus::Success);
        assert_eq!(r.diagnostics.total_iterations(), 0);
        assert_eq!(r.diagnostics.restarts_run(), 1);
    }

    #[test]
    fn unreachable_goal_is_not_success() {
        let s = single(
            "F[0,10] in(d1,goal) && G[0,10] in(d1,ws)",
            Aabb::cube(Vec3::new(20.0, 0.0, 2.0), 1.0).unwrap(),
        );
        let cfg = PlannerConfig { restarts: 2, max_iterations: 60, ..Default::default() };
        let r = plan(&s, &cfg).unwrap();
        assert_ne!(r.status, PlanStatus::Success);
        assert!(r.robustness < 0.0);
        assert!(validate_plan(&r, &s).unwrap().consistent);
    }

    #[test]
    fn accepted_objective_is_monotone_per_phase() {
        let s = single("F[0,10] in(d1,goal) && G[0,10] in(d1,ws)", Aabb::cube(Vec3::new(20.0, 0.0, 2.0), 1.0).unwrap());
        let cfg = PlannerConfig { restarts: 2, max_iterations: 40, ..Default::default() };
        let r = plan(&s, &cfg).unwrap();
        for log in &r.diagnostics.restarts {
            for w in log.objective.windows(2).zip(log.temperature.windows(2)) {
                if w.1[0] == w.1[1] {
                    assert!(w.0[1] >= w.0[0]);
                }
            }
        }
    }

    #[test]
    fn same_seed_same_plan() {
        let s = single("F[0,10] in(d1,goal) && G[0,10] in(d1,ws)", Aabb::cube(Vec3::new(5.0, -5.0, 2.0), 1.0).unwrap());
        let cfg = PlannerConfig { seed: 9, restarts: 3, stop_on_success: false, max_iterations: 30, batch_size: 2, ..Default::default() };
        let a = plan(&s, &cfg).unwrap();
        let b = plan(&s, &cfg).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.decision, b.decision);
    }
}
