//! TOML mission files.
//!
//! ```toml
//! [[agents]]
//! name = "d1"
//! position = [-4.0, -4.0, 2.0]
//! # velocity and acceleration default to zero
//!
//! [environment]
//! delta_min = 0.5
//! workspace = { lo = [-6.0, -6.0, 0.0], hi = [6.0, 6.0, 5.0] }
//! goals = { g1 = { center = [4.0, 4.0, 2.0], side = 1.0 } }
//! obstacles = { column = { lo = [-1.0, -1.0, 0.0], hi = [1.0, 1.0, 5.0] } }
//! # poles = [ {...}, {...}, {...}, {...} ]   (power-line missions)
//!
//! [mission]
//! builtin = "reach_avoid"          # or "powerline"
//! assignment = { d1 = "g1" }       # reach_avoid only
//! # time = 10.0                    # mission time; see below
//! # formula = "F[0,10] in(d1,g1)"  # instead of builtin
//!
//! [timing]
//! T = 10.0
//! Ts = 0.1      # default 0.1
//! knots = 5     # default 5
//!
//! [bounds]
//! vmax = 3.0
//! amax = 5.0
//!
//! [solver]      # every key optional
//! epsilon = 0.01
//! restarts = 8
//! max_iters = 300
//! seed = 0
//! temperature = 25.0   # also fixes the optimizer temperature when given
//! lambda = 100.0
//! time_budget_s = 60.0
//! ```
//!
//! The mission time of a builtin defaults to `T` for `reach_avoid` and to
//! `2T/3` for `powerline`, whose formula looks `1.5` mission times ahead.
//! Regions are either `{ lo, hi }` or `{ center, side }`. Errors name the
//! offending key as `section.key`.

use std::path::Path;
use std::time::Duration;

use indexmap::IndexMap;
use serde::Deserialize;

use crate::missions::{powerline_inspection, reach_avoid, Environment};
use crate::planner::{Agent, MissionSpec, PlannerConfig, TemperatureSchedule, Timing};
use crate::primitives::{KinematicBounds, KnotState};
use crate::robustness::Temperature;
use crate::stl::{parse_formula, Aabb, Atom, Formula};

#[derive(Debug, thiserror::Error)]
pub enum MissionFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error(transparent)]
    Spec(#[from] crate::Error),
}

fn field(path: &str, message: impl ToString) -> MissionFileError {
    MissionFileError::Field { path: path.to_string(), message: message.to_string() }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    agents: Vec<AgentEntry>,
    environment: EnvironmentEntry,
    mission: MissionEntry,
    timing: TimingEntry,
    bounds: BoundsEntry,
    #[serde(default)]
    solver: SolverEntry,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentEntry {
    name: String,
    position: [f64; 3],
    #[serde(default)]
    velocity: [f64; 3],
    #[serde(default)]
    acceleration: [f64; 3],
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum RegionEntry {
    Corners { lo: [f64; 3], hi: [f64; 3] },
    Cube { center: [f64; 3], side: f64 },
}

impl RegionEntry {
    fn build(self, path: &str) -> Result<Aabb, MissionFileError> {
        let b = match self {
            Self::Corners { lo, hi } => Aabb::new(lo.into(), hi.into()),
            Self::Cube { center, side } => Aabb::cube(center.into(), side),
        };
        b.map_err(|e| field(path, e))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvironmentEntry {
    workspace: RegionEntry,
    delta_min: f64,
    #[serde(default)]
    goals: IndexMap<String, RegionEntry>,
    #[serde(default)]
    obstacles: IndexMap<String, RegionEntry>,
    #[serde(default)]
    poles: Vec<RegionEntry>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Builtin {
    ReachAvoid,
    Powerline,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MissionEntry {
    builtin: Option<Builtin>,
    formula: Option<String>,
    #[serde(default)]
    assignment: IndexMap<String, String>,
    time: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TimingEntry {
    #[serde(rename = "T")]
    duration: f64,
    #[serde(rename = "Ts", default = "default_ts")]
    ts: f64,
    #[serde(default = "default_knots")]
    knots: usize,
}

fn default_ts() -> f64 {
    0.1
}

fn default_knots() -> usize {
    5
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsEntry {
    vmax: f64,
    amax: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverEntry {
    epsilon: Option<f64>,
    restarts: Option<usize>,
    max_iters: Option<usize>,
    seed: Option<u64>,
    temperature: Option<f64>,
    lambda: Option<f64>,
    time_budget_s: Option<f64>,
}

pub const DEFAULT_EPSILON: f64 = 0.01;
pub const DEFAULT_TEMPERATURE: f64 = 25.0;

/// A mission file turned into a planning problem and solver settings.
#[derive(Debug, Clone)]
pub struct LoadedMission {
    pub spec: MissionSpec,
    pub config: PlannerConfig,
}

pub fn load_mission(path: impl AsRef<Path>) -> Result<LoadedMission, MissionFileError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| MissionFileError::Io { path: path.display().to_string(), source })?;
    parse_mission(&text)
}

pub fn parse_mission(text: &str) -> Result<LoadedMission, MissionFileError> {
    let de = toml::Deserializer::new(text);
    let file: File = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let message = e.inner().message().to_string();
        field(if path == "." { "(root)" } else { &path }, message)
    })?;
    build(file)
}

fn build(file: File) -> Result<LoadedMission, MissionFileError> {
    let File { agents, environment, mission, timing, bounds, solver } = file;

    let mut env = Environment::new(environment.workspace.build("environment.workspace")?, environment.delta_min);
    for (name, r) in environment.goals {
        let b = r.build(&format!("environment.goals.{name}"))?;
        env = env.with_goal(name, b);
    }
    for (name, r) in environment.obstacles {
        let b = r.build(&format!("environment.obstacles.{name}"))?;
        env = env.with_obstacle(name, b);
    }
    let poles = environment
        .poles
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.build(&format!("environment.poles[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    env = env.with_poles(poles);
    env.check().map_err(|e| field("environment", e))?;

    let agents: Vec<Agent> = agents
        .into_iter()
        .map(|a| Agent::new(a.name, KnotState::new(a.position.into(), a.velocity.into(), a.acceleration.into())))
        .collect();
    let names: Vec<&str> = agents.iter().map(|a| a.name.as_str()).collect();

    let formula = mission_formula(&mission, &env, &names, timing.duration)?;
    let bounds = KinematicBounds::new(bounds.vmax, bounds.amax).map_err(|e| field("bounds", e))?;
    let epsilon = solver.epsilon.unwrap_or(DEFAULT_EPSILON);
    let spec = MissionSpec::new(
        agents,
        env,
        formula,
        Timing { duration: timing.duration, ts: timing.ts, knots: timing.knots },
        bounds,
        epsilon,
    )?;
    let config = solver_config(&solver)?;
    Ok(LoadedMission { spec, config })
}

fn mission_formula(
    mission: &MissionEntry,
    env: &Environment,
    agents: &[&str],
    duration: f64,
) -> Result<Formula<Atom>, MissionFileError> {
    match (mission.builtin, &mission.formula) {
        (Some(_), Some(_)) => Err(field("mission", "give either `builtin` or `formula`, not both")),
        (None, None) => Err(field("mission", "missing `builtin` or `formula`")),
        (None, Some(text)) => {
            if !mission.assignment.is_empty() || mission.time.is_some() {
                return Err(field("mission", "`assignment` and `time` only apply to builtin missions"));
            }
            parse_formula(text).map_err(|e| field("mission.formula", e))
        }
        (Some(Builtin::ReachAvoid), None) => {
            let time = mission.time.unwrap_or(duration);
            let mut assignment = Vec::with_capacity(agents.len());
            for agent in agents {
                let goal = mission
                    .assignment
                    .get(*agent)
                    .ok_or_else(|| field("mission.assignment", format!("no goal assigned to agent `{agent}`")))?;
                assignment.push((agent.to_string(), goal.clone()));
            }
            if let Some(extra) = mission.assignment.keys().find(|k| !agents.contains(&k.as_str())) {
                return Err(field(&format!("mission.assignment.{extra}"), format!("unknown agent `{extra}`")));
            }
            reach_avoid(env, &assignment, time).map_err(|e| field("mission", e))
        }
        (Some(Builtin::Powerline), None) => {
            if !mission.assignment.is_empty() {
                return Err(field("mission.assignment", "powerline missions assign groups by agent order"));
            }
            let time = mission.time.unwrap_or(duration * 2.0 / 3.0);
            powerline_inspection(env, agents, time).map_err(|e| field("mission", e))
        }
    }
}

fn solver_config(solver: &SolverEntry) -> Result<PlannerConfig, MissionFileError> {
    let mut cfg = PlannerConfig::default();
    let temperature = |k: f64| Temperature::new(k).map_err(|e| field("solver.temperature", e));
    cfg.report_temperature = temperature(solver.temperature.unwrap_or(DEFAULT_TEMPERATURE))?;
    if let Some(k) = solver.temperature {
        cfg.temperature = TemperatureSchedule::Fixed(temperature(k)?);
    }
    if let Some(r) = solver.restarts {
        if r == 0 {
            return Err(field("solver.restarts", "must be at least 1"));
        }
        cfg.restarts = r;
    }
    if let Some(m) = solver.max_iters {
        cfg.max_iterations = m;
    }
    if let Some(s) = solver.seed {
        cfg.seed = s;
    }
    if let Some(l) = solver.lambda {
        if !(l >= 0.0 && l.is_finite()) {
            return Err(field("solver.lambda", "must be finite and non-negative"));
        }
        cfg.penalty_weight = l;
    }
    if let Some(b) = solver.time_budget_s {
        cfg.time_budget = Duration::try_from_secs_f64(b).map_err(|e| field("solver.time_budget_s", e))?;
    }
    Ok(cfg)
}
