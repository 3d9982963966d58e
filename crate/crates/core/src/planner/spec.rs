use crate::missions::Environment;
use crate::primitives::{position_weights, KinematicBounds, KnotState};
use crate::robustness::snap;
use crate::stl::{Atom, Formula, Predicate, Vec3};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub name: String,
    pub initial: KnotState,
}

impl Agent {
    pub fn new(name: impl Into<String>, initial: KnotState) -> Self {
        Self { name: name.into(), initial }
    }

    pub fn at_rest(name: impl Into<String>, position: Vec3) -> Self {
        Self::new(name, KnotState::at_rest(position))
    }
}

/// Trajectory duration `T`, sampling period `Ts`, and spline knot count `M`
/// (segments per agent).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    pub duration: f64,
    pub ts: f64,
    pub knots: usize,
}

/// Where each trace sample falls on the per-agent spline.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SampleLayout {
    pub samples_per_segment: usize,
    /// Position weights over `(p0, v0, a0, pf, vf, af)` per local sample
    /// index `0 ..= samples_per_segment`.
    pub weights: Vec<[f64; 6]>,
}

impl SampleLayout {
    /// `(segment, local index)` of global sample `n`.
    pub fn locate(&self, n: usize, segments: usize) -> (usize, usize) {
        let s = (n / self.samples_per_segment).min(segments - 1);
        (s, n - s * self.samples_per_segment)
    }
}

/// A fully validated planning problem: everything the optimizer needs, with
/// the formula already bound to agent indices and region boxes.
#[derive(Debug, Clone)]
pub struct MissionSpec {
    agents: Vec<Agent>,
    environment: Environment,
    formula: Formula<Atom>,
    resolved: Formula<Predicate>,
    timing: Timing,
    samples: usize,
    bounds: KinematicBounds,
    epsilon: f64,
    layout: SampleLayout,
}

impl MissionSpec {
    pub fn new(
        agents: Vec<Agent>,
        environment: Environment,
        formula: Formula<Atom>,
        timing: Timing,
        bounds: KinematicBounds,
        epsilon: f64,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidSpec(msg));
        if agents.is_empty() {
            return invalid("mission needs at least one agent".into());
        }
        for (i, a) in agents.iter().enumerate() {
            if agents[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::DuplicateAgent(a.name.clone()));
            }
            if !a.initial.is_finite() {
                return invalid(format!("initial state of `{}` is not finite", a.name));
            }
        }
        let Timing { duration, ts, knots } = timing;
        if !(duration.is_finite() && duration > 0.0) {
            return invalid(format!("duration must be positive, got {duration}"));
        }
        if !(ts.is_finite() && ts > 0.0) {
            return invalid(format!("sampling period must be positive, got {ts}"));
        }
        if knots == 0 {
            return invalid("at least one spline segment is required".into());
        }
        let Some(samples) = snap(duration / ts) else {
            return invalid(format!("duration {duration} is not a multiple of the sampling period {ts}"));
        };
        let samples = samples as usize;
        if samples == 0 || !samples.is_multiple_of(knots) {
            return invalid(format!(
                "{samples} sampling intervals do not split evenly into {knots} segments"
            ));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return invalid(format!("epsilon must be positive, got {epsilon}"));
        }
        let horizon = formula.horizon();
        if horizon > duration * (1.0 + 1e-12) {
            return Err(Error::HorizonExceedsDuration { horizon, duration });
        }
        let names: Vec<&str> = agents.iter().map(|a| a.name.as_str()).collect();
        let resolved = formula.resolve(&names, |r| environment.region(r))?;

        let samples_per_segment = samples / knots;
        let tau = duration / knots as f64;
        let weights = (0..=samples_per_segment)
            .map(|i| position_weights(i as f64 * ts, tau))
            .collect();
        Ok(Self {
            agents,
            environment,
            formula,
            resolved,
            timing,
            samples,
            bounds,
            epsilon,
            layout: SampleLayout { samples_per_segment, weights },
        })
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent_names(&self) -> Vec<&str> {
        self.agents.iter().map(|a| a.name.as_str()).collect()
    }

    pub fn environment(&self) -> &Environment {
        &self.environment
    }

    pub fn formula(&self) -> &Formula<Atom> {
        &self.formula
    }

    pub fn resolved_formula(&self) -> &Formula<Predicate> {
        &self.resolved
    }

    pub fn timing(&self) -> Timing {
        self.timing
    }

    pub fn duration(&self) -> f64 {
        self.timing.duration
    }

    pub fn ts(&self) -> f64 {
        self.timing.ts
    }

    pub fn knots(&self) -> usize {
        self.timing.knots
    }

    /// Number of sampling intervals `N = T / Ts`; traces have `N + 1` samples.
    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn segment_duration(&self) -> f64 {
        self.timing.duration / self.timing.knots as f64
    }

    pub fn bounds(&self) -> KinematicBounds {
        self.bounds
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub(crate) fn layout(&self) -> &SampleLayout {
        &self.layout
    }

    /// Same mission with a different minimum robustness.
    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidSpec(format!("epsilon must be positive, got {epsilon}")));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    /// Centroid of the first goal or pole region the formula asks `agent` to
    /// be inside of.
    pub fn first_target(&self, agent: usize) -> Option<Vec3> {
        let name = &self.agents[agent].name;
        self.formula.predicates().into_iter().find_map(|atom| match atom {
            Atom::Inside { agent: a, region } if a == name && self.environment.is_target(region) => {
                self.environment.region(region).map(|b| b.center())
            }
            _ => None,
        })
    }
}
