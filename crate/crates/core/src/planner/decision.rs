use super::spec::MissionSpec;
use crate::primitives::{solve_segment, KnotState, QuinticSegment};
use crate::robustness::Trace;
use crate::stl::Vec3;
use crate::{Error, Result};

/// Values per knot: position, velocity and acceleration, three axes each.
pub const KNOT_DOF: usize = 9;

/// Free spline parameters: the knot states at segment boundaries `1..=M`
/// for every agent. Knot 0 is each agent's initial state and is not part of
/// the vector.
///
/// Layout is agent-major, then knot, then `[p, v, a]` by axis.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionVector {
    values: Vec<f64>,
    agents: usize,
    knots: usize,
}

impl DecisionVector {
    pub fn dimension(spec: &MissionSpec) -> usize {
        spec.agents().len() * spec.knots() * KNOT_DOF
    }

    pub fn from_values(spec: &MissionSpec, values: Vec<f64>) -> Result<Self> {
        let expected = Self::dimension(spec);
        if values.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonfiniteInput);
        }
        Ok(Self { values, agents: spec.agents().len(), knots: spec.knots() })
    }

    /// Every knot equal to the agent's initial position, at rest.
    pub fn hover(spec: &MissionSpec) -> Self {
        let mut q = Self {
            values: vec![0.0; Self::dimension(spec)],
            agents: spec.agents().len(),
            knots: spec.knots(),
        };
        for (a, agent) in spec.agents().iter().enumerate() {
            for m in 1..=spec.knots() {
                q.set_knot(a, m, &KnotState::at_rest(agent.initial.p));
            }
        }
        q
    }

    pub(crate) fn offset(&self, agent: usize, knot: usize) -> usize {
        debug_assert!(knot >= 1 && knot <= self.knots);
        (agent * self.knots + knot - 1) * KNOT_DOF
    }

    /// State of knot `knot` in `1..=M`.
    pub fn knot(&self, agent: usize, knot: usize) -> KnotState {
        let o = self.offset(agent, knot);
        let v = &self.values[o..o + KNOT_DOF];
        KnotState {
            p: Vec3::new(v[0], v[1], v[2]),
            v: Vec3::new(v[3], v[4], v[5]),
            a: Vec3::new(v[6], v[7], v[8]),
        }
    }

    pub fn set_knot(&mut self, agent: usize, knot: usize, state: &KnotState) {
        let o = self.offset(agent, knot);
        let dst = &mut self.values[o..o + KNOT_DOF];
        dst[0..3].copy_from_slice(state.p.as_slice());
        dst[3..6].copy_from_slice(state.v.as_slice());
        dst[6..9].copy_from_slice(state.a.as_slice());
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check(&self, spec: &MissionSpec) -> Result<()> {
        let expected = Self::dimension(spec);
        if self.values.len() != expected || self.knots != spec.knots() {
            return Err(Error::DimensionMismatch { expected, got: self.values.len() });
        }
        Ok(())
    }
}

/// Solved spline segments, `[agent][segment]`.
pub fn segments(q: &DecisionVector, spec: &MissionSpec) -> Result<Vec<Vec<QuinticSegment>>> {
    q.check(spec)?;
    let tau = spec.segment_duration();
    spec.agents()
        .iter()
        .enumerate()
        .map(|(a, agent)| {
            let mut from = agent.initial;
            (1..=spec.knots())
                .map(|m| {
                    let to = q.knot(a, m);
                    let seg = solve_segment(&from, &to, tau);
                    from = to;
                    seg
                })
                .collect()
        })
        .collect()
}

/// Samples per-agent segments at `Ts` over `[0, T]`; knot samples come from
/// the segment that starts there, the final sample from the last segment.
pub fn sample_segments(segments: &[Vec<QuinticSegment>], spec: &MissionSpec) -> Result<Trace> {
    let layout = spec.layout();
    let n = spec.samples();
    let states = segments
        .iter()
        .map(|segs| {
            (0..=n)
                .map(|k| {
                    let (s, local) = layout.locate(k, segs.len());
                    segs[s].state(local as f64 * spec.ts())
                })
                .collect()
        })
        .collect();
    Trace::new(spec.ts(), states)
}

/// The trajectory generator: decision vector to sampled multi-agent trace.
pub fn assemble_trajectory(q: &DecisionVector, spec: &MissionSpec) -> Result<Trace> {
    sample_segments(&segments(q, spec)?, spec)
}
