use serde::Serialize;

use super::solve::{PlanResult, PlanStatus};
use super::spec::MissionSpec;
use crate::primitives::{check_feasibility, solve_segment, FeasibilityReport};
use crate::robustness::{boolean_satisfaction, robustness, Trace};
use crate::{Error, Result};

/// Exact re-check of a trajectory against its mission.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub robustness: f64,
    pub satisfied: bool,
    /// `[agent][segment]`, from primitives re-solved between the knot samples.
    pub margins: Vec<Vec<FeasibilityReport>>,
    pub feasible: bool,
    /// Smallest distance between any two agents over all samples.
    pub min_separation: Option<f64>,
    /// Every agent's first sample equals its initial state.
    pub pinned: bool,
    /// `robustness >= epsilon && feasible`.
    pub success: bool,
    /// Whether a stored status agrees with `success`; `true` when there is
    /// no stored status.
    pub consistent: bool,
}

fn check_shape(trace: &Trace, spec: &MissionSpec) -> Result<()> {
    if trace.num_agents() != spec.agents().len() {
        return Err(Error::DimensionMismatch { expected: spec.agents().len(), got: trace.num_agents() });
    }
    if trace.len() != spec.samples() + 1 {
        return Err(Error::DimensionMismatch { expected: spec.samples() + 1, got: trace.len() });
    }
    if trace.ts() != spec.ts() {
        return Err(Error::InvalidTrace(format!("sampling period {} differs from the mission's {}", trace.ts(), spec.ts())));
    }
    Ok(())
}

/// Validates a bare trace, e.g. one re-read from disk. Kinematic margins are
/// taken from primitives re-solved between the states at knot times.
pub fn validate_trace(trace: &Trace, spec: &MissionSpec) -> Result<ValidationReport> {
    check_shape(trace, spec)?;
    let f = spec.resolved_formula();
    let rho = robustness(f, trace, 0)?;
    let satisfied = boolean_satisfaction(f, trace, 0)?;
    let stride = spec.layout().samples_per_segment;
    let tau = spec.segment_duration();
    let bounds = spec.bounds();
    let margins = (0..trace.num_agents())
        .map(|a| {
            let states = trace.agent(a);
            (0..spec.knots())
                .map(|s| {
                    let seg = solve_segment(&states[s * stride], &states[(s + 1) * stride], tau)?;
                    Ok(check_feasibility(&seg, &bounds))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let feasible = margins.iter().flatten().all(|m| m.feasible);
    let pinned = spec.agents().iter().enumerate().all(|(a, agent)| trace.agent(a)[0] == agent.initial);
    let success = rho >= spec.epsilon() && feasible;
    Ok(ValidationReport {
        robustness: rho,
        satisfied,
        margins,
        feasible,
        min_separation: trace.min_pairwise_distance(),
        pinned,
        success,
        consistent: true,
    })
}

/// Recomputes a plan's claims with exact semantics.
pub fn validate_plan(result: &PlanResult, spec: &MissionSpec) -> Result<ValidationReport> {
    let mut report = validate_trace(&result.trace, spec)?;
    report.consistent = (result.status == PlanStatus::Success) == report.success;
    Ok(report)
}
