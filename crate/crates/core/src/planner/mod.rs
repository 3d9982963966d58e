//! Trajectory optimization: decision vectors of spline knots, the penalized
//! smooth-robustness objective, a multi-start ascent solver, and exact
//! post-hoc validation.

mod decision;
mod objective;
mod solve;
mod spec;
mod validate;

pub use decision::{assemble_trajectory, sample_segments, segments, DecisionVector, KNOT_DOF};
pub use objective::{objective, ObjectiveValue};
pub use solve::{plan, Diagnostics, PlanResult, PlanStatus, PlannerConfig, RestartLog, TemperatureSchedule};
pub use spec::{Agent, MissionSpec, Timing};
pub use validate::{validate_plan, validate_trace, ValidationReport};
