use super::decision::{segments, DecisionVector};
use super::spec::MissionSpec;
use crate::primitives::{axis_coefficients, axis_extrema, FeasibilityReport, QuinticSegment};
use crate::robustness::smooth_value_and_gradient;
use crate::robustness::{Temperature, Trace};
use crate::Result;

/// Central-difference step for the kinematic penalty gradient.
const PENALTY_FD_STEP: f64 = 1e-6;
/// Segments whose every margin exceeds this have a locally zero penalty.
const PENALTY_ACTIVE_MARGIN: f64 = 1e-3;

/// Penalized smooth objective and its gradient over the decision vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveValue {
    pub value: f64,
    pub smooth_robustness: f64,
    /// Sum of squared kinematic violations over segments and axes
    /// (unweighted).
    pub penalty: f64,
    pub gradient: Vec<f64>,
}

pub(crate) struct Evaluation {
    pub objective: ObjectiveValue,
    pub trace: Trace,
    pub segments: Vec<Vec<QuinticSegment>>,
    pub margins: Vec<Vec<FeasibilityReport>>,
}

/// Boundary values `(start, end)` of one axis of segment `s` (0-based).
fn axis_boundary(q: &DecisionVector, spec: &MissionSpec, agent: usize, s: usize, axis: usize) -> ([f64; 3], [f64; 3]) {
    let start = if s == 0 { spec.agents()[agent].initial } else { q.knot(agent, s) };
    (start.axis(axis), q.knot(agent, s + 1).axis(axis))
}

fn axis_penalty(start: [f64; 3], end: [f64; 3], tau: f64, vmax: f64, amax: f64) -> (f64, f64, f64) {
    let c = axis_coefficients(start, end, tau);
    let (v, a) = axis_extrema(&c, tau);
    let (vm, am) = (vmax - v, amax - a);
    (vm, am, vm.min(0.0).powi(2) + am.min(0.0).powi(2))
}

pub(crate) fn evaluate(
    q: &DecisionVector,
    spec: &MissionSpec,
    k: Temperature,
    lambda: f64,
    with_gradient: bool,
) -> Result<Evaluation> {
    let segs = segments(q, spec)?;
    let trace = super::decision::sample_segments(&segs, spec)?;
    let positions = trace.position_table();
    let (rho, pos_grad) = smooth_value_and_gradient(spec.resolved_formula(), spec.ts(), &positions, 0, k.value())?;

    let mut gradient = vec![0.0; if with_gradient { q.len() } else { 0 }];
    let layout = spec.layout();
    let m = spec.knots();
    if with_gradient {
        for (n, row) in pos_grad.iter().enumerate() {
            let (s, local) = layout.locate(n, m);
            let w = &layout.weights[local];
            for (a, g) in row.iter().enumerate() {
                if *g == crate::Vec3::zeros() {
                    continue;
                }
                for (slot, weight) in w.iter().enumerate() {
                    let (knot, kind) = if slot < 3 { (s, slot) } else { (s + 1, slot - 3) };
                    if knot == 0 {
                        continue;
                    }
                    let base = q.offset(a, knot) + kind * 3;
                    for axis in 0..3 {
                        gradient[base + axis] += weight * g[axis];
                    }
                }
            }
        }
    }

    let bounds = spec.bounds();
    let (vmax, amax) = (bounds.vmax(), bounds.amax());
    let tau = spec.segment_duration();
    let mut penalty = 0.0;
    let mut margins = Vec::with_capacity(segs.len());
    for a in 0..segs.len() {
        let mut agent_margins = Vec::with_capacity(m);
        for s in 0..m {
            let mut report = FeasibilityReport {
                velocity_margin: [0.0; 3],
                acceleration_margin: [0.0; 3],
                feasible: true,
            };
            for axis in 0..3 {
                let (start, end) = axis_boundary(q, spec, a, s, axis);
                let (vm, am, pen) = axis_penalty(start, end, tau, vmax, amax);
                report.velocity_margin[axis] = vm;
                report.acceleration_margin[axis] = am;
                report.feasible &= vm >= 0.0 && am >= 0.0;
                penalty += pen;
                if !with_gradient || lambda == 0.0 || vm.min(am) > PENALTY_ACTIVE_MARGIN {
                    continue;
                }
                for slot in 0..6 {
                    let (knot, kind) = if slot < 3 { (s, slot) } else { (s + 1, slot - 3) };
                    if knot == 0 {
                        continue;
                    }
                    let perturbed = |delta: f64| {
                        let (mut lo, mut hi) = (start, end);
                        if slot < 3 {
                            lo[slot] += delta;
                        } else {
                            hi[slot - 3] += delta;
                        }
                        axis_penalty(lo, hi, tau, vmax, amax).2
                    };
                    let d = (perturbed(PENALTY_FD_STEP) - perturbed(-PENALTY_FD_STEP)) / (2.0 * PENALTY_FD_STEP);
                    gradient[q.offset(a, knot) + kind * 3 + axis] -= lambda * d;
                }
            }
            agent_margins.push(report);
        }
        margins.push(agent_margins);
    }

    Ok(Evaluation {
        objective: ObjectiveValue { value: rho - lambda * penalty, smooth_robustness: rho, penalty, gradient },
        trace,
        segments: segs,
        margins,
    })
}

/// `J(q) = smooth robustness of the assembled trace - lambda * penalty`,
/// with its gradient. The robustness part is differentiated exactly through
/// the (linear) trajectory generator; the penalty part by central
/// differences on the boundary values of violating segments.
pub fn objective(q: &DecisionVector, spec: &MissionSpec, k: Temperature, lambda: f64) -> Result<ObjectiveValue> {
    Ok(evaluate(q, spec, k, lambda, true)?.objective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::missions::Environment;
    use crate::planner::{Agent, Timing};
    use crate::primitives::KinematicBounds;
    use crate::robustness::smooth_robustness;
    use crate::stl::{parse_formula, Aabb};
    use crate::Vec3;
    use rand::{Rng, SeedableRng};

    fn spec(formula: &str, vmax: f64) -> MissionSpec {
        let env = Environment::new(Aabb::new(Vec3::repeat(-5.0), Vec3::repeat(5.0)).unwrap(), 0.5)
            .with_goal("goal", Aabb::cube(Vec3::new(3.0, 3.0, 2.0), 1.0).unwrap());
        MissionSpec::new(
            vec![Agent::at_rest("d1", Vec3::zeros()), Agent::at_rest("d2", Vec3::new(1.0, 0.0, 0.0))],
            env,
            parse_formula(formula).unwrap(),
            Timing { duration: 2.0, ts: 0.1, knots: 4 },
            KinematicBounds::new(vmax, 5.0).unwrap(),
            0.01,
        )
        .unwrap()
    }

    #[test]
    fn hover_in_workspace_is_distance_to_face_minus_bias() {
        let s = spec("G[0,2] in(d1,ws)", 3.0);
        let k = Temperature::new(25.0).unwrap();
        let j = objective(&DecisionVector::hover(&s), &s, k, 100.0).unwrap();
        let bias = ((s.knots() * s.samples()) as f64).ln() / 25.0;
        assert!(j.value <= 5.0 && j.value >= 5.0 - bias, "{}", j.value);
        assert_eq!(j.penalty, 0.0);
    }

    #[test]
    fn zero_weight_is_plain_smooth_robustness() {
        let s = spec("F[0,2] in(d1,goal) && G[0,2] sep(d1,d2) >= 0.5", 0.1);
        let k = Temperature::new(10.0).unwrap();
        let mut q = DecisionVector::hover(&s);
        let mut st = q.knot(0, 2);
        st.p = Vec3::new(2.0, 1.0, 0.5);
        q.set_knot(0, 2, &st);
        let j = objective(&q, &s, k, 0.0).unwrap();
        let trace = crate::planner::assemble_trajectory(&q, &s).unwrap();
        assert_eq!(j.value, smooth_robustness(s.resolved_formula(), &trace, 0, k).unwrap());
        assert!(j.penalty > 0.0);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let s = spec("F[0,2] in(d1,goal) && G[0,2] sep(d1,d2) >= 0.5", 1.0);
        let k = Temperature::new(10.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let values: Vec<f64> = (0..DecisionVector::dimension(&s)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let q = DecisionVector::from_values(&s, values.clone()).unwrap();
        let j = objective(&q, &s, k, 100.0).unwrap();
        assert!(j.penalty > 0.0);
        let h = 1e-5;
        for i in 0..values.len() {
            let mut v = values.clone();
            v[i] += h;
            let up = objective(&DecisionVector::from_values(&s, v.clone()).unwrap(), &s, k, 100.0).unwrap().value;
            v[i] -= 2.0 * h;
            let dn = objective(&DecisionVector::from_values(&s, v).unwrap(), &s, k, 100.0).unwrap().value;
            let fd = (up - dn) / (2.0 * h);
            let err = (fd - j.gradient[i]).abs() / fd.abs().max(j.gradient[i].abs()).max(1.0);
            assert!(err < 1e-3, "coordinate {i}: analytic {} fd {fd}", j.gradient[i]);
        }
    }
}
