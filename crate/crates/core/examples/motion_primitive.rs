//! A minimum-jerk segment between two full states: coefficients, exact
//! velocity and acceleration peaks, and a check against kinematic bounds.

use stlplan::primitives::{check_feasibility, sample_segment, segment_extrema, solve_segment, KinematicBounds, KnotState};
use stlplan::Vec3;

fn main() -> stlplan::Result<()> {
    // Unit rest-to-rest move: peak speed 1.875 and peak acceleration 10/sqrt(3).
    let unit = solve_segment(&KnotState::at_rest(Vec3::zeros()), &KnotState::at_rest(Vec3::x()), 1.0)?;
    let e = segment_extrema(&unit);
    println!("x coefficients: {:?}", unit.coefficients(0));
    println!("peak speed {:.9} (1.875), peak acceleration {:.9} ({:.9})", e.max_speed[0], e.max_accel[0], 10.0 / 3f64.sqrt());

    let start = KnotState::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(1.0, 0.0, 0.0), Vec3::zeros());
    let end = KnotState::new(Vec3::new(4.0, 2.0, 2.0), Vec3::new(0.0, 1.0, 0.0), Vec3::new(0.0, 0.0, -1.0));
    let seg = solve_segment(&start, &end, 2.0)?;
    let reached = seg.state(seg.duration());
    println!("end residual: {:.2e}", (reached.p - end.p).norm() + (reached.v - end.v).norm() + (reached.a - end.a).norm());
    for (t, s) in sample_segment(&seg, 0.5, 0.0)? {
        println!("t = {t:.1}: p = {:.3?}", s.p.as_slice());
    }
    let report = check_feasibility(&seg, &KinematicBounds::new(3.0, 5.0)?);
    println!("feasible: {}, tightest margin {:.3}", report.feasible, report.min_margin());
    Ok(())
}
