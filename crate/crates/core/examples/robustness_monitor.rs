//! Monitors a recorded two-drone trace: Boolean verdict, exact robustness
//! at every sample, and the smooth value with its guaranteed gap.

use stlplan::primitives::KnotState;
use stlplan::robustness::{
    boolean_satisfaction, robustness, robustness_signal, smooth_robustness, smoothing_gap_bound, Temperature, Trace,
};
use stlplan::stl::{parse_formula, Aabb};
use stlplan::Vec3;

fn main() -> stlplan::Result<()> {
    // d1 flies along x at 1 m/s, d2 hovers at (3, 0.8, 1).
    let ts = 0.5;
    let d1 = (0..=12).map(|n| KnotState::new(Vec3::new(n as f64 * ts, 0.0, 1.0), Vec3::x(), Vec3::zeros()));
    let d2 = (0..=12).map(|_| KnotState::at_rest(Vec3::new(3.0, 0.8, 1.0)));
    let trace = Trace::new(ts, vec![d1.collect(), d2.collect()])?;

    let ws = Aabb::new(Vec3::new(-1.0, -2.0, 0.0), Vec3::new(7.0, 2.0, 3.0))?;
    let goal = Aabb::cube(Vec3::new(5.0, 0.0, 1.0), 1.0)?;
    let text = "F[0,6] in(d1,goal) && G[0,6] (in(d1,ws) && sep(d1,d2) >= 0.5)";
    let formula = parse_formula(text)?.resolve(&["d1", "d2"], |name| match name {
        "ws" => Some(ws),
        "goal" => Some(goal),
        _ => None,
    })?;

    println!("{text}");
    println!("satisfied: {}", boolean_satisfaction(&formula, &trace, 0)?);
    println!("robustness: {:.4}", robustness(&formula, &trace, 0)?);

    let safety = parse_formula("sep(d1,d2) >= 0.5")?.resolve(&["d1", "d2"], |_| None)?;
    let signal = robustness_signal(&safety, &trace, 0, trace.len() - 1)?;
    for (n, rho) in signal.iter().enumerate() {
        println!("  t = {:>4.1}  separation margin {rho:+.3}", trace.time(n));
    }

    for k in [5.0, 25.0, 1000.0] {
        let k = Temperature::new(k)?;
        let smooth = smooth_robustness(&formula, &trace, 0, k)?;
        let bound = smoothing_gap_bound(&formula, ts, k)?;
        println!("k = {:>6}: smooth {smooth:.4}, gap bound {bound:.4}", k.value());
    }
    Ok(())
}
