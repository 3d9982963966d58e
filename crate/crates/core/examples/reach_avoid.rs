//! Two drones swap corners around a central column without coming closer
//! than 0.5 m. Pass a seed as the first argument.

use stlplan::planner::{plan, validate_plan, PlannerConfig};
use stlplan::scenarios::crossing_drones;

fn main() -> stlplan::Result<()> {
    let seed = std::env::args().nth(1).map_or(0, |s| s.parse().expect("seed must be an integer"));
    let spec = crossing_drones()?;
    let result = plan(&spec, &PlannerConfig { seed, ..Default::default() })?;
    let report = validate_plan(&result, &spec)?;
    println!("status: {:?}", result.status);
    println!("exact robustness: {:.4}", report.robustness);
    println!("smooth robustness (k = {}): {:.4}", result.report_temperature.value(), result.smooth_robustness);
    println!("min separation: {:.3} m", report.min_separation.unwrap_or(f64::NAN));
    println!(
        "restarts: {}, iterations: {}, wall time: {:.2?}",
        result.diagnostics.restarts_run(),
        result.diagnostics.total_iterations(),
        result.diagnostics.wall_time
    );
    Ok(())
}
