//! Four drones split into two inspection groups along a power line.

use stlplan::planner::{plan, validate_plan, PlanStatus, PlannerConfig};
use stlplan::robustness::{robustness, Trace};
use stlplan::scenarios::{powerline_fleet, POWERLINE_MISSION_TIME};
use stlplan::stl::{Formula, Interval, Predicate};

fn main() -> stlplan::Result<()> {
    let seed = std::env::args().nth(1).map_or(0, |s| s.parse().expect("seed must be an integer"));
    let spec = powerline_fleet()?;
    let cfg = PlannerConfig { seed, time_budget: std::time::Duration::from_secs(300), ..Default::default() };
    let result = plan(&spec, &cfg)?;
    let report = validate_plan(&result, &spec)?;
    println!("status: {:?}", result.status);
    println!("exact robustness: {:.4}", report.robustness);
    println!(
        "restarts: {}, iterations: {}, wall time: {:.2?}",
        result.diagnostics.restarts_run(),
        result.diagnostics.total_iterations(),
        result.diagnostics.wall_time
    );
    if result.status == PlanStatus::Success {
        print_visits(&result.trace, &spec)?;
    }
    Ok(())
}

/// First sample at which each agent is inside each pole.
fn print_visits(trace: &Trace, spec: &stlplan::planner::MissionSpec) -> stlplan::Result<()> {
    let env = spec.environment();
    for agent in 0..trace.num_agents() {
        let mut line = format!("{}:", spec.agents()[agent].name);
        for (i, pole) in env.poles.iter().enumerate() {
            let first = trace.agent(agent).iter().position(|s| pole.contains(&s.p));
            if let Some(n) = first {
                line += &format!(" pole{} at {:.1}s", i + 1, trace.time(n));
            }
        }
        println!("{line}");
    }
    let stay = Formula::always(
        Interval::new(0.0, POWERLINE_MISSION_TIME)?,
        Formula::pred(Predicate::InsideBox { agent: 0, region: env.workspace }),
    );
    println!("d1 stays in the workspace with margin {:.3}", robustness(&stay, trace, 0)?);
    Ok(())
}
