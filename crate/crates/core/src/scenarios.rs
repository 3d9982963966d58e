//! Ready-made desk-scale missions used by the examples, the sample mission
//! files and the end-to-end tests. All numbers here are illustrative choices.

use crate::missions::{powerline_inspection, reach_avoid, Environment};
use crate::planner::{Agent, MissionSpec, Timing};
use crate::primitives::KinematicBounds;
use crate::stl::Aabb;
use crate::{Result, Vec3};

fn cube(x: f64, y: f64, z: f64, side: f64) -> Aabb {
    Aabb::cube(Vec3::new(x, y, z), side).expect("positive side")
}

/// Two drones swapping diagonal corners around a central column, with
/// `delta_min = 0.5`, `T = 10`, `Ts = 0.1` and five knots per agent.
pub fn crossing_drones() -> Result<MissionSpec> {
    let env = Environment::new(Aabb::new(Vec3::new(-6.0, -6.0, 0.0), Vec3::new(6.0, 6.0, 5.0))?, 0.5)
        .with_goal("g1", cube(4.0, 4.0, 2.0, 1.0))
        .with_goal("g2", cube(-4.0, 4.0, 2.0, 1.0))
        .with_obstacle("column", Aabb::new(Vec3::new(-1.0, -1.0, 0.0), Vec3::new(1.0, 1.0, 5.0))?);
    let assignment = [("d1".to_string(), "g1".to_string()), ("d2".to_string(), "g2".to_string())];
    let formula = reach_avoid(&env, &assignment, 10.0)?;
    MissionSpec::new(
        vec![Agent::at_rest("d1", Vec3::new(-4.0, -4.0, 2.0)), Agent::at_rest("d2", Vec3::new(4.0, -4.0, 2.0))],
        env,
        formula,
        Timing { duration: 10.0, ts: 0.1, knots: 5 },
        KinematicBounds::new(3.0, 5.0)?,
        0.01,
    )
}

/// Mission time of [`powerline_fleet`]; the trajectory spans `1.5` times this.
pub const POWERLINE_MISSION_TIME: f64 = 10.0;

/// Four drones in two inspection groups: `d1`, `d2` visit poles 1 and 4,
/// `d3`, `d4` hold at pole 2 until they reach pole 3. Poles 2 and 3 overlap.
pub fn powerline_fleet() -> Result<MissionSpec> {
    let env = Environment::new(Aabb::new(Vec3::new(-8.0, -6.0, 0.0), Vec3::new(8.0, 6.0, 5.0))?, 0.5)
        .with_poles(vec![
            cube(-3.0, 2.0, 2.5, 2.0),
            cube(-0.5, -3.0, 2.5, 2.0),
            cube(0.5, -3.0, 2.5, 2.0),
            cube(3.0, 2.0, 2.5, 2.0),
        ]);
    let names = ["d1", "d2", "d3", "d4"];
    let formula = powerline_inspection(&env, &names, POWERLINE_MISSION_TIME)?;
    let starts = [Vec3::new(-1.0, 4.0, 1.0), Vec3::new(1.0, 4.0, 1.0), Vec3::new(-1.0, -0.5, 1.0), Vec3::new(1.0, -0.5, 1.0)];
    MissionSpec::new(
        names.iter().zip(starts).map(|(n, p)| Agent::at_rest(*n, p)).collect(),
        env,
        formula,
        Timing { duration: 1.5 * POWERLINE_MISSION_TIME, ts: 0.1, knots: 10 },
        KinematicBounds::new(3.0, 5.0)?,
        0.01,
    )
}
