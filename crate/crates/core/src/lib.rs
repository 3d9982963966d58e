//! Signal Temporal Logic mission planning for fleets of quad-rotors.
//!
//! Missions are written as STL formulas over named agents and box-shaped
//! regions, either in a small textual DSL ([`stl::parse_formula`]) or through
//! the builders in [`missions`]. The [`planner`] searches over the knot
//! states of per-agent minimum-jerk splines ([`primitives`]) to maximize a
//! smooth version of the formula's robustness ([`robustness`]), then checks
//! the result with the exact, non-smooth semantics and the kinematic bounds.
//!
//! ```no_run
//! use stlplan::cli::mission_file::load_mission;
//! use stlplan::planner::{plan, PlannerConfig};
//!
//! let loaded = load_mission("mission.toml").unwrap();
//! let result = plan(&loaded.spec, &loaded.config).unwrap();
//! println!("{:?} rho = {}", result.status, result.robustness);
//! ```
//!
//! Runnable walkthroughs of each capability live in `examples/`; the
//! `stlplan` binary is a thin wrapper around [`cli::main_with_args`].

pub mod cli;
mod error;
pub mod missions;
pub mod planner;
pub mod primitives;
pub mod robustness;
pub mod scenarios;
pub mod stl;

pub use error::{Error, Result};
pub use stl::Vec3;
