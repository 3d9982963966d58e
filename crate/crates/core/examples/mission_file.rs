//! Loads a TOML mission file, plans it, and writes the CSV, report and SVG
//! into a directory, the same way `stlplan plan` does.
//!
//! cargo run --release --example mission_file -- crates/core/missions/crossing.toml /tmp/out

use stlplan::cli::{self, PlanArgs};

fn main() {
    let mut args = std::env::args().skip(1);
    let mission = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/missions/crossing.toml").into());
    let out = args.next().unwrap_or_else(|| std::env::temp_dir().join("stlplan-example").display().to_string());
    let plan = PlanArgs {
        mission: mission.into(),
        out: out.clone().into(),
        seed: None,
        restarts: None,
        max_iters: None,
        temperature: None,
        epsilon: None,
        plot: true,
        validate_only: None,
    };
    let code = cli::run(&plan, &mut std::io::stdout(), &mut std::io::stderr());
    println!("outputs in {out}, exit code {code}");
    std::process::exit(code);
}
