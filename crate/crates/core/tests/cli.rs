use std::fs;
use std::path::{Path, PathBuf};

use stlplan::cli::export::read_csv;
use stlplan::cli::main_with_io;
use stlplan::cli::mission_file::load_mission;
use stlplan::planner::validate_trace;

fn mission(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("missions").join(name)
}

fn run(args: &[&str]) -> i32 {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    main_with_io(std::iter::once("stlplan").chain(args.iter().copied()), &mut out, &mut err)
}

fn report(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn satisfiable_mission_exits_zero_and_writes_outputs() {
    let out = tempfile::tempdir().unwrap();
    let path = mission("crossing.toml");
    let code = run(&["plan", path.to_str().unwrap(), "--out", out.path().to_str().unwrap(), "--plot"]);
    assert_eq!(code, 0);
    let csv = fs::read_to_string(out.path().join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,agent,px,py,pz,vx,vy,vz,ax,ay,az"));
    assert_eq!(csv.lines().count(), 1 + 101 * 2);
    let svg = fs::read_to_string(out.path().join("trajectory.svg")).unwrap();
    assert_eq!(svg.matches("<path").count(), 2);

    // Reader-side re-validation agrees with the written report.
    let spec = load_mission(&path).unwrap().spec;
    let trace = read_csv(csv.as_bytes(), &spec).unwrap();
    let v = validate_trace(&trace, &spec).unwrap();
    let written = report(out.path())["robustness"].as_f64().unwrap();
    assert!((v.robustness - written).abs() <= 1e-9);
    assert!(v.success);
}

#[test]
fn validate_only_reads_back_a_csv() {
    let out = tempfile::tempdir().unwrap();
    let path = mission("patrol.toml");
    assert_eq!(run(&["plan", path.to_str().unwrap(), "--out", out.path().to_str().unwrap()]), 0);
    let csv = out.path().join("trajectory.csv");
    let check = tempfile::tempdir().unwrap();
    let code = run(&[
        "plan",
        path.to_str().unwrap(),
        "--out",
        check.path().to_str().unwrap(),
        "--validate-only",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(report(check.path())["robustness"], report(out.path())["robustness"]);
}

#[test]
fn unsatisfiable_mission_exits_two_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(mission("patrol.toml")).unwrap().replace(
        "formula = \"G[0,10] (in(d1,ws) && -d1.pz >= -3) && F[0,4] in(d1,a) && F[0,5] (in(d1,a) && F[0,5] in(d1,b))\"",
        "formula = \"G[0,10] in(d1,ws) && F[0,10] -d1.pz >= 6\"",
    );
    let file = dir.path().join("bad.toml");
    fs::write(&file, text).unwrap();
    let out = dir.path().join("out");
    let code = run(&["plan", file.to_str().unwrap(), "--out", out.to_str().unwrap(), "--restarts", "2", "--max-iters", "50"]);
    assert_eq!(code, 2);
    assert_ne!(report(&out)["status"], "Success");
}

#[test]
fn usage_errors_exit_one() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(main_with_io(["stlplan", "plan", "/nonexistent/mission.toml"], &mut out, &mut err), 1);
    assert!(String::from_utf8(err).unwrap().contains("/nonexistent/mission.toml"));
    assert_eq!(run(&["plan", "/nonexistent/mission.toml"]), 1);
    assert_eq!(run(&["plan"]), 1);
    assert_eq!(run(&["fly"]), 1);
    let path = mission("crossing.toml");
    assert_eq!(run(&["plan", path.to_str().unwrap(), "--temperature=-1"]), 1);
}

#[test]
fn same_seed_gives_identical_csv() {
    let path = mission("crossing.toml");
    let csv = |seed: &str| {
        let out = tempfile::tempdir().unwrap();
        let args = ["plan", path.to_str().unwrap(), "--out", out.path().to_str().unwrap(), "--seed", seed, "--restarts", "3"];
        assert_eq!(run(&args), 0);
        fs::read(out.path().join("trajectory.csv")).unwrap()
    };
    assert_eq!(csv("11"), csv("11"));
}

#[test]
fn sample_missions_load() {
    for name in ["crossing.toml", "powerline.toml", "patrol.toml"] {
        let m = load_mission(mission(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(m.spec.samples() > 0);
    }
}
