//! Trajectory CSV and top-down SVG output.

use std::fmt::Write as _;
use std::io::{Read, Write};

use crate::missions::Environment;
use crate::planner::MissionSpec;
use crate::primitives::KnotState;
use crate::robustness::Trace;
use crate::stl::Aabb;
use crate::{Error, Vec3};

pub const CSV_HEADER: [&str; 11] = ["t", "agent", "px", "py", "pz", "vx", "vy", "vz", "ax", "ay", "az"];

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Format { line: u64, message: String },
    #[error(transparent)]
    Trace(#[from] Error),
}

/// Writes one row per agent and sample, agent-major, with every float in
/// shortest round-trip form.
pub fn write_csv(trace: &Trace, agents: &[impl AsRef<str>], out: impl Write) -> Result<(), ExportError> {
    assert_eq!(agents.len(), trace.num_agents(), "one name per agent");
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let mut row: Vec<String> = Vec::with_capacity(CSV_HEADER.len());
    for (a, name) in agents.iter().enumerate() {
        for (n, s) in trace.agent(a).iter().enumerate() {
            row.clear();
            row.push(trace.time(n).to_string());
            row.push(name.as_ref().to_string());
            for v in [s.p, s.v, s.a] {
                row.extend(v.iter().map(f64::to_string));
            }
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV written by [`write_csv`] back into a trace laid out like
/// `spec` (agents in mission order, `N + 1` samples each).
pub fn read_csv(input: impl Read, spec: &MissionSpec) -> Result<Trace, ExportError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(ExportError::Format { line: 1, message: format!("expected header `{}`", CSV_HEADER.join(",")) });
    }
    let names = spec.agent_names();
    let mut states: Vec<Vec<KnotState>> = vec![Vec::new(); names.len()];
    for record in r.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| ExportError::Format { line, message };
        let agent = names
            .iter()
            .position(|n| *n == &record[1])
            .ok_or_else(|| bad(format!("unknown agent `{}`", &record[1])))?;
        let mut values = [0.0; 10];
        for (i, v) in values.iter_mut().enumerate() {
            let col = if i == 0 { 0 } else { i + 1 };
            *v = record[col].parse().map_err(|_| bad(format!("column {} is not a number", CSV_HEADER[col])))?;
        }
        let n = states[agent].len();
        if values[0] != n as f64 * spec.ts() {
            return Err(bad(format!("expected t = {} for sample {n} of `{}`", n as f64 * spec.ts(), names[agent])));
        }
        let v3 = |i: usize| Vec3::new(values[i], values[i + 1], values[i + 2]);
        states[agent].push(KnotState::new(v3(1), v3(4), v3(7)));
    }
    Ok(Trace::new(spec.ts(), states)?)
}

/// Top-down (XY) view: workspace outline, goal, obstacle and pole
/// rectangles, and one path per agent.
pub fn svg(trace: &Trace, env: &Environment, agents: &[impl AsRef<str>]) -> String {
    const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
    let ws = env.workspace;
    let (x0, y1) = (ws.lo().x, ws.hi().y);
    let (w, h) = (ws.hi().x - ws.lo().x, ws.hi().y - ws.lo().y);
    let stroke = w.max(h) / 300.0;
    // SVG y grows downward; flip about the workspace.
    let pt = |p: &Vec3| (p.x - x0, y1 - p.y);
    let rect = |b: &Aabb, class: &str, fill: &str, label: &str| {
        let (x, y) = pt(&Vec3::new(b.lo().x, b.hi().y, 0.0));
        format!(
            "  <rect class=\"{class}\" x=\"{x}\" y=\"{y}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" fill-opacity=\"0.35\" stroke=\"none\"><title>{label}</title></rect>\n",
            b.hi().x - b.lo().x,
            b.hi().y - b.lo().y
        )
    };

    let mut s = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\">\n");
    let _ = writeln!(s, "  <rect class=\"workspace\" x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\" stroke=\"black\" stroke-width=\"{}\"/>", 2.0 * stroke);
    for (name, b) in &env.goals {
        s += &rect(b, "goal", "#2ca02c", name);
    }
    for (name, b) in &env.obstacles {
        s += &rect(b, "obstacle", "#444444", name);
    }
    for (i, b) in env.poles.iter().enumerate() {
        s += &rect(b, "pole", "#ff7f0e", &crate::missions::pole_name(i));
    }
    for (a, name) in agents.iter().enumerate() {
        let color = COLORS[a % COLORS.len()];
        let mut d = String::new();
        for (n, st) in trace.agent(a).iter().enumerate() {
            let (x, y) = pt(&st.p);
            let _ = write!(d, "{}{x:.4} {y:.4}", if n == 0 { "M" } else { " L" });
        }
        let _ = writeln!(
            s,
            "  <path class=\"agent\" d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{stroke}\"><title>{}</title></path>",
            name.as_ref()
        );
        if let Some(first) = trace.agent(a).first() {
            let (x, y) = pt(&first.p);
            let _ = writeln!(s, "  <circle cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"{}\" fill=\"{color}\"/>", 4.0 * stroke);
        }
    }
    s += "</svg>\n";
    s
}
