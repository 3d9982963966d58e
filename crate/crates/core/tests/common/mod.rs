//! Shared generators and independent reference implementations for the
//! integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stlplan::primitives::KnotState;
use stlplan::robustness::{Trace, TRUE_ROBUSTNESS};
use stlplan::stl::{Aabb, Atom, Formula, Interval, Predicate};
use stlplan::Vec3;

pub const AGENTS: [&str; 2] = ["d1", "d2"];
pub const REGIONS: [&str; 3] = ["r0", "r1", "r2"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Interval endpoints are whole quarters of the sampling period, so the
/// covered sample offsets are known in integer arithmetic.
#[derive(Debug, Clone, Copy)]
pub struct Quarters {
    pub lo: u32,
    pub hi: u32,
}

impl Quarters {
    pub fn offsets(self) -> (usize, usize) {
        (self.lo.div_ceil(4) as usize, (self.hi / 4) as usize)
    }

    pub fn interval(self, ts: f64) -> Interval {
        Interval::new(self.lo as f64 * ts / 4.0, self.hi as f64 * ts / 4.0).unwrap()
    }
}

pub struct FormulaGen {
    pub ts: f64,
    /// Largest interval end, in quarters of `ts`.
    pub max_quarters: u32,
    pub allow_true: bool,
}

impl FormulaGen {
    fn quarters(&self, rng: &mut impl Rng) -> Quarters {
        loop {
            let a = rng.gen_range(0..=self.max_quarters);
            let b = rng.gen_range(0..=self.max_quarters);
            let q = Quarters { lo: a.min(b), hi: a.max(b) };
            let (lo, hi) = q.offsets();
            if lo <= hi {
                return q;
            }
        }
    }

    fn atom(&self, rng: &mut impl Rng) -> Formula<Atom> {
        let agent = AGENTS[rng.gen_range(0..2)];
        let region = REGIONS[rng.gen_range(0..REGIONS.len())];
        Formula::pred(match rng.gen_range(0..4) {
            0 => Atom::inside(agent, region),
            1 => Atom::outside(agent, region),
            2 => Atom::separation("d1", "d2", rng.gen_range(0.1..1.5)),
            _ => {
                let mut c = [0.0; 3];
                for v in &mut c {
                    *v = (rng.gen_range(-4..=4) as f64) / 2.0;
                }
                if c == [0.0; 3] {
                    c[rng.gen_range(0..3)] = 1.0;
                }
                Atom::affine(agent, c, rng.gen_range(-20..=20) as f64 / 4.0)
            }
        })
    }

    /// Random formula with temporal/boolean nesting depth at most `depth`.
    pub fn formula(&self, rng: &mut impl Rng, depth: usize) -> Formula<Atom> {
        if depth == 0 || rng.gen_bool(0.2) {
            if self.allow_true && rng.gen_bool(0.05) {
                return Formula::True;
            }
            return self.atom(rng);
        }
        let sub = |rng: &mut _| self.formula(rng, depth - 1);
        match rng.gen_range(0..7) {
            0 => Formula::not(sub(rng)),
            1 => {
                let n = rng.gen_range(2..=3);
                Formula::And((0..n).map(|_| sub(rng)).collect())
            }
            2 => {
                let n = rng.gen_range(2..=3);
                Formula::Or((0..n).map(|_| sub(rng)).collect())
            }
            3 => Formula::implies(sub(rng), sub(rng)),
            4 => Formula::always(self.quarters(rng).interval(self.ts), sub(rng)),
            5 => Formula::eventually(self.quarters(rng).interval(self.ts), sub(rng)),
            _ => {
                let iv = self.quarters(rng).interval(self.ts);
                Formula::until(iv, sub(rng), sub(rng))
            }
        }
    }
}

pub fn random_regions(rng: &mut impl Rng) -> Vec<Aabb> {
    REGIONS
        .iter()
        .map(|_| {
            let c = Vec3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let h = Vec3::new(rng.gen_range(0.3..2.0), rng.gen_range(0.3..2.0), rng.gen_range(0.3..2.0));
            Aabb::new(c - h, c + h).unwrap()
        })
        .collect()
}

pub fn resolve(f: &Formula<Atom>, regions: &[Aabb]) -> Formula<Predicate> {
    f.resolve(&AGENTS, |name| REGIONS.iter().position(|r| *r == name).map(|i| regions[i])).unwrap()
}

/// Random walk for every agent, `len` samples.
pub fn random_trace(rng: &mut impl Rng, agents: usize, len: usize, ts: f64) -> Trace {
    let positions = (0..agents)
        .map(|_| {
            let mut p = Vec3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            (0..len)
                .map(|_| {
                    p += Vec3::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4));
                    p
                })
                .collect()
        })
        .collect();
    Trace::from_positions(ts, positions).unwrap()
}

pub fn samples_needed(f: &Formula<Atom>, ts: f64) -> usize {
    (f.horizon() / ts + 1e-6).floor() as usize + 1
}

/// A random (formula, trace) case whose trace covers the horizon, with at
/// most `max_len` samples.
pub struct Case {
    pub atoms: Formula<Atom>,
    pub formula: Formula<Predicate>,
    pub trace: Trace,
    pub regions: Vec<Aabb>,
}

pub fn random_case(rng: &mut impl Rng, gen: &FormulaGen, depth: usize, max_len: usize) -> Case {
    loop {
        let atoms = gen.formula(rng, depth);
        let need = samples_needed(&atoms, gen.ts);
        if need > max_len {
            continue;
        }
        let len = rng.gen_range(need..=max_len);
        let regions = random_regions(rng);
        let formula = resolve(&atoms, &regions);
        let trace = random_trace(rng, 2, len, gen.ts);
        return Case { atoms, formula, trace, regions };
    }
}

/// Offsets covered by an interval built by [`Quarters::interval`].
fn window(iv: &Interval, ts: f64) -> (usize, usize) {
    let q = |x: f64| (x * 4.0 / ts).round() as u32;
    Quarters { lo: q(iv.lo()), hi: q(iv.hi()) }.offsets()
}

fn margin(p: &Predicate, at: &[Vec3]) -> f64 {
    match p {
        Predicate::Halfspace { agent, normal, offset } => {
            let x = at[*agent];
            normal.x * x.x + normal.y * x.y + normal.z * x.z + offset
        }
        Predicate::InsideBox { agent, region } => box_slack(region, &at[*agent]),
        Predicate::OutsideBox { agent, region } => -box_slack(region, &at[*agent]),
        Predicate::Separation { first, second, delta_min } => {
            let d = at[*first] - at[*second];
            (d.x * d.x + d.y * d.y + d.z * d.z).sqrt() - delta_min
        }
    }
}

fn box_slack(b: &Aabb, p: &Vec3) -> f64 {
    let mut m = f64::INFINITY;
    for axis in 0..3 {
        m = m.min(p[axis] - b.lo()[axis]).min(b.hi()[axis] - p[axis]);
    }
    m
}

/// Direct transcription of the quantitative semantics, one time point at a
/// time, with no sharing between evaluations.
pub fn brute_robustness(f: &Formula<Predicate>, trace: &Trace, i: usize) -> f64 {
    let ts = trace.ts();
    let at = |j: usize| trace.positions_at(j);
    match f {
        Formula::True => TRUE_ROBUSTNESS,
        Formula::Pred(p) => margin(p, &at(i)),
        Formula::Not(g) => -brute_robustness(g, trace, i),
        Formula::And(gs) => gs.iter().map(|g| brute_robustness(g, trace, i)).fold(f64::INFINITY, f64::min),
        Formula::Or(gs) => gs.iter().map(|g| brute_robustness(g, trace, i)).fold(f64::NEG_INFINITY, f64::max),
        Formula::Implies(a, b) => (-brute_robustness(a, trace, i)).max(brute_robustness(b, trace, i)),
        Formula::Always(iv, g) => {
            let (lo, hi) = window(iv, ts);
            let mut m = f64::INFINITY;
            for j in i + lo..=(i + hi).min(trace.len() - 1) {
                m = m.min(brute_robustness(g, trace, j));
            }
            m
        }
        Formula::Eventually(iv, g) => {
            let (lo, hi) = window(iv, ts);
            let mut m = f64::NEG_INFINITY;
            for j in i + lo..=(i + hi).min(trace.len() - 1) {
                m = m.max(brute_robustness(g, trace, j));
            }
            m
        }
        Formula::Until(iv, a, b) => {
            let (lo, hi) = window(iv, ts);
            let mut best = f64::NEG_INFINITY;
            for j in i + lo..=(i + hi).min(trace.len() - 1) {
                let mut v = brute_robustness(b, trace, j);
                for l in i..=j {
                    v = v.min(brute_robustness(a, trace, l));
                }
                best = best.max(v);
            }
            best
        }
    }
}

/// `(D, M)`: aggregation layers on the deepest path (Until counts two) and
/// the largest number of values any soft aggregation combines.
pub fn aggregation(f: &Formula<Predicate>, ts: f64) -> (usize, usize) {
    let fold = |gs: &[&Formula<Predicate>], layers: usize, fan: usize| {
        gs.iter().map(|g| aggregation(g, ts)).fold((0, fan), |(d, m), (gd, gm)| (d.max(gd + layers), m.max(gm)))
    };
    match f {
        Formula::True | Formula::Pred(_) => (0, 1),
        Formula::Not(g) => aggregation(g, ts),
        Formula::And(gs) | Formula::Or(gs) => fold(&gs.iter().collect::<Vec<_>>(), 1, gs.len()),
        Formula::Implies(a, b) => fold(&[a, b], 1, 2),
        Formula::Always(iv, g) | Formula::Eventually(iv, g) => {
            let (lo, hi) = window(iv, ts);
            fold(&[g], 1, hi - lo + 1)
        }
        Formula::Until(iv, a, b) => {
            let (lo, hi) = window(iv, ts);
            fold(&[a, b], 2, (hi - lo + 1).max(hi + 2))
        }
    }
}

pub fn contains_true<P>(f: &Formula<P>) -> bool {
    match f {
        Formula::True => true,
        Formula::Pred(_) => false,
        Formula::Not(g) | Formula::Always(_, g) | Formula::Eventually(_, g) => contains_true(g),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().any(contains_true),
        Formula::Implies(a, b) | Formula::Until(_, a, b) => contains_true(a) || contains_true(b),
    }
}

pub fn random_state(rng: &mut impl Rng) -> KnotState {
    let mut v3 = |s: f64| Vec3::new(rng.gen_range(-s..s), rng.gen_range(-s..s), rng.gen_range(-s..s));
    KnotState::new(v3(10.0), v3(3.0), v3(5.0))
}
