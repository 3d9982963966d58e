//! Minimum-jerk motion primitives.
//!
//! Each axis of a segment is the unique quintic matching position, velocity
//! and acceleration at both ends, i.e. the jerk-optimal interpolant of a
//! triple integrator. Axes are independent, and segment coefficients are
//! linear in the boundary values.

use crate::stl::Vec3;
use crate::{Error, Result};

/// Full kinematic state at a segment boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnotState {
    pub p: Vec3,
    pub v: Vec3,
    pub a: Vec3,
}

impl KnotState {
    pub fn new(p: Vec3, v: Vec3, a: Vec3) -> Self {
        Self { p, v, a }
    }

    pub fn at_rest(p: Vec3) -> Self {
        Self { p, v: Vec3::zeros(), a: Vec3::zeros() }
    }

    pub fn is_finite(&self) -> bool {
        self.p.iter().chain(self.v.iter()).chain(self.a.iter()).all(|c| c.is_finite())
    }

    /// `(p, v, a)` of one axis.
    pub fn axis(&self, axis: usize) -> [f64; 3] {
        [self.p[axis], self.v[axis], self.a[axis]]
    }
}

/// Per-axis quintic `c0 + c1 t + ... + c5 t^5` over local time `[0, duration]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuinticSegment {
    duration: f64,
    coeffs: [[f64; 6]; 3],
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Coefficients of one axis for boundary values `start = (p, v, a)` and
/// `end = (p, v, a)`.
pub(crate) fn axis_coefficients(start: [f64; 3], end: [f64; 3], duration: f64) -> [f64; 6] {
    let [p0, v0, a0] = start;
    let [pf, vf, af] = end;
    let t = duration;
    let (t2, t3, t4, t5) = (t * t, t * t * t, t * t * t * t, t * t * t * t * t);
    let dp = pf - p0 - v0 * t - 0.5 * a0 * t2;
    let dv = vf - v0 - a0 * t;
    let da = af - a0;
    // Closed-form inverse of the 3x3 system for (c5, c4, c3) scaled by
    // (120, 24, 6).
    let alpha = (720.0 * dp - 360.0 * t * dv + 60.0 * t2 * da) / t5;
    let beta = (-360.0 * t * dp + 168.0 * t2 * dv - 24.0 * t3 * da) / t5;
    let gamma = (60.0 * t2 * dp - 24.0 * t3 * dv + 3.0 * t4 * da) / t5;
    [p0, v0, 0.5 * a0, gamma / 6.0, beta / 24.0, alpha / 120.0]
}

/// Weights `w` with `position(t) = w . (p0, v0, a0, pf, vf, af)` on one axis.
pub(crate) fn position_weights(t: f64, duration: f64) -> [f64; 6] {
    let mut w = [0.0; 6];
    for (i, wi) in w.iter_mut().enumerate() {
        let mut bc = [0.0; 6];
        bc[i] = 1.0;
        let c = axis_coefficients([bc[0], bc[1], bc[2]], [bc[3], bc[4], bc[5]], duration);
        *wi = horner(&c, t);
    }
    w
}

impl QuinticSegment {
    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Coefficients `c0..=c5` of one axis.
    pub fn coefficients(&self, axis: usize) -> &[f64; 6] {
        &self.coeffs[axis]
    }

    fn eval(&self, t: f64, f: impl Fn(&[f64; 6], f64) -> f64) -> Vec3 {
        Vec3::new(f(&self.coeffs[0], t), f(&self.coeffs[1], t), f(&self.coeffs[2], t))
    }

    pub fn position(&self, t: f64) -> Vec3 {
        self.eval(t, |c, t| horner(c, t))
    }

    pub fn velocity(&self, t: f64) -> Vec3 {
        self.eval(t, |c, t| horner(&velocity_poly(c), t))
    }

    pub fn acceleration(&self, t: f64) -> Vec3 {
        self.eval(t, |c, t| horner(&acceleration_poly(c), t))
    }

    pub fn jerk(&self, t: f64) -> Vec3 {
        self.eval(t, |c, t| horner(&jerk_poly(c), t))
    }

    pub fn state(&self, t: f64) -> KnotState {
        KnotState { p: self.position(t), v: self.velocity(t), a: self.acceleration(t) }
    }
}

fn velocity_poly(c: &[f64; 6]) -> [f64; 5] {
    [c[1], 2.0 * c[2], 3.0 * c[3], 4.0 * c[4], 5.0 * c[5]]
}

fn acceleration_poly(c: &[f64; 6]) -> [f64; 4] {
    [2.0 * c[2], 6.0 * c[3], 12.0 * c[4], 20.0 * c[5]]
}

fn jerk_poly(c: &[f64; 6]) -> [f64; 3] {
    [6.0 * c[3], 24.0 * c[4], 60.0 * c[5]]
}

/// Solves the rest of the boundary value problem: the segment from `start`
/// to `end` lasting `duration` seconds.
pub fn solve_segment(start: &KnotState, end: &KnotState, duration: f64) -> Result<QuinticSegment> {
    if !start.is_finite() || !end.is_finite() {
        return Err(Error::NonfiniteInput);
    }
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::DegenerateDuration(duration));
    }
    let coeffs = [0, 1, 2].map(|axis| axis_coefficients(start.axis(axis), end.axis(axis), duration));
    Ok(QuinticSegment { duration, coeffs })
}

/// States at local times `offset, offset + ts, ...` not exceeding the
/// segment duration.
pub fn sample_segment(seg: &QuinticSegment, ts: f64, offset: f64) -> Result<Vec<(f64, KnotState)>> {
    if !(ts.is_finite() && ts > 0.0) {
        return Err(Error::InvalidTrace(format!("sampling period must be positive, got {ts}")));
    }
    if !(0.0..ts).contains(&offset) {
        return Err(Error::InvalidTrace(format!("sample offset {offset} outside [0, {ts})")));
    }
    let limit = seg.duration * (1.0 + 1e-12);
    let samples: Vec<_> = (0..)
        .map(|n| offset + n as f64 * ts)
        .take_while(|t| *t <= limit)
        .map(|t| {
            let t = t.min(seg.duration);
            (t, seg.state(t))
        })
        .collect();
    if samples.is_empty() {
        return Err(Error::DegenerateSampling);
    }
    Ok(samples)
}

/// Real roots of `c0 + c1 t + c2 t^2` inside `[0, span]`.
fn quadratic_roots_in(c: [f64; 3], span: f64, out: &mut Vec<f64>) {
    let [c0, c1, c2] = c;
    let scale = c0.abs() + c1.abs() * span + c2.abs() * span * span;
    if scale == 0.0 {
        return;
    }
    let mut push = |t: f64| {
        if t.is_finite() && (0.0..=span).contains(&t) {
            out.push(t);
        }
    };
    if c2.abs() * span * span <= 1e-14 * scale {
        if c1.abs() * span > 1e-14 * scale {
            push(-c0 / c1);
        }
        return;
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return;
    }
    let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
    if q != 0.0 {
        push(q / c2);
        push(c0 / q);
    } else {
        push(0.0);
    }
}

/// Root of `f` on `[lo, hi]` given a sign change, by bisection followed by a
/// Newton polish step that is kept only if it improves the residual.
fn bracketed_root(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let d = df(x);
    if d != 0.0 {
        let polished = x - f(x) / d;
        if polished >= lo && polished <= hi && f(polished).abs() < f(x).abs() {
            return polished;
        }
    }
    x
}

/// `(max |v|, max |a|)` over `[0, span]` for one axis.
pub(crate) fn axis_extrema(c: &[f64; 6], span: f64) -> (f64, f64) {
    let vel = velocity_poly(c);
    let acc = acceleration_poly(c);
    let jerk = jerk_poly(c);

    let mut breaks = vec![0.0, span];
    quadratic_roots_in(jerk, span, &mut breaks);
    breaks.sort_by(f64::total_cmp);

    let max_acc = breaks.iter().map(|t| horner(&acc, *t).abs()).fold(0.0, f64::max);

    // Acceleration is monotone between consecutive jerk roots, so each
    // sign change brackets exactly one velocity critical point.
    let mut candidates = breaks.clone();
    for w in breaks.windows(2) {
        let (l, r) = (w[0], w[1]);
        let (fl, fr) = (horner(&acc, l), horner(&acc, r));
        if fl != 0.0 && fr != 0.0 && (fl < 0.0) != (fr < 0.0) {
            candidates.push(bracketed_root(|t| horner(&acc, t), |t| horner(&jerk, t), l, r));
        }
    }
    let max_vel = candidates.iter().map(|t| horner(&vel, *t).abs()).fold(0.0, f64::max);
    (max_vel, max_acc)
}

/// Peak absolute velocity and acceleration per axis over a segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentExtrema {
    pub max_speed: [f64; 3],
    pub max_accel: [f64; 3],
}

pub fn segment_extrema(seg: &QuinticSegment) -> SegmentExtrema {
    let mut out = SegmentExtrema { max_speed: [0.0; 3], max_accel: [0.0; 3] };
    for axis in 0..3 {
        let (v, a) = axis_extrema(&seg.coeffs[axis], seg.duration);
        out.max_speed[axis] = v;
        out.max_accel[axis] = a;
    }
    out
}

/// Symmetric per-axis velocity and acceleration limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicBounds {
    vmax: f64,
    amax: f64,
}

impl KinematicBounds {
    pub fn new(vmax: f64, amax: f64) -> Result<Self> {
        if vmax.is_finite() && amax.is_finite() && vmax > 0.0 && amax > 0.0 {
            Ok(Self { vmax, amax })
        } else {
            Err(Error::InvalidSpec(format!(
                "kinematic bounds must be positive and finite, got vmax={vmax}, amax={amax}"
            )))
        }
    }

    pub fn vmax(&self) -> f64 {
        self.vmax
    }

    pub fn amax(&self) -> f64 {
        self.amax
    }
}

/// Per-axis slack against [`KinematicBounds`]; negative entries are
/// violations.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FeasibilityReport {
    pub velocity_margin: [f64; 3],
    pub acceleration_margin: [f64; 3],
    pub feasible: bool,
}

impl FeasibilityReport {
    pub fn min_margin(&self) -> f64 {
        self.velocity_margin
            .iter()
            .chain(&self.acceleration_margin)
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Sum of squared violations.
    pub fn penalty(&self) -> f64 {
        self.velocity_margin
            .iter()
            .chain(&self.acceleration_margin)
            .map(|m| m.min(0.0).powi(2))
            .sum()
    }
}

pub fn check_feasibility(seg: &QuinticSegment, bounds: &KinematicBounds) -> FeasibilityReport {
    let ext = segment_extrema(seg);
    let velocity_margin = ext.max_speed.map(|v| bounds.vmax - v);
    let acceleration_margin = ext.max_accel.map(|a| bounds.amax - a);
    let feasible = velocity_margin.iter().chain(&acceleration_margin).all(|m| *m >= 0.0);
    FeasibilityReport { velocity_margin, acceleration_margin, feasible }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rest(x: f64) -> KnotState {
        KnotState::at_rest(Vec3::new(x, 0.0, 0.0))
    }

    fn unit_rest_to_rest() -> QuinticSegment {
        solve_segment(&rest(0.0), &rest(1.0), 1.0).unwrap()
    }

    #[test]
    fn hover_is_constant() {
        let s = KnotState::at_rest(Vec3::new(1.0, -2.0, 3.0));
        let seg = solve_segment(&s, &s, 2.5).unwrap();
        for axis in 0..3 {
            assert_eq!(&seg.coefficients(axis)[1..], &[0.0; 5]);
        }
        for (_, st) in sample_segment(&seg, 0.5, 0.0).unwrap() {
            assert_eq!(st, s);
        }
        assert_eq!(segment_extrema(&seg), SegmentExtrema { max_speed: [0.0; 3], max_accel: [0.0; 3] });
        let r = check_feasibility(&seg, &KinematicBounds::new(2.0, 3.0).unwrap());
        assert!(r.feasible);
        assert_eq!(r.velocity_margin, [2.0; 3]);
        assert_eq!(r.acceleration_margin, [3.0; 3]);
    }

    #[test]
    fn rest_to_rest_is_the_classic_quintic() {
        let seg = unit_rest_to_rest();
        let c = seg.coefficients(0);
        let expected = [0.0, 0.0, 0.0, 10.0, -15.0, 6.0];
        for (a, b) in c.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{c:?}");
        }
        let samples = sample_segment(&seg, 0.5, 0.0).unwrap();
        assert_eq!(samples.len(), 3);
        assert!((samples[1].1.p.x - 0.5).abs() < 1e-12);
        assert_eq!(samples[0].1.v.x, 0.0);
        assert!(samples[2].1.v.x.abs() < 1e-12);
    }

    #[test]
    fn rest_to_rest_extrema() {
        let ext = segment_extrema(&unit_rest_to_rest());
        assert!((ext.max_speed[0] - 1.875).abs() < 1e-12);
        assert!((ext.max_accel[0] - 10.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn feasibility_margins() {
        let seg = unit_rest_to_rest();
        let ok = check_feasibility(&seg, &KinematicBounds::new(2.0, 6.0).unwrap());
        assert!(ok.feasible);
        assert!((ok.velocity_margin[0] - 0.125).abs() < 1e-12);
        assert!((ok.acceleration_margin[0] - (6.0 - 10.0 / 3f64.sqrt())).abs() < 1e-12);
        assert!((ok.acceleration_margin[0] - 0.2265).abs() < 1e-4);
        let bad = check_feasibility(&seg, &KinematicBounds::new(1.5, 6.0).unwrap());
        assert!(!bad.feasible);
        assert!((bad.velocity_margin[0] + 0.375).abs() < 1e-12);
        assert!((bad.penalty() - 0.375f64.powi(2)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(solve_segment(&rest(0.0), &rest(1.0), 0.0), Err(Error::DegenerateDuration(0.0)));
        assert_eq!(solve_segment(&rest(f64::NAN), &rest(1.0), 1.0), Err(Error::NonfiniteInput));
        let seg = unit_rest_to_rest();
        assert!(sample_segment(&seg, 0.5, 0.6).is_err());
        let short = solve_segment(&rest(0.0), &rest(1.0), 0.1).unwrap();
        assert_eq!(sample_segment(&short, 0.5, 0.2), Err(Error::DegenerateSampling));
        assert!(KinematicBounds::new(0.0, 1.0).is_err());
    }

    #[test]
    fn position_weights_reproduce_segment() {
        let start = KnotState::new(Vec3::new(0.3, 0.0, 0.0), Vec3::new(-1.0, 0.0, 0.0), Vec3::new(2.0, 0.0, 0.0));
        let end = KnotState::new(Vec3::new(1.7, 0.0, 0.0), Vec3::new(0.4, 0.0, 0.0), Vec3::new(-0.5, 0.0, 0.0));
        let seg = solve_segment(&start, &end, 1.3).unwrap();
        let bc = [0.3, -1.0, 2.0, 1.7, 0.4, -0.5];
        for t in [0.0, 0.2, 0.77, 1.3] {
            let w = position_weights(t, 1.3);
            let p: f64 = w.iter().zip(bc).map(|(w, b)| w * b).sum();
            assert!((p - seg.position(t).x).abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_root_edge_cases() {
        let mut out = Vec::new();
        quadratic_roots_in([-1.0, 0.0, 1.0], 2.0, &mut out);
        assert_eq!(out, vec![1.0]);
        out.clear();
        quadratic_roots_in([-1.0, 2.0, 0.0], 2.0, &mut out);
        assert_eq!(out, vec![0.5]);
        out.clear();
        quadratic_roots_in([1.0, 0.0, 1.0], 2.0, &mut out);
        assert!(out.is_empty());
    }
}
