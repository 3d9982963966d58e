//! Boolean, exact quantitative, and smooth robustness of STL formulas over
//! sampled multi-agent traces.
//!
//! Time intervals are discretized inward: `[lo, hi]` at sampling period `Ts`
//! becomes the sample offsets `ceil(lo/Ts) ..= floor(hi/Ts)`. Until includes
//! its endpoint: `a U[I] b` holds at `i` when `b` holds at some `j` in the
//! window and `a` holds at every `l` in `i ..= j`.

mod semantics;
mod smooth;
mod trace;

use std::ops::RangeInclusive;

pub use smooth::{
    smooth_robustness, smooth_robustness_gradient, smoothing_gap_bound, softmax, softmin,
    SmoothGradient, SEPARATION_REGULARIZATION,
};
pub use semantics::{boolean_satisfaction, robustness, robustness_signal};
pub use trace::Trace;

pub(crate) use smooth::smooth_value_and_gradient;

use crate::stl::Interval;
use crate::{Error, Result};

/// Robustness assigned to `true`: a large finite value keeps log-sum-exp
/// arithmetic finite.
pub const TRUE_ROBUSTNESS: f64 = 1e9;

/// Sharpness `k` of the log-sum-exp approximation of max and min.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Temperature(f64);

impl Temperature {
    pub const DEFAULT: Temperature = Temperature(25.0);

    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() && k > 0.0 {
            Ok(Self(k))
        } else {
            Err(Error::InvalidTemperature(k))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Temperature {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Rounds `x` to the nearest integer when it is within floating-point noise
/// of it, so that e.g. `0.3 / 0.1` counts as exactly 3 samples.
pub(crate) fn snap(x: f64) -> Option<f64> {
    let r = x.round();
    ((x - r).abs() <= 1e-9 * r.abs().max(1.0)).then_some(r)
}

/// Sample offsets `(ceil(lo/ts), floor(hi/ts))` covered by an interval.
pub(crate) fn window_offsets(interval: &Interval, ts: f64) -> Result<(usize, usize)> {
    let lo = interval.lo() / ts;
    let hi = interval.hi() / ts;
    let lo = snap(lo).unwrap_or_else(|| lo.ceil());
    let hi = snap(hi).unwrap_or_else(|| hi.floor());
    if lo > hi {
        return Err(Error::EmptyWindow { lo: interval.lo(), hi: interval.hi(), ts });
    }
    Ok((lo as usize, hi as usize))
}

/// Sample indices an interval covers when evaluated at sample `base` of a
/// trace with `len` samples, clipped to the trace.
pub fn to_index_window(
    interval: &Interval,
    ts: f64,
    base: usize,
    len: usize,
) -> Result<RangeInclusive<usize>> {
    if !(ts.is_finite() && ts > 0.0) {
        return Err(Error::InvalidTrace(format!("sampling period must be positive, got {ts}")));
    }
    let (lo, hi) = window_offsets(interval, ts)?;
    let start = base + lo;
    if len == 0 || start > len - 1 {
        return Err(Error::EmptyWindow { lo: interval.lo(), hi: interval.hi(), ts });
    }
    Ok(start..=(base + hi).min(len - 1))
}
