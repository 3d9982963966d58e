//! Log-sum-exp smoothing of the robust semantics and its reverse-mode
//! gradient with respect to every sampled agent position.

use super::semantics::{Evaluator, Node, Semantics};
use super::{window_offsets, Temperature, Trace, TRUE_ROBUSTNESS};
use crate::stl::{Formula, Predicate, Vec3};
use crate::{Error, Result};

/// `eta` in the smoothed distance `sqrt(|d|^2 + eta^2)` used by separation
/// predicates, in meters.
pub const SEPARATION_REGULARIZATION: f64 = 1e-9;

/// `(1/k) ln sum exp(k v)`, evaluated shifted by the maximum.
pub fn softmax(values: &[f64], k: Temperature) -> f64 {
    lse_max(values, k.value())
}

/// `-softmax(-v)`.
pub fn softmin(values: &[f64], k: Temperature) -> f64 {
    lse_min(values, k.value())
}

fn lse_max(values: &[f64], k: f64) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let sum: f64 = values.iter().map(|v| (k * (v - m)).exp()).sum();
    m + sum.ln() / k
}

fn lse_min(values: &[f64], k: f64) -> f64 {
    let m = values.iter().copied().fold(f64::INFINITY, f64::min);
    if !m.is_finite() {
        return m;
    }
    let sum: f64 = values.iter().map(|v| (-k * (v - m)).exp()).sum();
    m - sum.ln() / k
}

struct Smooth {
    k: f64,
}

fn smooth_margin(predicate: &Predicate, positions: &[Vec3]) -> f64 {
    match predicate {
        Predicate::Separation { first, second, delta_min } => {
            let d = positions[*first] - positions[*second];
            (d.norm_squared() + SEPARATION_REGULARIZATION.powi(2)).sqrt() - delta_min
        }
        other => other.margin(positions),
    }
}

/// Adds `scale * d margin / d p` into `grad[agent]`.
fn accumulate_margin_gradient(predicate: &Predicate, positions: &[Vec3], scale: f64, grad: &mut [Vec3]) {
    match predicate {
        Predicate::Halfspace { agent, normal, .. } => grad[*agent] += normal * scale,
        Predicate::InsideBox { agent, region } => {
            grad[*agent] += region.margin_gradient(&positions[*agent]) * scale
        }
        Predicate::OutsideBox { agent, region } => {
            grad[*agent] -= region.margin_gradient(&positions[*agent]) * scale
        }
        Predicate::Separation { first, second, .. } => {
            let d = positions[*first] - positions[*second];
            let r = (d.norm_squared() + SEPARATION_REGULARIZATION.powi(2)).sqrt();
            let g = d * (scale / r);
            grad[*first] += g;
            grad[*second] -= g;
        }
    }
}

impl Semantics for Smooth {
    type Value = f64;

    fn top(&self) -> f64 {
        TRUE_ROBUSTNESS
    }

    fn atom(&self, predicate: &Predicate, positions: &[Vec3]) -> f64 {
        smooth_margin(predicate, positions)
    }

    fn negate(&self, v: f64) -> f64 {
        -v
    }

    fn meet(&self, values: &[f64]) -> f64 {
        lse_min(values, self.k)
    }

    fn join(&self, values: &[f64]) -> f64 {
        lse_max(values, self.k)
    }
}

/// Smooth robustness and its gradient with respect to `positions[agent][sample]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothGradient {
    pub value: f64,
    pub positions: Vec<Vec<Vec3>>,
}

fn check_sample(trace: &Trace, i: usize) -> Result<()> {
    if i >= trace.len() {
        return Err(Error::InsufficientTrace { needed: i, len: trace.len() });
    }
    Ok(())
}

/// Smooth robustness: the exact recursion with max and min replaced by
/// [`softmax`] and [`softmin`] at temperature `k`.
pub fn smooth_robustness(f: &Formula, trace: &Trace, i: usize, k: Temperature) -> Result<f64> {
    check_sample(trace, i)?;
    let positions = trace.position_table();
    let ev = Evaluator { semantics: Smooth { k: k.value() }, ts: trace.ts(), positions: &positions };
    Ok(ev.eval(f, i, i)?.values[0])
}

pub fn smooth_robustness_gradient(
    f: &Formula,
    trace: &Trace,
    i: usize,
    k: Temperature,
) -> Result<SmoothGradient> {
    check_sample(trace, i)?;
    let positions = trace.position_table();
    let (value, by_sample) = smooth_value_and_gradient(f, trace.ts(), &positions, i, k.value())?;
    let mut out = vec![vec![Vec3::zeros(); trace.len()]; trace.num_agents()];
    for (sample, row) in by_sample.into_iter().enumerate() {
        for (agent, g) in row.into_iter().enumerate() {
            out[agent][sample] = g;
        }
    }
    Ok(SmoothGradient { value, positions: out })
}

/// Value and gradient indexed `[sample][agent]`, matching `positions`.
pub(crate) fn smooth_value_and_gradient(
    f: &Formula,
    ts: f64,
    positions: &[Vec<Vec3>],
    i: usize,
    k: f64,
) -> Result<(f64, Vec<Vec<Vec3>>)> {
    let ev = Evaluator { semantics: Smooth { k }, ts, positions };
    let root = ev.eval(f, i, i)?;
    let num_agents = positions.first().map_or(0, Vec::len);
    let mut grad = vec![vec![Vec3::zeros(); num_agents]; positions.len()];
    let tape = Tape { k, ts, positions };
    tape.backward(f, &root, &[1.0], &mut grad)?;
    Ok((root.values[0], grad))
}

struct Tape<'a> {
    k: f64,
    ts: f64,
    positions: &'a [Vec<Vec3>],
}

impl Tape<'_> {
    /// Softmax weight of `v` in an aggregate whose smoothed value is `agg`.
    fn w_max(&self, v: f64, agg: f64) -> f64 {
        (self.k * (v - agg)).exp()
    }

    fn w_min(&self, v: f64, agg: f64) -> f64 {
        (-self.k * (v - agg)).exp()
    }

    fn backward(&self, f: &Formula, node: &Node<f64>, adj: &[f64], grad: &mut [Vec<Vec3>]) -> Result<()> {
        match f {
            Formula::True => {}
            Formula::Pred(p) => {
                for (t, a) in adj.iter().enumerate() {
                    if *a != 0.0 {
                        let k = node.start + t;
                        accumulate_margin_gradient(p, &self.positions[k], *a, &mut grad[k]);
                    }
                }
            }
            Formula::Not(g) => {
                let child_adj: Vec<f64> = adj.iter().map(|a| -a).collect();
                self.backward(g, &node.children[0], &child_adj, grad)?;
            }
            Formula::And(gs) | Formula::Or(gs) => {
                let conj = matches!(f, Formula::And(_));
                for (g, child) in gs.iter().zip(&node.children) {
                    let child_adj: Vec<f64> = adj
                        .iter()
                        .enumerate()
                        .map(|(t, a)| {
                            let (v, agg) = (child.values[t], node.values[t]);
                            a * if conj { self.w_min(v, agg) } else { self.w_max(v, agg) }
                        })
                        .collect();
                    self.backward(g, child, &child_adj, grad)?;
                }
            }
            Formula::Implies(a, b) => {
                let (lhs, rhs) = (&node.children[0], &node.children[1]);
                let mut lhs_adj = vec![0.0; adj.len()];
                let mut rhs_adj = vec![0.0; adj.len()];
                for (t, a) in adj.iter().enumerate() {
                    lhs_adj[t] = -a * self.w_max(-lhs.values[t], node.values[t]);
                    rhs_adj[t] = a * self.w_max(rhs.values[t], node.values[t]);
                }
                self.backward(a, lhs, &lhs_adj, grad)?;
                self.backward(b, rhs, &rhs_adj, grad)?;
            }
            Formula::Always(iv, g) | Formula::Eventually(iv, g) => {
                let conj = matches!(f, Formula::Always(..));
                let (lo, hi) = window_offsets(iv, self.ts)?;
                let child = &node.children[0];
                let mut child_adj = vec![0.0; child.values.len()];
                for (t, a) in adj.iter().enumerate() {
                    if *a == 0.0 {
                        continue;
                    }
                    let agg = node.values[t];
                    for c in t..=t + hi - lo {
                        let v = child.values[c];
                        child_adj[c] += a * if conj { self.w_min(v, agg) } else { self.w_max(v, agg) };
                    }
                }
                self.backward(g, child, &child_adj, grad)?;
            }
            Formula::Until(iv, a, b) => {
                let (lo, hi) = window_offsets(iv, self.ts)?;
                let (lhs, rhs) = (&node.children[0], &node.children[1]);
                let mut lhs_adj = vec![0.0; lhs.values.len()];
                let mut rhs_adj = vec![0.0; rhs.values.len()];
                let mut inner = Vec::with_capacity(hi + 2);
                for (t, adj_t) in adj.iter().enumerate() {
                    if *adj_t == 0.0 {
                        continue;
                    }
                    let agg = node.values[t];
                    for j in t + lo..=t + hi {
                        inner.clear();
                        inner.push(rhs.values[j - lo]);
                        inner.extend_from_slice(&lhs.values[t..=j]);
                        let candidate = lse_min(&inner, self.k);
                        let outer = adj_t * self.w_max(candidate, agg);
                        if outer == 0.0 {
                            continue;
                        }
                        rhs_adj[j - lo] += outer * self.w_min(rhs.values[j - lo], candidate);
                        for l in t..=j {
                            lhs_adj[l] += outer * self.w_min(lhs.values[l], candidate);
                        }
                    }
                }
                self.backward(a, lhs, &lhs_adj, grad)?;
                self.backward(b, rhs, &rhs_adj, grad)?;
            }
        }
        Ok(())
    }
}

fn aggregation_profile(f: &Formula, ts: f64) -> Result<(usize, usize)> {
    Ok(match f {
        Formula::True | Formula::Pred(_) => (0, 1),
        Formula::Not(g) => aggregation_profile(g, ts)?,
        Formula::And(gs) | Formula::Or(gs) => {
            let mut acc = (0, gs.len());
            for g in gs {
                let (d, m) = aggregation_profile(g, ts)?;
                acc = (acc.0.max(d), acc.1.max(m));
            }
            (acc.0 + 1, acc.1)
        }
        Formula::Implies(a, b) => {
            let (da, ma) = aggregation_profile(a, ts)?;
            let (db, mb) = aggregation_profile(b, ts)?;
            (1 + da.max(db), 2.max(ma).max(mb))
        }
        Formula::Always(iv, g) | Formula::Eventually(iv, g) => {
            let (lo, hi) = window_offsets(iv, ts)?;
            let (d, m) = aggregation_profile(g, ts)?;
            (1 + d, (hi - lo + 1).max(m))
        }
        Formula::Until(iv, a, b) => {
            let (lo, hi) = window_offsets(iv, ts)?;
            let (da, ma) = aggregation_profile(a, ts)?;
            let (db, mb) = aggregation_profile(b, ts)?;
            (2 + da.max(db), (hi - lo + 1).max(hi + 2).max(ma).max(mb))
        }
    })
}

/// Upper bound `D ln(M) / k` on `|smooth - exact|`, where `D` is the largest
/// number of aggregation layers on a root-to-leaf path (Until counts two) and
/// `M` the largest fan-in. Separation predicates may add up to
/// [`SEPARATION_REGULARIZATION`] on top.
pub fn smoothing_gap_bound(f: &Formula, ts: f64, k: Temperature) -> Result<f64> {
    let (depth, fan_in) = aggregation_profile(f, ts)?;
    Ok(depth as f64 * (fan_in as f64).ln() / k.value())
}
