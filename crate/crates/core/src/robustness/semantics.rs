use super::{window_offsets, Trace, TRUE_ROBUSTNESS};
use crate::stl::{Formula, Predicate, Vec3};
use crate::{Error, Result};

/// Value domain of a monitor: how leaves are scored and how conjunction and
/// disjunction aggregate.
pub(crate) trait Semantics {
    type Value: Copy;

    fn top(&self) -> Self::Value;
    fn atom(&self, predicate: &Predicate, positions: &[Vec3]) -> Self::Value;
    fn negate(&self, v: Self::Value) -> Self::Value;
    fn meet(&self, values: &[Self::Value]) -> Self::Value;
    fn join(&self, values: &[Self::Value]) -> Self::Value;
}

/// Signal of one formula node over the sample range `start ..
/// start + values.len()`, with the signals of its children kept for
/// backward passes.
pub(crate) struct Node<V> {
    pub start: usize,
    pub values: Vec<V>,
    pub children: Vec<Node<V>>,
}

pub(crate) struct Evaluator<'a, S> {
    pub semantics: S,
    pub ts: f64,
    /// `[sample][agent]`.
    pub positions: &'a [Vec<Vec3>],
}

impl<S: Semantics> Evaluator<'_, S> {
    fn require(&self, last: usize) -> Result<()> {
        if last >= self.positions.len() {
            return Err(Error::InsufficientTrace { needed: last, len: self.positions.len() });
        }
        Ok(())
    }

    /// Evaluates `f` at every sample in `start ..= end`.
    pub fn eval(&self, f: &Formula, start: usize, end: usize) -> Result<Node<S::Value>> {
        let width = end - start + 1;
        let sem = &self.semantics;
        let leaf = |values| Node { start, values, children: Vec::new() };
        Ok(match f {
            Formula::True => leaf(vec![sem.top(); width]),
            Formula::Pred(p) => {
                self.require(end)?;
                let n = self.positions[0].len();
                for agent in p.agents().into_iter().flatten() {
                    if agent >= n {
                        return Err(Error::UnknownAgent(format!("#{agent}")));
                    }
                }
                leaf((start..=end).map(|k| sem.atom(p, &self.positions[k])).collect())
            }
            Formula::Not(g) => {
                let child = self.eval(g, start, end)?;
                let values = child.values.iter().map(|v| sem.negate(*v)).collect();
                Node { start, values, children: vec![child] }
            }
            Formula::And(gs) | Formula::Or(gs) => {
                if gs.is_empty() {
                    return Err(Error::InvalidFormula("empty conjunction or disjunction".into()));
                }
                let children = gs
                    .iter()
                    .map(|g| self.eval(g, start, end))
                    .collect::<Result<Vec<_>>>()?;
                let conj = matches!(f, Formula::And(_));
                let mut scratch = Vec::with_capacity(children.len());
                let values = (0..width)
                    .map(|t| {
                        scratch.clear();
                        scratch.extend(children.iter().map(|c| c.values[t]));
                        if conj {
                            sem.meet(&scratch)
                        } else {
                            sem.join(&scratch)
                        }
                    })
                    .collect();
                Node { start, values, children }
            }
            Formula::Implies(a, b) => {
                let lhs = self.eval(a, start, end)?;
                let rhs = self.eval(b, start, end)?;
                let values = (0..width)
                    .map(|t| sem.join(&[sem.negate(lhs.values[t]), rhs.values[t]]))
                    .collect();
                Node { start, values, children: vec![lhs, rhs] }
            }
            Formula::Always(iv, g) | Formula::Eventually(iv, g) => {
                let (lo, hi) = window_offsets(iv, self.ts)?;
                self.require(end + hi)?;
                let child = self.eval(g, start + lo, end + hi)?;
                let conj = matches!(f, Formula::Always(..));
                let values = (0..width)
                    .map(|t| {
                        let window = &child.values[t..=t + hi - lo];
                        if conj {
                            sem.meet(window)
                        } else {
                            sem.join(window)
                        }
                    })
                    .collect();
                Node { start, values, children: vec![child] }
            }
            Formula::Until(iv, a, b) => {
                let (lo, hi) = window_offsets(iv, self.ts)?;
                self.require(end + hi)?;
                let lhs = self.eval(a, start, end + hi)?;
                let rhs = self.eval(b, start + lo, end + hi)?;
                let mut inner = Vec::with_capacity(hi + 2);
                let mut candidates = Vec::with_capacity(hi - lo + 1);
                let values = (0..width)
                    .map(|t| {
                        candidates.clear();
                        for j in t + lo..=t + hi {
                            inner.clear();
                            inner.push(rhs.values[j - lo]);
                            inner.extend_from_slice(&lhs.values[t..=j]);
                            candidates.push(sem.meet(&inner));
                        }
                        sem.join(&candidates)
                    })
                    .collect();
                Node { start, values, children: vec![lhs, rhs] }
            }
        })
    }
}

pub(crate) struct Exact;

impl Semantics for Exact {
    type Value = f64;

    fn top(&self) -> f64 {
        TRUE_ROBUSTNESS
    }

    fn atom(&self, predicate: &Predicate, positions: &[Vec3]) -> f64 {
        predicate.margin(positions)
    }

    fn negate(&self, v: f64) -> f64 {
        -v
    }

    fn meet(&self, values: &[f64]) -> f64 {
        values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn join(&self, values: &[f64]) -> f64 {
        values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

struct Boolean;

impl Semantics for Boolean {
    type Value = bool;

    fn top(&self) -> bool {
        true
    }

    fn atom(&self, predicate: &Predicate, positions: &[Vec3]) -> bool {
        predicate.margin(positions) >= 0.0
    }

    fn negate(&self, v: bool) -> bool {
        !v
    }

    fn meet(&self, values: &[bool]) -> bool {
        values.iter().all(|v| *v)
    }

    fn join(&self, values: &[bool]) -> bool {
        values.iter().any(|v| *v)
    }
}

fn check_sample(trace: &Trace, i: usize) -> Result<()> {
    if i >= trace.len() {
        return Err(Error::InsufficientTrace { needed: i, len: trace.len() });
    }
    Ok(())
}

/// Pointwise satisfaction of `f` by `trace` at sample `i`.
pub fn boolean_satisfaction(f: &Formula, trace: &Trace, i: usize) -> Result<bool> {
    check_sample(trace, i)?;
    let positions = trace.position_table();
    let ev = Evaluator { semantics: Boolean, ts: trace.ts(), positions: &positions };
    Ok(ev.eval(f, i, i)?.values[0])
}

/// Exact (max/min) robustness of `f` on `trace` at sample `i`, in meters.
pub fn robustness(f: &Formula, trace: &Trace, i: usize) -> Result<f64> {
    Ok(robustness_signal(f, trace, i, i)?[0])
}

/// Exact robustness at every sample in `start ..= end`.
pub fn robustness_signal(f: &Formula, trace: &Trace, start: usize, end: usize) -> Result<Vec<f64>> {
    check_sample(trace, end)?;
    if start > end {
        return Ok(Vec::new());
    }
    let positions = trace.position_table();
    let ev = Evaluator { semantics: Exact, ts: trace.ts(), positions: &positions };
    Ok(ev.eval(f, start, end)?.values)
}
