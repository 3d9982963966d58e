use crate::primitives::KnotState;
use crate::stl::Vec3;
use crate::{Error, Result};

/// Uniformly sampled multi-agent trajectory: `states[agent][sample]`, all
/// agents sharing one sampling period and length.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    ts: f64,
    states: Vec<Vec<KnotState>>,
}

impl Trace {
    pub fn new(ts: f64, states: Vec<Vec<KnotState>>) -> Result<Self> {
        if !(ts.is_finite() && ts > 0.0) {
            return Err(Error::InvalidTrace(format!("sampling period must be positive, got {ts}")));
        }
        let len = states.first().map_or(0, Vec::len);
        if len == 0 {
            return Err(Error::InvalidTrace("trace needs at least one agent and one sample".into()));
        }
        if let Some(bad) = states.iter().position(|s| s.len() != len) {
            return Err(Error::InvalidTrace(format!(
                "agent {bad} has {} samples, expected {len}",
                states[bad].len()
            )));
        }
        Ok(Self { ts, states })
    }

    /// Position-only trace with zero velocity and acceleration.
    pub fn from_positions(ts: f64, positions: Vec<Vec<Vec3>>) -> Result<Self> {
        let states = positions
            .into_iter()
            .map(|agent| agent.into_iter().map(KnotState::at_rest).collect())
            .collect();
        Self::new(ts, states)
    }

    pub fn ts(&self) -> f64 {
        self.ts
    }

    /// Number of samples per agent.
    pub fn len(&self) -> usize {
        self.states[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn num_agents(&self) -> usize {
        self.states.len()
    }

    pub fn agent(&self, index: usize) -> &[KnotState] {
        &self.states[index]
    }

    pub fn states(&self) -> &[Vec<KnotState>] {
        &self.states
    }

    pub fn time(&self, sample: usize) -> f64 {
        sample as f64 * self.ts
    }

    /// Positions of all agents at `sample`.
    pub fn positions_at(&self, sample: usize) -> Vec<Vec3> {
        self.states.iter().map(|s| s[sample].p).collect()
    }

    /// All positions, indexed `[sample][agent]`.
    pub(crate) fn position_table(&self) -> Vec<Vec<Vec3>> {
        (0..self.len()).map(|k| self.positions_at(k)).collect()
    }

    /// Smallest pairwise distance between agents over all samples; `None`
    /// for a single agent.
    pub fn min_pairwise_distance(&self) -> Option<f64> {
        let n = self.num_agents();
        let mut best: Option<f64> = None;
        for k in 0..self.len() {
            for i in 0..n {
                for j in i + 1..n {
                    let d = (self.states[i][k].p - self.states[j][k].p).norm();
                    best = Some(best.map_or(d, |b| b.min(d)));
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_or_empty_traces() {
        assert!(Trace::from_positions(0.1, vec![]).is_err());
        assert!(Trace::from_positions(0.1, vec![vec![]]).is_err());
        assert!(Trace::from_positions(0.0, vec![vec![Vec3::zeros()]]).is_err());
        assert!(Trace::from_positions(
            0.1,
            vec![vec![Vec3::zeros(); 3], vec![Vec3::zeros(); 2]]
        )
        .is_err());
    }

    #[test]
    fn min_distance_scans_every_sample() {
        let a = vec![Vec3::zeros(), Vec3::zeros(), Vec3::zeros()];
        let b = vec![Vec3::new(3.0, 0.0, 0.0), Vec3::new(0.0, 0.4, 0.0), Vec3::new(2.0, 0.0, 0.0)];
        let tr = Trace::from_positions(1.0, vec![a.clone(), b]).unwrap();
        assert_eq!(tr.min_pairwise_distance(), Some(0.4));
        let single = Trace::from_positions(1.0, vec![a]).unwrap();
        assert_eq!(single.min_pairwise_distance(), None);
    }
}
