use std::fmt;

use super::geometry::{Aabb, Vec3};
use crate::{Error, Result};

/// Position component addressed by an affine DSL term (`d1.px`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Axis::X => "px",
            Axis::Y => "py",
            Axis::Z => "pz",
        }
    }
}

/// Predicate as written in a mission: agents and regions are referenced by
/// name and bound later against a mission's agent list and region table.
#[derive(Debug, Clone, PartialEq)]
pub enum Atom {
    /// `coeffs . p + offset >= 0`.
    Affine {
        agent: String,
        coeffs: [f64; 3],
        offset: f64,
    },
    Inside { agent: String, region: String },
    Outside { agent: String, region: String },
    /// `||p_first - p_second|| >= delta_min`.
    Separation {
        first: String,
        second: String,
        delta_min: f64,
    },
}

impl Atom {
    pub fn affine(agent: impl Into<String>, coeffs: [f64; 3], offset: f64) -> Self {
        Atom::Affine { agent: agent.into(), coeffs, offset }
    }

    pub fn inside(agent: impl Into<String>, region: impl Into<String>) -> Self {
        Atom::Inside { agent: agent.into(), region: region.into() }
    }

    pub fn outside(agent: impl Into<String>, region: impl Into<String>) -> Self {
        Atom::Outside { agent: agent.into(), region: region.into() }
    }

    pub fn separation(first: impl Into<String>, second: impl Into<String>, delta_min: f64) -> Self {
        Atom::Separation { first: first.into(), second: second.into(), delta_min }
    }

    pub fn agents(&self) -> Vec<&str> {
        match self {
            Atom::Affine { agent, .. } | Atom::Inside { agent, .. } | Atom::Outside { agent, .. } => {
                vec![agent]
            }
            Atom::Separation { first, second, .. } => vec![first, second],
        }
    }

    pub fn region(&self) -> Option<&str> {
        match self {
            Atom::Inside { region, .. } | Atom::Outside { region, .. } => Some(region),
            _ => None,
        }
    }

    pub(crate) fn check(&self) -> Result<()> {
        match self {
            Atom::Affine { coeffs, offset, .. } => {
                if coeffs.iter().chain([offset]).all(|v| v.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::InvalidPredicate("affine coefficients must be finite".into()))
                }
            }
            Atom::Separation { first, second, delta_min } => {
                if first == second {
                    Err(Error::InvalidPredicate(format!("separation of `{first}` from itself")))
                } else if !(delta_min.is_finite() && *delta_min > 0.0) {
                    Err(Error::InvalidPredicate(format!(
                        "separation distance must be positive, got {delta_min}"
                    )))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Binds names to agent indices and region boxes.
    pub fn resolve(
        &self,
        agents: &[impl AsRef<str>],
        region: impl Fn(&str) -> Option<Aabb>,
    ) -> Result<Predicate> {
        self.check()?;
        let index = |name: &str| {
            agents
                .iter()
                .position(|a| a.as_ref() == name)
                .ok_or_else(|| Error::UnknownAgent(name.to_string()))
        };
        let lookup = |name: &str| region(name).ok_or_else(|| Error::UnknownRegion(name.to_string()));
        Ok(match self {
            Atom::Affine { agent, coeffs, offset } => Predicate::Halfspace {
                agent: index(agent)?,
                normal: Vec3::from(*coeffs),
                offset: *offset,
            },
            Atom::Inside { agent, region } => Predicate::InsideBox {
                agent: index(agent)?,
                region: lookup(region)?,
            },
            Atom::Outside { agent, region } => Predicate::OutsideBox {
                agent: index(agent)?,
                region: lookup(region)?,
            },
            Atom::Separation { first, second, delta_min } => Predicate::Separation {
                first: index(first)?,
                second: index(second)?,
                delta_min: *delta_min,
            },
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Affine { agent, coeffs, offset } => {
                let mut first = true;
                for axis in Axis::ALL {
                    let c = coeffs[axis.index()];
                    if c == 0.0 {
                        continue;
                    }
                    if first {
                        write!(f, "{c}*{agent}.{}", axis.suffix())?;
                    } else if c < 0.0 {
                        write!(f, " - {}*{agent}.{}", -c, axis.suffix())?;
                    } else {
                        write!(f, " + {c}*{agent}.{}", axis.suffix())?;
                    }
                    first = false;
                }
                if first {
                    write!(f, "0*{agent}.px")?;
                }
                write!(f, " >= {}", -offset)
            }
            Atom::Inside { agent, region } => write!(f, "in({agent},{region})"),
            Atom::Outside { agent, region } => write!(f, "out({agent},{region})"),
            Atom::Separation { first, second, delta_min } => {
                write!(f, "sep({first},{second}) >= {delta_min}")
            }
        }
    }
}

/// Resolved predicate: a real-valued margin over agent positions, in meters.
/// The predicate holds iff its margin is nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    /// `normal . p + offset`.
    Halfspace { agent: usize, normal: Vec3, offset: f64 },
    InsideBox { agent: usize, region: Aabb },
    OutsideBox { agent: usize, region: Aabb },
    Separation { first: usize, second: usize, delta_min: f64 },
}

impl Predicate {
    pub fn agents(&self) -> [Option<usize>; 2] {
        match self {
            Predicate::Halfspace { agent, .. }
            | Predicate::InsideBox { agent, .. }
            | Predicate::OutsideBox { agent, .. } => [Some(*agent), None],
            Predicate::Separation { first, second, .. } => [Some(*first), Some(*second)],
        }
    }

    pub(crate) fn margin(&self, positions: &[Vec3]) -> f64 {
        match self {
            Predicate::Halfspace { agent, normal, offset } => normal.dot(&positions[*agent]) + offset,
            Predicate::InsideBox { agent, region } => region.signed_margin(&positions[*agent]),
            Predicate::OutsideBox { agent, region } => -region.signed_margin(&positions[*agent]),
            Predicate::Separation { first, second, delta_min } => {
                (positions[*first] - positions[*second]).norm() - delta_min
            }
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |v: Vec3| format!("({},{},{})", v.x, v.y, v.z);
        match self {
            Predicate::Halfspace { agent, normal, offset } => {
                write!(f, "{}.p[#{agent}] + {offset} >= 0", v(*normal))
            }
            Predicate::InsideBox { agent, region } => {
                write!(f, "in(#{agent},{}..{})", v(region.lo()), v(region.hi()))
            }
            Predicate::OutsideBox { agent, region } => {
                write!(f, "out(#{agent},{}..{})", v(region.lo()), v(region.hi()))
            }
            Predicate::Separation { first, second, delta_min } => {
                write!(f, "sep(#{first},#{second}) >= {delta_min}")
            }
        }
    }
}

/// Evaluates the margin of `predicate` on one instant of a multi-agent
/// state, given as one position per agent.
pub fn eval_predicate(predicate: &Predicate, positions: &[Vec3]) -> Result<f64> {
    for agent in predicate.agents().into_iter().flatten() {
        if agent >= positions.len() {
            return Err(Error::UnknownAgent(format!("#{agent}")));
        }
    }
    Ok(predicate.margin(positions))
}
