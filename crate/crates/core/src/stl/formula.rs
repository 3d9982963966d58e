use std::fmt;

use super::geometry::Aabb;
use super::interval::Interval;
use super::predicate::{Atom, Predicate};
use crate::{Error, Result};

/// STL formula over leaves of type `P`.
///
/// `And`/`Or` are n-ary. The printer and parser agree on the following
/// binding strengths, tightest first: `!`, `G[a,b]`, `F[a,b]`; `&&`; `||`;
/// `U[a,b]` (non-associative); `=>` (right-associative).
#[derive(Debug, Clone, PartialEq)]
pub enum Formula<P = Predicate> {
    True,
    Pred(P),
    Not(Box<Formula<P>>),
    And(Vec<Formula<P>>),
    Or(Vec<Formula<P>>),
    Implies(Box<Formula<P>>, Box<Formula<P>>),
    Always(Interval, Box<Formula<P>>),
    Eventually(Interval, Box<Formula<P>>),
    Until(Interval, Box<Formula<P>>, Box<Formula<P>>),
}

impl<P> Formula<P> {
    pub fn pred(p: P) -> Self {
        Formula::Pred(p)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Self) -> Self {
        Formula::Not(Box::new(f))
    }

    /// Conjunction; an empty list is `True` and a single child is returned
    /// unchanged.
    pub fn and(mut children: Vec<Self>) -> Self {
        match children.len() {
            0 => Formula::True,
            1 => children.pop().unwrap(),
            _ => Formula::And(children),
        }
    }

    /// Disjunction; an empty list is `!true` and a single child is returned
    /// unchanged.
    pub fn or(mut children: Vec<Self>) -> Self {
        match children.len() {
            0 => Formula::not(Formula::True),
            1 => children.pop().unwrap(),
            _ => Formula::Or(children),
        }
    }

    pub fn implies(lhs: Self, rhs: Self) -> Self {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn always(interval: Interval, f: Self) -> Self {
        Formula::Always(interval, Box::new(f))
    }

    pub fn eventually(interval: Interval, f: Self) -> Self {
        Formula::Eventually(interval, Box::new(f))
    }

    pub fn until(interval: Interval, lhs: Self, rhs: Self) -> Self {
        Formula::Until(interval, Box::new(lhs), Box::new(rhs))
    }

    /// Latest time, relative to the evaluation instant, the formula refers to.
    pub fn horizon(&self) -> f64 {
        match self {
            Formula::True | Formula::Pred(_) => 0.0,
            Formula::Not(f) => f.horizon(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Self::horizon).fold(0.0, f64::max),
            Formula::Implies(a, b) => a.horizon().max(b.horizon()),
            Formula::Always(iv, f) | Formula::Eventually(iv, f) => iv.hi() + f.horizon(),
            Formula::Until(iv, a, b) => iv.hi() + a.horizon().max(b.horizon()),
        }
    }

    /// Nesting depth; leaves have depth 1.
    pub fn depth(&self) -> usize {
        1 + match self {
            Formula::True | Formula::Pred(_) => 0,
            Formula::Not(f) | Formula::Always(_, f) | Formula::Eventually(_, f) => f.depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Self::depth).max().unwrap_or(0),
            Formula::Implies(a, b) | Formula::Until(_, a, b) => a.depth().max(b.depth()),
        }
    }

    /// Visits every leaf predicate in left-to-right order.
    pub fn for_each_predicate<'a>(&'a self, visit: &mut impl FnMut(&'a P)) {
        match self {
            Formula::True => {}
            Formula::Pred(p) => visit(p),
            Formula::Not(f) | Formula::Always(_, f) | Formula::Eventually(_, f) => {
                f.for_each_predicate(visit)
            }
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.for_each_predicate(visit))
            }
            Formula::Implies(a, b) | Formula::Until(_, a, b) => {
                a.for_each_predicate(visit);
                b.for_each_predicate(visit);
            }
        }
    }

    pub fn predicates(&self) -> Vec<&P> {
        let mut out = Vec::new();
        self.for_each_predicate(&mut |p| out.push(p));
        out
    }

    /// Rebuilds the formula with every leaf mapped through `f`.
    pub fn try_map<Q, E>(&self, f: &mut impl FnMut(&P) -> Result<Q, E>) -> Result<Formula<Q>, E> {
        Ok(match self {
            Formula::True => Formula::True,
            Formula::Pred(p) => Formula::Pred(f(p)?),
            Formula::Not(g) => Formula::Not(Box::new(g.try_map(f)?)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.try_map(f)).collect::<Result<_, E>>()?),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.try_map(f)).collect::<Result<_, E>>()?),
            Formula::Implies(a, b) => Formula::Implies(Box::new(a.try_map(f)?), Box::new(b.try_map(f)?)),
            Formula::Always(iv, g) => Formula::Always(*iv, Box::new(g.try_map(f)?)),
            Formula::Eventually(iv, g) => Formula::Eventually(*iv, Box::new(g.try_map(f)?)),
            Formula::Until(iv, a, b) => {
                Formula::Until(*iv, Box::new(a.try_map(f)?), Box::new(b.try_map(f)?))
            }
        })
    }

    /// Checks structural invariants: every `And`/`Or` has at least one child.
    pub fn validate(&self) -> Result<()> {
        match self {
            Formula::True | Formula::Pred(_) => Ok(()),
            Formula::Not(f) | Formula::Always(_, f) | Formula::Eventually(_, f) => f.validate(),
            Formula::And(fs) | Formula::Or(fs) => {
                if fs.is_empty() {
                    return Err(Error::InvalidFormula("empty conjunction or disjunction".into()));
                }
                fs.iter().try_for_each(Self::validate)
            }
            Formula::Implies(a, b) | Formula::Until(_, a, b) => {
                a.validate()?;
                b.validate()
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 0,
            Formula::Until(..) => 1,
            Formula::Or(fs) if fs.len() > 1 => 2,
            Formula::And(fs) if fs.len() > 1 => 3,
            Formula::Or(fs) | Formula::And(fs) => fs.first().map_or(5, Self::precedence),
            Formula::Not(_) | Formula::Always(..) | Formula::Eventually(..) => 4,
            Formula::True | Formula::Pred(_) => 5,
        }
    }
}

impl Formula<Atom> {
    /// Names of all agents referenced by the formula, in first-use order.
    pub fn agent_names(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        self.for_each_predicate(&mut |atom| {
            for name in atom.agents() {
                if !names.iter().any(|n| n == name) {
                    names.push(name.to_string());
                }
            }
        });
        names
    }

    /// Names of all regions referenced by the formula, in first-use order.
    pub fn region_names(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        self.for_each_predicate(&mut |atom| {
            if let Some(name) = atom.region() {
                if !names.iter().any(|n| n == name) {
                    names.push(name.to_string());
                }
            }
        });
        names
    }

    /// Binds agent and region names; `agents[i]` becomes agent index `i`.
    pub fn resolve(
        &self,
        agents: &[impl AsRef<str>],
        region: impl Fn(&str) -> Option<Aabb>,
    ) -> Result<Formula<Predicate>> {
        self.validate()?;
        self.try_map(&mut |atom: &Atom| atom.resolve(agents, &region))
    }
}

fn write_child<P: fmt::Display>(
    child: &Formula<P>,
    min_prec: u8,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    if child.precedence() < min_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl<P: fmt::Display> fmt::Display for Formula<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::Pred(p) => write!(f, "{p}"),
            Formula::Not(g) => {
                write!(f, "!")?;
                write_child(g, 4, f)
            }
            Formula::Always(iv, g) => {
                write!(f, "G{iv} ")?;
                write_child(g, 4, f)
            }
            Formula::Eventually(iv, g) => {
                write!(f, "F{iv} ")?;
                write_child(g, 4, f)
            }
            Formula::And(gs) | Formula::Or(gs) if gs.len() == 1 => write!(f, "{}", gs[0]),
            Formula::And(gs) | Formula::Or(gs) => {
                let (op, min) = if matches!(self, Formula::And(_)) { ("&&", 4) } else { ("||", 3) };
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " {op} ")?;
                    }
                    write_child(g, min, f)?;
                }
                Ok(())
            }
            Formula::Until(iv, a, b) => {
                write_child(a, 2, f)?;
                write!(f, " U{iv} ")?;
                write_child(b, 2, f)
            }
            Formula::Implies(a, b) => {
                write_child(a, 1, f)?;
                write!(f, " => ")?;
                write_child(b, 0, f)
            }
        }
    }
}
