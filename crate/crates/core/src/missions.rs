//! Builders for the two benchmark missions: multi-drone reach-and-avoid and
//! the two-group power-line inspection.

use indexmap::IndexMap;

use crate::stl::{Aabb, Atom, Formula, Interval, WORKSPACE_REGION};
use crate::{Error, Result};

/// Named regions the mission formulas refer to, plus the separation distance
/// between agents.
///
/// Region names: the workspace is `ws`, goals and obstacles use their map
/// keys, and poles are `pole1` through `pole4`.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub workspace: Aabb,
    pub goals: IndexMap<String, Aabb>,
    pub obstacles: IndexMap<String, Aabb>,
    pub poles: Vec<Aabb>,
    pub delta_min: f64,
}

pub fn pole_name(index: usize) -> String {
    format!("pole{}", index + 1)
}

impl Environment {
    pub fn new(workspace: Aabb, delta_min: f64) -> Self {
        Self {
            workspace,
            goals: IndexMap::new(),
            obstacles: IndexMap::new(),
            poles: Vec::new(),
            delta_min,
        }
    }

    pub fn with_goal(mut self, name: impl Into<String>, region: Aabb) -> Self {
        self.goals.insert(name.into(), region);
        self
    }

    pub fn with_obstacle(mut self, name: impl Into<String>, region: Aabb) -> Self {
        self.obstacles.insert(name.into(), region);
        self
    }

    pub fn with_poles(mut self, poles: Vec<Aabb>) -> Self {
        self.poles = poles;
        self
    }

    pub fn region(&self, name: &str) -> Option<Aabb> {
        if name == WORKSPACE_REGION {
            return Some(self.workspace);
        }
        if let Some(b) = self.goals.get(name).or_else(|| self.obstacles.get(name)) {
            return Some(*b);
        }
        let index: usize = name.strip_prefix("pole")?.parse().ok()?;
        self.poles.get(index.checked_sub(1)?).copied()
    }

    /// True for regions an agent is meant to visit: goals and poles.
    pub fn is_target(&self, name: &str) -> bool {
        self.goals.contains_key(name)
            || (0..self.poles.len()).any(|i| pole_name(i) == name)
    }

    /// Checks that `delta_min > 0`, names are unambiguous, and every goal
    /// and pole intersects the workspace.
    pub fn check(&self) -> Result<()> {
        if !(self.delta_min.is_finite() && self.delta_min > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "delta_min must be positive, got {}",
                self.delta_min
            )));
        }
        let mut names: Vec<&str> = vec![WORKSPACE_REGION];
        let pole_names: Vec<String> = (0..self.poles.len()).map(pole_name).collect();
        for name in self.goals.keys().chain(self.obstacles.keys()).chain(&pole_names) {
            if names.contains(&name.as_str()) {
                return Err(Error::InvalidSpec(format!("region name `{name}` is used twice")));
            }
            names.push(name);
        }
        for (name, b) in self.goals.iter().chain(pole_names.iter().zip(&self.poles)) {
            if !b.intersects(&self.workspace) {
                return Err(Error::InvalidSpec(format!("region `{name}` lies outside the workspace")));
            }
        }
        Ok(())
    }
}

fn interval(hi: f64) -> Result<Interval> {
    Interval::new(0.0, hi)
}

fn check_agents(agents: &[impl AsRef<str>]) -> Result<()> {
    if agents.is_empty() {
        return Err(Error::InvalidSpec("mission needs at least one agent".into()));
    }
    for (i, a) in agents.iter().enumerate() {
        if agents[..i].iter().any(|b| b.as_ref() == a.as_ref()) {
            return Err(Error::DuplicateAgent(a.as_ref().to_string()));
        }
    }
    Ok(())
}

/// `G[0,T] sep(i,j) >= delta_min` for every unordered pair `i < j`; `true`
/// for a single agent.
pub fn pairwise_safety(agents: &[impl AsRef<str>], delta_min: f64, duration: f64) -> Result<Formula<Atom>> {
    check_agents(agents)?;
    let iv = interval(duration)?;
    let mut terms = Vec::new();
    for (i, a) in agents.iter().enumerate() {
        for b in &agents[i + 1..] {
            terms.push(Formula::always(
                iv,
                Formula::pred(Atom::separation(a.as_ref(), b.as_ref(), delta_min)),
            ));
        }
    }
    Ok(Formula::and(terms))
}

/// Multi-agent reach-and-avoid over `[0, T]`.
///
/// Each `(agent, goal)` entry contributes
/// `F[0,T] in(agent,goal) && G[0,T] in(agent,ws) && G[0,T] out(agent,obs)...`
/// over all obstacles, and the per-agent blocks are conjoined with
/// [`pairwise_safety`] (omitted for a single agent).
pub fn reach_avoid(env: &Environment, assignment: &[(String, String)], duration: f64) -> Result<Formula<Atom>> {
    env.check()?;
    let agents: Vec<&str> = assignment.iter().map(|(a, _)| a.as_str()).collect();
    check_agents(&agents)?;
    let iv = interval(duration)?;
    let mut blocks = Vec::new();
    for (agent, goal) in assignment {
        if !env.goals.contains_key(goal) {
            return Err(Error::UnknownRegion(goal.clone()));
        }
        let mut block = vec![
            Formula::eventually(iv, Formula::pred(Atom::inside(agent, goal))),
            Formula::always(iv, Formula::pred(Atom::inside(agent, WORKSPACE_REGION))),
        ];
        for obstacle in env.obstacles.keys() {
            block.push(Formula::always(iv, Formula::pred(Atom::outside(agent, obstacle))));
        }
        blocks.push(Formula::and(block));
    }
    let safety = pairwise_safety(&agents, env.delta_min, duration)?;
    if safety != Formula::True {
        blocks.push(safety);
    }
    Ok(Formula::and(blocks))
}

/// Two-group power-line inspection with mission time `T`.
///
/// Agents `1..=N/2` each visit poles 1 and 4 within `T/2` of a common start
/// instant; agents `N/2+1..=N` hold inside pole 2 until they are all inside
/// pole 3, both within the same `T/2` window. That start instant must fall in
/// `[0, T]`, and every agent stays in the workspace and apart from every other
/// agent throughout:
///
/// ```text
/// /\_k G[0,T] (/\_{j>k} sep(k,j) >= delta_min && in(k,ws))
///   && F[0,T] ( /\_{k<=N/2} (F[0,T/2] in(k,pole1) && F[0,T/2] in(k,pole4))
///               && (/\_{k>N/2} in(k,pole2)) U[0,T/2] (/\_{k>N/2} in(k,pole3)) )
/// ```
///
/// Because the Until includes its endpoint, the switch happens at a sample
/// inside both pole 2 and pole 3, so those two inspection volumes must
/// overlap for the mission to be satisfiable. The horizon is `1.5 T`.
pub fn powerline_inspection(env: &Environment, agents: &[impl AsRef<str>], duration: f64) -> Result<Formula<Atom>> {
    env.check()?;
    check_agents(agents)?;
    if !agents.len().is_multiple_of(2) {
        return Err(Error::OddAgentCount(agents.len()));
    }
    if env.poles.len() != 4 {
        return Err(Error::MissingPoles(env.poles.len()));
    }
    let whole = interval(duration)?;
    let half = interval(duration / 2.0)?;
    let names: Vec<&str> = agents.iter().map(AsRef::as_ref).collect();

    let mut conjuncts = Vec::new();
    for (i, k) in names.iter().enumerate() {
        let mut local: Vec<Formula<Atom>> = names[i + 1..]
            .iter()
            .map(|j| Formula::pred(Atom::separation(*k, *j, env.delta_min)))
            .collect();
        local.push(Formula::pred(Atom::inside(*k, WORKSPACE_REGION)));
        conjuncts.push(Formula::always(whole, Formula::and(local)));
    }

    let (group1, group2) = names.split_at(names.len() / 2);
    let pole = |k: &str, i: usize| Formula::pred(Atom::inside(k, pole_name(i)));
    let mut visits: Vec<Formula<Atom>> = Vec::new();
    for k in group1 {
        visits.push(Formula::eventually(half, pole(k, 0)));
        visits.push(Formula::eventually(half, pole(k, 3)));
    }
    let hold = Formula::and(group2.iter().map(|k| pole(k, 1)).collect());
    let reach = Formula::and(group2.iter().map(|k| pole(k, 2)).collect());
    visits.push(Formula::until(half, hold, reach));
    conjuncts.push(Formula::eventually(whole, Formula::and(visits)));
    Ok(Formula::and(conjuncts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stl::{parse_formula, Vec3};

    fn cube(x: f64, y: f64, z: f64, side: f64) -> Aabb {
        Aabb::cube(Vec3::new(x, y, z), side).unwrap()
    }

    fn env() -> Environment {
        Environment::new(Aabb::new(Vec3::repeat(-5.0), Vec3::repeat(5.0)).unwrap(), 0.5)
            .with_goal("g1", cube(3.0, 3.0, 0.0, 1.0))
            .with_goal("g2", cube(-3.0, 3.0, 0.0, 1.0))
            .with_obstacle("obs", cube(0.0, 0.0, 0.0, 1.0))
            .with_poles((0..4).map(|i| cube(-3.0 + 2.0 * i as f64, -3.0, 0.0, 1.5)).collect())
    }

    fn count(f: &Formula<Atom>, pick: &impl Fn(&Formula<Atom>) -> bool) -> usize {
        let own = usize::from(pick(f));
        own + match f {
            Formula::True | Formula::Pred(_) => 0,
            Formula::Not(g) | Formula::Always(_, g) | Formula::Eventually(_, g) => count(g, pick),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().map(|g| count(g, pick)).sum(),
            Formula::Implies(a, b) | Formula::Until(_, a, b) => count(a, pick) + count(b, pick),
        }
    }

    fn always(f: &Formula<Atom>) -> usize {
        count(f, &|g| matches!(g, Formula::Always(..)))
    }

    fn eventually(f: &Formula<Atom>) -> usize {
        count(f, &|g| matches!(g, Formula::Eventually(..)))
    }

    #[test]
    fn safety_pairs() {
        assert_eq!(pairwise_safety(&["d1"], 0.5, 10.0).unwrap(), Formula::True);
        assert_eq!(
            pairwise_safety(&["d1", "d2"], 0.5, 10.0).unwrap(),
            parse_formula("G[0,10] sep(d1,d2) >= 0.5").unwrap()
        );
        for n in 2..6 {
            let names: Vec<String> = (1..=n).map(|i| format!("d{i}")).collect();
            let f = pairwise_safety(&names, 0.5, 10.0).unwrap();
            assert_eq!(always(&f), n * (n - 1) / 2);
        }
        assert_eq!(
            pairwise_safety(&["d1", "d1"], 0.5, 1.0),
            Err(Error::DuplicateAgent("d1".into()))
        );
    }

    #[test]
    fn reach_avoid_single_agent_without_obstacles() {
        let mut e = env();
        e.obstacles.clear();
        let f = reach_avoid(&e, &[("d1".into(), "g1".into())], 10.0).unwrap();
        assert_eq!(f, parse_formula("F[0,10] in(d1,g1) && G[0,10] in(d1,ws)").unwrap());
    }

    #[test]
    fn reach_avoid_two_agents_one_obstacle() {
        let f = reach_avoid(&env(), &[("d1".into(), "g1".into()), ("d2".into(), "g2".into())], 10.0).unwrap();
        // Per agent: one Eventually, workspace and obstacle Always; plus one pair.
        assert_eq!(eventually(&f), 2);
        assert_eq!(always(&f), 2 * 2 + 1);
        let Formula::And(top) = &f else { panic!("top level must be a conjunction") };
        assert_eq!(top.last().unwrap(), &pairwise_safety(&["d1", "d2"], 0.5, 10.0).unwrap());
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn reach_avoid_rejects_unknown_goals() {
        assert_eq!(
            reach_avoid(&env(), &[("d1".into(), "gate".into())], 10.0),
            Err(Error::UnknownRegion("gate".into()))
        );
    }

    #[test]
    fn powerline_groups() {
        let f = powerline_inspection(&env(), &["d1", "d2"], 10.0).unwrap();
        let expected = parse_formula(
            "G[0,10] (sep(d1,d2) >= 0.5 && in(d1,ws)) && G[0,10] in(d2,ws) \
             && F[0,10] (F[0,5] in(d1,pole1) && F[0,5] in(d1,pole4) \
             && (in(d2,pole2) U[0,5] in(d2,pole3)))",
        )
        .unwrap();
        assert_eq!(f, expected);
        assert_eq!(f.horizon(), 15.0);

        let names = ["d1", "d2", "d3", "d4"];
        let f = powerline_inspection(&env(), &names, 10.0).unwrap();
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        assert!(f.horizon() <= 15.0);
        let text = f.to_string();
        for k in ["d1", "d2"] {
            assert!(text.contains(&format!("F[0,5] in({k},pole1)")));
            assert!(text.contains(&format!("F[0,5] in({k},pole4)")));
        }
        assert!(text.contains("in(d3,pole2) && in(d4,pole2) U[0,5] in(d3,pole3) && in(d4,pole3)"));
        // Separation pairs are emitted once.
        assert_eq!(text.matches("sep(").count(), 6);
    }

    #[test]
    fn powerline_preconditions() {
        assert_eq!(powerline_inspection(&env(), &["a", "b", "c"], 10.0), Err(Error::OddAgentCount(3)));
        let mut e = env();
        e.poles.pop();
        assert_eq!(powerline_inspection(&e, &["a", "b"], 10.0), Err(Error::MissingPoles(3)));
    }

    #[test]
    fn environment_lookup_and_checks() {
        let e = env();
        assert_eq!(e.region("ws"), Some(e.workspace));
        assert_eq!(e.region("pole4"), Some(e.poles[3]));
        assert_eq!(e.region("pole0"), None);
        assert_eq!(e.region("pole5"), None);
        assert!(e.is_target("g2") && e.is_target("pole1") && !e.is_target("obs"));
        assert!(e.check().is_ok());
        let far = e.clone().with_goal("far", cube(20.0, 0.0, 0.0, 1.0));
        assert!(far.check().is_err());
        let clash = env().with_obstacle("g1", cube(0.0, 2.0, 0.0, 1.0));
        assert!(clash.check().is_err());
    }
}
