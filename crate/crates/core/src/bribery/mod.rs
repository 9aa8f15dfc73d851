//! Bribery: changing voters' orders, under four cost models.
//!
//! * [`solve_dollar`] decides unit and per-voter pricing for any threshold.
//! * [`solve_swapshift_no_threshold`] decides swap and coalition-shift
//!   pricing when `tau = 0`, through min-cost flow.
//! * [`brute_force_bribery`] is the exhaustive reference used by the tests
//!   and the `oracle-check` command.

mod dollar;
mod oracle;
mod swapshift;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

pub use dollar::{solve_dollar, solve_dollar_with, DollarProgram};
pub use oracle::{brute_force_bribery, default_guard, BRIBERY_GUARD};
pub use swapshift::{shift_to_swap, solve_swapshift_no_threshold, solve_swapshift_no_threshold_with};

use crate::election::{check_objectives, Election, Goal, Party, PartySet, PreferenceOrder, Tally};
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Cost of a coalition-shift bribe as a function of the number of swaps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftSchedule {
    /// `s(x) = slope * x`.
    Linear(Rational),
    /// `s(x) = table[x]`; bribes needing more swaps than listed are
    /// unavailable.
    Table(Vec<Rational>),
}

impl ShiftSchedule {
    pub fn cost(&self, swaps: usize) -> Option<Rational> {
        match self {
            ShiftSchedule::Linear(slope) => Some(slope * rational::int(swaps as i64)),
            ShiftSchedule::Table(t) => t.get(swaps).copied(),
        }
    }

    pub fn slope(&self) -> Option<Rational> {
        match self {
            ShiftSchedule::Linear(slope) => Some(*slope),
            ShiftSchedule::Table(_) => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ShiftSchedule::Linear(slope) if !rational::is_non_negative(slope) => Err(
                Error::InvalidInstance("shift slope must be non-negative".into()),
            ),
            ShiftSchedule::Table(t) => {
                if t.first().map_or(true, |c| !c.is_zero()) {
                    return Err(Error::InvalidInstance("shift table must start at 0".into()));
                }
                if t.windows(2).any(|w| w[1] < w[0]) {
                    return Err(Error::InvalidInstance("shift table must be non-decreasing".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CostModel {
    /// Every changed voter costs 1.
    Uniform,
    /// Changing voter `i` costs `prices[i]`.
    PerVoter(Vec<Rational>),
    /// `matrix[i][p][q]` is the price for voter `i` of moving `q` above `p`.
    SwapMatrix(Vec<Vec<Vec<Rational>>>),
    /// Per-voter schedules; only coalition parties may move up.
    CoalitionShift(Vec<ShiftSchedule>),
}

impl CostModel {
    pub fn name(&self) -> &'static str {
        match self {
            CostModel::Uniform => "uniform",
            CostModel::PerVoter(_) => "per-voter",
            CostModel::SwapMatrix(_) => "swap",
            CostModel::CoalitionShift(_) => "coalition-shift",
        }
    }

    /// Per-voter prices for the two models that have them.
    pub fn voter_prices(&self, voters: usize) -> Option<Vec<Rational>> {
        match self {
            CostModel::Uniform => Some(vec![Rational::one(); voters]),
            CostModel::PerVoter(p) => Some(p.clone()),
            _ => None,
        }
    }

    pub fn is_lift_model(&self) -> bool {
        matches!(self, CostModel::SwapMatrix(_) | CostModel::CoalitionShift(_))
    }

    fn validate(&self, voters: usize, parties: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInstance(m));
        match self {
            CostModel::Uniform => Ok(()),
            CostModel::PerVoter(p) => {
                if p.len() != voters {
                    return bad(format!("{} prices for {} voters", p.len(), voters));
                }
                if p.iter().any(|c| !rational::is_non_negative(c)) {
                    return bad("voter prices must be non-negative".into());
                }
                Ok(())
            }
            CostModel::SwapMatrix(m) => {
                if m.len() != voters {
                    return bad(format!("{} swap matrices for {} voters", m.len(), voters));
                }
                for rows in m {
                    if rows.len() != parties || rows.iter().any(|r| r.len() != parties) {
                        return bad("swap matrix must be square over the universe".into());
                    }
                    if rows.iter().flatten().any(|c| !rational::is_non_negative(c)) {
                        return bad("swap costs must be non-negative".into());
                    }
                }
                Ok(())
            }
            CostModel::CoalitionShift(s) => {
                if s.len() != voters {
                    return bad(format!("{} shift schedules for {} voters", s.len(), voters));
                }
                s.iter().try_for_each(ShiftSchedule::validate)
            }
        }
    }
}

/// New orders for the bribed voters, keyed by voter index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bribe {
    pub changes: BTreeMap<usize, PreferenceOrder>,
}

impl Bribe {
    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }

    pub fn apply(&self, election: &Election) -> Result<Election> {
        let mut voters = election.voters().to_vec();
        for (&i, order) in &self.changes {
            let v = voters
                .get_mut(i)
                .ok_or_else(|| Error::InvalidInstance(format!("bribe names voter {i}")))?;
            v.order = order.clone();
        }
        election.with_voters(voters)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BriberyInstance {
    pub election: Election,
    pub goal: Goal,
    pub cost_model: CostModel,
    pub budget: Rational,
}

impl BriberyInstance {
    pub fn new(election: Election, goal: Goal, cost_model: CostModel, budget: Rational) -> Result<Self> {
        let universe_len = election.universe().len();
        if goal.coalition.universe_len() != universe_len {
            return Err(Error::InvalidInstance("goal over a different universe".into()));
        }
        if !rational::is_non_negative(&budget) {
            return Err(Error::InvalidInstance("budget must be non-negative".into()));
        }
        cost_model.validate(election.num_voters(), universe_len)?;
        if cost_model.is_lift_model() && election.running().len() != universe_len {
            return Err(Error::InvalidInstance(
                "swap and shift pricing need every universe party running".into(),
            ));
        }
        Ok(BriberyInstance {
            election,
            goal,
            cost_model,
            budget,
        })
    }

    pub fn num_voters(&self) -> usize {
        self.election.num_voters()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BriberyDecision {
    pub feasible: bool,
    pub witness: Option<Bribe>,
    /// Optimal cost, present when feasible.
    pub cost: Option<Rational>,
}

impl BriberyDecision {
    pub fn infeasible() -> Self {
        BriberyDecision {
            feasible: false,
            witness: None,
            cost: None,
        }
    }
}

/// Price of replacing `old` by `new` for voter `voter`.
pub fn bribe_cost(
    model: &CostModel,
    coalition: &PartySet,
    voter: usize,
    old: &PreferenceOrder,
    new: &PreferenceOrder,
) -> Result<Rational> {
    if old == new {
        return Ok(Rational::zero());
    }
    match model {
        CostModel::Uniform => Ok(Rational::one()),
        CostModel::PerVoter(p) => Ok(p[voter]),
        CostModel::SwapMatrix(m) => Ok(old.inversions(new).map(|(p, q)| m[voter][p.0][q.0]).sum()),
        CostModel::CoalitionShift(s) => {
            let mut swaps = 0;
            for (_, q) in old.inversions(new) {
                if !coalition.contains(q) {
                    return Err(Error::IllegalShift {
                        voter,
                        party: format!("#{}", q.0),
                    });
                }
                swaps += 1;
            }
            s[voter]
                .cost(swaps)
                .ok_or(Error::ScheduleTooShort { voter, swaps })
        }
    }
}

/// Sum of the `count` smallest prices among voters whose top running party
/// is `party`; `None` when fewer than `count` such voters exist.
pub fn mincost_pool(
    election: &Election,
    prices: &[Rational],
    party: Party,
    count: usize,
) -> Option<Rational> {
    let mut pool: Vec<Rational> = (0..election.num_voters())
        .filter(|&i| election.top_choice(i) == party)
        .map(|i| prices[i])
        .collect();
    if count > pool.len() {
        return None;
    }
    pool.sort();
    Some(pool[..count].iter().sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    Favored,
    CoalitionRest,
    Opposition,
}

impl Group {
    pub const ALL: [Group; 3] = [Group::Favored, Group::CoalitionRest, Group::Opposition];
}

/// Running parties of `group`, using the stand-in favored party when
/// `rho = 0`.
pub fn group_members(election: &Election, goal: &Goal, group: Group) -> Vec<Party> {
    let g = goal.groups(election.running());
    match group {
        Group::Favored => g.favored.into_iter().collect(),
        Group::CoalitionRest => g.rest,
        Group::Opposition => g.opposition,
    }
}

/// Cheapest way to make some member of `group` the voter's top choice by
/// lifting a single party, with the resulting order. `None` means no such
/// lift is available.
pub fn min_cost_to_top(
    instance: &BriberyInstance,
    voter: usize,
    group: Group,
) -> Result<Option<(Rational, PreferenceOrder)>> {
    let election = &instance.election;
    let members = group_members(election, &instance.goal, group);
    let order = &election.voters()[voter].order;
    if members.contains(&election.top_choice(voter)) {
        return Ok(Some((Rational::zero(), order.clone())));
    }
    let mut best: Option<(Rational, PreferenceOrder)> = None;
    let mut targets = members;
    targets.sort_by_key(|&q| order.position(q));
    for q in targets {
        let lifted = order.lift(q);
        let cost = match bribe_cost(&instance.cost_model, &instance.goal.coalition, voter, order, &lifted) {
            Ok(c) => c,
            Err(Error::IllegalShift { .. } | Error::ScheduleTooShort { .. }) => continue,
            Err(e) => return Err(e),
        };
        if best.as_ref().map_or(true, |(b, _)| cost < *b) {
            best = Some((cost, lifted));
        }
    }
    Ok(best)
}

/// Outcome of re-tallying an election after a bribe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BribeReport {
    pub cost: Rational,
    pub tally: Tally,
    pub goal_met: bool,
}

impl BribeReport {
    pub fn accepted(&self, budget: &Rational) -> bool {
        self.goal_met && self.cost <= *budget
    }
}

/// Prices the bribe and re-tallies the bribed election from scratch.
pub fn evaluate_bribe(instance: &BriberyInstance, bribe: &Bribe) -> Result<BribeReport> {
    let election = &instance.election;
    let mut cost = Rational::zero();
    for (&i, new) in &bribe.changes {
        let old = &election
            .voters()
            .get(i)
            .ok_or_else(|| Error::InvalidInstance(format!("bribe names voter {i}")))?
            .order;
        if new.ranking().len() != old.ranking().len() {
            return Err(Error::InvalidOrder(format!("bribed order of voter {i}")));
        }
        cost += bribe_cost(&instance.cost_model, &instance.goal.coalition, i, old, new)?;
    }
    let tally = bribe.apply(election)?.tally();
    let goal_met = check_objectives(&tally, &instance.goal).met();
    Ok(BribeReport {
        cost,
        tally,
        goal_met,
    })
}

/// Re-validates a solver's witness; anything but acceptance is a bug.
pub(crate) fn certify(instance: &BriberyInstance, bribe: Bribe, cost: Rational) -> Result<BriberyDecision> {
    let report = evaluate_bribe(instance, &bribe)?;
    if !report.accepted(&instance.budget) || report.cost > cost {
        return Err(Error::WitnessRejected(format!(
            "bribe of cost {} (claimed {}) goal met: {}",
            rational::format(&report.cost),
            rational::format(&cost),
            report.goal_met
        )));
    }
    Ok(BriberyDecision {
        feasible: true,
        witness: Some(bribe),
        cost: Some(cost),
    })
}

/// Bribery solvers model `rho <= 1`; larger targets are only meaningful for
/// party control.
pub(crate) fn check_dp_goal(instance: &BriberyInstance) -> Result<()> {
    let goal = &instance.goal;
    if goal.rho > Rational::one() {
        return Err(Error::InvalidGoal("rho above 1 is not supported by bribery solvers".into()));
    }
    if goal.rho > Rational::zero() {
        match goal.favored {
            Some(p) if instance.election.running().contains(p) => {}
            _ => {
                return Err(Error::InvalidGoal(
                    "favored party must be running when rho > 0".into(),
                ))
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::election::{PartyUniverse, Voter};
    use crate::rational::{int, ratio};

    fn three_party(orders: &[[&str; 3]]) -> Election {
        let u = Arc::new(PartyUniverse::new(["a", "b", "c"]).unwrap());
        let voters = orders
            .iter()
            .enumerate()
            .map(|(i, o)| Voter::new(format!("v{i}"), PreferenceOrder::from_names(&u, o).unwrap()))
            .collect();
        Election::new(u.clone(), PartySet::full(3), voters, int(0)).unwrap()
    }

    #[test]
    fn unchanged_order_is_free_everywhere() {
        let e = three_party(&[["a", "b", "c"]]);
        let o = &e.voters()[0].order;
        let c = PartySet::full(3);
        let models = [
            CostModel::Uniform,
            CostModel::PerVoter(vec![int(4)]),
            CostModel::SwapMatrix(vec![vec![vec![int(2); 3]; 3]]),
            CostModel::CoalitionShift(vec![ShiftSchedule::Linear(int(3))]),
        ];
        for m in &models {
            assert_eq!(bribe_cost(m, &c, 0, o, o).unwrap(), int(0));
        }
    }

    #[test]
    fn swap_cost_sums_inverted_pairs() {
        let e = three_party(&[["a", "b", "c"]]);
        let u = e.universe();
        let old = &e.voters()[0].order;
        let new = PreferenceOrder::from_names(u, ["c", "a", "b"]).unwrap();
        let mut m = vec![vec![int(0); 3]; 3];
        m[0][2] = int(5); // c over a
        m[1][2] = int(7); // c over b
        m[0][1] = int(100);
        let model = CostModel::SwapMatrix(vec![m]);
        assert_eq!(bribe_cost(&model, &PartySet::full(3), 0, old, &new).unwrap(), int(12));
    }

    #[test]
    fn shift_rejects_upward_opposition_moves() {
        let e = three_party(&[["a", "b", "c"]]);
        let u = e.universe();
        let old = &e.voters()[0].order;
        let new = PreferenceOrder::from_names(u, ["b", "a", "c"]).unwrap();
        let model = CostModel::CoalitionShift(vec![ShiftSchedule::Linear(int(1))]);
        let only_a = u.set_of(["a"]).unwrap();
        assert!(matches!(
            bribe_cost(&model, &only_a, 0, old, &new),
            Err(Error::IllegalShift { .. })
        ));
        let ab = u.set_of(["a", "b"]).unwrap();
        assert_eq!(bribe_cost(&model, &ab, 0, old, &new).unwrap(), int(1));
        let short = CostModel::CoalitionShift(vec![ShiftSchedule::Table(vec![int(0)])]);
        assert!(matches!(
            bribe_cost(&short, &ab, 0, old, &new),
            Err(Error::ScheduleTooShort { swaps: 1, .. })
        ));
    }

    #[test]
    fn mincost_pool_sorts_and_sums() {
        let e = three_party(&[["a", "b", "c"], ["a", "c", "b"], ["a", "b", "c"], ["b", "a", "c"]]);
        let prices = vec![int(3), int(1), int(2), int(9)];
        let a = Party(0);
        assert_eq!(mincost_pool(&e, &prices, a, 0), Some(int(0)));
        assert_eq!(mincost_pool(&e, &prices, a, 2), Some(int(3)));
        assert_eq!(mincost_pool(&e, &prices, a, 3), Some(int(6)));
        assert_eq!(mincost_pool(&e, &prices, a, 4), None);
    }

    #[test]
    fn min_cost_to_top_prefers_current_top() {
        let e = three_party(&[["b", "a", "c"]]);
        let u = e.universe().clone();
        let goal = Goal::new(u.set_of(["a", "b"]).unwrap(), Some(Party(0)), ratio(1, 2), int(0)).unwrap();
        let model = CostModel::SwapMatrix(vec![vec![vec![int(1); 3]; 3]]);
        let inst = BriberyInstance::new(e, goal, model, int(0)).unwrap();
        let (c, o) = min_cost_to_top(&inst, 0, Group::CoalitionRest).unwrap().unwrap();
        assert_eq!(c, int(0));
        assert_eq!(o.top(), Party(1));
        let (c, o) = min_cost_to_top(&inst, 0, Group::Favored).unwrap().unwrap();
        assert_eq!((c, o.top()), (int(1), Party(0)));
        let (c, o) = min_cost_to_top(&inst, 0, Group::Opposition).unwrap().unwrap();
        assert_eq!((c, o.top()), (int(2), Party(2)));
    }

    #[test]
    fn shift_cannot_reach_opposition() {
        let e = three_party(&[["a", "b", "c"]]);
        let u = e.universe().clone();
        let goal = Goal::joint(u.set_of(["a", "b"]).unwrap(), ratio(1, 2)).unwrap();
        let model = CostModel::CoalitionShift(vec![ShiftSchedule::Linear(int(1))]);
        let inst = BriberyInstance::new(e, goal, model, int(5)).unwrap();
        assert_eq!(min_cost_to_top(&inst, 0, Group::Opposition).unwrap(), None);
    }

    #[test]
    fn instance_validation() {
        let e = three_party(&[["a", "b", "c"]]);
        let goal = Goal::joint(PartySet::full(3), ratio(1, 2)).unwrap();
        assert!(BriberyInstance::new(e.clone(), goal.clone(), CostModel::PerVoter(vec![]), int(1)).is_err());
        assert!(BriberyInstance::new(e.clone(), goal.clone(), CostModel::Uniform, int(-1)).is_err());
        let table = CostModel::CoalitionShift(vec![ShiftSchedule::Table(vec![int(0), int(2), int(1)])]);
        assert!(BriberyInstance::new(e.clone(), goal.clone(), table, int(1)).is_err());
        let partial = e.restrict(e.universe().set_of(["a", "b"]).unwrap()).unwrap();
        let swap = CostModel::SwapMatrix(vec![vec![vec![int(0); 3]; 3]]);
        assert!(BriberyInstance::new(partial, goal, swap, int(1)).is_err());
    }
}
